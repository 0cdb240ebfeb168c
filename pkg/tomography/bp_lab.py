"""
Experimentos de Busemann–Petty.

- bp_compare: dominância das seções numa amostra de direções e veredito;
- lutwak_check / lutwak_batch: o teorema de Lutwak como propriedade testada;
- e3_positivity_suite: corpos convexos suaves aleatórios de R³ devem ser
  corpos de interseção (margem min g >= −tol);
- ball_counterexample: cubo × bola em n >= 10.

Toda aleatoriedade vem de sementes explícitas (numpy default_rng).
"""
from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidParameter, NoConvergence, UnsupportedBody
from .parallel import map_ordered
from .radon import intersection_body_of, is_intersection_body, section_table, section_volume, volume
from .sphere_quad import HarmonicSpectrum, ball_volume, basis_matrix, synthesize_grid, unit_vector
from .star_body import Ball, Box, Ellipsoid, PerturbedBall, convexity_probe

logger = logging.getLogger(__name__)

CONSISTENT = 'consistent'
COUNTEREXAMPLE = 'counterexample'
DOMINANCE_FAILS = 'dominance-fails'
DEFAULT_TOL = 1e-3


def default_direction_count(n):
    return 512 if n <= 6 else 2048


def sample_directions(n, count, seed):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((count, n))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def _body_volume(body, samples=None, seed=0):
    closed = body.closed_form_volume()
    if closed is not None:
        return closed
    return volume(body, samples=samples, seed=seed)


@dataclass
class BPReport:
    """Comparação de seções e volumes de K₁ e K₂ numa amostra de direções."""
    first: dict
    second: dict
    dim: int
    directions: int
    seed: int
    tol: float
    min_gap: float
    max_gap: float
    min_relative_gap: float
    worst_direction: list
    volumes: tuple
    verdict: str

    def as_dict(self):
        return {
            'body1': self.first, 'body2': self.second, 'n': self.dim, 'directions': self.directions,
            'seed': self.seed, 'tol': self.tol, 'min_gap': self.min_gap, 'max_gap': self.max_gap,
            'min_relative_gap': self.min_relative_gap, 'worst_direction': self.worst_direction,
            'volume1': self.volumes[0], 'volume2': self.volumes[1], 'verdict': self.verdict,
        }


def bp_compare(first, second, directions=None, seed=0, tol=None, samples=None):
    """
    Compara K₁ e K₂ em N direções uniformes sorteadas com `seed`.

    gap(u) = λ_{n−1}(K₂∩u⊥) − λ_{n−1}(K₁∩u⊥); o gap relativo divide pelo maior
    dos dois volumes. Veredito:
    - dominance-fails se algum gap relativo < −tol (hipótese não satisfeita);
    - counterexample se λ_n(K₁) > λ_n(K₂)·(1 + tol);
    - consistent caso contrário.
    """
    if first.dim != second.dim:
        raise InvalidParameter(f'Dimensões diferentes: {first.dim} e {second.dim}.')
    n = first.dim
    tol = DEFAULT_TOL if tol is None else float(tol)
    count = int(directions or default_direction_count(n))
    if count < 1:
        raise InvalidParameter('É preciso ao menos uma direção.')
    sample = sample_directions(n, count, seed)
    # mesma semente nas duas tabelas: números aleatórios comuns
    sections1 = section_table(first, sample, samples=samples, seed=seed).values
    sections2 = section_table(second, sample, samples=samples, seed=seed).values
    gaps = sections2 - sections1
    relative = gaps / np.maximum(np.maximum(np.abs(sections1), np.abs(sections2)), np.finfo(float).tiny)
    worst = int(np.argmin(relative))
    volumes = (_body_volume(first, samples, seed), _body_volume(second, samples, seed))
    if relative[worst] < -tol:
        verdict = DOMINANCE_FAILS
    elif volumes[0] > volumes[1] * (1.0 + tol):
        verdict = COUNTEREXAMPLE
    else:
        verdict = CONSISTENT
    logger.info('bp_compare: %s (min gap relativo %.3g)', verdict, relative[worst])
    return BPReport(first.to_dict(), second.to_dict(), n, count, seed, tol, float(gaps.min()), float(gaps.max()),
                    float(relative[worst]), sample[worst].tolist(), volumes, verdict)


def lutwak_check(body, reference, directions=512, seed=0, tol=1e-6, resolution=None):
    """
    Teorema de Lutwak com L₁ = IM.

    s é o menor fator com seções de s·L₂ dominando as de L₁ na amostra
    (seções escalam por s²); a margem é (s³·vol(L₂) − vol(L₁))/vol(L₁).
    """
    if body.dim != 3 or reference.dim != 3:
        raise InvalidParameter('lutwak_check é definido em R³.')
    intersection = intersection_body_of(body, resolution=resolution)
    sample = sample_directions(3, int(directions), seed)
    sections1 = section_table(intersection, sample).values
    sections2 = section_table(reference, sample).values
    scale = float(np.max(np.sqrt(sections1 / sections2)))
    volume1 = volume(intersection, resolution=resolution)
    volume2 = scale ** 3 * volume(reference, resolution=resolution)
    margin = (volume2 - volume1) / volume1
    return {
        'scale': scale, 'margin': margin, 'volume_intersection_body': volume1, 'volume_scaled_reference': volume2,
        'directions': int(directions), 'seed': seed, 'tol': tol, 'passed': margin >= -tol,
        'body': body.to_dict(), 'reference': reference.to_dict(),
    }


# ------------------------
# Geradores aleatórios
# ------------------------
def _harmonic_perturbation(rng, max_degree, sup=1.0):
    coefficients = []
    for l in range(2, max_degree + 1, 2):
        for m in range(-l, l + 1):
            coefficients.append((l, m, rng.standard_normal() / (l * (l + 1))))
    spectrum = HarmonicSpectrum.from_coeffs({(l, m): c for l, m, c in coefficients})
    peak = float(np.max(np.abs(synthesize_grid(spectrum, max(32, 4 * max_degree)))))
    return tuple((l, m, float(c * sup / peak)) for l, m, c in coefficients)


def random_ellipsoid(rng):
    base = rng.uniform(0.5, 2.0)
    ratios = rng.uniform(1.0, 5.0, size=2)
    axes = [base, base * ratios[0], base * ratios[1]]
    rng.shuffle(axes)
    return Ellipsoid(tuple(float(a) for a in axes))


def random_convex_body(rng, max_attempts=200):
    """
    Corpo convexo suave de R³: elipsoide (razões de eixos em [1, 5]) ou bola
    perturbada (amplitude <= 0.15·r₀, graus <= 6) aprovada pelo convexity_probe.

    Retorna (corpo, rejeições).
    """
    if rng.random() < 0.5:
        return random_ellipsoid(rng), 0
    rejections = 0
    for _ in range(max_attempts):
        r0 = float(rng.uniform(0.5, 2.0))
        degree = int(rng.choice([2, 4, 6]))
        amplitude = float(rng.uniform(0.01, 0.15)) * r0
        body = PerturbedBall(r0, amplitude, _harmonic_perturbation(rng, degree))
        if convexity_probe(body, trials=10_000, seed=int(rng.integers(2 ** 31))).passed:
            return body, rejections
        rejections += 1
        logger.info('random_convex_body: bola perturbada rejeitada (%d)', rejections)
    raise NoConvergence(f'Nenhum corpo convexo gerado em {max_attempts} tentativas.')


def random_star_body(rng):
    """Corpo estrelado suave de R³ (não necessariamente convexo)."""
    if rng.random() < 0.5:
        return random_ellipsoid(rng)
    r0 = float(rng.uniform(0.5, 2.0))
    degree = int(rng.choice([2, 4]))
    amplitude = float(rng.uniform(0.0, 0.6)) * r0
    return PerturbedBall(r0, amplitude, _harmonic_perturbation(rng, degree))


def lutwak_batch(count=50, seed=0, tol=1e-6, directions=512, resolution=None):
    """lutwak_check em `count` pares (M, L₂) sorteados; devolve as linhas e a menor margem."""
    rng = np.random.default_rng(seed)
    pairs = [(random_star_body(rng), random_star_body(rng)) for _ in range(count)]
    rows = map_ordered(
        lambda pair: lutwak_check(pair[0], pair[1], directions=directions, seed=seed, tol=tol,
                                  resolution=resolution),
        pairs)
    margins = [row['margin'] for row in rows]
    return {'count': count, 'seed': seed, 'tol': tol, 'min_margin': min(margins),
            'passed': all(row['passed'] for row in rows), 'rows': rows}


# ------------------------
# Positividade em R³
# ------------------------
@dataclass
class PositivitySuiteReport:
    count: int
    seed: int
    tol: float
    rows: list = field(default_factory=list)
    rejections: int = 0

    @property
    def min_margin(self):
        return min(row['margin'] for row in self.rows)

    @property
    def worst_body(self):
        return min(self.rows, key=lambda row: row['margin'])['descriptor']

    @property
    def passed(self):
        return self.min_margin >= -self.tol

    def to_csv(self):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(['body_id', 'margin', 'volume', 'verdict'])
        for row in self.rows:
            writer.writerow([row['body_id'], repr(row['margin']), repr(row['volume']), row['verdict']])
        return buffer.getvalue()

    def as_dict(self):
        return {
            'count': self.count, 'seed': self.seed, 'tol': self.tol, 'min_margin': self.min_margin,
            'worst_body': self.worst_body, 'rejections': self.rejections, 'passed': self.passed,
            'rows': self.rows,
        }


def e3_positivity_suite(count, seed=0, tol=1e-6, bodies=None, resolution=None):
    """
    Roda is_intersection_body em `count` corpos convexos suaves de R³.

    `bodies` fixa os primeiros corpos da suíte; o restante é sorteado com
    random_convex_body. A margem mínima deve ficar >= −tol.
    """
    if count < 1:
        raise InvalidParameter('count deve ser >= 1.')
    rng = np.random.default_rng(seed)
    chosen = list(bodies or [])[:count]
    rejections = 0
    while len(chosen) < count:
        body, rejected = random_convex_body(rng)
        rejections += rejected
        chosen.append(body)

    def evaluate(indexed):
        index, body = indexed
        logger.info('e3_positivity_suite: corpo %d/%d (%s)', index + 1, count, body.kind)
        verdict = is_intersection_body(body, tol=tol, resolution=resolution, seed=seed + index)
        return {'body_id': index, 'kind': body.kind, 'margin': verdict.margin, 'volume': volume(body),
                'verdict': verdict.verdict, 'witness': list(verdict.witness), 'descriptor': body.to_dict()}

    report = PositivitySuiteReport(count, seed, tol, map_ordered(evaluate, list(enumerate(chosen))), rejections)
    logger.info('e3_positivity_suite: margem mínima %.6g, %d rejeições', report.min_margin, rejections)
    return report


# ------------------------
# Contraexemplo cubo × bola
# ------------------------
def counterexample_radius(n):
    """Raio r com κ_{n−1}·r^{n−1} = √2, a seção máxima do cubo unitário."""
    return (math.sqrt(2.0) / ball_volume(n - 1)) ** (1.0 / (n - 1))


def slab_section_estimate(body, u, eps=0.01, samples=1_000_000, seed=0):
    """
    Estimativa independente da seção central de uma caixa: fração de pontos
    uniformes com |⟨x, u⟩| <= ε, vezes vol/(2ε).
    """
    if not isinstance(body, Box):
        raise UnsupportedBody('slab_section_estimate só vale para caixas.')
    vec = unit_vector(u)
    if vec.size != body.dim:
        raise InvalidParameter('Dimensão da direção difere da dimensão da caixa.')
    rng = np.random.default_rng(seed)
    half = np.asarray(body.half_sides)
    hits = 0
    remaining = int(samples)
    while remaining > 0:
        block = min(remaining, 100_000)
        points = rng.uniform(-half, half, size=(block, body.dim))
        hits += int(np.count_nonzero(np.abs(points @ vec) <= eps))
        remaining -= block
    fraction = hits / samples
    scale = body.closed_form_volume() / (2.0 * eps)
    error = scale * math.sqrt(max(fraction * (1.0 - fraction), 0.0) / samples)
    return {'value': fraction * scale, 'error': error, 'eps': eps, 'samples': int(samples)}


def ball_counterexample(n, seed=0, directions=None, samples=None, tol=None, slab_samples=1_000_000):
    """
    Cubo de lado 1 (volume 1) contra a bola cujas seções valem todas √2.

    Como toda seção do cubo é <= √2 e κ_n·rⁿ < 1 para n >= 10, o par viola a
    implicação de Busemann–Petty. O relatório inclui as seções nas direções
    e₁ e (e₁+e₂)/√2 conferidas pelo estimador de fatias.
    """
    if n < 10:
        raise UnsupportedBody(f'O par cubo/bola só é contraexemplo para n >= 10 (recebido {n}).')
    cube = Box((0.5,) * n)
    radius = counterexample_radius(n)
    ball = Ball(n, radius)
    report = bp_compare(cube, ball, directions=directions, seed=seed, tol=tol, samples=samples)
    checks = {}
    diagonal = np.zeros(n)
    diagonal[:2] = 1.0 / math.sqrt(2.0)
    for name, u, expected in (('e1', np.eye(n)[0], 1.0), ('diagonal', diagonal, math.sqrt(2.0))):
        checks[name] = {
            'direction': u.tolist(), 'expected': expected,
            'section': section_volume(cube, u, samples=samples, seed=seed),
            'slab': slab_section_estimate(cube, u, samples=slab_samples, seed=seed)['value'],
        }
    return {
        'n': n, 'cube': cube.to_dict(), 'radius': radius, 'ball_volume': ball.closed_form_volume(),
        'cube_volume': cube.closed_form_volume(), 'ball_section': ball_volume(n - 1) * radius ** (n - 1),
        'checks': checks, 'report': report.as_dict(), 'verdict': report.verdict,
    }


def max_section_search(body, restarts=4, seed=0, starts=None, samples=None, min_step=1e-4, max_evaluations=4000):
    """
    Subida local sem derivadas de u ↦ λ_{n−1}(K ∩ u⊥) na esfera.

    Passos ± nas direções de uma base do plano tangente, renormalizando; o
    passo cai pela metade quando nenhuma direção melhora. O melhor resultado
    entre os pontos iniciais (`starts` e `restarts` sorteados) é devolvido.
    """
    if restarts < 0 or (restarts == 0 and not starts):
        raise InvalidParameter('É preciso ao menos um ponto inicial.')
    n = body.dim
    initial = [unit_vector(u) for u in (starts or [])]
    if restarts:
        initial.extend(sample_directions(n, restarts, seed))
    evaluations = 0

    def objective(u):
        nonlocal evaluations
        evaluations += 1
        return section_volume(body, u, samples=samples, seed=seed)

    best_u, best_value = None, -math.inf
    for u in initial:
        value = objective(u)
        step = 0.5
        while step >= min_step and evaluations < max_evaluations:
            improved = False
            tangent = basis_matrix(u)
            for k in range(n - 1):
                for sign in (1.0, -1.0):
                    candidate = u + sign * step * tangent[:, k]
                    candidate /= np.linalg.norm(candidate)
                    candidate_value = objective(candidate)
                    if candidate_value > value:
                        u, value, improved = candidate, candidate_value, True
                        break
                if improved:
                    break
            if not improved:
                step *= 0.5
        if value > best_value:
            best_u, best_value = u, value
    return {'direction': best_u.tolist(), 'value': best_value, 'evaluations': evaluations}
