"""
Núcleo analítico: volumes, seções centrais, transformada de Radon esférica
e as três rotas de inversão em S².

Rotas de inversão (todas devolvem InversionResult):
- harmonic_invert: multiplicadores 2π·P_l(0) no espectro (oráculo);
- funk_invert_eq1: fórmula com ∂ρ/∂φ·sec φ, θ integrado em pares antípodas;
- funk_invert_abel: limite t → 1⁻ da fórmula de Funk, extrapolado por Richardson.
"""
from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .conf import geotom_setting
from .exceptions import InvalidParameter, NoConvergence, NotAnIntersectionBody, NotEvenError
from .parallel import map_ordered
from .sphere_quad import (
    HarmonicSpectrum, analyze, ball_volume, great_circle_nodes, great_circle_rule, grid_resolution,
    legendre_at_zero, sphere_area, sphere_rule, subsphere_rule, synthesize, synthesize_grid, unit_vector,
)
from .star_body import PoleFrame, Sampled

logger = logging.getLogger(__name__)

# |1/(2π·P_l(0))| ~ √(l/8π): o teto mantém o ganho sobre o ruído de quadratura
# abaixo de ~2.8 (l = 200 já pede grade de 400 linhas).
MAX_HARMONIC_DEGREE = 200
DIRECTION_CHUNK = 256


def _require_dim(body, n, operation):
    if body.dim != n:
        raise InvalidParameter(f'{operation} só é definida para n = {n} (corpo com n = {body.dim}).')


# ------------------------
# Volumes e seções
# ------------------------
def volume(body, resolution=None, samples=None, seed=0):
    """λ_n(K) = (1/n)∫ρⁿ pela regra de sphere_rule (Gauss–Legendre em S², Monte Carlo acima)."""
    n = body.dim
    rule = sphere_rule(n, resolution=resolution, samples=samples, seed=seed)
    return rule.integrate(body.radial(rule.nodes) ** n) / n


def volume_report(body, resolution=None, samples=None, seed=0):
    """Volume por quadratura com o valor em forma fechada, quando existe."""
    value = volume(body, resolution=resolution, samples=samples, seed=seed)
    closed = body.closed_form_volume()
    report = {'volume': value, 'closed_form': closed}
    if closed:
        report['relative_gap'] = abs(value - closed) / closed
    return report


@dataclass(frozen=True)
class SectionEstimate:
    value: float
    error: float = 0.0

    def __float__(self):
        return self.value


def section_estimate(body, u, m=None, samples=None, seed=0):
    """λ_{n−1}(K ∩ u⊥) com erro padrão (zero no trapézio de R³)."""
    vec = unit_vector(u)
    n = body.dim
    if vec.size != n:
        raise InvalidParameter(f'Direção em R^{vec.size} para corpo em R^{n}.')
    if n == 3:
        rule = great_circle_rule(vec, m)
        return SectionEstimate(rule.integrate(body.radial(rule.nodes) ** 2) / 2.0)
    if n == 2:
        rho = body.radial(np.array([[-vec[1], vec[0]]]))[0]
        return SectionEstimate(2.0 * float(rho))
    rule = subsphere_rule(vec, samples=samples, seed=seed)
    powers = body.radial(rule.nodes) ** (n - 1)
    value = rule.integrate(powers) / (n - 1)
    error = sphere_area(n - 1) / (n - 1) * float(np.std(powers)) / math.sqrt(len(powers))
    return SectionEstimate(value, error)


def section_volume(body, u, m=None, samples=None, seed=0):
    """
    Volume (n−1)-dimensional da seção central K ∩ u⊥.

    Calculado como (1/(n−1))∫ρ^{n−1} sobre a grande esfera ortogonal a u:
    trapézio periódico em R³ e Monte Carlo com semente para n > 3.
    """
    return section_estimate(body, u, m=m, samples=samples, seed=seed).value


def _sections_s2(body, directions, m):
    m = int(m or geotom_setting('GREAT_CIRCLE_NODES'))
    weight = 2.0 * np.pi / m

    def chunk(block):
        nodes = great_circle_nodes(block, m)
        rho = body.radial(nodes.reshape(-1, 3)).reshape(len(block), m)
        return np.sum(rho ** 2 * weight, axis=1) / 2.0

    blocks = [directions[i:i + DIRECTION_CHUNK] for i in range(0, len(directions), DIRECTION_CHUNK)]
    return np.concatenate(map_ordered(chunk, blocks)) if blocks else np.zeros(0)


@dataclass
class SectionTable:
    """Tabela direção → volume da seção; `errors` traz o erro padrão Monte Carlo (n > 3)."""
    directions: np.ndarray
    values: np.ndarray
    errors: np.ndarray | None = None

    def __post_init__(self):
        if len(self.directions) != len(self.values):
            raise InvalidParameter('Direções e valores com tamanhos diferentes.')

    def __len__(self):
        return len(self.values)

    @property
    def dim(self):
        return self.directions.shape[1]

    def to_csv(self):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow([f'u_{i + 1}' for i in range(self.dim)] + ['section_volume'])
        for u, value in zip(self.directions, self.values):
            writer.writerow([repr(float(c)) for c in u] + [repr(float(value))])
        return buffer.getvalue()

    def as_dict(self):
        payload = {
            'directions': self.directions.tolist(),
            'section_volumes': self.values.tolist(),
            'min': float(self.values.min()) if len(self) else None,
            'max': float(self.values.max()) if len(self) else None,
        }
        if self.errors is not None:
            payload['standard_errors'] = self.errors.tolist()
        return payload


def section_table(body, directions, m=None, samples=None, seed=0):
    """Seções em várias direções; a ordem da saída segue a da entrada."""
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    directions = directions / np.linalg.norm(directions, axis=1, keepdims=True)
    if directions.shape[1] != body.dim:
        raise InvalidParameter('Dimensão das direções difere da dimensão do corpo.')
    if body.dim == 3:
        return SectionTable(directions, _sections_s2(body, directions, m))
    estimates = map_ordered(lambda u: section_estimate(body, u, m=m, samples=samples, seed=seed), directions)
    return SectionTable(directions, np.array([e.value for e in estimates]),
                        np.array([e.error for e in estimates]))


def radon_transform(g, u, m=None):
    """
    Transformada de Radon esférica Rg(u) = ∫_{S²∩u⊥} g.

    `g` é uma função vetorizada em pontos (N, 3). Aceita uma direção (float)
    ou várias (array (K, 3)).
    """
    m = int(m or geotom_setting('GREAT_CIRCLE_NODES'))
    if m < 4:
        raise InvalidParameter(f'O grande círculo precisa de m >= 4 nós (recebido {m}).')
    points = np.asarray(u, dtype=float)
    single = points.ndim == 1
    directions = np.atleast_2d(points)
    if directions.shape[1] != 3:
        raise InvalidParameter('A transformada de Radon esférica é definida em S².')
    directions = directions / np.linalg.norm(directions, axis=1, keepdims=True)
    nodes = great_circle_nodes(directions, m)
    values = np.asarray(g(nodes.reshape(-1, 3)), dtype=float).reshape(len(directions), m)
    result = np.sum(values * (2.0 * np.pi / m), axis=1)
    return float(result[0]) if single else result


def intersection_body_of(body, resolution=None, directions=None, m=None, samples=None, seed=0):
    """
    Corpo de interseção L = IM, ρ_L(u) = λ_{n−1}(M ∩ u⊥).

    Em R³ devolve um corpo amostrado (ordem 3) na grade de sphere_rule(3, R);
    para n > 3 devolve uma SectionTable nas direções pedidas.
    """
    if body.dim == 3:
        grid = sphere_rule(3, resolution)
        values = _sections_s2(body, grid.nodes, m)
        return Sampled.from_grid(values.reshape(grid.shape), order=3)
    if directions is None:
        raise InvalidParameter('Para n > 3 o corpo de interseção só é tabelado em direções pedidas.')
    return section_table(body, directions, m=m, samples=samples, seed=seed)


def busemann_intersection_ratio(body, resolution=None, m=None):
    """
    vol(IK) / (κ₂³/κ₃ · vol(K)²) em R³.

    Vale <= 1 para todo corpo estrelado e = 1 para elipsoides centrados.
    """
    _require_dim(body, 3, 'busemann_intersection_ratio')
    grid = sphere_rule(3, resolution)
    sections = _sections_s2(body, grid.nodes, m)
    intersection_volume = grid.integrate(sections ** 3) / 3.0
    body_volume = volume(body, resolution=resolution)
    bound = ball_volume(2) ** 3 / ball_volume(3) * body_volume ** 2
    return {'ratio': intersection_volume / bound, 'intersection_volume': intersection_volume,
            'volume': body_volume}


# ------------------------
# Inversão
# ------------------------
@dataclass
class InversionResult:
    """Valores de g (grade ou direções), rota usada e diagnósticos."""
    method: str
    g_values: np.ndarray
    directions: np.ndarray | None = None
    resolution: int | None = None
    spectrum: HarmonicSpectrum | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def value(self):
        if self.g_values.size != 1:
            raise InvalidParameter('Resultado com mais de um valor; use g_values.')
        return float(self.g_values.ravel()[0])

    def __float__(self):
        return self.value

    def at(self, u):
        """g em direções arbitrárias (só na rota harmônica)."""
        if self.spectrum is None:
            raise InvalidParameter('Só o resultado harmônico pode ser avaliado fora dos nós.')
        return synthesize(self.spectrum, u)

    def as_dict(self):
        payload = {'method': self.method, 'values': self.g_values.tolist(), 'diagnostics': self.diagnostics}
        if self.directions is not None:
            payload['directions'] = self.directions.tolist()
        if self.resolution is not None:
            payload['grid'] = {'resolution': self.resolution, 'shape': list(self.g_values.shape)}
        return payload


def harmonic_invert(rho, max_degree=None, resolution=None):
    """
    Inversão pelo multiplicador de Funk–Hecke.

    Parâmetros:
    - rho: grade R × 2R de ρ em sphere_rule(3, R), ou um corpo de R³ (amostrado
      em `resolution`, padrão INVERSION_RESOLUTION);
    - max_degree: grau de truncamento L (<= R/2 e <= 200).

    Retorna:
    - InversionResult com g na mesma grade; g_lm = ρ_lm / (2π·P_l(0)).
    """
    if hasattr(rho, 'radial'):
        _require_dim(rho, 3, 'harmonic_invert')
        grid = sphere_rule(3, resolution or geotom_setting('INVERSION_RESOLUTION'))
        rho = rho.radial(grid.nodes).reshape(grid.shape)
    values = np.asarray(rho, dtype=float)
    rows = grid_resolution(values)
    degree = rows // 2 if max_degree is None else int(max_degree)
    if degree > MAX_HARMONIC_DEGREE:
        raise InvalidParameter(f'Grau {degree} acima de {MAX_HARMONIC_DEGREE}: P_l(0) perde precisão.')
    spectrum = analyze(values, degree)
    scale = max(1.0, float(np.max(np.abs(values))))
    odd = spectrum.odd_max()
    if odd > 1e-8 * scale:
        raise NotEvenError(f'ρ tem energia em graus ímpares ({odd:.3g}); o corpo não é centrado.', odd_max=odd)
    factors = [0.0 if l % 2 else 1.0 / (2.0 * np.pi * legendre_at_zero(l)) for l in range(degree + 1)]
    g_spectrum = spectrum.scale_degrees(factors)
    tail = max((spectrum.degree_norm(l) for l in range(max(0, degree - 1), degree + 1)), default=0.0) / scale
    if tail > 1e-6:
        logger.warning('harmonic_invert: cauda do espectro em l = %d ainda vale %.3g', degree, tail)
    g_values = synthesize_grid(g_spectrum, rows)
    diagnostics = {'max_degree': degree, 'odd_max': odd, 'tail': tail}
    return InversionResult('harmonic', g_values, resolution=rows, spectrum=g_spectrum, diagnostics=diagnostics)


def latitude_average(body, frame, phi, theta_nodes=None):
    """A_K(φ): média de ρ no círculo de latitude φ (trapézio periódico em θ)."""
    _require_dim(body, 3, 'latitude_average')
    phi = np.asarray(phi, dtype=float)
    if np.any(phi < 0) or np.any(phi > np.pi):
        raise InvalidParameter('O ângulo φ deve estar em [0, π].')
    count = int(theta_nodes or geotom_setting('GREAT_CIRCLE_NODES'))
    theta = 2.0 * np.pi * np.arange(count) / count
    points = frame.point(theta[None, :], phi.reshape(-1, 1))
    values = body.radial(points.reshape(-1, 3)).reshape(-1, count)
    average = values.mean(axis=1)
    return float(average[0]) if phi.ndim == 0 else average.reshape(phi.shape)


def _frame_for(pole):
    return pole if isinstance(pole, PoleFrame) else PoleFrame.at(pole)


def funk_invert_eq1(body, pole, theta_nodes=None, phi_nodes=None):
    """
    g(u₀) por 2π·g(u₀) = ρ(u₀) + (1/2π)∫∫ ∂ρ/∂φ · sec φ dφ dθ.

    A integral em θ é feita primeiro, somando cada θ com θ + π: pela paridade
    de ρ a soma das derivadas se anula no equador e cancela sec φ. A integral
    em φ ∈ [0, π/2] usa Gauss–Legendre direto em φ.
    """
    _require_dim(body, 3, 'funk_invert_eq1')
    body.require_smooth('funk_invert_eq1')
    frame = _frame_for(pole)
    count = int(theta_nodes or geotom_setting('EQ1_THETA_NODES'))
    if count < 4 or count % 2:
        raise InvalidParameter('O número de nós em θ deve ser par e >= 4.')
    order = int(phi_nodes or geotom_setting('EQ1_PHI_NODES'))
    x, w = np.polynomial.legendre.leggauss(order)
    phi = (x + 1.0) * (np.pi / 4.0)
    w = w * (np.pi / 4.0)
    theta = 2.0 * np.pi * np.arange(count // 2) / count
    forward = body.radial_dphi(frame, theta[None, :], phi[:, None])
    backward = body.radial_dphi(frame, theta[None, :] + np.pi, phi[:, None])
    inner = np.sum(forward + backward, axis=1) / count
    outer = float(np.sum(w * inner / np.cos(phi)))
    rho_pole = body.radial(frame.pole)
    g = (rho_pole + outer) / (2.0 * np.pi)
    diagnostics = {'theta_nodes': count, 'phi_nodes': order, 'rho_pole': rho_pole, 'derivative_term': outer}
    return InversionResult('eq1', np.array([g]), directions=frame.pole[None, :], diagnostics=diagnostics)


def richardson_limit(values, step_ratio=2.0):
    """Tabela de Richardson para passos h, h/r, h/r², ... (erro com expansão em potências de h)."""
    tableau = [[float(v)] for v in values]
    for k in range(1, len(values)):
        for j in range(1, k + 1):
            mult = step_ratio ** j
            previous, current = tableau[k - 1][j - 1], tableau[k][j - 1]
            tableau[k].append(current + (current - previous) / (mult - 1.0))
    return tableau


def funk_invert_abel(body, pole, levels=None, first_level=None, step=None, nodes=None, tol=None,
                     theta_nodes=None):
    """
    g(u₀) pela fórmula de Funk: lim_{t→1⁻} (1/2π) d/dt ∫₀ᵗ x·A(arcsen x)/√(t²−x²) dx.

    Com x = t·sen s a integral vira I(t) = ∫₀^{π/2} t·sen s·A(arcsen(t·sen s)) ds,
    integrada por Gauss–Legendre; d/dt por diferença central de passo η; o limite
    por Richardson sobre t_k = 1 − 2^{−(first_level + k)}.
    """
    _require_dim(body, 3, 'funk_invert_abel')
    body.require_smooth('funk_invert_abel')
    frame = _frame_for(pole)
    levels = int(levels or geotom_setting('ABEL_LEVELS'))
    first_level = int(first_level or geotom_setting('ABEL_FIRST_LEVEL'))
    step = float(step or geotom_setting('ABEL_STEP'))
    order = int(nodes or geotom_setting('ABEL_NODES'))
    tol = float(tol if tol is not None else geotom_setting('ABEL_TOL'))
    if levels < 2:
        raise InvalidParameter('A extrapolação precisa de pelo menos 2 níveis.')
    x, w = np.polynomial.legendre.leggauss(order)
    s = (x + 1.0) * (np.pi / 4.0)
    w = w * (np.pi / 4.0)

    def inner_integral(t):
        polar = np.arcsin(np.clip(t * np.sin(s), 0.0, 1.0))
        averages = latitude_average(body, frame, polar, theta_nodes=theta_nodes)
        return float(np.sum(w * t * np.sin(s) * averages))

    heights = [1.0 - 2.0 ** -(first_level + k) for k in range(levels)]
    derivatives = [(inner_integral(t + step) - inner_integral(t - step)) / (2.0 * step) / (2.0 * np.pi)
                   for t in heights]
    tableau = richardson_limit(derivatives, 2.0)
    g = tableau[-1][-1]
    residual = abs(tableau[-1][-1] - tableau[-1][-2])
    logger.debug('funk_invert_abel: escada %s, resíduo %.3g', derivatives, residual)
    diagnostics = {'levels': levels, 'heights': heights, 'ladder': derivatives, 'residual': residual}
    if residual > tol:
        raise NoConvergence(f'Extrapolação de Richardson não convergiu (resíduo {residual:.3g} > {tol:.3g}).',
                            residual=residual)
    return InversionResult('abel', np.array([g]), directions=frame.pole[None, :], diagnostics=diagnostics)


INVERSION_ROUTES = {'abel': funk_invert_abel, 'eq1': funk_invert_eq1}


def invert(body, method, pole=None, resolution=None):
    """Despacha para a rota pedida; abel/eq1 exigem o polo."""
    if method == 'harmonic':
        result = harmonic_invert(body, resolution=resolution)
        if pole is not None:
            value = result.at(np.asarray(unit_vector(pole))[None, :])
            result.diagnostics['pole'] = list(unit_vector(pole))
            result.diagnostics['g_pole'] = float(value[0])
        return result
    if method not in INVERSION_ROUTES:
        raise InvalidParameter(f'Método de inversão desconhecido: {method!r}.')
    if pole is None:
        raise InvalidParameter(f'O método {method} exige --pole.')
    return INVERSION_ROUTES[method](body, pole)


# ------------------------
# Decisão: corpo de interseção?
# ------------------------
@dataclass
class IntersectionVerdict:
    is_intersection_body: bool
    margin: float
    witness: tuple
    tol: float
    resolution: int
    max_degree: int
    cross_checks: list = field(default_factory=list)

    @property
    def verdict(self):
        return 'yes' if self.is_intersection_body else 'no'

    def as_dict(self):
        return {
            'verdict': self.verdict, 'margin': self.margin, 'witness': list(self.witness), 'tol': self.tol,
            'resolution': self.resolution, 'max_degree': self.max_degree, 'cross_checks': self.cross_checks,
        }


def _default_tol(rho_values):
    return 1e-6 * float(np.max(np.abs(rho_values)))


def is_intersection_body(body, tol=None, resolution=None, cross_checks=3, seed=0):
    """
    Decide se K = IM para algum M: min g >= −tol, g calculado pela rota harmônica.

    A rota harmônica é conferida em `cross_checks` direções sorteadas contra
    funk_invert_eq1 (tolerância 1e−3·max(1, max|g|)); discordância vira NoConvergence.
    """
    _require_dim(body, 3, 'is_intersection_body')
    body.require_smooth('is_intersection_body')
    rows = int(resolution or geotom_setting('INVERSION_RESOLUTION'))
    grid = sphere_rule(3, rows)
    rho = body.radial(grid.nodes).reshape(grid.shape)
    result = harmonic_invert(rho)
    tol = _default_tol(rho) if tol is None else float(tol)
    flat = result.g_values.ravel()
    index = int(np.argmin(flat))
    margin = float(flat[index])
    witness = tuple(float(c) for c in grid.nodes[index])

    scale = max(1.0, float(np.max(np.abs(flat))))
    rng = np.random.default_rng(seed)
    checks = []
    for u in rng.standard_normal((cross_checks, 3)):
        u = u / np.linalg.norm(u)
        harmonic = float(result.at(u))
        eq1 = funk_invert_eq1(body, u).value
        checks.append({'direction': u.tolist(), 'harmonic': harmonic, 'eq1': eq1})
        if abs(harmonic - eq1) > 1e-3 * scale:
            raise NoConvergence(
                f'Rotas harmônica e eq1 discordam em {u.tolist()}: {harmonic:.6g} vs {eq1:.6g}.',
                direction=u.tolist(), harmonic=harmonic, eq1=eq1)
    verdict = IntersectionVerdict(margin >= -tol, margin, witness, tol, rows,
                                  result.diagnostics['max_degree'], checks)
    logger.info('is_intersection_body: %s, margem %.6g', verdict.verdict, margin)
    return verdict


@dataclass(frozen=True)
class PreimageResult:
    """Corpo M′ reconstruído e o relatório de truncamento de g."""
    body: Sampled
    clamped: int
    min_g: float
    tol: float

    def as_dict(self):
        return {'clamped': self.clamped, 'min_g': self.min_g, 'tol': self.tol}


def preimage_body(body, tol=None, resolution=None):
    """
    Corpo M′ com IM′ = L em R³: ρ_{M′} = √(2g), g = R⁻¹ρ_L.

    g em [−tol, 0) é truncado em zero; `clamped` e `min_g` do resultado dizem
    quantos valores e qual o mínimo. Abaixo de −tol levanta
    NotAnIntersectionBody com a direção testemunha.
    """
    _require_dim(body, 3, 'preimage_body')
    body.require_smooth('preimage_body')
    rows = int(resolution or geotom_setting('INVERSION_RESOLUTION'))
    grid = sphere_rule(3, rows)
    rho = body.radial(grid.nodes).reshape(grid.shape)
    g = harmonic_invert(rho).g_values
    tol = _default_tol(rho) if tol is None else float(tol)
    index = int(np.argmin(g))
    margin = float(g.ravel()[index])
    if margin < -tol:
        raise NotAnIntersectionBody(
            f'g atinge {margin:.6g} < −tol; L não é corpo de interseção.', margin, grid.nodes[index])
    clamped = int(np.count_nonzero(g < 0))
    if clamped:
        logger.warning('preimage_body: %d valores de g em [−tol, 0) truncados em zero (mínimo %.3g)',
                       clamped, margin)
    radial = np.sqrt(2.0 * np.maximum(g, 0.0))
    radial = np.maximum(radial, 1e-12 * float(radial.max()))
    return PreimageResult(Sampled.from_grid(radial, order=3), clamped, margin, tol)
