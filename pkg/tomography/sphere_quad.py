"""Quadraturas em esferas e harmônicos esféricos reais em S².

Este módulo fornece as regras de integração usadas por todo o toolkit:

- great_circle_rule: trapézio periódico no grande círculo S² ∩ u⊥;
- subsphere_rule: Monte Carlo com semente na grande esfera S^{n-1} ∩ u⊥ (n > 3);
- sphere_rule: Gauss–Legendre(cos φ) × uniforme(θ) em S², Monte Carlo em S^{n-1};
- harmônicos esféricos reais ortonormais (sem fase de Condon–Shortley), com
  análise e síntese separáveis na grade de sphere_rule(3, ·).

Convenção de ângulos: θ é o azimute em [0, 2π) e φ o ângulo polar em [0, π],
u = (sen φ cos θ, sen φ sen θ, cos φ).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import special

from .conf import geotom_setting
from .exceptions import InvalidParameter

logger = logging.getLogger(__name__)

FULL_SPHERE = 'full-sphere'
SUBSPHERE = 'subsphere'


def sphere_area(d):
    """Medida de superfície de S^{d-1} ⊂ R^d: 2π^{d/2}/Γ(d/2)."""
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def ball_volume(d):
    """Volume κ_d da bola unitária de R^d: π^{d/2}/Γ(d/2 + 1)."""
    return math.pi ** (d / 2.0) / math.gamma(d / 2.0 + 1.0)


@dataclass(frozen=True)
class Direction:
    """Vetor unitário de R^n; o construtor normaliza as coordenadas."""
    coords: tuple

    def __post_init__(self):
        vec = np.asarray(self.coords, dtype=float).ravel()
        if vec.size < 2:
            raise InvalidParameter('Uma direção precisa de dimensão n >= 2.')
        norm = float(np.linalg.norm(vec))
        if not np.isfinite(norm) or norm == 0.0:
            raise InvalidParameter('Direção nula ou com coordenadas não finitas.')
        object.__setattr__(self, 'coords', tuple(float(c) for c in vec / norm))

    @classmethod
    def axis(cls, n, i):
        coords = [0.0] * n
        coords[i] = 1.0
        return cls(tuple(coords))

    @property
    def dim(self):
        return len(self.coords)

    @property
    def vector(self):
        return np.array(self.coords)

    def __neg__(self):
        return Direction(tuple(-c for c in self.coords))


def unit_vector(u):
    """Converte Direction ou sequência numérica em ndarray unitário."""
    if isinstance(u, Direction):
        return u.vector
    vec = np.asarray(u, dtype=float).ravel()
    if vec.size < 2:
        raise InvalidParameter('Uma direção precisa de dimensão n >= 2.')
    norm = float(np.linalg.norm(vec))
    if not np.isfinite(norm) or norm == 0.0:
        raise InvalidParameter('Direção nula ou com coordenadas não finitas.')
    return vec / norm


def canonical(u):
    """Escolhe entre u e −u o representante cuja primeira coordenada não nula é positiva."""
    nonzero = np.flatnonzero(u)
    if nonzero.size and u[nonzero[0]] < 0:
        return -u
    return u


def _householder_columns(U):
    # reflexão de Householder que leva e1 em ±u; as colunas 2..n completam a base
    U = np.atleast_2d(np.asarray(U, dtype=float))
    sign = np.where(U[:, 0] >= 0.0, 1.0, -1.0)
    V = U.copy()
    V[:, 0] += sign
    scale = 2.0 / (V * V).sum(axis=1)
    n = U.shape[1]
    H = np.eye(n)[None, :, :] - scale[:, None, None] * V[:, :, None] * V[:, None, :]
    return H[:, :, 1:]


def basis_matrix(u):
    """Matriz n × (n−1) cujas colunas formam uma base ortonormal de u⊥."""
    return _householder_columns(unit_vector(u)[None, :])[0]


def orthonormal_basis(u):
    """
    Base ortonormal de u⊥ como lista de n−1 direções.

    A construção é determinística (reflexão de Householder fixa), então
    chamadas repetidas concordam bit a bit.
    """
    columns = basis_matrix(u)
    return [Direction(tuple(columns[:, j])) for j in range(columns.shape[1])]


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nós e pesos (positivos) de uma regra de integração na esfera ou subesfera.

    Para as grades produto de S², `shape`, `polar`, `azimuth`, `cos_polar` e
    `row_weights` descrevem a estrutura (linhas = φ, colunas = θ).
    """
    nodes: np.ndarray
    weights: np.ndarray
    domain: str
    dim: int
    pole: tuple | None = None
    shape: tuple | None = None
    polar: np.ndarray | None = None
    azimuth: np.ndarray | None = None
    cos_polar: np.ndarray | None = None
    row_weights: np.ndarray | None = None

    def __post_init__(self):
        for name in ('nodes', 'weights', 'polar', 'azimuth', 'cos_polar', 'row_weights'):
            array = getattr(self, name)
            if array is not None:
                array.setflags(write=False)

    def __len__(self):
        return len(self.weights)

    @property
    def total_measure(self):
        return float(np.sum(self.weights))

    def directions(self):
        return [Direction(tuple(row)) for row in self.nodes]

    def integrate(self, f):
        """Integra `f` (função vetorizada sobre os nós, ou valores já avaliados)."""
        values = f(self.nodes) if callable(f) else np.asarray(f, dtype=float)
        return float(np.dot(self.weights, values.ravel()))


def great_circle_nodes(U, m):
    """Nós do trapézio periódico em S² ∩ u⊥ para várias direções: (K, m, 3)."""
    U = np.atleast_2d(np.asarray(U, dtype=float))
    U = np.array([canonical(row) for row in U])
    E = _householder_columns(U)
    t = 2.0 * np.pi * np.arange(m) / m
    return (np.cos(t)[None, :, None] * E[:, None, :, 0]
            + np.sin(t)[None, :, None] * E[:, None, :, 1])


def great_circle_rule(u, m=None):
    """
    Trapézio periódico no grande círculo ortogonal a u (u ∈ R³).

    Parâmetros:
    - u: direção em R³ (u e −u produzem a mesma regra);
    - m: número de nós (>= 4), padrão GREAT_CIRCLE_NODES.

    Retorna:
    - QuadratureRule com pesos 2π/m.
    """
    m = int(m or geotom_setting('GREAT_CIRCLE_NODES'))
    if m < 4:
        raise InvalidParameter(f'O grande círculo precisa de m >= 4 nós (recebido {m}).')
    vec = canonical(unit_vector(u))
    if vec.size != 3:
        raise InvalidParameter('great_circle_rule só vale em R³; use subsphere_rule para n > 3.')
    nodes = great_circle_nodes(vec[None, :], m)[0]
    weights = np.full(m, 2.0 * np.pi / m)
    return QuadratureRule(nodes=nodes, weights=weights, domain=SUBSPHERE, dim=3, pole=tuple(vec))


@lru_cache(maxsize=8)
def _gaussian_directions(samples, dim, seed):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((samples, dim))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    z.setflags(write=False)
    return z


def subsphere_rule(u, samples=None, seed=0):
    """
    Monte Carlo uniforme na grande esfera S^{n−1} ∩ u⊥ (n > 3).

    Os nós são gaussianas isotrópicas em u⊥ normalizadas, cada uma com peso
    |S^{n−2}|/N; a mesma semente reproduz a mesma regra.
    """
    samples = int(samples or geotom_setting('MC_SAMPLES'))
    if samples < 100:
        raise InvalidParameter(f'subsphere_rule precisa de N >= 100 amostras (recebido {samples}).')
    vec = canonical(unit_vector(u))
    n = vec.size
    if n <= 3:
        raise InvalidParameter('subsphere_rule é para n > 3; em R³ use great_circle_rule.')
    basis = basis_matrix(vec)
    nodes = _gaussian_directions(samples, n - 1, seed) @ basis.T
    weights = np.full(samples, sphere_area(n - 1) / samples)
    return QuadratureRule(nodes=nodes, weights=weights, domain=SUBSPHERE, dim=n, pole=tuple(vec))


@lru_cache(maxsize=8)
def _s2_grid(resolution):
    x, w = np.polynomial.legendre.leggauss(resolution)
    # simetria exata: o nó (i, j) e o nó antípoda são negativos bit a bit
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    cos_polar = x[::-1].copy()
    row_weights = w[::-1].copy()
    polar = np.arccos(cos_polar)
    sin_polar = np.sqrt(1.0 - cos_polar ** 2)

    half = 2.0 * np.pi * np.arange(resolution) / (2 * resolution)
    azimuth = np.concatenate([half, half + np.pi])
    cos_az = np.concatenate([np.cos(half), -np.cos(half)])
    sin_az = np.concatenate([np.sin(half), -np.sin(half)])

    nodes = np.empty((resolution, 2 * resolution, 3))
    nodes[:, :, 0] = sin_polar[:, None] * cos_az[None, :]
    nodes[:, :, 1] = sin_polar[:, None] * sin_az[None, :]
    nodes[:, :, 2] = cos_polar[:, None]
    weights = np.repeat(row_weights * (np.pi / resolution), 2 * resolution)
    logger.debug('grade S² %dx%d construída', resolution, 2 * resolution)
    return QuadratureRule(
        nodes=nodes.reshape(-1, 3), weights=weights, domain=FULL_SPHERE, dim=3,
        shape=(resolution, 2 * resolution), polar=polar, azimuth=azimuth,
        cos_polar=cos_polar, row_weights=row_weights,
    )


def sphere_rule(n, resolution=None, samples=None, seed=0):
    """
    Regra em S^{n−1}.

    Para n = 3: Gauss–Legendre em cos φ (resolution linhas) × uniforme em θ
    (2·resolution colunas); a soma dos pesos é 4π. Para n > 3: Monte Carlo com
    semente, soma dos pesos |S^{n−1}| exata.
    """
    if n < 2:
        raise InvalidParameter('sphere_rule precisa de n >= 2.')
    if n == 3:
        resolution = int(resolution or geotom_setting('SPHERE_RESOLUTION'))
        if resolution < 8:
            raise InvalidParameter(f'Resolução mínima da grade é 8 (recebido {resolution}).')
        return _s2_grid(resolution)
    if n == 2:
        m = int(resolution or geotom_setting('GREAT_CIRCLE_NODES'))
        t = 2.0 * np.pi * np.arange(m) / m
        nodes = np.stack([np.cos(t), np.sin(t)], axis=1)
        return QuadratureRule(nodes=nodes, weights=np.full(m, 2.0 * np.pi / m),
                              domain=FULL_SPHERE, dim=2)
    samples = int(samples or geotom_setting('MC_SAMPLES'))
    if samples < 100:
        raise InvalidParameter(f'sphere_rule precisa de N >= 100 amostras (recebido {samples}).')
    nodes = _gaussian_directions(samples, n, seed)
    weights = np.full(samples, sphere_area(n) / samples)
    return QuadratureRule(nodes=nodes, weights=weights, domain=FULL_SPHERE, dim=n)


def grid_resolution(values):
    """Resolução R de uma grade R × 2R (aceita a forma achatada)."""
    values = np.asarray(values)
    if values.ndim == 2:
        rows, cols = values.shape
        if cols != 2 * rows:
            raise InvalidParameter(f'Grade incompatível com sphere_rule(3, ·): forma {values.shape}.')
        return rows
    rows = int(round(math.sqrt(values.size / 2)))
    if 2 * rows * rows != values.size:
        raise InvalidParameter(f'Grade incompatível com sphere_rule(3, ·): {values.size} valores.')
    return rows


# ------------------------
# Harmônicos esféricos reais
# ------------------------
def _check_degree(l, m):
    if l < 0 or abs(m) > l:
        raise InvalidParameter(f'Índice de harmônico fora do intervalo: (l={l}, m={m}).')


def _normalization(l, k):
    return math.sqrt((2 * l + 1) / (4.0 * math.pi)
                     * math.exp(math.lgamma(l - k + 1) - math.lgamma(l + k + 1)))


def _legendre_bar(l, k, x):
    # P̄_l^k sem a fase de Condon–Shortley (lpmv inclui a fase)
    if k > l or k < 0:
        return np.zeros_like(np.asarray(x, dtype=float))
    return (-1.0) ** k * special.lpmv(k, l, x)


def _trig(m, theta):
    if m > 0:
        return math.sqrt(2.0) * np.cos(m * theta)
    if m < 0:
        return math.sqrt(2.0) * np.sin(-m * theta)
    return np.ones_like(np.asarray(theta, dtype=float))


def _ylm(l, m, x, theta):
    return _normalization(l, abs(m)) * _legendre_bar(l, abs(m), x) * _trig(m, theta)


def _ylm_dphi(l, m, x, theta):
    k = abs(m)
    if k == 0:
        dlegendre = -_legendre_bar(l, 1, x)
    else:
        dlegendre = 0.5 * ((l + k) * (l - k + 1) * _legendre_bar(l, k - 1, x)
                           - _legendre_bar(l, k + 1, x))
    return _normalization(l, k) * dlegendre * _trig(m, theta)


def _scalar_or_array(value):
    value = np.asarray(value, dtype=float)
    return float(value) if value.ndim == 0 else value


def sph_harm(l, m, theta, phi):
    """Harmônico esférico real ortonormal Y_lm(θ, φ), sem fase de Condon–Shortley."""
    _check_degree(l, m)
    return _scalar_or_array(_ylm(l, m, np.cos(phi), np.asarray(theta, dtype=float)))


def sph_harm_dphi(l, m, theta, phi):
    """Derivada ∂Y_lm/∂φ em forma fechada."""
    _check_degree(l, m)
    return _scalar_or_array(_ylm_dphi(l, m, np.cos(phi), np.asarray(theta, dtype=float)))


def angles(points):
    """Retorna (cos φ, θ) de pontos em S² (forma (N, 3))."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    x = np.clip(points[:, 2], -1.0, 1.0)
    theta = np.mod(np.arctan2(points[:, 1], points[:, 0]), 2.0 * np.pi)
    return x, theta


@lru_cache(maxsize=None)
def legendre_at_zero(l):
    """P_l(0) pela recorrência P_l(0) = −(l−1)/l · P_{l−2}(0); zero para l ímpar."""
    if l < 0:
        raise InvalidParameter(f'Grau de Legendre negativo: {l}.')
    value = Fraction(1)
    if l % 2:
        return 0.0
    for k in range(2, l + 1, 2):
        value *= Fraction(-(k - 1), k)
    return float(value)


@dataclass
class HarmonicSpectrum:
    """Coeficientes reais c_lm, 0 <= l <= L, guardados no índice l² + l + m."""
    max_degree: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != ((self.max_degree + 1) ** 2,):
            raise InvalidParameter('Vetor de coeficientes incompatível com o grau máximo.')

    @staticmethod
    def index(l, m):
        return l * l + l + m

    @classmethod
    def zeros(cls, max_degree):
        return cls(max_degree, np.zeros((max_degree + 1) ** 2))

    @classmethod
    def from_coeffs(cls, coeffs, max_degree=None):
        for l, m in coeffs:
            _check_degree(l, m)
        degree = max_degree if max_degree is not None else max((l for l, _ in coeffs), default=0)
        spectrum = cls.zeros(degree)
        for (l, m), c in coeffs.items():
            spectrum.values[cls.index(l, m)] = float(c)
        return spectrum

    def __getitem__(self, lm):
        l, m = lm
        _check_degree(l, m)
        if l > self.max_degree:
            return 0.0
        return float(self.values[self.index(l, m)])

    @property
    def coeffs(self):
        return {(l, m): float(self.values[self.index(l, m)])
                for l in range(self.max_degree + 1) for m in range(-l, l + 1)}

    def nonzero_items(self):
        for l in range(self.max_degree + 1):
            for m in range(-l, l + 1):
                c = self.values[self.index(l, m)]
                if c != 0.0:
                    yield (l, m), float(c)

    def degree_norm(self, l):
        start = l * l
        return float(np.linalg.norm(self.values[start:start + 2 * l + 1]))

    def odd_max(self):
        odd = [np.max(np.abs(self.values[l * l:(l + 1) ** 2]))
               for l in range(1, self.max_degree + 1, 2)]
        return float(max(odd, default=0.0))

    def scale_degrees(self, factors):
        """Novo espectro com c_lm multiplicado por factors[l]."""
        out = self.values.copy()
        for l in range(self.max_degree + 1):
            out[l * l:(l + 1) ** 2] *= factors[l]
        return HarmonicSpectrum(self.max_degree, out)


@lru_cache(maxsize=16)
def _legendre_table(max_degree, resolution):
    x = _s2_grid(resolution).cos_polar
    table = np.zeros((max_degree + 1, max_degree + 1, resolution))
    for l in range(max_degree + 1):
        for k in range(l + 1):
            table[l, k] = _normalization(l, k) * _legendre_bar(l, k, x)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=16)
def _trig_table(max_degree, resolution):
    theta = _s2_grid(resolution).azimuth
    table = np.stack([_trig(m, theta) for m in range(-max_degree, max_degree + 1)], axis=1)
    table.setflags(write=False)
    return table


def analyze(f, max_degree=None):
    """
    Análise harmônica de amostras na grade de sphere_rule(3, R).

    Parâmetros:
    - f: valores R × 2R (ou achatados) na grade;
    - max_degree: grau L de truncamento, no máximo R/2 (padrão R/2).

    Retorna:
    - HarmonicSpectrum com c_lm = ∫ f Y_lm.
    """
    resolution = grid_resolution(f)
    degree = resolution // 2 if max_degree is None else int(max_degree)
    if degree < 0 or degree > resolution // 2:
        raise InvalidParameter(
            f'Grade sub-amostrada: grau {degree} exige resolução >= {2 * degree} (recebido {resolution}).')
    grid = _s2_grid(resolution)
    samples = np.asarray(f, dtype=float).reshape(resolution, 2 * resolution)
    # transformada em θ primeiro, depois Legendre linha a linha
    fourier = samples @ _trig_table(degree, resolution) * (np.pi / resolution)
    weighted = fourier * grid.row_weights[:, None]
    table = _legendre_table(degree, resolution)
    spectrum = HarmonicSpectrum.zeros(degree)
    for m in range(-degree, degree + 1):
        k = abs(m)
        column = table[k:, k, :] @ weighted[:, m + degree]
        for offset, l in enumerate(range(k, degree + 1)):
            spectrum.values[HarmonicSpectrum.index(l, m)] = column[offset]
    return spectrum


def synthesize_grid(spectrum, resolution):
    """Avalia o espectro em todos os nós de sphere_rule(3, resolution): forma R × 2R."""
    degree = spectrum.max_degree
    table = _legendre_table(degree, resolution)
    rows = np.zeros((resolution, 2 * degree + 1))
    for m in range(-degree, degree + 1):
        k = abs(m)
        coeffs = np.array([spectrum.values[HarmonicSpectrum.index(l, m)] for l in range(k, degree + 1)])
        rows[:, m + degree] = coeffs @ table[k:, k, :]
    return rows @ _trig_table(degree, resolution).T


def synthesize(spectrum, u):
    """Valor do espectro numa direção (float) ou em vários pontos (N, 3)."""
    single = isinstance(u, Direction) or np.ndim(u) == 1
    points = unit_vector(u)[None, :] if single else np.asarray(u, dtype=float)
    x, theta = angles(points)
    total = np.zeros(len(points))
    for (l, m), c in spectrum.nonzero_items():
        total += c * _ylm(l, m, x, theta)
    return float(total[0]) if single else total


def synthesize_dphi(spectrum, x, theta):
    """∂/∂φ (ângulo polar global) do espectro, dados cos φ e o azimute θ."""
    x = np.asarray(x, dtype=float)
    theta = np.asarray(theta, dtype=float)
    total = np.zeros(np.broadcast(x, theta).shape)
    for (l, m), c in spectrum.nonzero_items():
        total += c * _ylm_dphi(l, m, x, theta)
    return total
