"""
Corpos estrelados centrados descritos pela função radial.

Cada variante é um dataclass imutável (campos em tuplas) que sabe:
- avaliar ρ(u) de forma vetorizada (u com forma (n,) ou (N, n));
- testar pertinência (contains);
- derivar ρ na latitude de um referencial polar (radial_dphi);
- se reescalar e se descrever como dicionário (descritor JSON).

Variantes não suaves (caixa, cilindro, octaedro generalizado) têm classe C0 e
são recusadas por qualquer operação que precise de ∂ρ/∂φ.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline, PchipInterpolator, RectBivariateSpline, make_interp_spline

from .conf import geotom_setting
from .exceptions import InvalidParameter, UnsupportedBody
from .sphere_quad import (
    Direction, HarmonicSpectrum, ball_volume, basis_matrix, sphere_rule, synthesize,
    synthesize_dphi, synthesize_grid, unit_vector,
)

logger = logging.getLogger(__name__)

SMOOTHNESS_ORDER = {'C0': 0, 'C1': 1, 'Cinf': 2}
INTERPOLATIONS = ('chebyshev', 'pchip', 'linear')
CONTAINS_SLACK = 1e-12
SAMPLED_EVENNESS_TOL = 1e-9


def _positive(name, value):
    try:
        number = float(value)
    except (TypeError, ValueError):
        number = math.nan
    if not math.isfinite(number) or number <= 0:
        raise InvalidParameter(f'{name} deve ser um número positivo (recebido {value!r}).')
    return number


# ------------------------
# Referencial polar
# ------------------------
@dataclass(frozen=True, eq=False)
class PoleFrame:
    """Polo u₀ em R³ e base ortonormal de u₀⊥ que define (θ, φ), φ medido a partir de u₀."""
    pole: np.ndarray
    frame: np.ndarray

    @classmethod
    def at(cls, pole):
        vec = unit_vector(pole)
        if vec.size != 3:
            raise InvalidParameter('Coordenadas (θ, φ) só são definidas em R³.')
        return cls(pole=vec, frame=basis_matrix(vec))

    def horizontal(self, theta):
        theta = np.asarray(theta, dtype=float)
        return np.cos(theta)[..., None] * self.frame[:, 0] + np.sin(theta)[..., None] * self.frame[:, 1]

    def point(self, theta, phi):
        theta, phi = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))
        return np.sin(phi)[..., None] * self.horizontal(theta) + np.cos(phi)[..., None] * self.pole

    def alignment(self, axis):
        """+1 se o polo é o eixo, −1 se é o oposto, 0 caso contrário."""
        dot = float(np.dot(self.pole, unit_vector(axis)))
        if abs(dot - 1.0) <= 1e-12:
            return 1
        if abs(dot + 1.0) <= 1e-12:
            return -1
        return 0


def _check_polar_angle(phi):
    phi = np.asarray(phi, dtype=float)
    if np.any(phi < 0.0) or np.any(phi > np.pi):
        raise InvalidParameter('O ângulo φ deve estar em [0, π].')
    return phi


# ------------------------
# Base
# ------------------------
@dataclass(frozen=True)
class StarBody:
    kind = 'star'
    known_convex = False

    @property
    def dim(self):
        raise NotImplementedError

    @property
    def smoothness(self):
        return 'C0'

    def is_smooth(self):
        return SMOOTHNESS_ORDER[self.smoothness] >= SMOOTHNESS_ORDER['C1']

    def require_smooth(self, operation='esta operação'):
        if not self.is_smooth():
            raise UnsupportedBody(
                f'{operation} exige ρ de classe C¹; o corpo {self.kind} é {self.smoothness}.')

    def _points(self, u):
        if isinstance(u, Direction):
            points, single = u.vector[None, :], True
        else:
            points = np.asarray(u, dtype=float)
            single = points.ndim == 1
            points = np.atleast_2d(points)
        if points.shape[-1] != self.dim:
            raise InvalidParameter(
                f'Dimensão da direção ({points.shape[-1]}) difere da dimensão do corpo ({self.dim}).')
        norms = np.linalg.norm(points, axis=1)
        if np.any(norms == 0.0):
            raise InvalidParameter('Direção nula.')
        return points / norms[:, None], single

    def radial(self, u):
        """ρ(u) para uma direção (float) ou para as linhas de um array (N, n)."""
        points, single = self._points(u)
        values = self._radial(points)
        return float(values[0]) if single else values

    def _radial(self, points):
        raise NotImplementedError

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        x = np.atleast_2d(x)
        if x.shape[-1] != self.dim:
            raise InvalidParameter('Dimensão do ponto difere da dimensão do corpo.')
        norms = np.linalg.norm(x, axis=1)
        inside = norms == 0.0
        nonzero = ~inside
        if np.any(nonzero):
            rho = self._radial(x[nonzero] / norms[nonzero, None])
            inside[nonzero] = norms[nonzero] <= rho * (1.0 + CONTAINS_SLACK)
        return bool(inside[0]) if single else inside

    def radial_dphi(self, frame, theta, phi):
        """∂ρ/∂φ no referencial `frame`; diferença central quando não há forma fechada."""
        self.require_smooth('∂ρ/∂φ')
        phi = _check_polar_angle(phi)
        if self.dim != 3:
            raise InvalidParameter('∂ρ/∂φ só é definida em R³.')
        value = self._dphi(frame, np.asarray(theta, dtype=float), phi)
        return float(value) if np.ndim(value) == 0 else value

    def _dphi(self, frame, theta, phi):
        return self._central_difference(frame, theta, phi)

    def _central_difference(self, frame, theta, phi):
        step = geotom_setting('FD_STEP')
        upper = self._radial(frame.point(theta, phi + step).reshape(-1, 3))
        lower = self._radial(frame.point(theta, phi - step).reshape(-1, 3))
        shape = np.broadcast(theta, phi).shape
        return ((upper - lower) / (2.0 * step)).reshape(shape)

    def scaled(self, s):
        """Corpo s·K (mesma variante)."""
        _positive('Fator de escala', s)
        return self._scaled(float(s))

    def _scaled(self, s):
        raise NotImplementedError

    def closed_form_volume(self):
        return None

    def to_dict(self):
        raise NotImplementedError


# ------------------------
# Variantes analíticas
# ------------------------
@dataclass(frozen=True)
class Ball(StarBody):
    n: int
    r: float
    kind = 'ball'
    known_convex = True

    def __post_init__(self):
        if self.n < 2:
            raise InvalidParameter('A bola precisa de n >= 2.')
        _positive('r', self.r)

    @property
    def dim(self):
        return self.n

    @property
    def smoothness(self):
        return 'Cinf'

    def _radial(self, points):
        return np.full(len(points), float(self.r))

    def _dphi(self, frame, theta, phi):
        return np.zeros(np.broadcast(theta, phi).shape)

    def _scaled(self, s):
        return Ball(self.n, self.r * s)

    def closed_form_volume(self):
        return ball_volume(self.n) * self.r ** self.n

    def to_dict(self):
        return {'type': self.kind, 'n': self.n, 'r': self.r}


@dataclass(frozen=True)
class Ellipsoid(StarBody):
    semi_axes: tuple
    kind = 'ellipsoid'
    known_convex = True

    def __post_init__(self):
        if len(self.semi_axes) < 2:
            raise InvalidParameter('O elipsoide precisa de pelo menos 2 semieixos.')
        for i, a in enumerate(self.semi_axes):
            _positive(f'semi_axes[{i}]', a)

    @property
    def dim(self):
        return len(self.semi_axes)

    @property
    def smoothness(self):
        return 'Cinf'

    @cached_property
    def _inverse_squares(self):
        return 1.0 / np.asarray(self.semi_axes, dtype=float) ** 2

    def _radial(self, points):
        return 1.0 / np.sqrt((points ** 2) @ self._inverse_squares)

    def _dphi(self, frame, theta, phi):
        theta, phi = np.broadcast_arrays(theta, phi)
        horizontal = frame.horizontal(theta)
        u = np.sin(phi)[..., None] * horizontal + np.cos(phi)[..., None] * frame.pole
        du = np.cos(phi)[..., None] * horizontal - np.sin(phi)[..., None] * frame.pole
        rho = 1.0 / np.sqrt((u ** 2) @ self._inverse_squares)
        return -rho ** 3 * ((u * du) @ self._inverse_squares)

    def _scaled(self, s):
        return Ellipsoid(tuple(a * s for a in self.semi_axes))

    def closed_form_volume(self):
        return ball_volume(self.dim) * float(np.prod(self.semi_axes))

    def to_dict(self):
        return {'type': self.kind, 'semi_axes': list(self.semi_axes)}


@dataclass(frozen=True)
class Box(StarBody):
    half_sides: tuple
    kind = 'box'
    known_convex = True

    def __post_init__(self):
        if len(self.half_sides) < 2:
            raise InvalidParameter('A caixa precisa de n >= 2.')
        for i, h in enumerate(self.half_sides):
            _positive(f'half_sides[{i}]', h)

    @property
    def dim(self):
        return len(self.half_sides)

    def _radial(self, points):
        with np.errstate(divide='ignore'):
            ratios = np.asarray(self.half_sides) / np.abs(points)
        return ratios.min(axis=1)

    def _scaled(self, s):
        return Box(tuple(h * s for h in self.half_sides))

    def closed_form_volume(self):
        return float(np.prod(2.0 * np.asarray(self.half_sides)))

    def to_dict(self):
        return {'type': self.kind, 'n': self.dim, 'half_sides': list(self.half_sides)}


@dataclass(frozen=True)
class CrossPolytope(StarBody):
    n: int
    a: float
    kind = 'cross_polytope'
    known_convex = True

    def __post_init__(self):
        if self.n < 2:
            raise InvalidParameter('O politopo cruzado precisa de n >= 2.')
        _positive('a', self.a)

    @property
    def dim(self):
        return self.n

    def _radial(self, points):
        return self.a / np.abs(points).sum(axis=1)

    def _scaled(self, s):
        return CrossPolytope(self.n, self.a * s)

    def closed_form_volume(self):
        return (2.0 * self.a) ** self.n / math.factorial(self.n)

    def to_dict(self):
        return {'type': self.kind, 'n': self.n, 'a': self.a}


@dataclass(frozen=True)
class Cylinder(StarBody):
    """B^{n−1}(r) × [−h, h], eixo na última coordenada."""
    n: int
    r: float
    h: float
    kind = 'cylinder'
    known_convex = True

    def __post_init__(self):
        if self.n < 2:
            raise InvalidParameter('O cilindro precisa de n >= 2.')
        _positive('r', self.r)
        _positive('h', self.h)

    @property
    def dim(self):
        return self.n

    def _radial(self, points):
        transverse = np.linalg.norm(points[:, :-1], axis=1)
        with np.errstate(divide='ignore'):
            side = self.r / transverse
            cap = self.h / np.abs(points[:, -1])
        return np.minimum(side, cap)

    def _scaled(self, s):
        return Cylinder(self.n, self.r * s, self.h * s)

    def closed_form_volume(self):
        return ball_volume(self.n - 1) * self.r ** (self.n - 1) * 2.0 * self.h

    def to_dict(self):
        return {'type': self.kind, 'n': self.n, 'r': self.r, 'h': self.h}


@dataclass(frozen=True)
class PerturbedBall(StarBody):
    """ρ = r₀ + amplitude · Σ c_lm Y_lm, só graus pares; ρ >= 0.1·r₀ verificado na grade."""
    r0: float
    amplitude: float
    coefficients: tuple
    kind = 'perturbed_ball'

    def __post_init__(self):
        _positive('r0', self.r0)
        if not math.isfinite(self.amplitude) or self.amplitude < 0:
            raise InvalidParameter('amplitude deve ser >= 0.')
        seen = set()
        for i, (l, m, _) in enumerate(self.coefficients):
            if l < 0 or abs(m) > l:
                raise InvalidParameter(f'coefficients[{i}]: índice (l={l}, m={m}) fora do intervalo.')
            if l % 2:
                raise InvalidParameter(f'coefficients[{i}]: grau ímpar {l} tornaria o corpo não centrado.')
            if (l, m) in seen:
                raise InvalidParameter(f'coefficients[{i}]: índice ({l}, {m}) repetido.')
            seen.add((l, m))
        degree = self.spectrum.max_degree
        grid = synthesize_grid(self.spectrum, max(32, 4 * degree))
        if self.r0 + grid.min() < 0.1 * self.r0:
            raise InvalidParameter(
                f'ρ cai abaixo de 0.1·r0 na grade (mínimo {self.r0 + grid.min():.6g}).')

    @property
    def dim(self):
        return 3

    @property
    def smoothness(self):
        return 'Cinf'

    @cached_property
    def spectrum(self):
        return HarmonicSpectrum.from_coeffs(
            {(l, m): self.amplitude * c for l, m, c in self.coefficients})

    def _radial(self, points):
        return self.r0 + synthesize(self.spectrum, points)

    def _dphi(self, frame, theta, phi):
        sign = frame.pole[2]
        if abs(abs(sign) - 1.0) > 1e-12:
            return self._central_difference(frame, theta, phi)
        theta, phi = np.broadcast_arrays(theta, phi)
        horizontal = frame.horizontal(theta)
        azimuth = np.mod(np.arctan2(horizontal[..., 1], horizontal[..., 0]), 2.0 * np.pi)
        # com polo −e3 a latitude global é π − φ
        return np.sign(sign) * synthesize_dphi(self.spectrum, np.sign(sign) * np.cos(phi), azimuth)

    def _scaled(self, s):
        return PerturbedBall(self.r0 * s, self.amplitude * s, self.coefficients)

    def to_dict(self):
        return {'type': self.kind, 'r0': self.r0, 'amplitude': self.amplitude,
                'coefficients': [list(c) for c in self.coefficients]}


# ------------------------
# Corpos de revolução
# ------------------------
def _axis_cosine(points, axis):
    return np.clip(np.abs(points @ axis), 0.0, 1.0)


@dataclass(frozen=True)
class PolarRevolution(StarBody):
    """
    Corpo de revolução com ρ(φ) tabelado em [0, π/2] (φ medido a partir do eixo).

    O perfil é interpolado por spline cúbica com derivada nula nas duas
    pontas e estendido de forma par para [π/2, π].
    """
    axis: tuple
    phi: tuple
    rho: tuple
    declared_smoothness: str = 'C1'
    kind = 'revolution'

    def __post_init__(self):
        unit_vector(self.axis)
        if len(self.axis) != 3:
            raise InvalidParameter('O eixo de revolução deve estar em R³.')
        if len(self.phi) != len(self.rho) or len(self.phi) < 4:
            raise InvalidParameter('phi e rho precisam do mesmo tamanho (>= 4).')
        phi = np.asarray(self.phi, dtype=float)
        if abs(phi[0]) > 1e-12 or abs(phi[-1] - np.pi / 2) > 1e-9 or np.any(np.diff(phi) <= 0):
            raise InvalidParameter('phi deve ser crescente de 0 a π/2.')
        for i, r in enumerate(self.rho):
            _positive(f'rho[{i}]', r)
        if self.declared_smoothness not in SMOOTHNESS_ORDER:
            raise InvalidParameter(f'Classe de suavidade desconhecida: {self.declared_smoothness!r}.')

    @property
    def dim(self):
        return 3

    @property
    def smoothness(self):
        return self.declared_smoothness

    @cached_property
    def _axis(self):
        return unit_vector(self.axis)

    @cached_property
    def _spline(self):
        return CubicSpline(np.asarray(self.phi), np.asarray(self.rho), bc_type='clamped')

    def _radial(self, points):
        return self._spline(np.arccos(_axis_cosine(points, self._axis)))

    def _dphi(self, frame, theta, phi):
        if frame.alignment(self._axis) == 0:
            return self._central_difference(frame, theta, phi)
        theta, phi = np.broadcast_arrays(theta, phi)
        folded = np.where(phi <= np.pi / 2, phi, np.pi - phi)
        sign = np.where(phi <= np.pi / 2, 1.0, -1.0)
        return sign * self._spline(folded, 1)

    def _scaled(self, s):
        return PolarRevolution(self.axis, self.phi, tuple(r * s for r in self.rho), self.declared_smoothness)

    def to_dict(self):
        return {'type': self.kind, 'axis': list(self.axis), 'phi': list(self.phi),
                'rho': list(self.rho), 'smoothness': self.declared_smoothness}


def lobatto_heights(count, half_height):
    """Alturas de Chebyshev–Lobatto em ordem crescente, de −half_height a half_height."""
    k = np.arange(count)
    heights = -half_height * np.cos(np.pi * k / (count - 1))
    half = count // 2
    heights[count - half:] = -heights[:half][::-1]
    if count % 2:
        heights[half] = 0.0
    return heights


@dataclass(frozen=True)
class AxialRevolution(StarBody):
    """
    Corpo de revolução dado pelo raio r(z) das seções perpendiculares ao eixo.

    Interpola s(z) = r(z)², que é regular mesmo onde r tem borda em raiz
    quadrada. A função radial resolve c²·sen²φ = s(c·cos φ) por bisseção.
    """
    axis: tuple
    z: tuple
    r: tuple
    interpolation: str = 'chebyshev'
    kind = 'revolution'

    def __post_init__(self):
        unit_vector(self.axis)
        if len(self.axis) != 3:
            raise InvalidParameter('O eixo de revolução deve estar em R³.')
        if self.interpolation not in INTERPOLATIONS:
            raise InvalidParameter(f'Interpolação desconhecida: {self.interpolation!r}.')
        if len(self.z) != len(self.r) or len(self.z) < 5:
            raise InvalidParameter('z e r precisam do mesmo tamanho (>= 5).')
        z = np.asarray(self.z, dtype=float)
        r = np.asarray(self.r, dtype=float)
        if np.any(np.diff(z) <= 0):
            raise InvalidParameter('As alturas z devem ser estritamente crescentes.')
        if z[-1] <= 0 or abs(z[0] + z[-1]) > 1e-9 * z[-1]:
            raise InvalidParameter('As alturas devem ser simétricas em [−z_max, z_max].')
        if np.any(r < 0) or r[0] != 0.0 or r[-1] != 0.0:
            raise InvalidParameter('Os raios devem ser >= 0 e nulos nas pontas.')
        if np.max(np.abs(r - r[::-1])) > 1e-9 * max(1.0, float(r.max())):
            raise InvalidParameter('O perfil r(z) deve ser par.')
        if float(np.interp(0.0, z, r)) <= 0:
            raise InvalidParameter('O perfil precisa de raio positivo em z = 0.')
        if self.interpolation == 'chebyshev':
            expected = lobatto_heights(len(z), z[-1])
            if np.max(np.abs(z - expected)) > 1e-9 * z[-1]:
                raise InvalidParameter('Interpolação chebyshev exige alturas de Chebyshev–Lobatto.')

    @property
    def dim(self):
        return 3

    @property
    def smoothness(self):
        return 'C1' if self.interpolation == 'chebyshev' else 'C0'

    @property
    def half_height(self):
        return float(self.z[-1])

    @cached_property
    def _axis(self):
        return unit_vector(self.axis)

    @cached_property
    def square_profile(self):
        """Interpolante de s(z) = r(z)² (objeto com __call__, deriv/derivative e integração)."""
        z = np.asarray(self.z, dtype=float)
        s = np.asarray(self.r, dtype=float) ** 2
        if self.interpolation == 'chebyshev':
            return np.polynomial.Chebyshev.fit(z, s, len(z) - 1, domain=[z[0], z[-1]])
        if self.interpolation == 'pchip':
            return PchipInterpolator(z, s, extrapolate=False)
        return make_interp_spline(z, s, k=1)

    def square_radius(self, z):
        z = np.asarray(z, dtype=float)
        inside = np.abs(z) <= self.half_height
        values = np.zeros_like(z)
        values[inside] = np.maximum(self.square_profile(z[inside]), 0.0)
        return values

    def square_radius_derivative(self, z):
        z = np.asarray(z, dtype=float)
        profile = self.square_profile
        derivative = profile.deriv() if self.interpolation == 'chebyshev' else profile.derivative()
        inside = np.abs(z) <= self.half_height
        values = np.zeros_like(z)
        values[inside] = derivative(z[inside])
        return values

    @cached_property
    def max_radius(self):
        dense = np.linspace(-self.half_height, self.half_height, 2049)
        return math.sqrt(float(self.square_radius(dense).max())) * (1.0 + 1e-9)

    def _radial(self, points):
        cos_phi = _axis_cosine(points, self._axis)
        sin_phi = np.sqrt(1.0 - cos_phi ** 2)
        return self._boundary(cos_phi, sin_phi)

    def _boundary(self, cos_phi, sin_phi):
        zmax = self.half_height
        with np.errstate(divide='ignore'):
            upper = np.minimum(zmax / cos_phi, self.max_radius / sin_phi)
        lower = np.zeros_like(upper)
        for _ in range(64):
            mid = 0.5 * (lower + upper)
            outside = mid ** 2 * sin_phi ** 2 >= self.square_radius(mid * cos_phi)
            upper = np.where(outside, mid, upper)
            lower = np.where(outside, lower, mid)
        boundary = 0.5 * (lower + upper)
        return np.where(sin_phi == 0.0, zmax, boundary)

    def _dphi(self, frame, theta, phi):
        if frame.alignment(self._axis) == 0:
            return self._central_difference(frame, theta, phi)
        theta, phi = np.broadcast_arrays(theta, phi)
        folded = np.where(phi <= np.pi / 2, phi, np.pi - phi)
        sign = np.where(phi <= np.pi / 2, 1.0, -1.0)
        cos_phi, sin_phi = np.cos(folded), np.sin(folded)
        c = self._boundary(cos_phi, sin_phi)
        slope = self.square_radius_derivative(c * cos_phi)
        numerator = 2.0 * c ** 2 * sin_phi * cos_phi + slope * c * sin_phi
        denominator = 2.0 * c * sin_phi ** 2 - slope * cos_phi
        with np.errstate(divide='ignore', invalid='ignore'):
            derivative = np.where(denominator != 0.0, -numerator / denominator, 0.0)
        return sign * derivative

    def _scaled(self, s):
        return AxialRevolution(self.axis, tuple(z * s for z in self.z), tuple(r * s for r in self.r),
                               self.interpolation)

    def closed_form_volume(self):
        profile = self.square_profile
        if self.interpolation == 'chebyshev':
            antiderivative = profile.integ()
            area = antiderivative(self.half_height) - antiderivative(-self.half_height)
        else:
            area = profile.integrate(-self.half_height, self.half_height)
        return math.pi * float(area)

    def to_dict(self):
        return {'type': self.kind, 'axis': list(self.axis), 'z': list(self.z), 'r': list(self.r),
                'interpolation': self.interpolation}


# ------------------------
# Corpo amostrado
# ------------------------
@dataclass(frozen=True)
class Sampled(StarBody):
    """
    ρ tabelado na grade de sphere_rule(3, R) (R linhas em φ, 2R colunas em θ).

    A interpolação é uma spline bivariada (ordem 1 ou 3) numa grade estendida:
    θ periódico e φ refletido através dos polos com deslocamento θ + π.
    """
    values: tuple
    order: int = 3
    kind = 'sampled'

    def __post_init__(self):
        if self.order not in (1, 3):
            raise InvalidParameter('order deve ser 1 ou 3.')
        try:
            grid = self.grid_values
        except ValueError:
            raise InvalidParameter('values deve ser uma matriz retangular.') from None
        rows = grid.shape[0]
        if grid.ndim != 2 or grid.shape[1] != 2 * rows or rows < 8:
            raise InvalidParameter(f'values deve ser uma grade R × 2R com R >= 8 (forma {grid.shape}).')
        if not np.all(np.isfinite(grid)) or np.any(grid <= 0):
            raise InvalidParameter('Os valores de ρ devem ser finitos e positivos.')
        antipodal = np.roll(grid[::-1], -rows, axis=1)
        gap = float(np.max(np.abs(grid - antipodal)))
        if gap > SAMPLED_EVENNESS_TOL:
            raise InvalidParameter(f'Grade não é par: |ρ(u) − ρ(−u)| chega a {gap:.3g}.')

    @classmethod
    def from_grid(cls, values, order=3):
        return cls(tuple(tuple(float(v) for v in row) for row in np.asarray(values)), order)

    @property
    def dim(self):
        return 3

    @property
    def smoothness(self):
        return 'C1' if self.order == 3 else 'C0'

    @cached_property
    def grid_values(self):
        return np.asarray(self.values, dtype=float)

    @property
    def resolution(self):
        return self.grid_values.shape[0]

    @cached_property
    def _spline(self):
        rows = self.resolution
        grid = sphere_rule(3, rows)
        values = self.grid_values
        pad = 3
        shifted = np.roll(values, -rows, axis=1)
        phi = np.concatenate([-grid.polar[:pad][::-1], grid.polar, 2.0 * np.pi - grid.polar[-pad:][::-1]])
        extended = np.concatenate([shifted[:pad][::-1], values, shifted[-pad:][::-1]], axis=0)
        theta = grid.azimuth
        theta = np.concatenate([theta[-pad:] - 2.0 * np.pi, theta, theta[:pad] + 2.0 * np.pi])
        extended = np.concatenate([extended[:, -pad:], extended, extended[:, :pad]], axis=1)
        return RectBivariateSpline(phi, theta, extended, kx=self.order, ky=self.order, s=0)

    def _radial(self, points):
        phi = np.arccos(np.clip(points[:, 2], -1.0, 1.0))
        theta = np.mod(np.arctan2(points[:, 1], points[:, 0]), 2.0 * np.pi)
        return self._spline.ev(phi, theta)

    def _dphi(self, frame, theta, phi):
        sign = frame.pole[2]
        if abs(abs(sign) - 1.0) > 1e-12:
            return self._central_difference(frame, theta, phi)
        theta, phi = np.broadcast_arrays(theta, phi)
        horizontal = frame.horizontal(theta)
        azimuth = np.mod(np.arctan2(horizontal[..., 1], horizontal[..., 0]), 2.0 * np.pi)
        polar = phi if sign > 0 else np.pi - phi
        return np.sign(sign) * self._spline.ev(polar, azimuth, dx=1)

    def _scaled(self, s):
        return Sampled.from_grid(self.grid_values * s, self.order)

    def to_dict(self):
        return {'type': self.kind, 'n': 3, 'values': [list(row) for row in self.values], 'order': self.order}


# ------------------------
# Operações
# ------------------------
def radial(body, u):
    return body.radial(u)


def contains(body, x):
    return body.contains(x)


def radial_dphi(body, frame, theta, phi):
    return body.radial_dphi(frame, theta, phi)


def scaled(body, s):
    return body.scaled(s)


def closed_form_volume(body):
    return body.closed_form_volume()


@dataclass(frozen=True)
class ConvexityVerdict:
    passed: bool
    trials: int
    worst_excess: float
    witness: tuple | None = None

    def as_dict(self):
        payload = {'passed': self.passed, 'trials': self.trials, 'worst_excess': self.worst_excess}
        if self.witness is not None:
            payload['witness'] = {'p': list(self.witness[0]), 'q': list(self.witness[1])}
        return payload


def _random_directions(rng, count, dim):
    z = rng.standard_normal((count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def convexity_probe(body, trials=10_000, seed=0, tol=1e-9):
    """
    Teste do ponto médio entre pares de pontos de fronteira.

    Metade dos pares é uniforme em S^{n−1} × S^{n−1}; a outra metade é local
    (deslocamento angular log-uniforme entre 1e−2 e 1), onde concavidades
    pequenas aparecem. Retorna ConvexityVerdict com o par de pior excesso.
    """
    if trials < 1:
        raise InvalidParameter('trials deve ser >= 1.')
    rng = np.random.default_rng(seed)
    n = body.dim
    first = _random_directions(rng, trials, n)
    uniform = trials // 2
    second = np.empty_like(first)
    second[:uniform] = _random_directions(rng, uniform, n)
    local = trials - uniform
    if local:
        tangent = rng.standard_normal((local, n))
        base = first[uniform:]
        tangent -= np.sum(tangent * base, axis=1, keepdims=True) * base
        tangent /= np.linalg.norm(tangent, axis=1, keepdims=True)
        offsets = 10.0 ** rng.uniform(-2.0, 0.0, size=local)
        second[uniform:] = np.cos(offsets)[:, None] * base + np.sin(offsets)[:, None] * tangent
    p = body._radial(first)[:, None] * first
    q = body._radial(second)[:, None] * second
    midpoint = 0.5 * (p + q)
    norms = np.linalg.norm(midpoint, axis=1)
    excess = np.zeros(trials)
    nonzero = norms > 0
    boundary = body._radial(midpoint[nonzero] / norms[nonzero, None])
    excess[nonzero] = norms[nonzero] / boundary - 1.0
    worst = int(np.argmax(excess))
    passed = bool(excess[worst] <= tol)
    witness = None if passed else (tuple(p[worst]), tuple(q[worst]))
    if not passed:
        logger.debug('convexity_probe: %s falhou com excesso %.3g', body.kind, excess[worst])
    return ConvexityVerdict(passed=passed, trials=trials, worst_excess=float(excess[worst]), witness=witness)
