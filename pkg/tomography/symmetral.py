"""
Simetrização de Schwarz em R³.

O simetral K̄ de um corpo convexo K em torno de um eixo é o corpo de
revolução cuja seção horizontal em cada altura z é um disco centrado no eixo
com a mesma área da seção de K. Aqui:

- slice_area mede a área da seção {x·a = z} ∩ K por bisseção em raios;
- schwarz_symmetral monta o perfil r(z) em alturas de Chebyshev–Lobatto;
- symmetral_invariance_gap compara g(u₀) de K e de K̄ pela fórmula eq1.
"""
from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import optimize

from .conf import geotom_setting
from .exceptions import InvalidParameter, UnsupportedBody
from .parallel import map_ordered
from .radon import funk_invert_eq1, volume
from .sphere_quad import basis_matrix, sphere_rule, unit_vector
from .star_body import AxialRevolution, convexity_probe, lobatto_heights

logger = logging.getLogger(__name__)

CONVEXITY_GATE_TRIALS = 4000
MIN_GRID_SIZE = 33


@dataclass(frozen=True)
class RevolutionProfile:
    """Perfil r(z) de um corpo de revolução; pares em z, nulo em ±z_max."""
    axis: tuple
    z: tuple
    r: tuple
    interpolation: str = 'chebyshev'

    def __post_init__(self):
        self.as_body()

    @cached_property
    def _body(self):
        return AxialRevolution(self.axis, self.z, self.r, self.interpolation)

    def as_body(self):
        return self._body

    @property
    def half_height(self):
        return float(self.z[-1])

    def radius(self, z):
        return np.sqrt(self._body.square_radius(z))

    def to_csv(self):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(['z', 'r'])
        for z, r in zip(self.z, self.r):
            writer.writerow([repr(z), repr(r)])
        return buffer.getvalue()

    def to_descriptor(self):
        return self._body.to_dict()


@dataclass(frozen=True, eq=False)
class _AxialExtent:
    axis: np.ndarray
    frame: np.ndarray
    height: float
    apex: np.ndarray
    scale: float


def _axial_extent(body, axis):
    # h = max ρ(u)·(u·a); apex = ponto de fronteira onde o máximo é atingido
    a = unit_vector(axis)
    nodes = sphere_rule(3, 32).nodes
    rho = body.radial(nodes)
    heights = rho * (nodes @ a)
    best = int(np.argmax(heights))
    start = nodes[best]
    tangent = basis_matrix(start)

    def objective(y):
        u = start + tangent @ y
        u = u / np.linalg.norm(u)
        return -body.radial(u) * float(u @ a)

    result = optimize.minimize(objective, np.zeros(2), method='Nelder-Mead',
                               options={'xatol': 1e-12, 'fatol': 1e-15, 'maxiter': 4000})
    u = start + tangent @ result.x
    u = u / np.linalg.norm(u)
    height = -float(result.fun)
    if height < heights[best]:
        u, height = start, float(heights[best])
    apex = body.radial(u) * u
    return _AxialExtent(a, basis_matrix(a), height, apex, float(rho.max()))


def _require_convex(body):
    if body.dim != 3:
        raise InvalidParameter('A simetrização de Schwarz é feita em R³.')
    if body.known_convex:
        return
    verdict = convexity_probe(body, trials=CONVEXITY_GATE_TRIALS, seed=0)
    if not verdict.passed:
        raise UnsupportedBody(
            'Corpo não convexo: a seção pode não ser estrelada em relação ao eixo.',
            witness=verdict.as_dict().get('witness'))


def _slice_areas(body, extent, heights, rays=None):
    rays = int(rays or geotom_setting('SLICE_RAYS'))
    psi = 2.0 * np.pi * np.arange(rays) / rays
    directions = np.cos(psi)[:, None] * extent.frame[:, 0] + np.sin(psi)[:, None] * extent.frame[:, 1]
    tol = 1e-10 * extent.scale

    def area(z):
        if abs(z) >= extent.height:
            return 0.0
        center = (z / extent.height) * extent.apex
        upper = np.full(rays, 2.2 * extent.scale)
        for _ in range(60):
            inside = body.contains(center + upper[:, None] * directions)
            if not inside.any():
                break
            upper = np.where(inside, 2.0 * upper, upper)
        lower = np.zeros(rays)
        while np.max(upper - lower) > tol:
            mid = 0.5 * (lower + upper)
            inside = body.contains(center + mid[:, None] * directions)
            lower = np.where(inside, mid, lower)
            upper = np.where(inside, upper, mid)
        radius = 0.5 * (lower + upper)
        return float(np.sum(radius ** 2)) * np.pi / rays

    return np.array(map_ordered(area, list(heights)))


def slice_area(body, axis, z, rays=None):
    """
    Área da seção de K pelo plano {x·a = z}.

    Parâmetros:
    - body: corpo convexo de R³;
    - axis: direção a do eixo;
    - z: altura; fora da extensão do corpo a área é 0.

    Retorna:
    - ½∫ r(ψ)² dψ, com r(ψ) obtido por bisseção nos raios a partir de um ponto
      interior da seção.
    """
    _require_convex(body)
    extent = _axial_extent(body, axis)
    return float(_slice_areas(body, extent, [float(z)], rays)[0])


def schwarz_symmetral(body, axis, grid_size=None, rays=None):
    """
    Simetral de Schwarz de K em torno de `axis`.

    r(z_k) = √(área da seção/π) em alturas de Chebyshev–Lobatto; as metades
    z < 0 são espelhadas (K centrado). Interpolação chebyshev para corpos C¹ e
    pchip para corpos C0.
    """
    grid_size = int(grid_size or geotom_setting('SYMMETRAL_GRID'))
    if grid_size < MIN_GRID_SIZE:
        raise InvalidParameter(f'grid_size deve ser >= {MIN_GRID_SIZE} (recebido {grid_size}).')
    _require_convex(body)
    extent = _axial_extent(body, axis)
    heights = lobatto_heights(grid_size, extent.height)
    upper_half = heights[grid_size // 2:]
    areas = _slice_areas(body, extent, upper_half, rays)
    radii_upper = np.sqrt(np.maximum(areas, 0.0) / np.pi)
    radii_upper[-1] = 0.0
    lower_half = radii_upper[:0:-1] if grid_size % 2 else radii_upper[::-1]
    radii = np.concatenate([lower_half, radii_upper])
    interpolation = 'chebyshev' if body.is_smooth() else 'pchip'
    profile = RevolutionProfile(tuple(float(c) for c in extent.axis), tuple(float(z) for z in heights),
                                tuple(float(r) for r in radii), interpolation)
    verdict = convexity_probe(profile.as_body(), trials=CONVEXITY_GATE_TRIALS, seed=0)
    if not verdict.passed:
        logger.warning('schwarz_symmetral: teste de convexidade do perfil falhou (excesso %.3g)',
                       verdict.worst_excess)
    return profile


def revolution_radial(profile, u):
    """ρ do corpo de revolução do perfil: raiz de c·sen φ = r(c·cos φ)."""
    return profile.as_body().radial(u)


def profile_volume(profile):
    """π∫ r(z)² dz: Clenshaw–Curtis no interpolante de Chebyshev, integral exata da spline nos demais."""
    return profile.as_body().closed_form_volume()


def symmetral_invariance_gap(body, pole, grid_size=None):
    """|g(u₀) − ḡ(u₀)| com g e ḡ pela fórmula eq1, o simetral tomado no eixo de u₀."""
    body.require_smooth('symmetral_invariance_gap')
    u0 = unit_vector(pole)
    profile = schwarz_symmetral(body, u0, grid_size=grid_size)
    g = funk_invert_eq1(body, u0).value
    g_bar = funk_invert_eq1(profile.as_body(), u0).value
    return {'gap': abs(g - g_bar), 'g': g, 'g_bar': g_bar, 'pole': u0.tolist()}


def coaxial_revolution_compare(first, second, axis, directions=512, seed=0, tol=None):
    """bp_compare entre os simetrais coaxiais de dois corpos convexos de R³."""
    from .bp_lab import bp_compare

    profiles = [schwarz_symmetral(body, axis) for body in (first, second)]
    return bp_compare(profiles[0].as_body(), profiles[1].as_body(), directions=directions, seed=seed, tol=tol)


def volume_gap(body, profile):
    """Diferença relativa |vol(K) − vol(K̄)|/vol(K) com vol(K) pela quadratura esférica."""
    reference = volume(body)
    return abs(profile_volume(profile) - reference) / reference if reference else math.inf
