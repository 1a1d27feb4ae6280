"""Schrodinger form of the radial equation and the singleton level below the potential."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from . import jets as J
from .errors import InvalidSpecError
from .geometry import FieldEvaluator
from .modes2 import ModeSpec, RadialProfile, frequency, radial_profile


@dataclass(frozen=True)
class PotentialSpec:
    d: int
    e0: float
    l: int = 0

    def __post_init__(self):
        if self.d < 3:
            raise InvalidSpecError("the potential needs d >= 3")
        if self.l < 0:
            raise InvalidSpecError("l must be >= 0")


def potential_v(spec: PotentialSpec, r):
    r = np.asarray(r, dtype=float)
    if np.any((r <= 0) | (r >= math.pi / 2)):
        raise InvalidSpecError("V(r) is defined for 0 < r < pi/2")
    d, e0, l = spec.d, spec.e0, spec.l
    v = (l * (l + d - 3) / np.sin(r) ** 2 + (d - 2) * (d - 4) / np.sin(2 * r) ** 2
         - (2 - d - e0 * (e0 - d + 1)) / np.cos(r) ** 2)
    return float(v) if v.ndim == 0 else v


def schrodinger_transform(spec: ModeSpec) -> RadialProfile:
    """phi = tan^(d/2 - 1) r f(r); solves -phi'' + V phi = omega^2 phi."""
    prof = radial_profile(spec)
    p = spec.d / 2 - 1

    def ev(r):
        s, c = J.sincos(r)
        return J.power(s / c, p) * prof(r) if p else prof(r)

    return RadialProfile(ev, prof.exponent_at_origin + p, prof.exponent_at_boundary - p, prof.normalization,
                         f"phi[{prof.label}]", dict(prof.meta))


def schrodinger_field(spec: ModeSpec) -> FieldEvaluator:
    phi = schrodinger_transform(spec)
    return FieldEvaluator(lambda pt: phi(pt.r))


def schrodinger_residual(spec: ModeSpec, r, relative: bool = True):
    """|-phi'' + V phi - omega^2 phi| on a grid."""
    r = np.asarray(r, dtype=float)
    phi = schrodinger_transform(spec)
    D = phi.derivatives(r, 2)
    v = potential_v(PotentialSpec(spec.d, spec.e0, spec.l), r)
    w2 = frequency(spec) ** 2
    terms = np.array([-D[2], v * D[0], -w2 * D[0]])
    res = np.abs(terms.sum(axis=0))
    return res / np.maximum(np.abs(terms).max(axis=0), 1e-300) if relative else res


def level_energies(spec: PotentialSpec, kmax: int) -> list:
    if kmax < 0:
        raise InvalidSpecError("kmax must be >= 0")
    return [(spec.e0 + spec.l + 2 * k) ** 2 for k in range(kmax + 1)]


@dataclass(frozen=True)
class MinimumReport:
    d: int
    l: int
    level: float
    v_min: float
    r_min: float
    kind: str  # "interior", "infimum at r->0" or "infimum at r->pi/2"
    margin: float

    @property
    def below(self) -> bool:
        return self.level < self.v_min


def _endpoint_limit(spec: PotentialSpec, side: str) -> float:
    d, e0, l = spec.d, spec.e0, spec.l
    if side == "origin":
        # 1/r^2 coefficient l(l+d-3) + (d-2)(d-4)/4; finite limit when it vanishes
        if l * (l + d - 3) + (d - 2) * (d - 4) / 4 > 0:
            return math.inf
        return -(2 - d - e0 * (e0 - d + 1))
    coef = (d - 2) * (d - 4) / 4 - (2 - d - e0 * (e0 - d + 1))
    return math.inf if coef > 0 else -math.inf if coef < 0 else l * (l + d - 3)


def potential_minimum(spec: PotentialSpec, npts: int = 2048):
    """Grid (log-clustered at both ends) plus bounded golden-section refinement."""
    u = np.logspace(-9, math.log10(math.pi / 4), npts // 2)
    grid = np.unique(np.concatenate([u, math.pi / 2 - u]))
    v = potential_v(spec, grid)
    i = int(np.argmin(v))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(lambda x: potential_v(spec, x), bounds=(lo, hi), method="bounded",
                          options=dict(xatol=1e-12))
    r_min, v_min = float(res.x), float(res.fun)
    if v[i] < v_min:
        r_min, v_min = float(grid[i]), float(v[i])
    left, right = _endpoint_limit(spec, "origin"), _endpoint_limit(spec, "boundary")
    kind = "interior"
    if left <= v_min + 1e-9 * max(1.0, abs(v_min)):
        r_min, v_min, kind = 0.0, left, "infimum at r->0"
    elif right <= v_min:
        r_min, v_min, kind = math.pi / 2, right, "infimum at r->pi/2"
    return v_min, r_min, kind


def singleton_below_minimum(d: int, l: int) -> MinimumReport:
    if d < 4:
        raise InvalidSpecError("the singleton comparison needs d >= 4")
    spec = PotentialSpec(d, (d - 3) / 2, l)
    level = level_energies(spec, 0)[0]
    v_min, r_min, kind = potential_minimum(spec)
    return MinimumReport(d, l, level, v_min, r_min, kind, v_min - level)


def level_vs_minimum(d: int, e0: float, l: int, k: int) -> MinimumReport:
    spec = PotentialSpec(d, e0, l)
    level = level_energies(spec, k)[k]
    v_min, r_min, kind = potential_minimum(spec)
    return MinimumReport(d, l, level, v_min, r_min, kind, v_min - level)
