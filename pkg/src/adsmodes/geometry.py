"""Global coordinates on CAdS_d, the embedding, the invariant Z, and FD operators."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ChartBoundaryError, InvalidSpecError, PoleError
from .specfun import gamma_fn, gegenbauer_c

DEFAULT_STEP = 1e-3


@dataclass(frozen=True)
class Point:
    t: float
    r: float
    angles: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(float(x) for x in self.angles))
        if not (0.0 <= self.r < math.pi / 2):
            raise InvalidSpecError(f"r must lie in [0, pi/2), got {self.r}")

    def validate(self, d: int) -> "Point":
        if len(self.angles) != max(d - 2, 0):
            raise InvalidSpecError(f"d={d} needs {d - 2} angles, got {len(self.angles)}")
        for th in self.angles[:-1]:
            if not (0.0 <= th <= math.pi):
                raise InvalidSpecError("polar angles must lie in [0, pi]")
        return self

    def shifted(self, *, dt=0.0, dr=0.0, angle_index=None, dangle=0.0) -> "Point":
        angles = list(self.angles)
        if angle_index is not None:
            angles[angle_index] += dangle
        r = self.r + dr
        if not (0.0 < r < math.pi / 2):
            raise ChartBoundaryError(f"finite-difference stencil leaves the chart at r={r}")
        return Point(self.t + dt, r, tuple(angles))


def unit_vector(angles: Sequence[float], d: int) -> np.ndarray:
    """Direction on S^{d-2}; the first angle is polar about the last axis.

    For d=4 this gives (sin th cos ph, sin th sin ph, cos th).
    """
    n = d - 1
    if n == 1:
        return np.array([1.0])
    vec = np.empty(n)
    sprod = 1.0
    polar = list(angles[:-1])
    for j, th in enumerate(polar):
        vec[n - 1 - j] = sprod * math.cos(th)
        sprod *= math.sin(th)
    ph = angles[-1]
    vec[1] = sprod * math.sin(ph)
    vec[0] = sprod * math.cos(ph)
    return vec


@dataclass(frozen=True)
class EmbeddingVector:
    components: tuple

    def dot(self, other: "EmbeddingVector") -> float:
        x = np.asarray(self.components)
        y = np.asarray(other.components)
        return float(x[0] * y[0] + x[-1] * y[-1] - np.dot(x[1:-1], y[1:-1]))


def embed(p: Point, d: int, a: float = 1.0) -> EmbeddingVector:
    if d < 2:
        raise InvalidSpecError("d must be >= 2")
    if d == 2:
        # S^0: the spatial line; use the signed coordinate r >= 0 branch
        n = np.array([1.0])
    else:
        p.validate(d)
        n = unit_vector(p.angles, d)
    sec = 1.0 / math.cos(p.r)
    comps = [sec / a * math.sin(p.t)]
    comps.extend(math.tan(p.r) / a * n)
    comps.append(-sec / a * math.cos(p.t))
    return EmbeddingVector(tuple(float(c) for c in comps))


def hyperboloid_residual(x: EmbeddingVector, a: float = 1.0) -> float:
    return abs(a * a * x.dot(x) - 1.0)


def invariant_z(x: Point, y: Point, d: int, a: float = 1.0) -> float:
    return a * a * embed(x, d, a).dot(embed(y, d, a))


def origin(d: int) -> Point:
    angles = tuple([math.pi / 2] * (d - 3) + [0.0]) if d > 2 else ()
    return Point(0.0, 0.0, angles)


@dataclass(frozen=True)
class CurvatureConstants:
    R: float
    ricci_factor: float
    lambda_cosm: float


def curvature(d: int, a: float = 1.0) -> CurvatureConstants:
    if d < 2:
        raise InvalidSpecError("d must be >= 2")
    return CurvatureConstants(R=d * (d - 1) * a * a, ricci_factor=(d - 1) * a * a,
                              lambda_cosm=(d - 2) * (d - 1) * a * a / 2)


@dataclass(frozen=True)
class FieldEvaluator:
    """A field on CAdS_d.  ``l`` tags a zonal S^{d-2} dependence of degree l."""

    func: Callable[[Point], complex]
    l: Optional[int] = None

    def __call__(self, p: Point) -> complex:
        return self.func(p)


def zonal_harmonic(l: int, d: int, theta: float) -> float:
    """Unit-normalized real zonal harmonic on S^{d-2} (depends on the first angle only)."""
    if d == 3:
        # S^1: cos(l phi)
        return math.cos(l * theta) / math.sqrt(2 * math.pi if l == 0 else math.pi)
    lam = (d - 3) / 2
    area_lower = 2 * math.pi ** ((d - 2) / 2) / gamma_fn((d - 2) / 2)  # |S^{d-3}|
    h = math.pi * 2 ** (1 - 2 * lam) * gamma_fn(l + 2 * lam) / (math.factorial(l) * (l + lam) * gamma_fn(lam) ** 2)
    return gegenbauer_c(l, lam, math.cos(theta)) / math.sqrt(h * area_lower)


def _second_diff(g: Callable[[float], complex], h: float) -> complex:
    return (g(h) - 2 * g(0.0) + g(-h)) / (h * h)


def _first_diff(g: Callable[[float], complex], h: float) -> complex:
    return (g(h) - g(-h)) / (2 * h)


def _richardson(op, step):
    coarse = op(step)
    fine = op(step / 2)
    return (4 * fine - coarse) / 3


def _sphere_laplacian(f: FieldEvaluator, p: Point, d: int, h: float) -> complex:
    n = d - 2  # sphere dimension
    angles = p.angles

    def at(ang):
        return f(Point(p.t, p.r, tuple(ang)))

    def lap(level: int, ang: list) -> complex:
        # Laplacian on S^{n-level} acting through angles[level:]
        dim = n - level
        idx = level
        if dim == 1:
            g = lambda s: at(ang[:idx] + [ang[idx] + s] + ang[idx + 1:])
            return _second_diff(g, h)
        th = ang[idx]
        s = math.sin(th)
        if abs(s) < 2 * h:
            raise PoleError("sphere stencil too close to a coordinate pole")
        g = lambda e: at(ang[:idx] + [ang[idx] + e] + ang[idx + 1:])
        polar = _second_diff(g, h) + (dim - 1) * math.cos(th) / s * _first_diff(g, h)
        # remaining angles, evaluated at the unshifted polar angle
        return polar + lap_rest(level + 1, ang) / (s * s)

    def lap_rest(level, ang):
        return lap(level, ang)

    return lap(0, list(angles))


def laplacian_apply(f: FieldEvaluator, p: Point, d: int, a: float = 1.0, step: float = DEFAULT_STEP,
                    richardson: bool = True) -> complex:
    """Box = -a^2 cos^2 r (d_t^2 - d_r^2) + (d-2) a^2 cot r d_r + a^2 cot^2 r Delta_S."""
    if d > 2:
        p.validate(d)
    if p.r - step <= 0 or p.r + step >= math.pi / 2:
        raise ChartBoundaryError("stencil leaves the chart")

    def op(h):
        ftt = _second_diff(lambda s: f(p.shifted(dt=s)), h)
        frr = _second_diff(lambda s: f(p.shifted(dr=s)), h)
        fr = _first_diff(lambda s: f(p.shifted(dr=s)), h)
        if d == 2:
            ang = 0.0
        elif f.l is not None:
            ang = -f.l * (f.l + d - 3) * f(p)
        else:
            ang = _sphere_laplacian(f, p, d, h)
        cot = 1.0 / math.tan(p.r)
        c2 = math.cos(p.r) ** 2
        return a * a * (-c2 * (ftt - frr) + (d - 2) * cot * fr + cot * cot * ang)

    return _richardson(op, step) if richardson else op(step)


def energy_apply(f: FieldEvaluator, p: Point, step: float = DEFAULT_STEP) -> complex:
    """i d_t f."""
    return 1j * _richardson(lambda h: _first_diff(lambda s: f(p.shifted(dt=s)), h), step)


def ladder_apply_d4(f: FieldEvaluator, p: Point, direction: str, axis: int, step: float = DEFAULT_STEP) -> complex:
    """M_k^{+-} = -e^{-+it} sin r (z^k/r) d_t -+ i e^{-+it} R_k for d = 4, angles (theta, phi)."""
    if direction not in ("raise", "lower"):
        raise ValueError("direction must be 'raise' or 'lower'")
    if axis not in (1, 2, 3):
        raise ValueError("axis must be 1, 2 or 3")
    p.validate(4)
    th, ph = p.angles
    if math.sin(th) < 4 * step:
        raise PoleError("theta too close to a pole for the angular stencil")
    if p.r - step <= 0 or p.r + step >= math.pi / 2:
        raise ChartBoundaryError("stencil leaves the chart")
    sgn = 1.0 if direction == "raise" else -1.0
    phase = complex(math.cos(p.t), -sgn * math.sin(p.t))  # e^{-+it}
    r = p.r
    sr, cr = math.sin(r), math.cos(r)
    st, ct = math.sin(th), math.cos(th)
    sp, cp = math.sin(ph), math.cos(ph)
    n = {1: st * cp, 2: st * sp, 3: ct}[axis]

    def op(h):
        ft = _first_diff(lambda s: f(p.shifted(dt=s)), h)
        fr = _first_diff(lambda s: f(p.shifted(dr=s)), h)
        fth = _first_diff(lambda s: f(p.shifted(angle_index=0, dangle=s)), h)
        fph = _first_diff(lambda s: f(p.shifted(angle_index=1, dangle=s)), h)
        if axis == 3:
            R = ct * cr * fr - st / sr * fth
        elif axis == 1:
            R = st * cp * cr * fr + ct * cp / sr * fth - sp / (st * sr) * fph
        else:
            R = st * sp * cr * fr + ct * sp / sr * fth + cp / (st * sr) * fph
        return -phase * sr * n * ft - sgn * 1j * phase * R

    return _richardson(op, step)
