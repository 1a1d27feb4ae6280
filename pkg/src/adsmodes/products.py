"""Klein-Gordon inner products, Gram matrices and the regularized singleton product."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import roots_jacobi

from .errors import DivergenceError, ExtrapolationError, InvalidSpecError
from .modes2 import (Family, ModeSpec, RadialProfile, TWO_D, frequency, jacobi_profile, neumann_c2,
                     radial_profile)

SCHEMES = ("gauss_jacobi", "gauss_legendre", "tanh_sinh")


@dataclass(frozen=True)
class QuadratureConfig:
    nodes: int = 64
    endpoint_offset: float = 1e-6
    scheme: str = "gauss_jacobi"

    def __post_init__(self):
        if self.nodes < 8:
            raise ValueError("nodes must be >= 8")
        if not (0 < self.endpoint_offset < 0.1):
            raise ValueError("endpoint_offset must lie in (0, 0.1)")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")


DEFAULT_QUADRATURE = QuadratureConfig()


def _measure_exponents(d: int):
    # (tan r)^{d-2} = sin^{d-2} cos^{-(d-2)}
    return d - 2, -(d - 2)


def radial_integral(p1: RadialProfile, p2: RadialProfile, d: int, a: float = 1.0,
                    q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """int_0^{pi/2} (tan r / a)^{d-2} f1 f2 dr."""
    ms, mc = _measure_exponents(d)
    A = ms + p1.exponent_at_origin + p2.exponent_at_origin
    B = mc + p1.exponent_at_boundary + p2.exponent_at_boundary
    if B <= -1:
        raise DivergenceError(f"integrand behaves like cos^{B:g} r at the boundary; the product diverges")
    if A <= -1:
        raise DivergenceError(f"integrand behaves like sin^{A:g} r at the origin; the product diverges")
    if p1.is_zero or p2.is_zero:
        return 0.0
    scale = a ** (-(d - 2))
    if q.scheme == "gauss_jacobi":
        return scale * _gauss_jacobi(p1, p2, A, B, q.nodes, d)
    f = lambda r: np.tan(r) ** (d - 2) * p1(r) * p2(r)
    if q.scheme == "gauss_legendre":
        x, w = np.polynomial.legendre.leggauss(q.nodes)
        lo, hi = 0.0, math.pi / 2 - q.endpoint_offset
        r = lo + (hi - lo) * (x + 1) / 2
        return scale * float(np.sum(w * f(r)) * (hi - lo) / 2)
    return scale * tanh_sinh(f, 0.0, math.pi / 2, q.nodes, q.endpoint_offset)


def _gauss_jacobi(p1, p2, A, B, nodes, d):
    al, be = (A - 1) / 2, (B - 1) / 2
    n = nodes + int(p1.meta.get("k", 0)) + int(p2.meta.get("k", 0))
    x, w = roots_jacobi(n, al, be)
    r = np.arccos(x) / 2
    s2, c2 = (1 - x) / 2, (1 + x) / 2
    # smooth remainder G(x) = (tan^{d-2} f1 f2) / (sin^A cos^B)
    g = (p1(r) / (s2 ** (p1.exponent_at_origin / 2) * c2 ** (p1.exponent_at_boundary / 2))
         * p2(r) / (s2 ** (p2.exponent_at_origin / 2) * c2 ** (p2.exponent_at_boundary / 2)))
    return float(2.0 ** (-(A + B) / 2 - 1) * np.sum(w * g))


def tanh_sinh(f, lo: float, hi: float, nodes: int = 64, endpoint_offset: float = 1e-12) -> float:
    """Double-exponential quadrature on (lo, hi); nodes closer than endpoint_offset are dropped."""
    tmax = 3.2
    h = 2 * tmax / nodes
    t = np.arange(-nodes // 2, nodes // 2 + 1) * h
    u = 0.5 * math.pi * np.sinh(t)
    half = (hi - lo) / 2
    # distance to the nearer endpoint, computed without cancellation
    dist = half * np.exp(-np.abs(u)) / np.cosh(u)
    x = np.where(t < 0, lo + dist, hi - dist)
    w = half * 0.5 * math.pi * np.cosh(t) / np.cosh(u) ** 2 * h
    keep = dist > endpoint_offset
    return float(np.sum(w[keep] * f(x[keep])))


def kg_inner(m1: ModeSpec, m2: ModeSpec, q: QuadratureConfig = DEFAULT_QUADRATURE, t0: float = 0.0) -> complex:
    """(F1, F2) = (w1 + w2) e^{i(w1 - w2) t0} int (tan r/a)^{d-2} f1 f2 dr."""
    if m1.d != m2.d or m1.a != m2.a:
        raise InvalidSpecError("inner product needs equal d and a")
    if m1.l != m2.l:
        return 0j
    w1, w2 = frequency(m1), frequency(m2)
    integral = radial_integral(radial_profile(m1), radial_profile(m2), m1.d, m1.a, q)
    return (w1 + w2) * complex(math.cos((w1 - w2) * t0), math.sin((w1 - w2) * t0)) * integral


def gram_matrix(family, d: int, e0: float, l: int, kmax: int, q: QuadratureConfig = DEFAULT_QUADRATURE,
                a: float = 1.0) -> np.ndarray:
    family = Family(family)
    if family not in (Family.DIRICHLET, Family.NEUMANN) + TWO_D:
        raise InvalidSpecError("gram_matrix supports Dirichlet, Neumann and the two-dimensional families")
    specs = [ModeSpec(family, d, e0, l, k, a) for k in range(kmax + 1)]
    profiles = [radial_profile(s) for s in specs]
    w = [frequency(s) for s in specs]
    g = np.empty((kmax + 1, kmax + 1))
    for i in range(kmax + 1):
        for j in range(i, kmax + 1):
            val = (w[i] + w[j]) * radial_integral(profiles[i], profiles[j], d, a, q)
            g[i, j] = g[j, i] = val
    return g


# ---------------------------------------------------------------- regularized product


def _continued_profile(spec: ModeSpec, eps: float):
    """Profile and frequency at E0 = (d-3)/2 + eps."""
    d, l = spec.d, spec.l
    e0 = (d - 3) / 2 + eps
    alpha = l + (d - 3) / 2
    if spec.family is Family.SINGLETON:
        prof = jacobi_profile(1.0, l, e0, 0, alpha, e0 - (d - 1) / 2, "singleton_continued")
        return prof, e0 + l
    if spec.family is Family.GAUGE:
        k = spec.k + 1
        c = math.sqrt(neumann_c2(d, e0, l, k, spec.a))
        prof = jacobi_profile(c, l, e0, k, alpha, e0 - (d - 1) / 2, "gauge_continued")
        return prof, e0 + l + 2 * k
    raise InvalidSpecError("regularized_inner needs Singleton or Gauge modes")


def regularized_integrand(m1: ModeSpec, m2: ModeSpec, eps: float, q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """eps * (w1 + w2) * int (tan r/a)^{d-2} f1 f2 dr at E0 = (d-3)/2 + eps."""
    if m1.l != m2.l:
        return 0.0
    p1, w1 = _continued_profile(m1, eps)
    p2, w2 = _continued_profile(m2, eps)
    return eps * (w1 + w2) * radial_integral(p1, p2, m1.d, m1.a, q)


def neville_zero(xs: Sequence[float], ys: Sequence[float]) -> list:
    """Polynomial extrapolants to x = 0 using 1, 2, ... points (last entry uses all)."""
    xs = list(xs)
    table = list(ys)
    out = [table[-1]]
    n = len(xs)
    for level in range(1, n):
        table = [(xs[i + level] * table[i] - xs[i] * table[i + 1]) / (xs[i + level] - xs[i])
                 for i in range(n - level)]
        out.append(table[-1])
    return out


def regularized_inner(m1: ModeSpec, m2: ModeSpec, eps_sequence=(1e-2, 1e-3, 1e-4),
                      q: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    for m in (m1, m2):
        if m.family not in (Family.SINGLETON, Family.GAUGE):
            raise InvalidSpecError("regularized_inner needs Singleton or Gauge modes")
    eps = list(eps_sequence)
    if any(e <= 0 for e in eps) or any(eps[i + 1] >= eps[i] for i in range(len(eps) - 1)):
        raise ValueError("eps_sequence must be positive and decreasing")
    vals = [regularized_integrand(m1, m2, e, q) for e in eps]
    ests = neville_zero(eps, vals)
    if len(ests) >= 3:
        scale = max(1.0, abs(ests[-1]))
        if abs(ests[-1] - ests[-2]) > 1e-2 * scale:
            raise ExtrapolationError(f"eps extrapolation unstable: successive estimates {ests[-2]} and {ests[-1]}")
    return ests[-1]


def singleton_norm_formula(d: int, l: int, a: float = 1.0) -> float:
    """Closed form of the regularized singleton norm with the 1/a^{d-2} measure."""
    return a ** (2 - d) * (l + (d - 3) / 2)
