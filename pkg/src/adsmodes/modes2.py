"""Second-order scalar modes on CAdS_d.

Radial profiles are built from ``sin``/``cos`` powers times Jacobi or
Gegenbauer polynomials.  Every evaluator accepts floats, numpy arrays or
:class:`~adsmodes.jets.Jet` objects, which is how exact derivatives for the
residual checks are obtained.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Mapping, Optional

import numpy as np

from . import jets as J
from .errors import (DegenerateParameterError, InvalidSpecError, NormalizationPoleError,
                     ParameterPoleError)
from .specfun import (INTEGER_TOL, gamma_fn, gamma_ratio, gegenbauer_c, hyp2f1,
                      hyp2f1_log_coefficient, jacobi_p, lgamma_fn, rgamma)


class Family(str, Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"
    MASSLESS_HIGH = "massless_high"
    MASSLESS_LOW = "massless_low"
    DEGENERATE = "degenerate"
    SINGLETON = "singleton"
    GAUGE = "gauge"
    DD2 = "dd2"
    DN2 = "dn2"
    ND2 = "nd2"
    NN2 = "nn2"


TWO_D = (Family.DD2, Family.DN2, Family.ND2, Family.NN2)


def _forced_e0(family: Family, d: int) -> Optional[float]:
    if family is Family.MASSLESS_HIGH:
        return d / 2
    if family is Family.MASSLESS_LOW:
        return d / 2 - 1
    if family in (Family.SINGLETON, Family.GAUGE):
        return (d - 3) / 2
    return None


@dataclass(frozen=True)
class ModeSpec:
    family: Family
    d: int
    e0: Optional[float] = None
    l: int = 0
    k: int = 0
    a: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        forced = _forced_e0(self.family, self.d)
        if self.e0 is None:
            if forced is None:
                raise InvalidSpecError(f"{self.family.value} needs an explicit e0")
            object.__setattr__(self, "e0", forced)
        object.__setattr__(self, "e0", float(self.e0))
        self.validate()

    def validate(self) -> "ModeSpec":
        f, d, e0 = self.family, self.d, self.e0
        if self.l < 0 or self.k < 0:
            raise InvalidSpecError("l and k must be non-negative")
        if not self.a > 0:
            raise InvalidSpecError("a must be positive")
        if f in TWO_D:
            if d != 2:
                raise InvalidSpecError("two-dimensional families force d = 2")
            if self.l != 0:
                raise InvalidSpecError("two-dimensional families have no angular index (l = 0)")
            bounds = {Family.DD2: ("<", 1.5), Family.ND2: ("<", 1.0), Family.DN2: (">", -0.5), Family.NN2: (">", 0.0)}
            op, lim = bounds[f]
            if (op == "<" and not e0 < lim) or (op == ">" and not e0 > lim):
                raise InvalidSpecError(f"{f.value} requires e0 {op} {lim}")
            return self
        if d < 3:
            raise InvalidSpecError("d must be >= 3 outside the two-dimensional families")
        forced = _forced_e0(f, d)
        if forced is not None and abs(e0 - forced) > 1e-12:
            raise InvalidSpecError(f"{f.value} forces e0 = {forced}")
        if f is Family.DIRICHLET and not e0 < (d + 1) / 2:
            raise InvalidSpecError("Dirichlet requires e0 < (d+1)/2")
        if f is Family.NEUMANN and not e0 > (d - 3) / 2:
            raise InvalidSpecError("e0 must exceed (d-3)/2 for the Neumann family")
        if f is Family.SINGLETON and self.k != 0:
            raise InvalidSpecError("Singleton requires k = 0")
        if f is Family.DEGENERATE:
            m = e0 - (d - 1) / 2
            if abs(m - round(m)) > INTEGER_TOL:
                raise InvalidSpecError("Degenerate requires e0 = (d-1)/2 + m with integer m")
        return self

    @property
    def m(self) -> int:
        return int(round(self.e0 - (self.d - 1) / 2))


# ---------------------------------------------------------------- mass relations


def mass_from_e0(e0: float, d: int, a: float = 1.0) -> float:
    return a * a * e0 * (e0 - d + 1)


def conformal_mass(e0: float, d: int, a: float = 1.0) -> float:
    return a * a * (e0 - d / 2) * (e0 - d / 2 + 1)


def bf_bound(d: int, a: float = 1.0) -> float:
    return -((d - 1) ** 2) * a * a / 4


def e0_from_mass(m0sq: float, d: int, a: float = 1.0):
    from .errors import BelowBoundError

    disc = (d - 1) ** 2 / 4 + m0sq / (a * a)
    if disc < 0:
        if disc > -1e-14:
            disc = 0.0
        else:
            raise BelowBoundError(f"m0^2/a^2 = {m0sq / a / a} lies below the bound {-(d - 1) ** 2 / 4}")
    root = math.sqrt(disc)
    return ((d - 1) / 2 + root, (d - 1) / 2 - root)


# ---------------------------------------------------------------- profiles


@dataclass(frozen=True)
class RadialProfile:
    """Radial function f(r); ``evaluator`` accepts floats, arrays and jets."""

    evaluator: Callable
    exponent_at_origin: float
    exponent_at_boundary: float
    normalization: float = 1.0
    label: str = ""
    meta: Mapping = field(default_factory=dict)

    def __call__(self, r):
        if isinstance(r, J.Jet):
            return self.evaluator(r)
        arr = np.asarray(r, dtype=float)
        out = self.evaluator(arr)
        return float(out) if arr.ndim == 0 else np.asarray(out)

    def derivatives(self, r, order: int = 2) -> np.ndarray:
        """Array of f, f', ..., f^(order) at r (exact Taylor arithmetic)."""
        jet = self.evaluator(J.Jet.variable(np.asarray(r, dtype=float), order))
        return jet.derivative_values()

    @property
    def is_zero(self) -> bool:
        return self.normalization == 0.0


def _trig_power(base, p):
    if p == 0:
        return 1.0
    if isinstance(p, int) or float(p).is_integer():
        p = int(p)
    return J.power(base, p)


def jacobi_profile(norm: float, sin_power: float, cos_power: float, k: int, alpha: float, beta: float,
                   label: str, boundary_exponent: Optional[float] = None, **meta) -> RadialProfile:
    def ev(r):
        s, c = J.sincos(r)
        x = J.cos(2.0 * r)
        return norm * _trig_power(s, sin_power) * _trig_power(c, cos_power) * jacobi_p(k, alpha, beta, x)

    info = dict(sin_power=sin_power, cos_power=cos_power, k=k, alpha=alpha, beta=beta)
    info.update(meta)
    return RadialProfile(ev, float(sin_power),
                         float(cos_power if boundary_exponent is None else boundary_exponent),
                         norm, label, info)


def _checked_lgamma(x: float, what: str) -> float:
    if x <= 0 and x == math.floor(x):
        raise NormalizationPoleError(f"normalization Gamma argument {what}={x} hits a pole")
    if x < 0:
        raise NormalizationPoleError(f"normalization Gamma argument {what}={x} is negative")
    return lgamma_fn(x)


def dirichlet_c2(d, e0, l, k, a=1.0) -> float:
    lg = (_checked_lgamma(d - 1 - e0 + l + k, "d-1-E0+l+k") + math.lgamma(k + 1)
          - _checked_lgamma((d - 1) / 2 + l + k, "(d-1)/2+l+k")
          - _checked_lgamma((d + 1) / 2 - e0 + k, "(d+1)/2-E0+k"))
    return a ** (d - 2) * math.exp(lg)


def neumann_c2(d, e0, l, k, a=1.0) -> float:
    lg = (_checked_lgamma(e0 + l + k, "E0+l+k") + math.lgamma(k + 1)
          - _checked_lgamma((d - 1) / 2 + l + k, "(d-1)/2+l+k")
          - _checked_lgamma(e0 - (d - 3) / 2 + k, "E0-(d-3)/2+k"))
    return a ** (d - 2) * math.exp(lg)


def massless_c2(d, l, k, high: bool, a=1.0) -> float:
    lam = l + d / 2 - 1
    # (lam)_{k+1/2} = Gamma(lam+k+1/2)/Gamma(lam)
    if high:
        lg = (math.lgamma(k + 1.5) + math.lgamma(k + 1) - (math.lgamma(lam + k + 1) - math.lgamma(lam))
              - (math.lgamma(lam + k + 0.5) - math.lgamma(lam)))
    else:
        lg = (math.lgamma(k + 0.5) + math.lgamma(k + 1) - (math.lgamma(lam + k) - math.lgamma(lam))
              - (math.lgamma(lam + k + 0.5) - math.lgamma(lam)))
    return a ** (d - 2) * math.exp(lg) / math.pi


def massless_c2_as_printed(d, l, k, high: bool, a=1.0) -> float:
    lam_p = l + d / 2 + 1
    lam = l + d / 2 - 1
    num = math.gamma(k + 1.5 if high else k + 0.5) * math.factorial(k)
    den = math.pi * math.exp(math.lgamma(lam_p + k + 1) - math.lgamma(lam_p)) * math.exp(
        math.lgamma(lam + k + 0.5) - math.lgamma(lam))
    return a ** (d - 2) * num / den


def two_d_c2(family: Family, e0: float, k: int, as_printed: bool = False) -> float:
    if family is Family.DD2:
        args = ([k - e0 + 2, k + 1], [k + 1.5, (k - e0 + 0.5) if as_printed else (k - e0 + 1.5)])
    elif family is Family.DN2:
        args = ([k + e0 + 1, k + 1], [k + 1.5, k + e0 + 0.5])
    elif family is Family.ND2:
        args = ([k - e0 + 1, k + 1], [k + 0.5, k - e0 + 1.5])
    else:
        args = ([k + e0, k + 1], [k + 0.5, k + e0 + 0.5])
    for v in args[0] + args[1]:
        if v <= 0 and v == math.floor(v):
            raise NormalizationPoleError(f"normalization Gamma argument {v} hits a pole")
    val = gamma_ratio(*args)
    if val <= 0:
        raise NormalizationPoleError("normalization constant is not positive")
    return val


def frequency(spec: ModeSpec) -> float:
    f, d, e0, l, k = spec.family, spec.d, spec.e0, spec.l, spec.k
    if f is Family.DIRICHLET:
        return d - 1 - e0 + l + 2 * k
    if f is Family.NEUMANN:
        return e0 + l + 2 * k
    if f is Family.MASSLESS_HIGH:
        return d / 2 + l + 2 * k
    if f is Family.MASSLESS_LOW:
        return d / 2 - 1 + l + 2 * k
    if f is Family.DEGENERATE:
        return (e0 if spec.m >= 0 else d - 1 - e0) + l + 2 * k
    if f is Family.SINGLETON:
        return (d - 3) / 2 + l
    if f is Family.GAUGE:
        return (d + 1) / 2 + l + 2 * k
    if f is Family.DD2:
        return 2 - e0 + 2 * k
    if f is Family.DN2:
        return e0 + 1 + 2 * k
    if f is Family.ND2:
        return 1 - e0 + 2 * k
    if f is Family.NN2:
        return e0 + 2 * k
    raise InvalidSpecError(f"unknown family {f}")


def radial_profile(spec: ModeSpec) -> RadialProfile:
    f, d, e0, l, k, a = spec.family, spec.d, spec.e0, spec.l, spec.k, spec.a
    alpha = l + (d - 3) / 2
    label = f"{f.value}(d={d}, E0={e0:g}, l={l}, k={k})"
    if f is Family.DIRICHLET:
        c = math.sqrt(dirichlet_c2(d, e0, l, k, a))
        return jacobi_profile(c, l, d - 1 - e0, k, alpha, (d - 1) / 2 - e0, label)
    if f is Family.NEUMANN:
        c = math.sqrt(neumann_c2(d, e0, l, k, a))
        return jacobi_profile(c, l, e0, k, alpha, e0 - (d - 1) / 2, label)
    if f in (Family.MASSLESS_HIGH, Family.MASSLESS_LOW):
        high = f is Family.MASSLESS_HIGH
        c = math.sqrt(massless_c2(d, l, k, high, a))
        deg = 2 * k + 1 if high else 2 * k
        lam = l + d / 2 - 1

        def ev(r):
            s, cs = J.sincos(r)
            return c * _trig_power(s, l) * _trig_power(cs, d / 2 - 1) * gegenbauer_c(deg, lam, cs)

        return RadialProfile(ev, float(l), d / 2 if high else d / 2 - 1, c, label,
                             dict(gegenbauer_degree=deg, gegenbauer_alpha=lam))
    if f is Family.DEGENERATE:
        return degenerate_profile(d, spec.m, l, k, a)
    if f is Family.SINGLETON:
        return jacobi_profile(1.0, l, (d - 3) / 2, 0, alpha, 0.0, label)
    if f is Family.GAUGE:
        return gauge_profile(d, l, k, a)
    # two-dimensional families
    c = math.sqrt(two_d_c2(f, e0, k))
    if f is Family.DD2:
        return jacobi_profile(c, 1, 1 - e0, k, 0.5, 0.5 - e0, label)
    if f is Family.DN2:
        return jacobi_profile(c, 1, e0, k, 0.5, e0 - 0.5, label)
    if f is Family.ND2:
        return jacobi_profile(c, 0, 1 - e0, k, -0.5, 0.5 - e0, label)
    return jacobi_profile(c, 0, e0, k, -0.5, e0 - 0.5, label)


def gauge_profile(d: int, l: int, k: int, a: float = 1.0) -> RadialProfile:
    c = a ** ((d - 2) / 2) * math.sqrt(((d - 1) / 2 + l + k) / (k + 1))
    return jacobi_profile(c, l, (d + 1) / 2, k, l + (d - 3) / 2, 1.0, f"gauge(d={d}, l={l}, k={k})")


def singleton_profile(d: int, l: int) -> RadialProfile:
    return radial_profile(ModeSpec(Family.SINGLETON, d, l=l))


def degenerate_profile(d: int, m: int, l: int, k: int, a: float = 1.0) -> RadialProfile:
    """Log-free mode at E0 = (d-1)/2 + m with quantized frequency."""
    e0 = (d - 1) / 2 + m
    alpha = l + (d - 3) / 2
    if m >= 0:
        omega = e0 + l + 2 * k
        c = math.sqrt(neumann_c2(d, e0, l, k, a))
        q, beta = e0, float(m)
    else:
        omega = d - 1 - e0 + l + 2 * k
        c = math.sqrt(dirichlet_c2(d, e0, l, k, a))
        q, beta = d - 1 - e0, float(-m)
    coeff = log_coefficient(d, m, l, omega)
    if abs(coeff) > 1e-12:
        raise AssertionError(f"log coefficient {coeff} does not vanish at quantized omega")
    return jacobi_profile(c, l, q, k, alpha, beta, f"degenerate(d={d}, m={m}, l={l}, k={k})",
                          omega=omega, log_coefficient=coeff)


def log_coefficient(d: int, m: int, l: int, omega: float) -> float:
    """Coefficient of the logarithm in the generic solution at E0 = (d-1)/2 + m.

    The generic solution sin^l cos^{E0} 2F1(A, B; C; sin^2 r) has
    C - A - B = (d-1)/2 - E0 = -m, so its 1 - x expansion carries a log term.
    """
    e0 = (d - 1) / 2 + m
    A = (l + e0 + omega) / 2
    B = (l + e0 - omega) / 2
    C = l + (d - 1) / 2
    return hyp2f1_log_coefficient(A, B, C)


def neumann_singleton_limit(d: int, l: int, k: int, a: float = 1.0) -> RadialProfile:
    """E0 -> (d-3)/2 limit of the normalized Neumann modes."""
    alpha = l + (d - 3) / 2
    label = f"neumann_limit(d={d}, l={l}, k={k})"
    if k == 0:
        return RadialProfile(lambda r: 0.0 * r, float(l), (d - 3) / 2, 0.0, label, dict(zero=True))
    c = math.sqrt(a ** (d - 2) * k / (alpha + k))
    return jacobi_profile(c, l, (d - 3) / 2, k, alpha, -1.0, label, boundary_exponent=(d + 1) / 2)


# ---------------------------------------------------------------- generic (non-quantized) solution


def generic_solution(d: int, e0: float, l: int, omega: float) -> Callable[[float], float]:
    A, B, C = (l + e0 + omega) / 2, (l + e0 - omega) / 2, l + (d - 1) / 2

    def f(r):
        return math.sin(r) ** l * math.cos(r) ** e0 * hyp2f1(A, B, C, math.sin(r) ** 2)

    return f


def boundary_coeffs(d: int, e0: float, l: int, omega: float):
    s = e0 - (d - 1) / 2
    if abs(s - round(s)) < INTEGER_TOL:
        raise DegenerateParameterError("E0 - (d-1)/2 is an integer; use degenerate_profile")
    g = gamma_fn(l + (d - 1) / 2)
    c1 = g * gamma_fn((d - 1) / 2 - e0) * rgamma((l + d - 1 - e0 - omega) / 2) * rgamma((l + d - 1 - e0 + omega) / 2)
    c2 = g * gamma_fn(e0 - (d - 1) / 2) * rgamma((l + e0 + omega) / 2) * rgamma((l + e0 - omega) / 2)
    return c1, c2


def connection_branches(d: int, e0: float, l: int, omega: float):
    """The two boundary branches multiplying C1 and C2."""

    def b1(r):
        return math.sin(r) ** l * math.cos(r) ** e0 * hyp2f1((l + e0 + omega) / 2, (l + e0 - omega) / 2,
                                                             e0 - (d - 3) / 2, math.cos(r) ** 2)

    def b2(r):
        return math.sin(r) ** l * math.cos(r) ** (d - 1 - e0) * hyp2f1(
            (l - e0 - omega + d - 1) / 2, (l - e0 + omega + d - 1) / 2, (d + 1) / 2 - e0, math.cos(r) ** 2)

    return b1, b2


# ---------------------------------------------------------------- residual


def q_operator(fjet: "J.Jet", r, d: int, l: int, lam_over_a2: float, omega: float):
    """Apply Q (the radial operator) to a jet of order n, returning a jet of order n-2."""
    n = fjet.order - 2
    rj = r if isinstance(r, J.Jet) else J.Jet.variable(np.asarray(r, dtype=float), n)
    rj = rj.truncate(n)
    s, c = J.sincos(rj)
    s2 = J.sin(2.0 * rj)
    d1 = fjet.diff()
    d2 = d1.diff()
    bracket = l * (l + d - 3) / (s * s) + lam_over_a2 / (c * c) - omega * omega
    return d2 + (2.0 * (d - 2)) * d1.truncate(n) / s2 - bracket * fjet.truncate(n)


def q_terms(profile: RadialProfile, r, d: int, l: int, lam_over_a2: float, omega: float):
    """The three terms of Q f at r (arrays)."""
    r = np.asarray(r, dtype=float)
    f0, f1, f2 = profile.derivatives(r, 2)
    t1 = f2
    t2 = 2.0 * (d - 2) / np.sin(2 * r) * f1
    t3 = -(l * (l + d - 3) / np.sin(r) ** 2 + lam_over_a2 / np.cos(r) ** 2 - omega * omega) * f0
    return t1, t2, t3


def residual_q(spec: ModeSpec, r, omega: Optional[float] = None, relative: bool = True):
    """|Q f| at r, relative to the largest individual term by default."""
    prof = radial_profile(spec)
    w = frequency(spec) if omega is None else omega
    lam = mass_from_e0(spec.e0, spec.d, 1.0)
    return profile_residual(prof, r, spec.d, spec.l, lam, w, relative)


def profile_residual(prof: RadialProfile, r, d, l, lam_over_a2, omega, relative=True):
    t1, t2, t3 = q_terms(prof, r, d, l, lam_over_a2, omega)
    res = np.abs(t1 + t2 + t3)
    if relative:
        scale = np.maximum(np.maximum(np.abs(t1), np.abs(t2)), np.abs(t3))
        res = np.where(scale > 0, res / np.where(scale > 0, scale, 1.0), res)
    return float(res) if res.ndim == 0 else res


def chebyshev_grid(n: int = 64, lo: float = 0.0, hi: float = math.pi / 2) -> np.ndarray:
    """Chebyshev-Gauss points mapped to (lo, hi); endpoints excluded."""
    j = np.arange(n)
    x = np.cos((2 * j + 1) * math.pi / (2 * n))
    return np.sort(lo + (hi - lo) * (x + 1) / 2)
