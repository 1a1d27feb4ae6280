"""The fourth-order (dipole) radial equation and its Gupta-Bleuler solution space.

Throughout this module ``L`` denotes the second-order radial operator with unit
leading coefficient in ``cos^2 r d^2/dr^2``, i.e. ``cos^2 r`` times the operator
``Q`` of :mod:`adsmodes.modes2`.  The quartic equation is ``L(L f) = 0``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

import numpy as np

from . import jets as J
from .errors import InvalidSpecError
from .geometry import FieldEvaluator, Point, ladder_apply_d4
from .modes2 import Family, ModeSpec, RadialProfile, jacobi_profile, mass_from_e0, q_operator, radial_profile
from .specfun import gegenbauer_c, hyp2f1, hyp2f1_coefficients, power_series, rgamma


# ---------------------------------------------------------------- quartic operator


@dataclass(frozen=True)
class QuarticCoeffs:
    a4: np.ndarray
    a3: np.ndarray
    a2: np.ndarray
    a1: np.ndarray
    a0: np.ndarray

    def as_array(self) -> np.ndarray:
        return np.array([self.a4, self.a3, self.a2, self.a1, self.a0])

    def apply(self, derivs) -> np.ndarray:
        """Sum a_j f^(j) given derivs = [f, f', f'', f''', f'''']."""
        return self.a4 * derivs[4] + self.a3 * derivs[3] + self.a2 * derivs[2] + self.a1 * derivs[1] + self.a0 * derivs[0]


def quartic_coeffs(d: int, lam: float, omega: float, l: int, r, a: float = 1.0,
                   as_printed: bool = True) -> QuarticCoeffs:
    """Coefficient functions of the quartic radial equation.

    ``lam`` is the mass parameter (not divided by a^2).  With ``as_printed=True``
    the bare ``lam`` multiplying ``cot r`` in a1 is used literally; otherwise it is
    read as ``lam / a^2`` like every other occurrence.
    """
    r = np.asarray(r, dtype=float)
    if np.any((r <= 0) | (r >= math.pi / 2)):
        raise InvalidSpecError("quartic coefficients need 0 < r < pi/2")
    L = -l * (l + d - 3)
    la = lam / a**2
    s, c = np.sin(r), np.cos(r)
    cot, csc = c / s, 1 / s
    w2 = omega * omega
    g = d - 2
    a4 = c**4
    a3 = 2 * g * c**2 * cot - 4 * c**3 * s
    a2 = (-2 * g * c**2 - 2 * la * c**2 - 2 * c**4 + 2 * w2 * c**4 - 2 * g * cot**2 + g * g * cot**2
          + 2 * L * c**2 * cot**2 + 2 * c**2 * s**2)
    lam_a1 = lam if as_printed else la
    a1 = (-2 * g * lam_a1 * cot + 2 * g * w2 * c**2 * cot + 2 * g * cot**3 - 4 * L * cot**3 + 2 * g * L * cot**3
          - g * g * cot * csc**2 - 4 * w2 * c**3 * s)
    a0 = (2 * L * cot**2 * csc**2 - 2 * g * w2 * c**2 - 2 * la * w2 * c**2 - 2 * w2 * c**4 - 2 * L * la * cot**2
          + 2 * L * w2 * c**2 * cot**2 + w2 * w2 * c**4 + 4 * L * cot**4 + L * L * cot**4
          - 2 * g * L * cot**2 * csc**2 + 2 * w2 * c**2 * s**2 + la * la)
    return QuarticCoeffs(a4, a3, a2, a1, a0)


def l_operator(fjet: J.Jet, r, d: int, l: int, lam_over_a2: float, omega: float) -> J.Jet:
    """cos^2 r times Q f; returns a jet two orders lower."""
    qf = q_operator(fjet, r, d, l, lam_over_a2, omega)
    rj = J.Jet.variable(np.asarray(r, dtype=float), qf.order)
    c = J.cos(rj)
    return c * c * qf


def composed_coeffs(d: int, lam: float, omega: float, l: int, r, a: float = 1.0) -> QuarticCoeffs:
    """Coefficients of L(L .) read off exactly by acting on (r - r0)^j / j! with Taylor arithmetic."""
    r = np.asarray(r, dtype=float)
    la = lam / a**2
    out = []
    for j in range(5):
        c = np.zeros((5,) + r.shape)
        c[j] = 1.0
        res = l_operator(l_operator(J.Jet(c), r, d, l, la, omega), r, d, l, la, omega)
        out.append(res.value / math.factorial(j))
    a0, a1, a2, a3, a4 = out
    return QuarticCoeffs(a4, a3, a2, a1, a0)


@dataclass(frozen=True)
class CoefficientComparison:
    worst: dict
    tolerance: float

    @property
    def mismatched(self) -> list:
        return sorted(k for k, v in self.worst.items() if v > self.tolerance)

    @property
    def agrees(self) -> bool:
        return not self.mismatched


def compare_quartic(d: int, lam: float, omega: float, l: int, r, a: float = 1.0, as_printed: bool = True,
                    tol: float = 1e-6) -> CoefficientComparison:
    """Printed vs composed coefficients, relative to each coefficient's largest magnitude on the grid."""
    pr = quartic_coeffs(d, lam, omega, l, r, a, as_printed).as_array()
    ref = composed_coeffs(d, lam, omega, l, r, a).as_array()
    worst = {}
    for name, p, q in zip(("a4", "a3", "a2", "a1", "a0"), pr, ref):
        scale = max(np.abs(q).max(), np.abs(p).max(), 1e-300)
        worst[name] = float(np.abs(p - q).max() / scale)
    return CoefficientComparison(worst, tol)


def quartic_residual(profile: RadialProfile, r, d: int, l: int, lam: float, omega: float, a: float = 1.0,
                     relative: bool = True):
    """|L(L f)| on a grid, relative to the largest single term a_j f^(j)."""
    r = np.asarray(r, dtype=float)
    cf = quartic_coeffs(d, lam, omega, l, r, a, as_printed=False)
    D = profile.derivatives(r, 4)
    terms = np.array([cf.a4 * D[4], cf.a3 * D[3], cf.a2 * D[2], cf.a1 * D[1], cf.a0 * D[0]])
    res = np.abs(terms.sum(axis=0))
    if relative:
        res = res / np.maximum(np.abs(terms).max(axis=0), 1e-300)
    return res


def l_ratio(profile_num: RadialProfile, profile_den: RadialProfile, r, d: int, l: int, lam: float,
            omega: float) -> np.ndarray:
    """(L profile_num) / profile_den on a grid."""
    r = np.asarray(r, dtype=float)
    fj = profile_num(J.Jet.variable(r, 2))
    return l_operator(fj, r, d, l, lam, omega).value / profile_den(r)


def singleton_lambda(d: int) -> float:
    """Mass parameter of the dipole equation, a^2 E0(E0 - d + 1) at E0 = (d-3)/2 (a = 1)."""
    return mass_from_e0((d - 3) / 2, d, 1.0)


def indicial_roots_origin(d: int, l: int) -> list:
    return sorted([l, l + 2, 3 - d - l, 5 - d - l])


def indicial_roots_boundary(d: int, lam_over_a2: float) -> list:
    h = (d - 1) / 2
    disc = math.sqrt(h * h + lam_over_a2)
    return sorted([h - disc, h - disc, h + disc, h + disc])


def indicial_polynomial_origin(d: int, lam: float, omega: float, l: int, r_small: float = 1e-7):
    """Coefficients (highest first) of sum_j A_j alpha(alpha-1)...(alpha-j+1), A_j = lim r^(4-j) a_j."""
    cf = quartic_coeffs(d, lam, omega, l, np.array([r_small]), as_printed=False).as_array()[:, 0]
    poly = np.zeros(5)
    for j, aj in zip((4, 3, 2, 1, 0), cf):
        lead = aj * r_small ** (4 - j)
        falling = np.poly1d([1.0])
        for m in range(j):
            falling = falling * np.poly1d([1.0, -m])
        poly = poly + lead * np.pad(falling.coeffs, (5 - len(falling.coeffs), 0))
    return poly


# ---------------------------------------------------------------- second fundamental solution


def psi1_params(d: int, e0: float, l: int, omega: float):
    return (l + e0 + omega) / 2, (l + e0 - omega) / 2, l + (d - 1) / 2


def psi2_coefficients(d: int, e0: float, l: int, omega: float, nmax: int) -> np.ndarray:
    """h_n with psi2 = sin^(l+2) cos^E0 sum h_n sin^(2n) r and L psi2 = 4C psi1, h_0 = 1.

    psi1 = sin^l cos^E0 F(A, B; C; sin^2 r).  Order matching gives
    (n+1)(n+C) h_n = C G_n + (n+A)(n+B) h_(n-1) with G_n the partial sums of the
    Taylor coefficients of F.
    """
    if nmax < 2:
        raise ValueError("nmax must be >= 2")
    A, B, C = psi1_params(d, e0, l, omega)
    g = hyp2f1_coefficients(A, B, C, nmax)
    h = np.empty(nmax)
    G = 0.0
    prev = 0.0
    for n in range(nmax):
        G += g[n]
        h[n] = (C * G + prev * (n + A) * (n + B)) / ((n + 1) * (n + C)) if n else 1.0
        prev = h[n]
    return h


def psi2_constant(d: int, l: int) -> float:
    """The constant c in L psi2 = c psi1 fixed by the leading-order match (h_0 = 1)."""
    return 4 * (l + (d - 1) / 2)


def printed_c1(d, e0, l, omega):
    return ((e0 + l + 1) ** 2 + 2 * l + d - omega**2) / (2 * (2 * l + d + 1))


def printed_r0(d, e0, l):
    return -(16 * e0**2 + 8 * e0 * (6 * l + d + 11) + 12 * l**2 - 12 * l * (d - 9) - 5 * (d - 1) ** 2 + 128) / 3


def printed_c2(d, e0, l, omega):
    num = (omega**2 - (e0 + l + 2) ** 2 - 2 * l - d - 3) ** 2 + printed_r0(d, e0, l)
    return num / (8 * (2 * l + d + 1) * (2 * l + d + 3))


def psi1_profile(d: int, e0: float, l: int, omega: float, nmax: int = 4000) -> RadialProfile:
    A, B, C = psi1_params(d, e0, l, omega)
    coeffs = hyp2f1_coefficients(A, B, C, nmax)

    def ev(r):
        s, c = J.sincos(r)
        return J.power(s, l) * J.power(c, e0) * power_series(coeffs, s * s)

    return RadialProfile(ev, float(l), float(e0), 1.0, f"psi1(d={d}, E0={e0:g}, l={l}, w={omega:g})",
                         dict(omega=omega))


def psi2_series(d: int, e0: float, l: int, omega: float, nmax: int = 400, r_check: Optional[float] = None,
                tol: float = 1e-10) -> RadialProfile:
    h = psi2_coefficients(d, e0, l, omega, nmax)
    if r_check is not None:
        x = math.sin(r_check) ** 2
        tail = abs(h[-1]) * x ** (nmax - 1) / max(1 - x, 1e-300)
        total = abs(power_series(list(h), x))
        if tail > tol * total:
            warnings.warn(f"psi2 series tail {tail:.2e} exceeds tolerance at r={r_check}", RuntimeWarning,
                          stacklevel=2)
    coeffs = list(h)

    def ev(r):
        s, c = J.sincos(r)
        return J.power(s, l + 2) * J.power(c, e0) * power_series(coeffs, s * s)

    return RadialProfile(ev, float(l + 2), float(e0), 1.0, f"psi2(d={d}, E0={e0:g}, l={l}, w={omega:g})",
                         dict(omega=omega, coefficients=h))


def psi2_singleton(d: int, l: int, omega: float, constrained: bool = False, nmax: int = 4000) -> RadialProfile:
    """Hypergeometric second solution at E0 = (d-3)/2; ``constrained`` divides by Gamma(w - (d-3)/2 - l)."""
    p = l / 2 + (d + 1) / 4
    a_, b_, c_ = p + omega / 2, p - omega / 2, l + (d + 1) / 2
    norm = rgamma(omega - (d - 3) / 2 - l) if constrained else 1.0
    coeffs = hyp2f1_coefficients(a_, b_, c_, nmax)
    cp = (d - 3) / 2

    def ev(r):
        if norm == 0.0:
            return r * 0.0
        s, c = J.sincos(r)
        if isinstance(r, J.Jet):
            series = power_series(coeffs, s * s)
        else:
            series = np.vectorize(lambda x: hyp2f1(a_, b_, c_, x))(s * s)
        return norm * J.power(s, l + 2) * J.power(c, cp) * series

    return RadialProfile(ev, float(l + 2), cp, norm, f"psi2_singleton(d={d}, l={l}, w={omega:g})",
                         dict(omega=omega, constrained=constrained))


# ---------------------------------------------------------------- triplet members


def scalar_frequency(d: int, l: int, k: int) -> float:
    return (d + 1) / 2 + l + 2 * k


def scalar_mode(d: int, l: int, k: int) -> RadialProfile:
    if k < 0:
        raise InvalidSpecError("k must be >= 0")
    return jacobi_profile(1.0, l + 2, (d - 3) / 2, k, l + (d - 1) / 2, 0.0, f"scalar(d={d}, l={l}, k={k})",
                          omega=scalar_frequency(d, l, k))


def _psi0_closed(d: int, l: int, r):
    """Closed form in log (odd d) or arctanh (even d); r may be an array or a jet."""
    s, c = J.sincos(r)
    if d % 2:
        m = l + (d - 1) // 2
        bracket = J.log(c * c)
        for k in range(1, m):
            bracket = bracket + J.power(s, 2 * k) / k
        return -m * J.power(s, l + 2) * J.power(c, (d - 3) / 2) / J.power(s, 2 * m) * bracket
    m = l + d // 2
    bracket = J.atanh(s)
    for k in range(1, m):
        bracket = bracket - J.power(s, 2 * k - 1) / (2 * k - 1)
    return (2 * m - 1) * J.power(s, l + 2) * J.power(c, (d - 3) / 2) / J.power(s, 2 * m - 1) * bracket


def _psi0_series(d: int, l: int, r, nterms: int = 64):
    a = l + (d - 1) / 2
    coeffs = [a / (n + a) for n in range(nterms)]
    s, c = J.sincos(r)
    return J.power(s, l + 2) * J.power(c, (d - 3) / 2) * power_series(coeffs, s * s)


PSI0_SWITCH = math.asin(math.sqrt(0.5))  # series for sin^2 r <= 1/2, closed form beyond


def psi0_mode(d: int, l: int) -> RadialProfile:
    """(l + (d-1)/2) sin^(l+2) cos^((d-3)/2) Phi(sin^2 r, 1, l + (d-1)/2): unit leading coefficient."""
    if d < 3:
        raise InvalidSpecError("psi0 needs d >= 3")

    def ev(r):
        if isinstance(r, J.Jet):
            mask = np.asarray(r.value) <= PSI0_SWITCH
            ser = _psi0_series(d, l, r)
            if np.all(mask):
                return ser
            with np.errstate(all="ignore"):
                clo = _psi0_closed(d, l, r)
            return J.Jet(np.where(mask, ser.c, clo.c))
        r = np.asarray(r, dtype=float)
        if np.any(r >= math.pi / 2):
            raise InvalidSpecError("psi0 diverges at r = pi/2")
        with np.errstate(all="ignore"):
            clo = _psi0_closed(d, l, r)
        return np.where(r <= PSI0_SWITCH, _psi0_series(d, l, r), clo)

    return RadialProfile(ev, float(l + 2), (d - 3) / 2, l + (d - 1) / 2, f"psi0(d={d}, l={l})",
                         dict(omega=(d - 3) / 2 + l))


class DipoleFamily(str, Enum):
    SCALAR = "scalar"
    PSI_ZERO = "psi0"
    SINGLETON = "singleton"
    GAUGE = "gauge"


@dataclass(frozen=True)
class DipoleModeSpec:
    family: DipoleFamily
    d: int
    l: int = 0
    k: int = 0
    a: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "family", DipoleFamily(self.family))
        if self.d < 3:
            raise InvalidSpecError("dipole modes need d >= 3")
        if self.l < 0 or self.k < 0:
            raise InvalidSpecError("l and k must be non-negative")
        if self.family in (DipoleFamily.SINGLETON, DipoleFamily.PSI_ZERO) and self.k != 0:
            raise InvalidSpecError(f"{self.family.value} requires k = 0")

    @property
    def frequency(self) -> float:
        if self.family in (DipoleFamily.SCALAR, DipoleFamily.GAUGE):
            return (self.d + 1) / 2 + self.l + 2 * self.k
        return (self.d - 3) / 2 + self.l

    def profile(self) -> RadialProfile:
        f = self.family
        if f is DipoleFamily.SCALAR:
            return scalar_mode(self.d, self.l, self.k)
        if f is DipoleFamily.PSI_ZERO:
            return psi0_mode(self.d, self.l)
        fam = Family.SINGLETON if f is DipoleFamily.SINGLETON else Family.GAUGE
        return radial_profile(ModeSpec(fam, self.d, l=self.l, k=self.k, a=self.a))


def triplet_space(d: int, l: int, kmax: int) -> List[DipoleModeSpec]:
    """Scalar, singleton and gauge members; the Psi0 set is excluded."""
    if kmax < 0:
        raise InvalidSpecError("kmax must be >= 0")
    out = [DipoleModeSpec(DipoleFamily.SCALAR, d, l, k) for k in range(kmax + 1)]
    out.append(DipoleModeSpec(DipoleFamily.SINGLETON, d, l, 0))
    out.extend(DipoleModeSpec(DipoleFamily.GAUGE, d, l, k) for k in range(kmax + 1))
    return out


def member_residual(spec: DipoleModeSpec, r) -> np.ndarray:
    return quartic_residual(spec.profile(), r, spec.d, spec.l, singleton_lambda(spec.d), spec.frequency)


def boundary_decay_exponent(profile: RadialProfile, eps=(1e-3, 1e-4)) -> float:
    """Log-slope of |f| against cos r as r -> pi/2."""
    r1, r2 = (math.pi / 2 - e for e in eps)
    f1, f2 = abs(profile(r1)), abs(profile(r2))
    return math.log(f1 / f2) / math.log(math.cos(r1) / math.cos(r2))


def passes_vanishing_flux(spec: DipoleModeSpec, tol: float = 1e-3) -> bool:
    return boundary_decay_exponent(spec.profile()) >= (spec.d + 1) / 2 - tol


# ---------------------------------------------------------------- fields and ladder probes


def plain_zonal(l: int, d: int, theta: float) -> float:
    """Unnormalized zonal harmonic: Legendre P_l(cos theta) for d = 4."""
    if d == 3:
        return math.cos(l * theta)
    return float(gegenbauer_c(l, (d - 3) / 2, math.cos(theta))) / float(gegenbauer_c(l, (d - 3) / 2, 1.0))


def field(profile: RadialProfile, omega: float, l: int, d: int, scale: complex = 1.0) -> FieldEvaluator:
    """F = scale * f(r) e^{-i omega t} P_l(cos theta) as a field on CAdS_d."""

    def fn(p: Point) -> complex:
        ph = complex(math.cos(omega * p.t), -math.sin(omega * p.t))
        th = p.angles[0] if p.angles else 0.0
        return scale * profile(p.r) * ph * plain_zonal(l, d, th)

    return FieldEvaluator(fn)


def dipole_field(spec: DipoleModeSpec) -> FieldEvaluator:
    return field(spec.profile(), spec.frequency, spec.l, spec.d)


@dataclass(frozen=True)
class ProbeReport:
    positive_component: float
    negative_component: float
    noise_floor: float
    points: int

    @property
    def significant(self) -> bool:
        return self.positive_component > 10 * self.noise_floor


def frequency_components(values_t0, values_t1):
    """Split G(t) = A e^{+i w t} + B e^{-i w t} from samples at t = 0 and t = pi/(2w)."""
    g0, g1 = np.asarray(values_t0), np.asarray(values_t1)
    a_plus = (g0 - 1j * g1) / 2
    b_minus = (g0 + 1j * g1) / 2
    return a_plus, b_minus


def negative_energy_probe(f: FieldEvaluator, omega_out: float = 0.5, points=None, step: float = 1e-3,
                          direction: str = "lower", axis: int = 3) -> ProbeReport:
    """Project M_axis^direction f onto e^{+-i omega_out t} by two-time sampling (d = 4)."""
    if points is None:
        points = [(0.3, 0.7, 0.2), (0.5, 1.1, 0.9), (0.8, 0.6, 2.0), (1.1, 1.4, 3.0), (0.2, 2.2, 4.5)]
    t1 = math.pi / (2 * omega_out)
    g0, g1, noise = [], [], 0.0
    for r, th, ph in points:
        for t, store in ((0.0, g0), (t1, g1)):
            p = Point(t, r, (th, ph))
            v = ladder_apply_d4(f, p, direction, axis, step)
            v2 = ladder_apply_d4(f, p, direction, axis, 2 * step)
            noise = max(noise, abs(v - v2))
            store.append(v)
    a, b = frequency_components(g0, g1)
    return ProbeReport(float(np.abs(a).max()), float(np.abs(b).max()), float(noise) + 1e-15, len(points))


def ladder_pointwise(lhs: FieldEvaluator, rhs: FieldEvaluator, points, direction: str, axis: int = 3,
                     step: float = 1e-3) -> float:
    """max |M f - g| / max |g| over the points."""
    diffs, mags = [], []
    for p in points:
        v = ladder_apply_d4(lhs, p, direction, axis, step)
        w = rhs(p)
        diffs.append(abs(v - w))
        mags.append(abs(w))
    return max(diffs) / max(max(mags), 1e-300)


def sum_fields(*terms) -> FieldEvaluator:
    return FieldEvaluator(lambda p: sum(f(p) for f in terms))
