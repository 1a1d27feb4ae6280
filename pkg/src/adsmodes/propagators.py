"""Two-point functions: closed forms, ODE residuals, mode sums and the triplet split.

Mode sums in real time are oscillatory and only converge as distributions;
they are summed with a smooth erfc-log window (``signature="lorentzian"``).
In Euclidean time (t -> -i tau) the same sums converge geometrically.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np
from scipy.special import erfc

from .errors import DomainError, InvalidSpecError
from .geometry import Point
from .modes2 import dirichlet_c2, neumann_c2
from .specfun import digamma, gamma_fn, hyp2f1, jacobi_p, lgamma_fn, rgamma


class Kind(str, Enum):
    DIRICHLET_CLOSED = "dirichlet"
    NEUMANN_CLOSED = "neumann"
    SINGLETON_LIMIT = "singleton_limit"
    DIPOLE = "ff"
    W1 = "w1"
    W2 = "w2"
    GENERAL_Z = "general"


FIXED_E0 = (Kind.SINGLETON_LIMIT, Kind.DIPOLE, Kind.W1, Kind.W2)


@dataclass(frozen=True)
class PropagatorKind:
    kind: Kind
    d: int
    e0: Optional[float] = None
    a: float = 1.0
    c1: float = 1.0  # GeneralZ branch weights
    c2: float = 0.0
    as_printed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.d < 3:
            raise InvalidSpecError("propagators need d >= 3")
        if self.kind in FIXED_E0:
            if self.e0 is not None and abs(self.e0 - (self.d - 3) / 2) > 1e-12:
                raise InvalidSpecError(f"{self.kind.value} forces e0 = (d-3)/2")
            object.__setattr__(self, "e0", (self.d - 3) / 2)
        elif self.e0 is None:
            raise InvalidSpecError(f"{self.kind.value} needs e0")
        if self.kind in (Kind.W2,) and self.d == 3:
            raise InvalidSpecError("w2 needs d >= 4")

    @property
    def ode_coefficient(self) -> float:
        return self.e0 * (self.e0 - self.d + 1)


def dirichlet_prefactor(d, e0, a=1.0):
    return a ** (d - 2) / (2 ** (d - e0) * math.pi ** ((d - 1) / 2)) * gamma_fn(d - 1 - e0) * rgamma((d + 1) / 2 - e0)


def neumann_prefactor(d, e0, a=1.0):
    return a ** (d - 2) / (2 ** (e0 + 1) * math.pi ** ((d - 1) / 2)) * gamma_fn(e0) * rgamma(e0 - (d - 3) / 2)


def singleton_limit_prefactor(d, a=1.0, as_printed=False):
    if as_printed:
        return a ** (d - 2) * gamma_fn((d + 1) / 2) / (2 * math.pi) ** (4 * (d - 1) / 2)
    return a ** (d - 2) * gamma_fn((d + 1) / 2) / (4 * (2 * math.pi) ** ((d - 1) / 2))


def dirichlet_branch(d, e0, z):
    return z ** (e0 - d + 1) * hyp2f1((d - 1 - e0) / 2, (d - e0) / 2, (d + 1) / 2 - e0, 1 / z**2)


def neumann_branch(d, e0, z):
    return z ** (-e0) * hyp2f1(e0 / 2, (e0 + 1) / 2, e0 - (d - 3) / 2, 1 / z**2)


def w1(d, z):
    return z ** (-(d + 1) / 2) * hyp2f1((d + 1) / 4, (d + 3) / 4, 2.0, 1 / z**2)


def w2(d, z, as_printed=False, nmax=4000):
    a, b = (d + 1) / 4, (d + 3) / 4
    u = 1 / z**2
    head = -z ** (-(d + 1) / 2) * math.log(z**2) * hyp2f1(a, b, 2.0, u)
    total = 0.0
    coef = 1.0
    pa, pb, p2, p1 = digamma(a), digamma(b), digamma(2.0), digamma(1.0)
    psa, psb, ps2, ps1 = pa, pb, p2, p1  # psi(a+n) etc., advanced incrementally
    for n in range(1, nmax):
        coef *= (a + n - 1) * (b + n - 1) / ((2 + n - 1) * n) * u
        psa += 1 / (a + n - 1)
        psb += 1 / (b + n - 1)
        ps2 += 1 / (1 + n)
        ps1 += 1 / n
        if as_printed:
            bracket = pa + pb - pa - pb + p2 - ps2 + p1 - ps1
        else:
            bracket = psa + psb - pa - pb + p2 - ps2 + p1 - ps1
        term = coef * bracket
        total += term
        if abs(term) < 1e-17 * max(abs(total), 1e-300) and n > 3:
            break
    tail = z ** (-(d + 1) / 2) * total
    const = z ** (-(d - 3) / 2) * 16 / ((d - 1) * (d - 3))
    return head + tail + const


def dipole_closed(d, z):
    return z ** (-(d - 3) / 2) * hyp2f1((d - 3) / 4, (d - 1) / 4, 1.0, 1 / z**2)


def closed_form(kind: PropagatorKind, z: float) -> float:
    if not z > 1:
        raise DomainError(f"closed forms need Z > 1, got {z}")
    d, e0, a = kind.d, kind.e0, kind.a
    k = kind.kind
    if k is Kind.DIRICHLET_CLOSED:
        return dirichlet_prefactor(d, e0, a) * dirichlet_branch(d, e0, z)
    if k is Kind.NEUMANN_CLOSED:
        return neumann_prefactor(d, e0, a) * neumann_branch(d, e0, z)
    if k is Kind.SINGLETON_LIMIT:
        return singleton_limit_prefactor(d, a, kind.as_printed) * w1(d, z)
    if k is Kind.DIPOLE:
        return dipole_closed(d, z)
    if k is Kind.W1:
        return w1(d, z)
    if k is Kind.W2:
        return w2(d, z, kind.as_printed)
    return kind.c1 * dirichlet_branch(d, e0, z) + kind.c2 * neumann_branch(d, e0, z)


# ---------------------------------------------------------------- ODE residuals


def _fornberg(x0: float, xs: Sequence[float], m: int) -> np.ndarray:
    """Finite-difference weights for derivatives 0..m at x0 on nodes xs."""
    n = len(xs)
    c = np.zeros((n, m + 1))
    c1 = 1.0
    c4 = xs[0] - x0
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = xs[i] - x0
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for kk in range(mn, 0, -1):
                    c[i, kk] = c1 * (kk * c[i - 1, kk - 1] - c5 * c[i - 1, kk]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for kk in range(mn, 0, -1):
                c[j, kk] = (c4 * c[j, kk] - kk * c[j, kk - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c


def fd_derivatives(f, x0: float, h: float, order: int, half_width: int = 6) -> np.ndarray:
    """Central-stencil derivatives 0..order of f at x0 with spacing h."""
    xs = [x0 + j * h for j in range(-half_width, half_width + 1)]
    vals = np.array([f(x) for x in xs])
    w = _fornberg(x0, xs, order)
    return w.T @ vals


def ode_terms(kind: PropagatorKind, z: float, fd_step: float = 2e-2):
    """Terms of (1-Z^2) D'' - d Z D' + mu D."""
    d, mu = kind.d, kind.ode_coefficient
    fd_step = min(fd_step, (z - 1) / 12)
    D = fd_derivatives(lambda x: closed_form(kind, x), z, fd_step, 2)
    return np.array([(1 - z * z) * D[2], -d * z * D[1], mu * D[0]])


def ode_residual(kind: PropagatorKind, z: float, fd_step: float = 2e-2, relative: bool = True) -> float:
    terms = ode_terms(kind, z, fd_step)
    res = abs(terms.sum())
    return res / np.abs(terms).max() if relative else res


def squared_ode_terms(kind: PropagatorKind, z: float, fd_step: float = 5e-2):
    """Terms of L(L D) with L the second-order invariant operator, written through D..D''''."""
    d, mu = kind.d, kind.ode_coefficient
    fd_step = min(fd_step, (z - 1) / 12)
    D = fd_derivatives(lambda x: closed_form(kind, x), z, fd_step, 4)
    one = 1 - z * z
    # L f = one f'' - d z f' + mu f
    lf = one * D[2] - d * z * D[1] + mu * D[0]
    lf1 = -2 * z * D[2] + one * D[3] - d * D[1] - d * z * D[2] + mu * D[1]
    lf2 = one * D[4] - (4 + d) * z * D[3] + (mu - 2 - 2 * d) * D[2]
    parts = [one * one * D[4], one * (-(4 + d) * z) * D[3], one * (mu - 2 - 2 * d) * D[2],
             -d * z * (-2 * z - d * z) * D[2], -d * z * one * D[3], -d * z * (mu - d) * D[1],
             mu * lf]
    return np.array(parts), one * lf2 - d * z * lf1 + mu * lf


def squared_ode_residual(kind: PropagatorKind, z: float, fd_step: float = 5e-2) -> float:
    parts, total = squared_ode_terms(kind, z, fd_step)
    return abs(total) / np.abs(parts).max()


# ---------------------------------------------------------------- mode sums


def erfc_log_window(n_terms: int, p: float = 20.0) -> np.ndarray:
    x = (np.arange(n_terms) + 0.5) / n_terms
    xb = x - 0.5
    xb = np.where(np.abs(xb) < 1e-12, 1e-12, xb)
    q = np.clip(1 - 4 * xb**2, 1e-300, None)
    return 0.5 * erfc(2 * math.sqrt(p) * xb * np.sqrt(-np.log(q) / (4 * xb**2)))


def jacobi_sequence(kmax: int, alpha: float, beta: float, x: float) -> np.ndarray:
    """P_0..P_kmax at x by the three-term recurrence."""
    out = np.empty(kmax + 1)
    for k in range(min(kmax, 1) + 1):
        out[k] = jacobi_p(k, alpha, beta, x)
    ab = alpha + beta
    for n in range(2, kmax + 1):
        c1 = 2.0 * n * (n + ab) * (2.0 * n + ab - 2.0)
        if c1 == 0.0:
            out[n] = jacobi_p(n, alpha, beta, x)
            continue
        c2 = (2.0 * n + ab - 1.0) * (alpha * alpha - beta * beta)
        c3 = (2.0 * n + ab - 1.0) * (2.0 * n + ab) * (2.0 * n + ab - 2.0)
        c4 = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * (2.0 * n + ab)
        out[n] = ((c2 + c3 * x) * out[n - 1] - c4 * out[n - 2]) / c1
    return out


@dataclass(frozen=True)
class ModeSumResult:
    value: float
    imag: float
    tail_estimate: float
    terms: int
    signature: str
    z: float


def _time_factor(omega: np.ndarray, t: float, signature: str) -> np.ndarray:
    if signature == "lorentzian":
        return np.exp(-1j * omega * t)
    if signature == "euclidean":
        return np.exp(-omega * t).astype(complex)
    raise ValueError("signature must be 'lorentzian' or 'euclidean'")


def point_z(x: Point, signature: str = "lorentzian") -> float:
    return (math.cos(x.t) if signature == "lorentzian" else math.cosh(x.t)) / math.cos(x.r)


def mode_sum_terms(d: int, e0: float, family: str, x: Point, nterms: int, signature: str = "lorentzian",
                   a: float = 1.0) -> np.ndarray:
    family = family.lower()
    k = np.arange(nterms)
    alpha = (d - 3) / 2
    if family == "dirichlet":
        c2 = np.array([dirichlet_c2(d, e0, 0, int(kk), a) for kk in k])
        beta, ex = (d - 1) / 2 - e0, d - 1 - e0
    elif family == "neumann":
        c2 = np.array([neumann_c2(d, e0, 0, int(kk), a) for kk in k])
        beta, ex = e0 - (d - 1) / 2, e0
    else:
        raise InvalidSpecError("family must be Dirichlet or Neumann")
    # angular factor Y_0^2 = 1/|S^{d-2}| = Gamma((d+1)/2) / ((d-1) pi^{(d-1)/2})
    pref = gamma_fn((d - 1) / 2 + 1) / ((d - 1) * math.pi ** ((d - 1) / 2))
    f0 = np.exp([lgamma_fn(alpha + 1 + kk) - lgamma_fn(alpha + 1) - math.lgamma(kk + 1) for kk in k])
    pk = jacobi_sequence(nterms - 1, alpha, beta, math.cos(2 * x.r))
    omega = ex + 2 * k
    return pref * math.cos(x.r) ** ex * c2 * f0 * pk * _time_factor(omega, x.t, signature)


def windowed_sum(terms: np.ndarray, signature: str, p: float = 20.0):
    """Sum with a tail estimate.  Euclidean sums are summed directly unless they fail to decay."""
    n = len(terms)
    if signature == "euclidean":
        total = terms.sum()
        tail = float(np.abs(terms[-max(n // 10, 2):]).sum())
        if tail <= 1e-10 * abs(total):
            return total, tail
    total = (terms * erfc_log_window(n, p)).sum()
    n2 = int(0.8 * n)
    alt = (terms[:n2] * erfc_log_window(n2, p)).sum()
    return total, float(abs(total - alt))


def mode_sum(d: int, e0: float, family: str, x: Point, nterms: int = 500, signature: str = "lorentzian",
             a: float = 1.0, tol: float = 1e-6) -> ModeSumResult:
    """Two-point function between x and the origin as an explicit sum over l = 0 modes."""
    if nterms < 10:
        raise ValueError("nterms must be >= 10")
    z = point_z(x, signature)
    if not z > 1:
        raise DomainError(f"mode sum needs Z > 1 (got Z = {z}); coincident or timelike points are excluded")
    terms = mode_sum_terms(d, e0, family, x, nterms, signature, a)
    total, tail = windowed_sum(terms, signature)
    if tail > tol * abs(total):
        warnings.warn(f"mode sum tail estimate {tail:.2e} exceeds tolerance", RuntimeWarning, stacklevel=2)
    return ModeSumResult(float(total.real), float(total.imag), float(tail), nterms, signature, z)


# ---------------------------------------------------------------- triplet decomposition


@dataclass(frozen=True)
class GBDecomposition:
    singleton_term: float
    gauge_series: float
    scalar_series: float
    total: float
    closed: float
    tail_estimate: float
    z: float


def gb_series_terms(d: int, r: float, t: float, nterms: int, signature: str = "lorentzian"):
    """Per-n terms of the gauge and scalar series (complex arrays) and the singleton term."""
    al = (d - 3) / 2
    x = math.cos(2 * r)
    c, s = math.cos(r), math.sin(r)
    n = np.arange(nterms)
    # (al)_{n+1}/(n+1)!
    coef = np.empty(nterms)
    coef[0] = al
    for j in range(1, nterms):
        coef[j] = coef[j - 1] * (al + j) / (j + 1)
    ph = lambda w: _time_factor(np.asarray(w, dtype=float), t, signature)
    pg = jacobi_sequence(nterms - 1, al, 1.0, x)
    ps = jacobi_sequence(nterms - 1, al + 1, 0.0, x)
    pref = 2**al
    single = pref * c**al * complex(ph(np.array([al]))[0])
    gauge = pref * c ** ((d + 1) / 2) * al * coef / (n + 1) * pg * ph((d + 1) / 2 + 2 * n)
    scalar = -pref * c**al * s * s * coef * ps * ph((d + 1) / 2 + 2 * n)
    return single, gauge, scalar


def gb_series_terms_as_printed(d: int, r: float, t: float, nterms: int, signature: str = "lorentzian"):
    """Same split with the printed scalar coefficient (al)_{n+1}/(n!(n+1)^2)."""
    single, gauge, scalar = gb_series_terms(d, r, t, nterms, signature)
    n = np.arange(nterms)
    return single, gauge, scalar / (n + 1)


def ff_direct_terms(d: int, r: float, t: float, nterms: int, signature: str = "lorentzian"):
    """Single-series representation of D_FF with P_n^{((d-5)/2, 0)}."""
    al = (d - 3) / 2
    n = np.arange(nterms)
    coef = np.exp([lgamma_fn(al + j) - lgamma_fn(al) - math.lgamma(j + 1) for j in n]) if al > 0 else (n == 0) * 1.0
    pk = jacobi_sequence(nterms - 1, al - 1, 0.0, math.cos(2 * r))
    return 2**al * math.cos(r) ** al * coef * pk * _time_factor(al + 2 * n, t, signature)


def gb_decomposition(d: int, r: float, t: float, nterms: int = 500, signature: str = "lorentzian",
                     as_printed: bool = False) -> GBDecomposition:
    z = (math.cos(t) if signature == "lorentzian" else math.cosh(t)) / math.cos(r)
    if not z > 1:
        raise DomainError(f"triplet decomposition needs Z > 1 (got {z})")
    builder = gb_series_terms_as_printed if as_printed else gb_series_terms
    single, gauge, scalar = builder(d, r, t, nterms, signature)
    if nterms < 10:
        g, s = gauge.sum(), scalar.sum()
        tail = math.inf
    else:
        g, tg = windowed_sum(gauge, signature)
        s, ts = windowed_sum(scalar, signature)
        tail = tg + ts
    total = single + g + s
    return GBDecomposition(float(single.real), float(g.real), float(s.real), float(total.real),
                           dipole_closed(d, z), float(tail), z)


# ---------------------------------------------------------------- singleton limit


@dataclass(frozen=True)
class LimitReport:
    d: int
    z: float
    eps: tuple
    neumann: tuple
    dirichlet: tuple
    relative_gap: tuple
    monotone: bool
    shape_ratio_spread: float
    fitted_prefactor: float
    fitted_prefactor_estimates: tuple
    fit_stability: float
    resolved_prefactor: float
    printed_prefactor: float


def fit_prefactor_from_mode_sums(d: int, e0: float, points: Sequence[Point], nterms: int = 400,
                                 family: str = "dirichlet") -> float:
    """Least-squares constant c with mode_sum ~ c * w1(Z) over Euclidean points."""
    ys, xs = [], []
    for p in points:
        res = mode_sum(d, e0, family, p, nterms, signature="euclidean")
        ys.append(res.value)
        xs.append(w1(d, res.z))
    xs, ys = np.array(xs), np.array(ys)
    return float(xs @ ys / (xs @ xs))


def neumann_dirichlet_limit_check(d: int, z: float, eps_sequence=(1e-2, 1e-3, 1e-4),
                                  fit_points: Optional[Sequence[Point]] = None) -> LimitReport:
    from .products import neville_zero

    if not z > 1:
        raise DomainError("limit check needs Z > 1")
    e0s = [(d - 3) / 2 + e for e in eps_sequence]
    dn = tuple(closed_form(PropagatorKind(Kind.NEUMANN_CLOSED, d, e), z) for e in e0s)
    dd = tuple(closed_form(PropagatorKind(Kind.DIRICHLET_CLOSED, d, e), z) for e in e0s)
    gaps = tuple(abs(n - m) / abs(m) for n, m in zip(dn, dd))
    monotone = all(gaps[i + 1] < gaps[i] for i in range(len(gaps) - 1))
    zs = np.linspace(1.2, 10, 25)
    sl = PropagatorKind(Kind.SINGLETON_LIMIT, d)
    ratios = np.array([closed_form(sl, zz) / w1(d, zz) for zz in zs])
    spread = float(np.ptp(ratios) / abs(ratios.mean()))
    if fit_points is None:
        fit_points = [Point(tau, rr, ()) for rr, tau in ((0.3, 0.5), (0.6, 0.4), (0.9, 0.7), (0.2, 1.1))]
        fit_points = [Point(p.t, p.r, tuple([math.pi / 2] * (d - 3) + [0.0])) for p in fit_points]
    ests = []
    for e in eps_sequence:
        ests.append(fit_prefactor_from_mode_sums(d, (d - 3) / 2 + e, fit_points))
    extrap = neville_zero(list(eps_sequence), ests)
    fitted = extrap[-1]
    stability = abs(extrap[-1] - extrap[-2]) / abs(extrap[-1])
    return LimitReport(d, z, tuple(eps_sequence), dn, dd, gaps, monotone, spread, fitted, tuple(ests),
                       stability, singleton_limit_prefactor(d), singleton_limit_prefactor(d, as_printed=True))


def branch_fit(d: int, e0: float, samples: Sequence[float], target) -> tuple:
    """Least-squares weights of target(Z) on the two 1/Z^2 branches; returns (c1, c2, residual)."""
    A = np.array([[dirichlet_branch(d, e0, z), neumann_branch(d, e0, z)] for z in samples])
    y = np.array([target(z) for z in samples])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.abs(A @ coef - y).max() / np.abs(y).max())
    return float(coef[0]), float(coef[1]), resid
