"""Special functions: Gamma family, Gauss 2F1, Jacobi/Gegenbauer, Lerch Phi.

Everything here is scalar real arithmetic.  The polynomial families and
:func:`power_series` are written with plain ``+ - * /`` so they also accept
numpy arrays and :class:`~adsmodes.jets.Jet` arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateParameterError, DomainError, NonConvergenceError, ParameterPoleError


@dataclass(frozen=True)
class SeriesConfig:
    max_terms: int = 20000
    rel_tol: float = 1e-15
    abs_tol: float = 1e-300

    def __post_init__(self):
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")


DEFAULT_SERIES = SeriesConfig()

# Degenerate-parameter detection threshold for c - a - b.
INTEGER_TOL = 1e-9

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _is_nonpos_int(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def sinpi(x: float) -> float:
    """sin(pi x) with exact argument reduction."""
    y = math.fmod(x, 2.0)
    if y > 1.0:
        y -= 2.0
    elif y <= -1.0:
        y += 2.0
    sign = 1.0
    if y < 0:
        y, sign = -y, -1.0
    if y == 0.0 or y == 1.0:
        return 0.0
    if y <= 0.25:
        return sign * math.sin(math.pi * y)
    if y <= 0.75:
        return sign * math.cos(math.pi * (0.5 - y))
    return sign * math.sin(math.pi * (1.0 - y))


def _lanczos_sum(x: float) -> float:
    # x >= 0.5, argument already shifted by one
    s = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        s += _LANCZOS[i] / (x + i)
    return s


def gamma_fn(x: float) -> float:
    x = float(x)
    if _is_nonpos_int(x):
        raise ParameterPoleError(f"Gamma has a pole at {x}")
    if x < 0.5:
        return math.pi / (sinpi(x) * gamma_fn(1.0 - x))
    if x == math.floor(x) and x <= 30:
        return float(math.factorial(int(x) - 1))
    y = x - 1.0
    t = y + _LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * t ** (y + 0.5) * math.exp(-t) * _lanczos_sum(y)


def lgamma_fn(x: float) -> float:
    """log|Gamma(x)|."""
    x = float(x)
    if _is_nonpos_int(x):
        raise ParameterPoleError(f"Gamma has a pole at {x}")
    if x < 0.5:
        return math.log(math.pi / abs(sinpi(x))) - lgamma_fn(1.0 - x)
    y = x - 1.0
    t = y + _LANCZOS_G + 0.5
    return 0.5 * math.log(2 * math.pi) + (y + 0.5) * math.log(t) - t + math.log(_lanczos_sum(y))


def gamma_sign(x: float) -> float:
    if _is_nonpos_int(x):
        raise ParameterPoleError(f"Gamma has a pole at {x}")
    if x > 0:
        return 1.0
    return 1.0 if math.floor(x) % 2 == 0 else -1.0


def rgamma(x: float) -> float:
    """1/Gamma(x), zero at the poles."""
    if _is_nonpos_int(x):
        return 0.0
    if x > 170:
        return gamma_sign(x) * math.exp(-lgamma_fn(x))
    if x < 0.5:
        return sinpi(x) * gamma_fn(1.0 - x) / math.pi
    return 1.0 / gamma_fn(x)


def gamma_ratio(num, den) -> float:
    """prod Gamma(num) / prod Gamma(den) via log-Gamma; zero if a denominator hits a pole."""
    if any(_is_nonpos_int(v) for v in den):
        return 0.0
    for v in num:
        if _is_nonpos_int(v):
            raise ParameterPoleError(f"Gamma pole at {v} in numerator")
    lg = sum(lgamma_fn(v) for v in num) - sum(lgamma_fn(v) for v in den)
    sign = 1.0
    for v in list(num) + list(den):
        sign *= gamma_sign(v)
    return sign * math.exp(lg)


_DIGAMMA_ASYM = (
    1.0 / 12,
    -1.0 / 120,
    1.0 / 252,
    -1.0 / 240,
    1.0 / 132,
    -691.0 / 32760,
    1.0 / 12,
)


def digamma(x: float) -> float:
    x = float(x)
    if _is_nonpos_int(x):
        raise ParameterPoleError(f"digamma has a pole at {x}")
    if x < 0.5:
        # psi(1-x) - psi(x) = pi cot(pi x)
        return digamma(1.0 - x) - math.pi * _cospi(x) / sinpi(x)
    acc = 0.0
    while x < 10.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    tail = 0.0
    p = inv2
    for c in _DIGAMMA_ASYM:
        tail += c * p
        p *= inv2
    return acc + math.log(x) - 0.5 / x - tail


def _cospi(x: float) -> float:
    return sinpi(x + 0.5)


def pochhammer(a, n: int):
    if n < 0:
        raise ValueError("n must be non-negative")
    out = 1.0
    for j in range(n):
        out *= a + j
    return out


# ---------------------------------------------------------------- 2F1


def _polynomial_degree(a: float, b: float):
    degs = [int(-v) for v in (a, b) if _is_nonpos_int(v)]
    return min(degs) if degs else None


def _gauss_series(a, b, c, z, cfg: SeriesConfig, nmax=None):
    term = 1.0
    total = 1.0
    n = 0
    limit = cfg.max_terms if nmax is None else nmax
    while n < limit:
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        n += 1
        if nmax is None and term == 0.0:
            return total
        if nmax is None and abs(term) <= max(cfg.rel_tol * abs(total), cfg.abs_tol):
            # geometric tail guard: the ratio tends to z
            ratio = abs((a + n) * (b + n) / ((c + n) * (n + 1)) * z)
            if ratio < 1 and abs(term) * ratio / (1 - ratio) <= max(cfg.rel_tol * abs(total), cfg.abs_tol) * 4:
                return total
    if nmax is not None:
        return total
    raise NonConvergenceError(f"2F1({a},{b};{c};{z}) series did not converge in {cfg.max_terms} terms")


def _log_series(coef_a, coef_b, denom_shift, psi_shift_a, psi_shift_b, w, log_w, cfg):
    """Sum_n (A)_n (B)_n / (n! (m+n)!) [psi(a'+n)+psi(b'+n)-psi(n+1)-psi(n+m+1)+log w] w^n.

    coef_a/coef_b are A, B; denom_shift is m; psi_shift_a/b are a', b'.
    """
    m = denom_shift
    A, B = coef_a, coef_b
    pa = digamma(psi_shift_a)
    pb = digamma(psi_shift_b)
    p1 = digamma(1.0)
    pm = digamma(m + 1.0)
    pref = 1.0 / math.factorial(m)
    total = 0.0
    n = 0
    small = 0
    while n < cfg.max_terms:
        term = pref * (pa + pb - p1 - pm + log_w)
        total += term
        if abs(term) <= max(cfg.rel_tol * abs(total), cfg.abs_tol):
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
        pref *= (A + n) * (B + n) / ((n + 1) * (m + n + 1)) * w
        pa += 1.0 / (psi_shift_a + n)
        pb += 1.0 / (psi_shift_b + n)
        p1 += 1.0 / (n + 1)
        pm += 1.0 / (m + n + 1)
        n += 1
        if pref == 0.0:
            return total
    raise NonConvergenceError("logarithmic 2F1 series did not converge")


def hyp2f1(a: float, b: float, c: float, z: float, cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    """Gauss hypergeometric function for real arguments, z <= 1.

    z <= 1/2 (after Pfaff for z < 0): direct series.  1/2 < z < 1: the
    1 - z connection formula, or its logarithmic limits when c - a - b is
    an integer.
    """
    a, b, c, z = float(a), float(b), float(c), float(z)
    if _is_nonpos_int(c):
        raise ParameterPoleError(f"2F1 lower parameter c={c} is a non-positive integer")
    if z > 1.0:
        raise DomainError(f"2F1 real evaluation requires z <= 1, got {z}")
    if z == 0.0:
        return 1.0
    deg = _polynomial_degree(a, b)
    if deg is not None:
        return _gauss_series(a, b, c, z, cfg, nmax=deg)
    s = c - a - b
    if z == 1.0:
        if s <= 0:
            raise DomainError("2F1 at z=1 requires c-a-b > 0")
        return gamma_ratio([c, s], [c - a, c - b])
    if z < 0.0:
        # Pfaff: (1-z)^{-a} F(a, c-b; c; z/(z-1))
        return (1.0 - z) ** (-a) * hyp2f1(a, c - b, c, z / (z - 1.0), cfg)
    if z <= 0.5:
        return _gauss_series(a, b, c, z, cfg)
    m = round(s)
    w = 1.0 - z
    if abs(s - m) >= INTEGER_TOL:
        return _connection(a, b, c, z, cfg)
    m = int(m)
    if m == 0:
        return _degenerate_equal(a, b, w, cfg)
    if m > 0:
        return _degenerate_plus(a, b, m, w, cfg)
    return _degenerate_minus(a, b, -m, w, cfg)


def hyp2f1_series(a: float, b: float, c: float, z: float, cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    """Direct Gauss series, |z| < 1, with no transformation applied."""
    if _is_nonpos_int(c):
        raise ParameterPoleError(f"2F1 lower parameter c={c} is a non-positive integer")
    if not -1.0 < z < 1.0:
        raise DomainError("the direct series needs |z| < 1")
    return _gauss_series(float(a), float(b), float(c), float(z), cfg)


def hyp2f1_connection(a: float, b: float, c: float, z: float, cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    """The 1 - z connection formula for 0 < z < 1 and non-integer c - a - b."""
    s = c - a - b
    if abs(s - round(s)) < INTEGER_TOL:
        raise DegenerateParameterError("c - a - b is an integer; the connection formula is singular")
    if not 0.0 < z < 1.0:
        raise DomainError("the connection formula is used for 0 < z < 1")
    return _connection(float(a), float(b), float(c), float(z), cfg)


def _connection(a, b, c, z, cfg):
    w = 1.0 - z
    s = c - a - b
    g1 = gamma_fn(c) * gamma_fn(s) * rgamma(c - a) * rgamma(c - b)
    g2 = gamma_fn(c) * gamma_fn(-s) * rgamma(a) * rgamma(b)
    t1 = g1 * _gauss_series(a, b, 1.0 - s, w, cfg) if g1 != 0.0 else 0.0
    t2 = g2 * w**s * _gauss_series(c - a, c - b, 1.0 + s, w, cfg) if g2 != 0.0 else 0.0
    return t1 + t2


def _degenerate_equal(a, b, w, cfg):
    # c = a + b
    pref = gamma_fn(a + b) * rgamma(a) * rgamma(b)
    series = _log_series(a, b, 0, a, b, w, math.log(w), cfg)
    return -pref * series


def _degenerate_plus(a, b, m, w, cfg):
    # c = a + b + m
    c = a + b + m
    t1 = 0.0
    pref1 = gamma_fn(m) * gamma_fn(c) * rgamma(a + m) * rgamma(b + m)
    term = 1.0
    for n in range(m):
        t1 += term
        term *= (a + n) * (b + n) / ((n + 1) * (1 - m + n)) * w if n + 1 < m else 0.0
    t1 *= pref1
    pref2 = gamma_fn(c) * rgamma(a) * rgamma(b) * (-w) ** m
    t2 = 0.0
    if pref2 != 0.0:
        t2 = pref2 * _log_series(a + m, b + m, m, a + m, b + m, w, math.log(w), cfg)
    return t1 - t2


def _degenerate_minus(a, b, m, w, cfg):
    # c = a + b - m
    c = a + b - m
    pref1 = gamma_fn(m) * gamma_fn(c) * rgamma(a) * rgamma(b) * w ** (-m)
    t1 = 0.0
    term = 1.0
    for n in range(m):
        t1 += term
        term *= (a - m + n) * (b - m + n) / ((n + 1) * (1 - m + n)) * w if n + 1 < m else 0.0
    t1 *= pref1
    pref2 = (-1.0) ** m * gamma_fn(c) * rgamma(a - m) * rgamma(b - m)
    t2 = 0.0
    if pref2 != 0.0:
        t2 = pref2 * _log_series(a, b, m, a, b, w, math.log(w), cfg)
    return t1 - t2


def hyp2f1_log_coefficient(a: float, b: float, c: float) -> float:
    """Coefficient multiplying log(1-z) (times the leading power) in the integer case.

    For c = a+b+m (m >= 0) the log term is -(-1)^m Gamma(c)/(Gamma(a)Gamma(b)) (1-z)^m log(1-z)/m!;
    for c = a+b-m it is -(-1)^m Gamma(c)/(Gamma(a-m)Gamma(b-m)) log(1-z)/m!.
    Returns the multiplier of (1-z)^{max(m,0)} log(1-z) at leading order.
    """
    s = c - a - b
    m = round(s)
    if abs(s - m) >= INTEGER_TOL:
        return 0.0
    m = int(m)
    if m >= 0:
        return -((-1.0) ** m) * gamma_fn(c) * rgamma(a) * rgamma(b) / math.factorial(m)
    mm = -m
    return -((-1.0) ** mm) * gamma_fn(c) * rgamma(a - mm) * rgamma(b - mm) / math.factorial(mm)


def hyp2f1_coefficients(a, b, c, n):
    """Taylor coefficients (a)_j (b)_j / ((c)_j j!) for j < n."""
    out = [1.0]
    for j in range(n - 1):
        out.append(out[-1] * (a + j) * (b + j) / ((c + j) * (j + 1)))
    return out


def power_series(coeffs, x):
    """Horner evaluation of sum_j coeffs[j] x^j; x may be an array or a jet."""
    acc = coeffs[-1] * 1.0
    for cf in reversed(coeffs[:-1]):
        acc = acc * x + cf
    return acc


# ---------------------------------------------------------------- polynomials


def _jacobi_explicit(k, alpha, beta, x):
    # sum_s C(k+alpha, k-s) C(k+beta, s) ((x-1)/2)^s ((x+1)/2)^(k-s)
    xm = (x - 1.0) * 0.5
    xp = (x + 1.0) * 0.5
    total = 0.0
    for s in range(k + 1):
        c1 = pochhammer(alpha + s + 1.0, k - s) / math.factorial(k - s)
        c2 = pochhammer(beta + k - s + 1.0, s) / math.factorial(s)
        total = total + c1 * c2 * (xm**s) * (xp ** (k - s))
    return total


def jacobi_p(k: int, alpha: float, beta: float, x):
    if k < 0:
        raise ValueError("degree must be non-negative")
    if k == 0:
        return x * 0.0 + 1.0
    p0 = x * 0.0 + 1.0
    p1 = (alpha - beta) * 0.5 + (alpha + beta + 2.0) * 0.5 * x
    ab = alpha + beta
    for n in range(2, k + 1):
        c1 = 2.0 * n * (n + ab) * (2.0 * n + ab - 2.0)
        if c1 == 0.0 or (2.0 * n + ab - 2.0) == 0.0:
            return _jacobi_explicit(k, alpha, beta, x)
        c2 = (2.0 * n + ab - 1.0) * (alpha * alpha - beta * beta)
        c3 = (2.0 * n + ab - 1.0) * (2.0 * n + ab) * (2.0 * n + ab - 2.0)
        c4 = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * (2.0 * n + ab)
        p0, p1 = p1, ((c2 + c3 * x) * p1 - c4 * p0) / c1
    return p1


def gegenbauer_c(n: int, alpha: float, x):
    if n < 0:
        raise ValueError("degree must be non-negative")
    c0 = x * 0.0 + 1.0
    if n == 0:
        return c0
    c1 = 2.0 * alpha * x
    for j in range(2, n + 1):
        c0, c1 = c1, (2.0 * x * (j + alpha - 1.0) * c1 - (j + 2.0 * alpha - 2.0) * c0) / j
    return c1


def lerch_phi(z: float, s: float, a: float, cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    if not (0.0 <= z < 1.0):
        raise DomainError("lerch_phi requires 0 <= z < 1")
    if a <= 0:
        raise DomainError("lerch_phi requires a > 0")
    total = 0.0
    zn = 1.0
    for n in range(cfg.max_terms):
        term = zn / (n + a) ** s
        total += term
        zn *= z
        if zn == 0.0:
            return total
        nxt = n + 1 + a
        # monotone tail bound for s >= 0; for s < 0 the ratio bound still holds asymptotically
        ratio = z * max(1.0, ((nxt) / (nxt + 1)) ** s)
        tail = zn / nxt**s / (1.0 - ratio) if ratio < 1 else math.inf
        if tail <= max(cfg.rel_tol * abs(total), cfg.abs_tol):
            return total
    raise NonConvergenceError(f"lerch_phi({z},{s},{a}) did not converge in {cfg.max_terms} terms")
