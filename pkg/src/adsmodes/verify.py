"""Verification suites and the machine-readable report they produce."""

from __future__ import annotations

import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from importlib import resources
from typing import Callable, Dict, List

import numpy as np

from . import dipole4 as D4
from . import propagators as P
from . import spectral as S
from .errors import AdsModesError, DomainError
from .geometry import Point
from .modes2 import (Family, ModeSpec, bf_bound, boundary_coeffs, chebyshev_grid, connection_branches,
                     e0_from_mass, gauge_profile, generic_solution, log_coefficient, mass_from_e0, massless_c2,
                     massless_c2_as_printed, neumann_singleton_limit, radial_profile, residual_q, two_d_c2)
from .products import (QuadratureConfig, gram_matrix, kg_inner, radial_integral, regularized_inner,
                       singleton_norm_formula)
from .specfun import (digamma, gamma_fn, gegenbauer_c, hyp2f1, hyp2f1_connection, hyp2f1_series, jacobi_p,
                      lerch_phi, pochhammer, SeriesConfig)

SCHEMA_VERSION = "1.0.0"
SUITES = ("specfun", "modes", "products", "propagators", "dipole", "spectral")
EULER_GAMMA = 0.57721566490153286


@dataclass(frozen=True)
class Case:
    name: str
    status: str
    residual: float
    tolerance: float
    notes: str = ""


@dataclass(frozen=True)
class Erratum:
    key: str
    equation_label: str
    as_printed: str
    resolved_form: str
    evidence: str


@dataclass
class VerificationReport:
    suite: str
    cases: List[Case]
    errata: List[Erratum]
    tol_scale: float = 1.0
    schema_version: str = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.cases)

    def to_dict(self) -> dict:
        cases = sorted(self.cases, key=lambda c: c.name)
        fails = sum(c.status == "fail" for c in cases)
        warns = sum(c.status == "warn" for c in cases)
        return {
            "schema_version": self.schema_version,
            "suite": self.suite,
            "tol_scale": self.tol_scale,
            "summary": {"total": len(cases), "passed": len(cases) - fails - warns, "failed": fails,
                        "warnings": warns, "ok": fails == 0},
            "cases": [asdict(c) for c in cases],
            "errata": [asdict(e) for e in sorted(self.errata, key=lambda e: e.key)],
        }


class Checker:
    """Collects cases; ``scale`` multiplies every upper-bound tolerance."""

    def __init__(self, scale: float = 1.0):
        self.scale = scale
        self.cases: List[Case] = []

    def upper(self, name: str, residual: float, tol: float, notes: str = "") -> Case:
        residual = _finite(residual)
        t = tol * self.scale
        case = Case(name, "pass" if residual <= t else "fail", residual, t, notes)
        self.cases.append(case)
        return case

    def lower(self, name: str, value: float, bound: float, notes: str = "") -> Case:
        """Passes when value exceeds bound (used where a quantity must be visibly nonzero)."""
        value = _finite(value)
        note = ("lower bound; " + notes).strip("; ")
        case = Case(name, "pass" if value > bound else "fail", value, bound, note)
        self.cases.append(case)
        return case

    def flag(self, name: str, ok: bool, notes: str = "") -> Case:
        case = Case(name, "pass" if ok else "fail", 0.0 if ok else 1.0, 0.0, notes)
        self.cases.append(case)
        return case

    def record(self, name: str, value: float, notes: str = "") -> Case:
        case = Case(name, "warn", _finite(value), 0.0, ("recorded value; " + notes).strip("; "))
        self.cases.append(case)
        return case


def _finite(x) -> float:
    x = float(x)
    return x if math.isfinite(x) else 1.7976931348623157e308


def _raises(fn, exc=AdsModesError) -> bool:
    try:
        fn()
    except exc:
        return True
    return False


def _rel(a, b) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


# ---------------------------------------------------------------- grids shared with the acceptance tests


def e0_samples(d: int, family: str) -> tuple:
    """Three E0 samples in each regime the family admits."""
    lo, hi = (d - 3) / 2, (d + 1) / 2
    window = (lo + 0.1, (lo + hi) / 2 + 0.13, hi - 0.1)
    if family == "dirichlet":
        return (lo - 0.7, lo - 0.3, lo - 0.05) + window
    return window + (hi + 0.2, hi + 1.3, hi + 3.7)


def residual_specs(ds=(3, 4, 5, 7), lmax: int = 3, kmax: int = 4) -> List[ModeSpec]:
    specs = []
    for d in ds:
        for l in range(lmax + 1):
            for k in range(kmax + 1):
                for fam in ("dirichlet", "neumann"):
                    specs += [ModeSpec(fam, d, e0, l, k) for e0 in e0_samples(d, fam)]
                specs += [ModeSpec("massless_high", d, None, l, k), ModeSpec("massless_low", d, None, l, k)]
                specs += [ModeSpec("degenerate", d, (d - 1) / 2 + m, l, k) for m in (-1, 0, 1)]
                specs.append(ModeSpec("gauge", d, None, l, k))
            specs.append(ModeSpec("singleton", d, None, l, 0))
    return specs


def mode_sum_combos():
    """(d, E0, family, point) combinations for the mode-sum oracle."""
    def pt(d, t, r):
        return Point(t, r, tuple([math.pi / 2] * (d - 3) + [0.0]))

    return [(4, 2.0, "dirichlet", pt(4, 0.3, 0.5)), (4, 1.2, "neumann", pt(4, 0.0, 0.3)),
            (4, 3.0, "neumann", pt(4, 0.2, 0.7)), (5, 3.0, "neumann", pt(5, 0.2, 0.4)),
            (5, 1.5, "dirichlet", pt(5, 0.1, 0.6)), (5, 2.4, "neumann", pt(5, 0.4, 0.9)),
            (7, 2.5, "dirichlet", pt(7, 0.1, 0.6)), (7, 4.2, "neumann", pt(7, 0.45, 0.6)),
            (7, 3.3, "dirichlet", pt(7, 0.3, 0.8))]


TRIPLET_POINTS = ((0.4, 0.2), (0.3, 0.1), (0.7, 0.5), (1.0, 0.3), (0.2, 0.0))


# ---------------------------------------------------------------- specfun


def _random_params(rng, n, zlo, zhi, gap=0.05):
    out = []
    while len(out) < n:
        a, b, c = rng.uniform(-2.5, 3.0), rng.uniform(-2.5, 3.0), rng.uniform(0.3, 4.5)
        s = c - a - b
        if abs(s - round(s)) < gap:
            continue
        out.append((a, b, c, rng.uniform(zlo, zhi)))
    return out


def suite_specfun(scale: float = 1.0) -> List[Case]:
    ck = Checker(scale)
    rng = random.Random(20240611)
    ck.upper("specfun.gamma.values", max(_rel(gamma_fn(1.0), 1.0), _rel(gamma_fn(5.0), 24.0),
                                         _rel(gamma_fn(0.5), math.sqrt(math.pi)),
                                         _rel(gamma_fn(-1.5), 4 * math.sqrt(math.pi) / 3)), 1e-12)
    xs = [x for x in (rng.uniform(-29.5, 29.0) for _ in range(400)) if abs(x - round(x)) > 1e-3][:200]
    ck.upper("specfun.gamma.recurrence", max(_rel(gamma_fn(x + 1), x * gamma_fn(x)) for x in xs), 1e-12)
    ck.upper("specfun.gamma.pole_error", 0.0 if _raises(lambda: gamma_fn(-3.0)) else 1.0, 0.0)
    ck.upper("specfun.digamma.values", max(abs(digamma(1.0) + EULER_GAMMA), abs(digamma(2.0) - 1 + EULER_GAMMA)),
             1e-10)
    ck.upper("specfun.digamma.recurrence",
             max(abs(digamma(x + 1) - digamma(x) - 1 / x) for x in xs if abs(x) > 1e-2), 1e-10)
    ck.upper("specfun.pochhammer.values", max(abs(pochhammer(0.7, 0) - 1), abs(pochhammer(0.25, 2) - 0.3125),
                                               abs(pochhammer(3, 3) - 60)), 1e-14)
    pg = []
    for _ in range(200):
        a, n = rng.uniform(0.05, 8.0), rng.randrange(0, 12)
        pg.append(_rel(pochhammer(a, n) * gamma_fn(a), gamma_fn(a + n)))
    ck.upper("specfun.pochhammer.gamma_consistency", max(pg), 1e-11)

    ck.upper("specfun.hyp2f1.values", max(abs(hyp2f1(0.3, -1.7, 2.2, 0.0) - 1),
                                          _rel(hyp2f1(1, 1, 2, 0.5), 2 * math.log(2)),
                                          _rel(hyp2f1(0.25, 0.75, 1, 0.25), hyp2f1_series(0.25, 0.75, 1, 0.25))),
             1e-12)
    eul = []
    for a, b, c, z in _random_params(rng, 200, 0.0, 0.9):
        f1 = hyp2f1(a, b, c, z)
        f2 = (1 - z) ** (c - a - b) * hyp2f1(c - a, c - b, c, z)
        eul.append(abs(f1 - f2) / max(abs(f1), abs(f2), 1e-300))
    ck.upper("specfun.hyp2f1.euler_transformation", max(eul), 1e-10, "200 random cases, |c-a-b - int| >= 0.05")
    con = []
    deep = SeriesConfig(max_terms=200000)
    for a, b, c, z in _random_params(rng, 200, 0.5, 0.95):
        s = hyp2f1_series(a, b, c, z, deep)
        con.append(abs(hyp2f1_connection(a, b, c, z) - s) / max(abs(s), 1e-300))
    ck.upper("specfun.hyp2f1.connection_vs_series", max(con), 1e-10, "200 random cases, z in (0.5, 0.95)")
    logs, cont = [], []
    for _ in range(200):
        a, b = rng.uniform(-1.5, 2.5), rng.uniform(-1.5, 2.5)
        m = rng.randrange(-2, 3)
        c = a + b + m
        if c <= 0.05 or abs(c - round(c)) < 0.05 or min(abs(a - round(a)), abs(b - round(b))) < 0.05:
            continue
        z = rng.uniform(0.5, 0.9)
        v = hyp2f1(a, b, c, z)
        s = hyp2f1_series(a, b, c, z, deep)
        logs.append(abs(v - s) / max(abs(s), 1e-300))
        near = 0.5 * (hyp2f1(a, b, c + 1e-6, z) + hyp2f1(a, b, c - 1e-6, z))
        cont.append(abs(near - v) / max(abs(v), 1e-300))
    ck.upper("specfun.hyp2f1.log_formulas_vs_series", max(logs), 1e-10,
             f"{len(logs)} cases with c - a - b in {{-2..2}}")
    ck.upper("specfun.hyp2f1.degenerate_continuity", max(cont), 1e-4, "c shifted by +-1e-6")
    ck.upper("specfun.hyp2f1.domain_errors",
             0.0 if _raises(lambda: hyp2f1(1, 1, -2, 0.3)) and _raises(lambda: hyp2f1(1, 1, 2, 1.5)) else 1.0, 0.0)

    sym, expl, ident, geg = [], [], [], []
    for _ in range(200):
        k = rng.randrange(0, 9)
        al, be, x = rng.uniform(-0.9, 4), rng.uniform(-0.9, 4), rng.uniform(-1, 1)
        p = jacobi_p(k, al, be, x)
        sym.append(abs(jacobi_p(k, al, be, -x) - (-1) ** k * jacobi_p(k, be, al, x)) / max(1.0, abs(p)))
        from .specfun import _jacobi_explicit  # reference sum
        expl.append(abs(_jacobi_explicit(k, al, be, x) - p) / max(1.0, abs(p)))
        lhs = jacobi_p(k + 1, al, -1.0, x)
        rhs = (al + k + 1) / (k + 1) * (1 + x) / 2 * jacobi_p(k, al, 1.0, x)
        ident.append(abs(lhs - rhs) / max(1.0, abs(lhs)))
        lam = rng.uniform(0.1, 3)
        g = gegenbauer_c(k, lam, x)
        ref = pochhammer(2 * lam, k) / pochhammer(lam + 0.5, k) * jacobi_p(k, lam - 0.5, lam - 0.5, x)
        geg.append(abs(g - ref) / max(1.0, abs(g)))
    ck.upper("specfun.jacobi.reflection_symmetry", max(sym), 1e-12)
    ck.upper("specfun.jacobi.explicit_sum", max(expl), 1e-11)
    ck.upper("specfun.jacobi.beta_minus_one_identity", max(ident), 1e-12)
    ck.upper("specfun.gegenbauer.jacobi_proportionality", max(geg), 1e-11)
    ck.upper("specfun.lerch.values", max(abs(lerch_phi(0.0, 2.0, 1.7) - 1.7**-2),
                                         _rel(lerch_phi(0.5, 1.0, 1.0), 2 * math.log(2))), 1e-13)
    r = math.pi / 6
    closed = D4._psi0_closed(5, 0, np.array(r)) / (2 * math.sin(r) ** 2 * math.cos(r))
    ck.upper("specfun.lerch.log_closed_form", _rel(float(closed), lerch_phi(math.sin(r) ** 2, 1.0, 2.0)), 1e-12)
    return ck.cases


# ---------------------------------------------------------------- modes


def suite_modes(scale: float = 1.0) -> List[Case]:
    ck = Checker(scale)
    grid = chebyshev_grid(64)
    worst: Dict[str, float] = {}
    for s in residual_specs():
        worst[s.family.value] = max(worst.get(s.family.value, 0.0), float(np.max(residual_q(s, grid))))
    for fam, w in sorted(worst.items()):
        ck.upper(f"modes.radial_residual.{fam}", w, 1e-9, "64-point grid, d in {3,4,5,7}, l<=3, k<=4")
    s = ModeSpec("dirichlet", 4, 2.0, 1, 2)
    ck.lower("modes.radial_residual.detuned_frequency",
             residual_q(s, 0.9, omega=P_freq(s) + 0.1, relative=False), 1e-3)

    lim, conv, zero = 0.0, 0.0, 0.0
    for d in (4, 5, 7):
        for l in range(3):
            for k in range(5):
                limit = neumann_singleton_limit(d, l, k)
                n = radial_profile(ModeSpec("neumann", d, (d - 3) / 2 + 1e-10, l, k))
                if k == 0:
                    zero = max(zero, float(np.abs(n(grid)).max()))
                    continue
                lim = max(lim, float(np.abs(limit(grid) - gauge_profile(d, l, k - 1)(grid)).max()))
                conv = max(conv, float(np.abs(n(grid) - limit(grid)).max()))
    ck.upper("modes.singleton_limit.construction_equals_gauge", lim, 1e-8, "d in {4,5,7}, l<=2, 1<=k<=4")
    ck.upper("modes.singleton_limit.convergence", conv, 1e-8, "Neumann at eps = 1e-10")
    ck.upper("modes.singleton_limit.ground_state_vanishes", zero, 1e-4, "amplitude ~ sqrt(eps) at eps = 1e-10")
    rt = []
    for d in (3, 4, 5, 7):
        for e0 in (0.3, (d - 1) / 2 + 0.4, d + 1.5):
            lo, hi = e0_from_mass(mass_from_e0(e0, d), d)
            rt.append(min(abs(lo - e0), abs(hi - e0)))
    ck.upper("modes.mass.round_trip", max(rt), 1e-12)
    ck.upper("modes.mass.bf_bound", abs(bf_bound(5) + 4.0), 1e-15)
    lc = max(abs(log_coefficient(d, m, l, (d - 1) / 2 + m + l + 2 * k if m >= 0 else (d - 1) / 2 - m + l + 2 * k))
             for d in (3, 4, 5, 7) for m in (-1, 0, 1) for l in range(3) for k in range(3))
    ck.upper("modes.degenerate.log_free", lc, 1e-10)
    ck.upper("modes.invalid_spec_gate",
             0.0 if _raises(lambda: ModeSpec("neumann", 4, 0.4)) and _raises(lambda: ModeSpec("singleton", 4, k=1))
             else 1.0, 0.0)
    return ck.cases


def P_freq(spec):
    from .modes2 import frequency

    return frequency(spec)


# ---------------------------------------------------------------- products


def suite_products(scale: float = 1.0) -> List[Case]:
    ck = Checker(scale)
    for fam in ("dirichlet", "neumann"):
        worst = 0.0
        for d in (3, 4, 5, 7):
            for l in range(4):
                for e0 in e0_samples(d, fam):
                    worst = max(worst, float(np.abs(gram_matrix(fam, d, e0, l, 4) - np.eye(5)).max()))
        ck.upper(f"products.gram.{fam}", worst, 1e-7, "d in {3,4,5,7}, l<=3, k<=4")
    samples = {"dd2": (-0.5, 0.3, 1.2, 1.45), "dn2": (-0.4, 0.3, 2.5), "nd2": (-1.0, 0.2, 0.9),
               "nn2": (0.05, 0.7, 3.0)}
    for fam, es in samples.items():
        worst = max(float(np.abs(gram_matrix(fam, 2, e0, 0, 3) - np.eye(4)).max()) for e0 in es)
        ck.upper(f"products.gram.{fam}", worst, 1e-7)
    for fam in ("massless_high", "massless_low"):
        worst = 0.0
        for d in (3, 4, 5, 7):
            for l in range(3):
                ms = [ModeSpec(fam, d, None, l, k) for k in range(4)]
                g = np.array([[kg_inner(a, b).real for b in ms] for a in ms])
                worst = max(worst, float(np.abs(g - np.eye(4)).max()))
        ck.upper(f"products.gram.{fam}", worst, 1e-7)
    f0, f1 = ModeSpec("neumann", 4, 3.0, 0, 0), ModeSpec("neumann", 4, 3.0, 0, 1)
    ck.upper("products.kg.neumann_unit_norm", abs(kg_inner(f0, f0) - 1), 1e-8)
    ck.upper("products.kg.neumann_orthogonal", abs(kg_inner(f0, f1)), 1e-9)
    a, b = ModeSpec("dirichlet", 5, 2.3, 1, 1), ModeSpec("dirichlet", 5, 2.3, 1, 3)
    ck.upper("products.kg.hermiticity", abs(kg_inner(a, b, t0=0.7) - np.conj(kg_inner(b, a, t0=0.7))), 1e-15)
    schemes = max(float(np.abs(gram_matrix("neumann", 4, 3.0, 0, 2, QuadratureConfig(200, 1e-9, sch))
                               - np.eye(3)).max()) for sch in ("tanh_sinh", "gauss_legendre"))
    ck.upper("products.kg.alternative_quadratures", schemes, 1e-7, "tanh-sinh and Gauss-Legendre, 200 nodes")
    ck.upper("products.kg.divergence_reported",
             0.0 if _raises(lambda: kg_inner(ModeSpec("singleton", 4), ModeSpec("singleton", 4))) else 1.0, 0.0)

    gauge_worst, single_worst, cross_worst = 0.0, 0.0, 0.0
    for d in (4, 5, 7):
        for l in range(3):
            s = ModeSpec("singleton", d, None, l)
            single_worst = max(single_worst, _rel(regularized_inner(s, s), singleton_norm_formula(d, l)))
            for k in range(3):
                g = ModeSpec("gauge", d, None, l, k)
                gauge_worst = max(gauge_worst, abs(regularized_inner(g, g)))
                cross_worst = max(cross_worst, abs(regularized_inner(s, g)))
    ck.upper("products.regularized.gauge_norms", gauge_worst, 1e-6, "d in {4,5,7}, l<=2, k<=2")
    ck.upper("products.regularized.singleton_norms", single_worst, 1e-3, "relative to l + (d-3)/2")
    ck.upper("products.regularized.singleton_gauge_cross", cross_worst, 1e-6)
    from .products import _continued_profile

    s = ModeSpec("singleton", 4, None, 0)
    eps = (1e-3, 1e-4)
    vals = [radial_integral(_continued_profile(s, e)[0], _continued_profile(s, e)[0], 4) for e in eps]
    slope = math.log(vals[1] / vals[0]) / math.log(eps[1] / eps[0])
    ck.upper("products.regularized.pole_order", abs(slope + 1), 0.02, "log-slope of the bare integral vs eps")
    return ck.cases


# ---------------------------------------------------------------- propagators


def suite_propagators(scale: float = 1.0) -> List[Case]:
    ck = Checker(scale)
    worst = 0.0
    for d, e0, fam, pt in mode_sum_combos():
        res = P.mode_sum(d, e0, fam, pt, 500)
        worst = max(worst, _rel(res.value, P.closed_form(P.PropagatorKind(fam, d, e0), res.z)))
    ck.upper("propagators.mode_sum.lorentzian", worst, 1e-6, "9 combinations, 500 terms, erfc-log window")
    worst = 0.0
    for d in (4, 5, 7):
        for fam, e0 in (("dirichlet", (d - 2) / 2), ("neumann", (d - 1) / 2 + 0.3), ("neumann", d + 0.5)):
            for r, tau in ((0.3, 0.4), (0.8, 0.2), (1.2, 0.6)):
                pt = Point(tau, r, tuple([math.pi / 2] * (d - 3) + [0.0]))
                res = P.mode_sum(d, e0, fam, pt, 200, signature="euclidean")
                worst = max(worst, _rel(res.value, P.closed_form(P.PropagatorKind(fam, d, e0), res.z)))
    ck.upper("propagators.mode_sum.euclidean_grid", worst, 1e-6, "3 x 3 x 3 grid, 200 terms")
    ck.upper("propagators.mode_sum.coincident_rejected",
             0.0 if _raises(lambda: P.mode_sum(4, 2.0, "dirichlet", Point(0, 0, (math.pi / 2, 0)), 50), DomainError)
             else 1.0, 0.0)
    for d in (4, 5, 7):
        w = max(abs(g.total - g.closed) for g in (P.gb_decomposition(d, r, t, 500) for r, t in TRIPLET_POINTS))
        ck.upper(f"propagators.triplet_split.d{d}", w, 1e-8, "5 points, 500 terms")
    g = P.gb_decomposition(4, 0.4, 0.2, 200)
    ck.upper("propagators.triplet_split.example_200_terms", abs(g.total - g.closed), 1e-8)
    zs = np.linspace(1.2, 10, 12)
    kinds = [P.PropagatorKind("dirichlet", 4, 2.0), P.PropagatorKind("dirichlet", 7, 2.5),
             P.PropagatorKind("neumann", 5, 3.0), P.PropagatorKind("neumann", 4, 1.2),
             P.PropagatorKind("singleton_limit", 4), P.PropagatorKind("w1", 5), P.PropagatorKind("w2", 4),
             P.PropagatorKind("w2", 7)]
    for k in kinds:
        w = max(P.ode_residual(k, z) for z in zs)
        ck.upper(f"propagators.ode.{k.kind.value}_d{k.d}_e{k.e0:g}", w, 1e-6, "z in [1.2, 10], FD residual")
    ck.lower("propagators.ode.w2_as_printed_fails",
             P.ode_residual(P.PropagatorKind("w2", 4, as_printed=True), 2.0), 1e-3, "digamma arguments without +n")
    ff = P.PropagatorKind("ff", 4)
    ck.upper("propagators.ode.ff_squared_operator", max(P.squared_ode_residual(ff, z) for z in (2.0, 3.0, 4.0, 6.0)), 1e-6,
             "fourth-order FD stencil; step clamped near z = 1")
    ck.lower("propagators.ode.ff_second_order_nonzero", P.ode_residual(ff, 2.0), 1e-3)
    ck.upper("propagators.closed.ff_example", abs(P.closed_form(ff, 2.0) - 2**-0.5 * hyp2f1_series(0.25, 0.75, 1, 0.25)),
             1e-13)
    ck.upper("propagators.closed.domain_gate",
             0.0 if _raises(lambda: P.closed_form(ff, 0.9), DomainError) else 1.0, 0.0)
    slopes = []
    for k in (P.PropagatorKind("dirichlet", 5, 1.7), P.PropagatorKind("neumann", 5, 2.9)):
        z1, z2 = 1e4, 1e5
        sl = math.log(P.closed_form(k, z2) / P.closed_form(k, z1)) / math.log(z2 / z1)
        expect = k.e0 - k.d + 1 if k.kind is P.Kind.DIRICHLET_CLOSED else -k.e0
        slopes.append(abs(sl - expect))
    ck.upper("propagators.closed.large_z_power", max(slopes), 1e-6)

    for d in (4, 5, 7):
        rep = P.neumann_dirichlet_limit_check(d, 2.0)
        ck.flag(f"propagators.limit.d{d}.monotone", rep.monotone, f"gaps {rep.relative_gap}")
        ck.upper(f"propagators.limit.d{d}.shape", rep.shape_ratio_spread, 1e-8)
        ck.upper(f"propagators.limit.d{d}.fit_stability", rep.fit_stability, 1e-4,
                 f"fitted constant {rep.fitted_prefactor:.10g}")
        ck.upper(f"propagators.limit.d{d}.fit_vs_resolved", _rel(rep.fitted_prefactor, rep.resolved_prefactor), 1e-6)
        ck.lower(f"propagators.limit.d{d}.fit_vs_printed", _rel(rep.printed_prefactor, rep.fitted_prefactor), 0.5)
    zs = [1.1 + 0.45 * i for i in range(20)]
    worst_res, worst_coef = 0.0, 0.0
    for d, e0 in ((4, 2.0), (5, 3.3), (7, 2.5)):
        for kind, pref in (("dirichlet", P.dirichlet_prefactor(d, e0)), ("neumann", P.neumann_prefactor(d, e0))):
            k = P.PropagatorKind(kind, d, e0)
            c1, c2, res = P.branch_fit(d, e0, zs, lambda z: P.closed_form(k, z))
            expect = (pref, 0.0) if kind == "dirichlet" else (0.0, pref)
            worst_res = max(worst_res, res)
            worst_coef = max(worst_coef, abs(c1 - expect[0]) / pref, abs(c2 - expect[1]) / pref)
        gk = P.PropagatorKind("general", d, e0, c1=0.3, c2=-1.2)
        c1, c2, res = P.branch_fit(d, e0, zs, lambda z: P.closed_form(gk, z))
        worst_res = max(worst_res, res)
        worst_coef = max(worst_coef, abs(c1 - 0.3), abs(c2 + 1.2))
    ck.upper("propagators.branch_fit.residual", worst_res, 1e-8)
    ck.upper("propagators.branch_fit.constants", worst_coef, 1e-8)
    return ck.cases


# ---------------------------------------------------------------- dipole


def suite_dipole(scale: float = 1.0) -> List[Case]:
    ck = Checker(scale)
    grid = chebyshev_grid(64, 0.02, math.pi / 2 - 0.02)
    worst = 0.0
    for d in (3, 4, 5, 7):
        for l in range(4):
            for w in (0.5, 1.7, 4.25):
                worst = max(worst, max(D4.compare_quartic(d, D4.singleton_lambda(d), w, l, grid).worst.values()))
    ck.upper("dipole.quartic.printed_vs_composition", worst, 1e-6, "a = 1")
    c_pr = D4.compare_quartic(5, 2.0, 1.3, 1, grid, a=2.0)
    c_fx = D4.compare_quartic(5, 2.0, 1.3, 1, grid, a=2.0, as_printed=False)
    ck.lower("dipole.quartic.a1_bare_lambda_at_a2", c_pr.worst["a1"], 1e-6, "printed a1 with a = 2")
    ck.upper("dipole.quartic.corrected_at_a2", max(c_fx.worst.values()), 1e-6)

    worst = 0.0
    for d in (3, 4, 5, 7):
        for l in range(4):
            for m in D4.triplet_space(d, l, 3):
                worst = max(worst, float(D4.member_residual(m, grid).max()))
    ck.upper("dipole.triplet.quartic_residual", worst, 1e-8, "d in {3,4,5,7}, l<=3, kmax=3")
    sc = D4.scalar_mode(4, 0, 0)
    q = D4.l_ratio(sc, sc, np.array([0.4, 0.9]), 4, 0, D4.singleton_lambda(4), 2.5)
    ck.lower("dipole.scalar.second_order_nonzero", float(np.abs(q).min()), 1e-3)
    ck.flag("dipole.triplet.excludes_psi0",
            all(m.family is not D4.DipoleFamily.PSI_ZERO for m in D4.triplet_space(4, 0, 2))
            and len(D4.triplet_space(4, 0, 2)) == 7)

    rr = np.linspace(0.1, 1.3, 25)
    spread, c12, sing = 0.0, 0.0, 0.0
    for d, e0, l, w in ((4, 2.0, 0, 1.3), (5, 3.3, 1, 2.2), (7, 2.5, 2, 0.7), (4, 0.5, 0, 0.5), (3, 1.4, 3, 5.1)):
        p2, p1 = D4.psi2_series(d, e0, l, w, 1500), D4.psi1_profile(d, e0, l, w)
        ratio = D4.l_ratio(p2, p1, rr, d, l, mass_from_e0(e0, d), w)
        spread = max(spread, float(np.ptp(ratio) / abs(ratio.mean())))
        h = D4.psi2_coefficients(d, e0, l, w, 3)
        c12 = max(c12, abs(h[1] - D4.printed_c1(d, e0, l, w)), abs(h[2] - D4.printed_c2(d, e0, l, w)))
    for d in (3, 4, 5, 7):
        for l in range(3):
            for w in (0.3, 1.9, 3.7):
                p = l / 2 + (d + 1) / 4
                tay = [1.0, (p + w / 2) * (p - w / 2) / (l + (d + 1) / 2)]
                tay.append(tay[1] * (p + w / 2 + 1) * (p - w / 2 + 1) / (2 * (l + (d + 1) / 2 + 1)))
                h = D4.psi2_coefficients(d, (d - 3) / 2, l, w, 3)
                sing = max(sing, abs(h[1] - tay[1]), abs(h[2] - tay[2]))
    ck.upper("dipole.psi2.ratio_constant", spread, 1e-6, "L psi2 / psi1 over r in [0.1, 1.3]")
    ck.upper("dipole.psi2.printed_coefficients", c12, 1e-10, "c1, c2 with r0")
    ck.upper("dipole.psi2.singleton_taylor", sing, 1e-10)
    poly = 0.0
    for d in (3, 4, 5, 7):
        for l in range(3):
            for k in range(4):
                w = D4.scalar_frequency(d, l, k)
                al = l + (d - 1) / 2
                scale_k = math.factorial(k) / pochhammer(al + 1, k)
                poly = max(poly, float(np.abs(D4.psi2_singleton(d, l, w)(grid) - scale_k * D4.scalar_mode(d, l, k)(grid)).max()))
    ck.upper("dipole.psi2.scalar_polynomials", poly, 1e-10)
    ck.upper("dipole.psi2.constrained_kills_psi0",
             max(abs(D4.psi2_singleton(d, l, (d - 3) / 2 + l, constrained=True)(0.7)) for d in (3, 4, 5, 7)
                 for l in range(3)), 0.0)
    s = math.sin(math.pi / 4)
    ck.upper("dipole.psi0.example_d4", abs(D4.psi0_mode(4, 0)(math.pi / 4)
                                            - 3 * math.cos(math.pi / 4) ** 0.5 * (math.atanh(s) / s - 1)), 1e-13)
    lerch = 0.0
    for d in (3, 4, 5, 6, 7):
        for l in range(3):
            a = l + (d - 1) / 2
            for r in (0.3, 0.8, 1.3):
                ref = a * math.sin(r) ** (l + 2) * math.cos(r) ** ((d - 3) / 2) * lerch_phi(math.sin(r) ** 2, 1, a)
                lerch = max(lerch, _rel(D4.psi0_mode(d, l)(r), ref))
    ck.upper("dipole.psi0.closed_vs_lerch", lerch, 1e-12)
    pts = [Point(0.3, 0.4, (0.7, 0.2)), Point(-0.5, 0.7, (1.1, 0.9)), Point(1.2, 0.9, (0.5, 2.0)),
           Point(0.1, 1.2, (2.0, 3.0)), Point(2.0, 0.25, (1.4, 4.5))]
    from .modes2 import singleton_profile

    scal = D4.dipole_field(D4.DipoleModeSpec("scalar", 4, 0, 0))
    sing1 = D4.field(singleton_profile(4, 1), 1.5, 1, 4, scale=2j)
    ck.upper("dipole.ladder.lower_scalar_to_singleton", D4.ladder_pointwise(scal, sing1, pts, "lower"), 1e-5)
    sing0 = D4.dipole_field(D4.DipoleModeSpec("singleton", 4, 0))
    ck.upper("dipole.ladder.singleton_lowest_weight",
             max(abs(D4.ladder_apply_d4(sing0, p, "lower", 3)) for p in pts), 1e-5)
    psi0 = D4.dipole_field(D4.DipoleModeSpec("psi0", 4, 0))
    probe = D4.negative_energy_probe(psi0)
    ck.lower("dipole.ladder.psi0_negative_energy", probe.positive_component, 10 * probe.noise_floor,
             f"noise floor {probe.noise_floor:.3g}")
    probe0 = D4.negative_energy_probe(sing0)
    ck.upper("dipole.ladder.singleton_probe_empty", probe0.positive_component, 1e-8)
    rhs = D4.sum_fields(D4.field(D4.psi0_mode(4, 1), 1.5, 1, 4, scale=0.6j),
                        D4.field(singleton_profile(4, 1), 1.5, 1, 4, scale=-2j))
    ck.upper("dipole.ladder.raise_psi0", D4.ladder_pointwise(psi0, rhs, pts, "raise"), 1e-5)
    ind = 0.0
    for d in (3, 4, 5, 7):
        for l in range(4):
            roots = np.sort(np.roots(D4.indicial_polynomial_origin(d, D4.singleton_lambda(d), 0.7, l)).real)
            ind = max(ind, float(np.abs(roots - np.array(D4.indicial_roots_origin(d, l))).max()))
    ck.upper("dipole.indicial.origin", ind, 1e-5, "leading Laurent terms at r = 1e-7")
    bnd = max(abs(x - y) for d in (3, 4, 5, 7) for x, y in
              zip(D4.indicial_roots_boundary(d, D4.singleton_lambda(d)),
                  [(d - 3) / 2, (d - 3) / 2, (d + 1) / 2, (d + 1) / 2]))
    ck.upper("dipole.indicial.boundary_double_roots", bnd, 1e-12)
    ok = all(D4.passes_vanishing_flux(m) == (m.family is D4.DipoleFamily.GAUGE)
             for d in (3, 4, 5, 7) for m in D4.triplet_space(d, 1, 2))
    ck.flag("dipole.vanishing_flux.only_gauge_survives", ok)
    return ck.cases


# ---------------------------------------------------------------- spectral


def suite_spectral(scale: float = 1.0) -> List[Case]:
    ck = Checker(scale)
    margin = math.inf
    for d in range(4, 9):
        for l in range(4):
            rep = S.singleton_below_minimum(d, l)
            margin = min(margin, rep.margin / max(1.0, abs(rep.v_min)))
    ck.lower("spectral.singleton_below_minimum", margin, 0.0, "smallest relative margin, d in 4..8, l in 0..3")
    rep = S.singleton_below_minimum(4, 0)
    ck.upper("spectral.d4_l0.exact", max(abs(rep.level - 0.25), abs(rep.v_min - 0.75)), 1e-14,
             rep.kind)
    ck.flag("spectral.d4_l0.endpoint_infimum", rep.kind == "infimum at r->0")
    r = np.linspace(0.05, 1.5, 30)
    ck.upper("spectral.potential.d4_example", float(np.abs(S.potential_v(S.PotentialSpec(4, 0.5, 0), r)
                                                           - 0.75 / np.cos(r) ** 2).max()), 1e-12)
    ck.upper("spectral.levels.example", float(np.abs(np.array(S.level_energies(S.PotentialSpec(4, 0.5, 0), 2))
                                                     - [0.25, 6.25, 20.25]).max()), 0.0)
    grid = chebyshev_grid(64, 0.02, 1.55)
    worst = 0.0
    for d in range(3, 8):
        for fam, e0 in (("dirichlet", (d - 1) / 2 - 0.3), ("neumann", (d - 1) / 2 + 0.3), ("neumann", d + 0.7),
                        ("massless_high", None), ("gauge", None)):
            for l in range(3):
                for k in range(3):
                    worst = max(worst, float(S.schrodinger_residual(ModeSpec(fam, d, e0, l, k), grid).max()))
    ck.upper("spectral.schrodinger_residual", worst, 1e-7, "normalizable families, d in 3..7")
    g = S.level_vs_minimum(4, 0.5, 0, 1)
    ck.record("spectral.gauge_level_k1_margin", g.margin, "negative margin: level above min V")
    return ck.cases


SUITE_FUNCS: Dict[str, Callable[[float], List[Case]]] = {
    "specfun": suite_specfun, "modes": suite_modes, "products": suite_products,
    "propagators": suite_propagators, "dipole": suite_dipole, "spectral": suite_spectral,
}


# ---------------------------------------------------------------- errata


def errata_table() -> list:
    with resources.files("adsmodes").joinpath("data/errata.json").open("r", encoding="utf-8") as fh:
        return json.load(fh)["entries"]


def _evidence() -> Dict[str, str]:
    ev = {}
    rep = P.neumann_dirichlet_limit_check(4, 2.0)
    ev["singleton_limit_prefactor"] = (
        f"d=4: mode-sum fit {rep.fitted_prefactor:.10g}, resolved {rep.resolved_prefactor:.10g}, "
        f"printed {rep.printed_prefactor:.4g}")
    ev["log_solution_digamma"] = (
        f"ODE residual at d=4, z=2: printed {P.ode_residual(P.PropagatorKind('w2', 4, as_printed=True), 2.0):.3g}, "
        f"resolved {P.ode_residual(P.PropagatorKind('w2', 4), 2.0):.3g}")
    for fam, key in (("nn2", "two_d_neumann_neumann_normalization"), ("nd2", "two_d_neumann_dirichlet_normalization"),
                     ("dn2", "two_d_dirichlet_neumann_normalization")):
        e0 = 0.7 if fam != "nd2" else 0.4
        ev[key] = f"Gram deviation at E0={e0}, kmax=3: {np.abs(gram_matrix(fam, 2, e0, 0, 3) - np.eye(4)).max():.2e}"
    e0 = 0.3
    pr = [math.sqrt(two_d_c2(Family.DD2, e0, k, as_printed=True) / two_d_c2(Family.DD2, e0, k)) for k in range(3)]
    ev["two_d_dirichlet_dirichlet_normalization"] = (
        f"Gram deviation with resolved form {np.abs(gram_matrix('dd2', 2, e0, 0, 3) - np.eye(4)).max():.2e}; "
        f"printed/resolved norm ratios {', '.join(f'{x:.4g}' for x in pr)}")
    c = D4.compare_quartic(5, 2.0, 1.3, 1, chebyshev_grid(32, 0.05, 1.5), a=2.0)
    ev["quartic_block"] = (f"composition oracle at a=2: printed a1 deviation {c.worst['a1']:.3g}, "
                           f"other coefficients <= {max(v for k, v in c.worst.items() if k != 'a1'):.1e}")
    ms = ModeSpec("massless_high", 4, None, 1, 2)
    ev["massless_normalization"] = (
        f"d=4, l=1, k=2: resolved C^2 {massless_c2(4, 1, 2, True):.6g} gives unit norm "
        f"({abs(kg_inner(ms, ms)):.12f}); printed {massless_c2_as_printed(4, 1, 2, True):.6g}")
    deg = ModeSpec("degenerate", 5, 3.0, 0, 1, 2.0)
    norm = abs(kg_inner(deg, deg))
    ev["degenerate_prefactor"] = (f"d=5, m=1, a=2: resolved norm {norm:.12f}; printed power rescales it by "
                                  f"a^(2(2-d)) = {2.0 ** -6:.6g}")
    a, b, c = 0.3, 1.7, 1.0
    ev["log_case_c_minus_m"] = (
        f"2F1({a},{b};{c};0.8), c-a-b=-1: log formula vs direct series "
        f"{_rel(hyp2f1(a, b, c, 0.8), hyp2f1_series(a, b, c, 0.8, SeriesConfig(max_terms=200000))):.1e}")
    d, e0, l, w = 5, 1.7, 1, 2.3
    f = generic_solution(d, e0, l, w)
    c1, c2 = boundary_coeffs(d, e0, l, w)
    b1, b2 = connection_branches(d, e0, l, w)
    c1p = c1 * gamma_fn((l + d - 1 - e0 + w) / 2) / gamma_fn((l + d - 1 + e0 + w) / 2)
    good = max(abs(f(r) - c1 * b1(r) - c2 * b2(r)) for r in (0.3, 0.9, 1.3))
    bad = max(abs(f(r) - c1p * b1(r) - c2 * b2(r)) for r in (0.3, 0.9, 1.3))
    ev["connection_second_branch"] = (f"d=5, E0=1.7, l=1, omega=2.3: connection error resolved {good:.1e}, "
                                      f"printed {bad:.3g}")
    ev["psi0_even_closed_form"] = f"closed form vs Lerch series at d=4, r=1.3: {_rel(D4.psi0_mode(4, 0)(1.3), 1.5 * math.sin(1.3) ** 2 * math.cos(1.3) ** 0.5 * lerch_phi(math.sin(1.3) ** 2, 1, 1.5)):.1e}"
    from .modes2 import singleton_profile

    pts = [Point(0.3, 0.4, (0.7, 0.2)), Point(1.2, 0.9, (0.5, 2.0))]
    psi0 = D4.dipole_field(D4.DipoleModeSpec("psi0", 4, 0))
    rhs = D4.sum_fields(D4.field(D4.psi0_mode(4, 1), 1.5, 1, 4, scale=0.6j),
                        D4.field(singleton_profile(4, 1), 1.5, 1, 4, scale=-2j))
    ev["psi0_l1_angular_factor"] = (f"raising the d=4, l=0 state with the cos theta harmonic: pointwise error "
                                    f"{D4.ladder_pointwise(psi0, rhs, pts, 'raise'):.1e}")
    g = P.gb_decomposition(4, 0.4, 0.2, 500)
    gp = P.gb_decomposition(4, 0.4, 0.2, 500, as_printed=True)
    ev["triplet_scalar_coefficient"] = (f"d=4, r=0.4, t=0.2: resolved split error {abs(g.total - g.closed):.1e}, "
                                        f"printed {abs(gp.total - gp.closed):.3g}")
    ev["regularized_norm_power"] = (
        f"d=5, l=1, a=2: regularized {regularized_inner(ModeSpec('singleton', 5, None, 1, 0, 2.0), ModeSpec('singleton', 5, None, 1, 0, 2.0)):.8g}, "
        f"a^(2-d)(l+(d-3)/2) = {singleton_norm_formula(5, 1, 2.0):.8g}")
    ev["bf_bound_caption"] = f"bf_bound(d=4) = {bf_bound(4):g}"
    return ev


def build_errata() -> List[Erratum]:
    ev = _evidence()
    return [Erratum(e["key"], e["equation_label"], e["as_printed"], e["resolved_form"], ev.get(e["key"], ""))
            for e in errata_table()]


# ---------------------------------------------------------------- driver


def run_suite(name: str, scale: float = 1.0) -> List[Case]:
    return SUITE_FUNCS[name](scale)


def run(suite: str = "all", tol_scale: float = 1.0, jobs: int = 1) -> VerificationReport:
    names = list(SUITES) if suite == "all" else [suite]
    for n in names:
        if n not in SUITE_FUNCS:
            raise ValueError(f"unknown suite {n!r}")
    if jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(run_suite, names, [tol_scale] * len(names)))
    else:
        parts = [run_suite(n, tol_scale) for n in names]
    cases = sorted((c for part in parts for c in part), key=lambda c: c.name)
    return VerificationReport(suite, cases, build_errata(), tol_scale)
