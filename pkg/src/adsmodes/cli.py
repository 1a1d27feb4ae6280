"""Command-line front end: ``adsmodes <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 invalid input or domain error,
3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
import warnings
from typing import Iterable, List, Optional, Sequence

import numpy as np

from . import dipole4 as D4
from . import propagators as P
from . import spectral as S
from .errors import AdsModesError
from .geometry import Point
from .modes2 import Family, ModeSpec, frequency, radial_profile
from .products import gram_matrix, kg_inner, regularized_inner, singleton_norm_formula

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
TOL_ENV = "ADSMODES_TOL_SCALE"
MODES_SCHEMA_VERSION = "1.0.0"
EDGE = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- formatting


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with floats at 17 significant digits and sorted object keys."""
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if isinstance(obj, bool) or obj is None:
        return "true" if obj is True else "false" if obj is False else "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        s = format(x, ".17g")
        return s if any(ch in s for ch in ".en") else s + ".0"
    if isinstance(obj, str):
        import json

        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{dumps(str(k))}: {dumps(obj[k], indent, _level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + dumps(v, indent, _level + 1) for v in obj) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".10g")


def write_table(out, header: Sequence[str], rows: Iterable[Sequence], kind: str = "csv") -> None:
    if kind == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
        return
    rows = [[fmt(v) for v in row] for row in rows]
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    out.write("  ".join(h.rjust(w) for h, w in zip(header, widths)) + "\n")
    for r in rows:
        out.write("  ".join(v.rjust(w) for v, w in zip(r, widths)) + "\n")


def parse_grid(text: str) -> np.ndarray:
    """start:stop:count, endpoints clipped to [1e-9, pi/2 - 1e-9]."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError("--grid must be start:stop:count")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise UsageError(f"--grid: {exc}") from None
    if n < 1:
        raise UsageError("--grid count must be >= 1")
    g = np.linspace(lo, hi, n) if n > 1 else np.array([lo])
    return np.clip(g, EDGE, math.pi / 2 - EDGE)


def default_tol_scale() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return 1.0
    try:
        val = float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV} must be a positive number, got {raw!r}") from None
    if not val > 0:
        raise UsageError(f"{TOL_ENV} must be positive")
    return val


def _angles(d: int) -> tuple:
    return tuple([math.pi / 2] * (d - 3) + [0.0])


# ---------------------------------------------------------------- commands


def cmd_modes(args, out) -> int:
    spec = ModeSpec(args.family, args.d, args.e0, args.l, args.k, args.a)
    prof = radial_profile(spec)
    w = frequency(spec)
    grid = parse_grid(args.grid)
    f = np.asarray(prof(grid), dtype=float)
    F = np.exp(-1j * w * args.t) * f
    header = ["r", "re_f", "re_F", "im_F"]
    rows = [[r, fv, Fv.real, Fv.imag] for r, fv, Fv in zip(grid, f, F)]
    if args.format == "json":
        doc = {"schema_version": MODES_SCHEMA_VERSION,
               "spec": {"family": spec.family.value, "d": spec.d, "e0": spec.e0, "l": spec.l, "k": spec.k,
                        "a": spec.a},
               "frequency": w, "t": args.t, "columns": header, "rows": rows}
        out.write(dumps(doc) + "\n")
    else:
        write_table(out, header, rows, args.format)
    return EXIT_OK


def _propagator_kind(args) -> P.PropagatorKind:
    return P.PropagatorKind(args.kind, args.d, args.e0, args.a, args.c1, args.c2, args.as_printed)


def cmd_propagator(args, out) -> int:
    kind = _propagator_kind(args)
    if args.z is not None:
        if args.r is not None:
            raise UsageError("give either --z or --r/--t, not both")
        z, r, t = args.z, None, 0.0
        if z > 1:
            r = math.acos(1 / z)
    else:
        if args.r is None:
            raise UsageError("give --z or --r (with optional --t)")
        r, t = args.r, args.t
        z = (math.cos(t) if args.signature == "lorentzian" else math.cosh(t)) / math.cos(r)
    value = P.closed_form(kind, z)
    rows = [["z", z], ["closed_form", value]]
    if args.compare == "mode-sum":
        if kind.kind is P.Kind.DIPOLE:
            g = P.gb_decomposition(kind.d, r, t, args.terms, args.signature, args.as_printed)
            other, tail = g.total, g.tail_estimate
        elif kind.kind in (P.Kind.DIRICHLET_CLOSED, P.Kind.NEUMANN_CLOSED):
            res = P.mode_sum(kind.d, kind.e0, kind.kind.value, Point(t, r, _angles(kind.d)), args.terms,
                             args.signature, kind.a)
            other, tail = res.value, res.tail_estimate
        else:
            raise UsageError("--compare mode-sum supports kinds dirichlet, neumann and ff")
        rows += [["mode_sum", other], ["tail_estimate", tail],
                 ["relative_difference", abs(other - value) / max(abs(value), 1e-300)]]
    if args.format == "json":
        out.write(dumps({k: v for k, v in rows} | {"kind": kind.kind.value, "d": kind.d, "e0": kind.e0}) + "\n")
    else:
        write_table(out, ["quantity", "value"], rows, args.format)
    return EXIT_OK


def cmd_norms(args, out) -> int:
    fam = Family(args.family)
    rows = []
    if fam in (Family.SINGLETON, Family.GAUGE):
        kmax = 0 if fam is Family.SINGLETON else args.kmax
        for k in range(kmax + 1):
            s = ModeSpec(fam, args.d, None, args.l, k, args.a)
            expect = singleton_norm_formula(args.d, args.l, args.a) if fam is Family.SINGLETON else 0.0
            rows.append([k, k, regularized_inner(s, s), expect])
        header = ["i", "j", "regularized", "expected"]
    elif fam in (Family.DIRICHLET, Family.NEUMANN, Family.DD2, Family.DN2, Family.ND2, Family.NN2):
        g = gram_matrix(fam, args.d, args.e0, args.l, args.kmax, a=args.a)
        rows = [[i, j, g[i, j], float(i == j)] for i in range(len(g)) for j in range(len(g))]
        header = ["i", "j", "inner", "expected"]
    else:
        specs = [ModeSpec(fam, args.d, args.e0, args.l, k, args.a) for k in range(args.kmax + 1)]
        rows = [[i, j, kg_inner(a, b).real, float(i == j)] for i, a in enumerate(specs) for j, b in enumerate(specs)]
        header = ["i", "j", "inner", "expected"]
    if args.format == "json":
        out.write(dumps({"family": fam.value, "columns": header, "rows": rows}) + "\n")
    else:
        write_table(out, header, rows, args.format)
    return EXIT_OK


def cmd_triplet(args, out) -> int:
    grid = np.linspace(0.05, math.pi / 2 - 0.05, 64)
    rows = []
    for m in D4.triplet_space(args.d, args.l, args.kmax):
        rows.append([m.family.value, m.k, m.frequency, float(D4.member_residual(m, grid).max()),
                     D4.boundary_decay_exponent(m.profile()), D4.passes_vanishing_flux(m)])
    header = ["family", "k", "omega", "quartic_residual", "boundary_exponent", "vanishing_flux"]
    if args.format == "json":
        out.write(dumps({"d": args.d, "l": args.l, "columns": header, "rows": rows}) + "\n")
    else:
        write_table(out, header, rows, args.format)
    return EXIT_OK


def cmd_potential(args, out) -> int:
    e0 = (args.d - 3) / 2 if args.e0 is None else args.e0
    spec = S.PotentialSpec(args.d, e0, args.l)
    if args.grid:
        grid = parse_grid(args.grid)
        rows = [[r, v] for r, v in zip(grid, np.atleast_1d(S.potential_v(spec, grid)))]
        header = ["r", "V"]
    else:
        rep = S.level_vs_minimum(args.d, e0, args.l, args.k)
        rows = [["level", rep.level], ["v_min", rep.v_min], ["r_min", rep.r_min], ["kind", rep.kind],
                ["margin", rep.margin], ["below", rep.below]]
        header = ["quantity", "value"]
    if args.format == "json":
        payload = {"columns": header, "rows": rows} if args.grid else {k: v for k, v in rows}
        out.write(dumps(payload) + "\n")
    else:
        write_table(out, header, rows, args.format)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    from .verify import run

    scale = args.tol_scale if args.tol_scale is not None else default_tol_scale()
    if not scale > 0:
        raise UsageError("--tol-scale must be positive")
    report = run(args.suite, scale, args.jobs)
    doc = report.to_dict()
    text = dumps(doc) + "\n"
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.format == "json":
        out.write(text)
    else:
        write_table(out, ["case", "status", "residual", "tolerance"],
                    [[c["name"], c["status"], c["residual"], c["tolerance"]] for c in doc["cases"]], "table")
        s = doc["summary"]
        out.write(f"{s['passed']} passed, {s['failed']} failed, {s['warnings']} warnings\n")
    return EXIT_OK if report.passed else EXIT_FAIL


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="adsmodes", description="Scalar modes and two-point functions on anti-de Sitter space.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    fmt_choices = ("csv", "json", "table")

    m = sub.add_parser("modes", help="evaluate a mode on a radial grid")
    m.add_argument("--family", required=True, choices=[f.value for f in Family])
    m.add_argument("--d", type=int, required=True)
    m.add_argument("--e0", type=float)
    m.add_argument("--l", type=int, default=0)
    m.add_argument("--k", type=int, default=0)
    m.add_argument("--a", type=float, default=1.0)
    m.add_argument("--grid", default="0:1.5707963267948966:16")
    m.add_argument("--t", type=float, default=0.0)
    m.add_argument("--format", choices=fmt_choices, default="csv")
    m.set_defaults(func=cmd_modes)

    g = sub.add_parser("propagator", help="closed-form two-point function, optionally against its mode sum")
    g.add_argument("--kind", required=True, choices=[k.value for k in P.Kind])
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--e0", type=float)
    g.add_argument("--a", type=float, default=1.0)
    g.add_argument("--c1", type=float, default=1.0)
    g.add_argument("--c2", type=float, default=0.0)
    g.add_argument("--z", type=float)
    g.add_argument("--r", type=float)
    g.add_argument("--t", type=float, default=0.0)
    g.add_argument("--compare", choices=("mode-sum",))
    g.add_argument("--terms", type=int, default=500)
    g.add_argument("--signature", choices=("lorentzian", "euclidean"), default="lorentzian")
    g.add_argument("--as-printed", action="store_true")
    g.add_argument("--format", choices=fmt_choices, default="table")
    g.set_defaults(func=cmd_propagator)

    n = sub.add_parser("norms", help="inner-product matrix or regularized norms of a family")
    n.add_argument("--family", required=True, choices=[f.value for f in Family])
    n.add_argument("--d", type=int, required=True)
    n.add_argument("--e0", type=float)
    n.add_argument("--l", type=int, default=0)
    n.add_argument("--kmax", type=int, default=3)
    n.add_argument("--a", type=float, default=1.0)
    n.add_argument("--format", choices=fmt_choices, default="table")
    n.set_defaults(func=cmd_norms)

    t = sub.add_parser("triplet", help="members of the fourth-order triplet space")
    t.add_argument("--d", type=int, required=True)
    t.add_argument("--l", type=int, default=0)
    t.add_argument("--kmax", type=int, default=2)
    t.add_argument("--format", choices=fmt_choices, default="table")
    t.set_defaults(func=cmd_triplet)

    v = sub.add_parser("potential", help="Schrodinger potential and level comparison")
    v.add_argument("--d", type=int, required=True)
    v.add_argument("--e0", type=float, help="defaults to the singleton value (d-3)/2")
    v.add_argument("--l", type=int, default=0)
    v.add_argument("--k", type=int, default=0)
    v.add_argument("--grid")
    v.add_argument("--format", choices=fmt_choices, default="table")
    v.set_defaults(func=cmd_potential)

    r = sub.add_parser("verify", help="run verification suites")
    r.add_argument("--suite", default="all",
                   choices=("specfun", "modes", "products", "propagators", "dipole", "spectral", "all"))
    r.add_argument("--json", metavar="PATH")
    r.add_argument("--tol-scale", type=float)
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--format", choices=("table", "json"), default="table")
    r.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        buf = io.StringIO()
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            code = args.func(args, buf)
        for w in caught:
            stderr.write(f"adsmodes: warning: {w.message}\n")
        stdout.write(buf.getvalue())
        return code
    except UsageError as exc:
        stderr.write(f"adsmodes: error: {exc}\n")
        return EXIT_INPUT
    except (AdsModesError, ValueError) as exc:
        stderr.write(f"adsmodes: error: {str(exc).splitlines()[0] if str(exc) else type(exc).__name__}\n")
        return EXIT_INPUT
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except Exception as exc:  # noqa: BLE001
        stderr.write(f"adsmodes: internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
