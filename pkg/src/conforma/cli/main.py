"""``conforma`` command-line front end.

Every subcommand builds a :class:`Report` (parameter echo, column names,
rows) and one of three writers renders it. Exit status: 0 on success, 2 on
user error (bad flags, parse/evaluation errors, domain violations), 3 when a
numeric method fails to converge or meet its tolerance.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence, TextIO

import numpy as np

from .. import derivatives as D
from .. import integrals as I
from .. import laplace as L
from .. import ode as O
from .. import series as S
from ..core import DEFAULT_QUAD, QuadratureSpec, make_order
from ..errors import ConformaError, DomainError, NumericFailure
from .expr import compile_expr

EXIT_OK, EXIT_USER, EXIT_NUMERIC = 0, 2, 3
TOL_ENV = "CONFORMA_TOL"


@dataclass(frozen=True)
class Grid:
    """Sample points ``t_min..t_max`` (inclusive), ``count`` of them."""

    t_min: float
    t_max: float
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise DomainError("grid count must be at least 1")
        if not self.t_min <= self.t_max:
            raise DomainError("grid needs t_min <= t_max")

    def points(self) -> list[float]:
        if self.count == 1:
            return [self.t_min]
        return [float(x) for x in np.linspace(self.t_min, self.t_max, self.count)]


@dataclass
class Report:
    command: str
    params: dict
    columns: list
    rows: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    #: preformatted output that replaces the writers (series text form)
    text: Optional[str] = None


# -- formatting -------------------------------------------------------------

def fmt(v) -> str:
    """12 significant digits; ``-0`` prints as ``0``."""
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if v == 0.0:
        return "0"
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return "%.12g" % v


def write_csv(rep: Report, out: TextIO) -> None:
    out.write(",".join(rep.columns) + "\n")
    for row in rep.rows:
        out.write(",".join(fmt(v) for v in row) + "\n")


def write_table(rep: Report, out: TextIO) -> None:
    out.write(f"# {rep.command}\n")
    for k, v in rep.params.items():
        out.write(f"#   {k} = {fmt(v) if not isinstance(v, str) else v}\n")
    cells = [list(rep.columns)] + [[fmt(v) for v in row] for row in rep.rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(rep.columns))]
    for r in cells:
        out.write("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() + "\n")
    for n in rep.notes:
        out.write(f"# {n}\n")


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else fmt(v)
    return v


def write_json(rep: Report, out: TextIO) -> None:
    doc = {
        "command": rep.command,
        "params": {k: _json_value(v) for k, v in rep.params.items()},
        "columns": rep.columns,
        "rows": [[_json_value(v) for v in row] for row in rep.rows],
        "notes": rep.notes,
    }
    out.write(json.dumps(doc, indent=2) + "\n")


WRITERS = {"table": write_table, "csv": write_csv, "json": write_json}


# -- argument helpers -------------------------------------------------------

def parse_grid(text: str) -> Grid:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must look like t_min:t_max:count")
    try:
        return Grid(float(parts[0]), float(parts[1]), int(parts[2]))
    except (ValueError, DomainError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def quad_spec(args) -> QuadratureSpec:
    """``--tol`` beats ``CONFORMA_TOL``, which beats the library default."""
    tol = args.tol
    if tol is None and os.environ.get(TOL_ENV):
        try:
            tol = float(os.environ[TOL_ENV])
        except ValueError:
            raise DomainError(f"{TOL_ENV} must be a number, got {os.environ[TOL_ENV]!r}")
    if tol is None:
        return DEFAULT_QUAD
    return QuadratureSpec(rel_tol=tol, abs_tol=DEFAULT_QUAD.abs_tol,
                          max_subdiv=DEFAULT_QUAD.max_subdiv,
                          nodes_per_panel=DEFAULT_QUAD.nodes_per_panel)


def sample_points(args) -> list[float]:
    if args.grid is not None:
        return args.grid.points()
    if args.t is not None:
        return list(args.t)
    raise DomainError("give --t or --grid")


def backend_of(args) -> Optional[D.DerivBackend]:
    return {"auto": None, "limit": D.LIMIT_QUOTIENT, "reduction": D.REDUCTION}[args.backend]


def _common(p: argparse.ArgumentParser, points=True, fmt_default="table"):
    p.add_argument("--alpha", type=float, required=True, help="order")
    if points:
        g = p.add_mutually_exclusive_group()
        g.add_argument("--t", type=parse_floats, help="evaluation point(s), comma separated")
        g.add_argument("--grid", type=parse_grid, help="t_min:t_max:count")
    p.add_argument("--tol", type=float, default=None, help="relative quadrature tolerance")
    p.add_argument("--format", choices=sorted(WRITERS), default=fmt_default)


def _table_params(p: argparse.ArgumentParser):
    p.add_argument("--kind", choices=L.KINDS)
    p.add_argument("--p", type=float, help="exponent for t_pow")
    p.add_argument("--lam", type=float, default=1.0, help="rate for frac_exp")
    p.add_argument("--omega", type=float, default=1.0, help="frequency for frac_sin/frac_cos")
    p.add_argument("--k", type=float, help="damping for damped")
    p.add_argument("--inner", choices=[k for k in L.KINDS if k != "damped"], default="frac_sin")


def table_params(args) -> dict:
    base = {"lam": args.lam, "omega": args.omega}
    if args.p is not None:
        base["p"] = args.p
    if args.kind == "damped":
        if args.k is None:
            raise DomainError("damped entry needs --k")
        return {"k": args.k, "inner": args.inner, "inner_params": base}
    return base


# -- subcommands ------------------------------------------------------------

def cmd_deriv(args, side: str) -> Report:
    f = compile_expr(args.f)
    bk = backend_of(args)
    base = args.a if side == "left" else args.b
    o = make_order(args.alpha)
    params = {"f": args.f, "alpha": args.alpha, "n": o.n, "beta": o.beta,
              ("a" if side == "left" else "b"): base}
    if args.count > 1:
        params["count"] = args.count
        fn = D.sequential_left_deriv if side == "left" else D.sequential_right_deriv
        op = lambda t: fn(f, base, args.alpha, args.count, t, bk)
    elif side == "left" and args.g is not None:
        g = compile_expr(args.g)
        params["g"] = args.g
        op = lambda t: D.chain_deriv(f, g, base, args.alpha, t, bk)
    elif side == "left":
        op = lambda t: D.higher_left_deriv(f, base, o, t, bk)
    else:
        op = lambda t: D.higher_right_deriv(f, base, o, t, bk)
    pts = sample_points(args)
    # the reduction path only touches derivative hooks; surface domain errors of f itself
    for t in pts:
        f(t)
    rows = [[t, op(t)] for t in pts]
    return Report("deriv" if side == "left" else "rderiv", params, ["t", "value"], rows)


def cmd_integ(args, side: str) -> Report:
    spec = quad_spec(args)
    base = args.a if side == "left" else args.b
    params = {"alpha": args.alpha, ("a" if side == "left" else "b"): base}
    if args.power is not None:
        mu = args.power
        src = f"{'(t-' if side == 'left' else '('}{base!r}{')' if side == 'left' else '-t)'}^{mu!r}"
        f = compile_expr(src)
        params["f"] = src
    else:
        if args.f is None:
            raise DomainError("give --f or --power")
        f = compile_expr(args.f)
        params["f"] = args.f
    pts = sample_points(args)
    if args.semigroup is not None:
        if side != "left" or base != 0.0:
            raise DomainError("--semigroup is defined for the left integral based at 0")
        params["mu"] = args.semigroup
        rows = [[t, I.semigroup_residual(f, args.alpha, args.semigroup, t, spec)] for t in pts]
        return Report("integ", params, ["t", "residual"], rows)
    if args.rl:
        if side != "left":
            raise DomainError("--rl is available for the left integral only")
        params["kind"] = "riemann-liouville"
        rows = [[t, I.rl_integral(f, base, args.alpha, t, spec)] for t in pts]
        return Report("integ", params, ["t", "value"], rows)
    fn = I.left_integral if side == "left" else I.right_integral
    cols = ["t", "value"]
    rows = []
    for t in pts:
        row = [t, fn(f, base, args.alpha, t, spec)]
        if args.power is not None:
            row.append(I.power_integral_closed(args.power, args.alpha, base, side, t))
        rows.append(row)
    if args.power is not None:
        cols.append("closed")
    return Report("integ" if side == "left" else "rinteg", params, cols, rows)


def cmd_series(args) -> Report:
    if (args.kind is None) == (args.f is None):
        raise DomainError("give exactly one of --kind or --f")
    if args.kind is not None:
        s = S.builtin_series(args.kind, args.t0, args.alpha, args.K)
        src = args.kind
    else:
        s = S.taylor_coeffs(compile_expr(args.f), args.t0, args.alpha, args.K)
        src = args.f
    params = {"source": src, "t0": args.t0, "alpha": args.alpha, "K": args.K,
              "radius": s.radius}
    if args.dump:
        return Report("series", params, [], text=s.dumps())
    if args.estimate_radius:
        return Report("series", params, ["declared_radius", "ratio_radius"],
                      [[s.radius, S.ratio_radius(s)]])
    if args.t is None and args.grid is None:
        return Report("series", params, ["k", "coeff"], [[k, c] for k, c in enumerate(s.coeffs)])
    cols = ["t", "value"]
    if args.kind is not None:
        cols.append("closed")
    if args.bound_M is not None:
        cols.append("remainder_bound")
    rows = []
    for t in sample_points(args):
        row = [t, S.eval_series(s, t)]
        if args.kind is not None:
            row.append(S.closed_form(args.kind, args.t0, args.alpha)(t))
        if args.bound_M is not None:
            row.append(S.remainder_bound(args.bound_M, args.K, args.alpha, args.t0, t))
        rows.append(row)
    return Report("series", params, cols, rows)


def cmd_laplace(args) -> Report:
    spec = quad_spec(args)
    if (args.kind is None) == (args.f is None):
        raise DomainError("give exactly one of --kind or --f")
    params = {"alpha": args.alpha, "t0": args.t0}
    if args.kind is not None:
        tp = table_params(args)
        f = L.table_function(args.kind, tp, args.t0, args.alpha)
        growth = L.table_growth(args.kind, tp) if args.growth is None else args.growth
        params["kind"] = args.kind
    else:
        f = compile_expr(args.f)
        growth = 0.0 if args.growth is None else args.growth
        params["f"] = args.f
    params["growth"] = growth
    cols = ["s", "value"]
    if args.kind is not None:
        cols.append("table")
    if args.f_at_a is not None:
        cols.append("deriv_transform")
        params["f_at_a"] = args.f_at_a
    rows = []
    for s in args.s:
        F = L.laplace_numeric(f, L.TransformQuery(args.t0, args.alpha, s, growth), spec)
        row = [s, F]
        if args.kind is not None:
            row.append(L.laplace_table(args.kind, tp, args.t0, args.alpha, s))
        if args.f_at_a is not None:
            row.append(L.laplace_of_deriv(F, args.f_at_a, s))
        rows.append(row)
    return Report("laplace", params, cols, rows)


def cmd_table(args) -> Report:
    if args.kind is None:
        raise DomainError("table needs --kind")
    tp = table_params(args)
    params = {"kind": args.kind, "alpha": args.alpha, "t0": args.t0}
    rows = [[s, L.laplace_table(args.kind, tp, args.t0, args.alpha, s)] for s in args.s]
    return Report("table", params, ["s", "value"], rows)


def cmd_solve(args) -> Report:
    params = {"lambda": args.lam, "y0": args.y0, "alpha": args.alpha, "a": args.a}
    if args.picard is not None:
        params["picard"] = args.picard
        op = lambda t: O.picard_partial(args.lam, args.y0, args.a, args.alpha, args.picard, t)
    else:
        op = lambda t: O.solve_scalar(args.lam, args.y0, args.a, args.alpha, t)
    rows = [[t, op(t)] for t in sample_points(args)]
    return Report("solve", params, ["t", "y"], rows)


def read_system(path: str):
    """``n``, then ``n`` rows of ``A``, then ``c``; blank lines and ``#`` comments skipped."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln.split("#", 1)[0].split() for ln in fh]
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc.strerror}") from None
    lines = [ln for ln in lines if ln]
    try:
        if not lines or len(lines[0]) != 1:
            raise ValueError("first line must hold n")
        n = int(lines[0][0])
        if n < 1 or len(lines) != n + 2:
            raise ValueError(f"expected {n + 2} non-empty lines, found {len(lines)}")
        A = np.array([[float(x) for x in row] for row in lines[1:n + 1]])
        c = np.array([float(x) for x in lines[n + 1]])
        if A.shape != (n, n) or c.shape != (n,):
            raise ValueError(f"A must be {n}x{n} and c must have {n} entries")
    except ValueError as exc:
        raise DomainError(f"{path}: {exc}") from None
    return A, c


def cmd_system(args) -> Report:
    spec = quad_spec(args)
    A, c = read_system(args.file)
    n = A.shape[0]
    params = {"file": args.file, "alpha": args.alpha, "a": args.a}
    if args.expm:
        rows = []
        for t in sample_points(args):
            E = O.frac_matrix_exp(A, args.a, args.alpha, t)
            rows += [[t, i] + list(E[i]) for i in range(n)]
        return Report("system", params, ["t", "row"] + [f"e{j + 1}" for j in range(n)], rows)
    forcing = None
    if args.f:
        exprs = [e for e in args.f.split(";")]
        if len(exprs) != n:
            raise DomainError(f"--f needs {n} semicolon-separated expressions, got {len(exprs)}")
        fns = [compile_expr(e) for e in exprs]
        forcing = lambda t: np.array([float(fn(t)) for fn in fns])
        params["f"] = args.f
    sysm = O.LinearFracSystem(A, c, args.a, args.alpha, forcing)
    cols = ["t"] + [f"y{i + 1}" for i in range(n)]
    if args.check:
        cols += [f"res{i + 1}" for i in range(n)]
    rows = []
    for t in sample_points(args):
        y = O.solve_system(sysm, t, spec)
        row = [t] + list(y)
        if args.check:
            if t > args.a:
                row += list(O.residual(sysm, lambda s: O.solve_system(sysm, s, spec), t))
            else:
                row += [0.0] * n
        rows.append(row)
    return Report("system", params, cols, rows)


def cmd_gronwall(args) -> Report:
    spec = quad_spec(args)
    r = compile_expr(args.f)
    g = O.GronwallInstance(r, args.delta, args.k, args.a, args.b, args.alpha)
    rep = O.gronwall_check(g, args.count, spec)
    params = {"r": args.f, "delta": args.delta, "k": args.k, "a": args.a, "b": args.b,
              "alpha": args.alpha, "tol": rep.tol}
    rows = []
    for i, t in enumerate(rep.t):
        held = bool(rep.hypothesis_held[i])
        if not held:
            status = "hypothesis-fails"
        elif i in rep.violations:
            status = "violated"
        else:
            status = "ok"
        rows.append([float(t), rep.r[i], rep.hypothesis_slack[i], rep.conclusion_slack[i], status])
    notes = [f"hypothesis held at {int(rep.hypothesis_held.sum())}/{rep.t.size} points; "
             f"bound violations: {rep.violations.size}"]
    return Report("gronwall", params,
                  ["t", "r", "hypothesis_slack", "conclusion_slack", "status"], rows, notes)


def cmd_export(args) -> Report:
    spec = quad_spec(args)
    f = compile_expr(args.f)
    o = make_order(args.alpha)
    params = {"f": args.f, "alpha": args.alpha, "a": args.a}
    rows = []
    for t in sample_points(args):
        rows.append([t, float(f(t)), D.higher_left_deriv(f, args.a, o, t),
                     I.left_integral(f, args.a, o, t, spec)])
    return Report("export", params, ["t", "f", "deriv", "integral"], rows)


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="conforma",
                                 description="Conformable fractional calculus from the shell.")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, side in (("deriv", "left"), ("rderiv", "right")):
        p = sub.add_parser(name, help=f"{side} conformable derivative of any order")
        p.add_argument("--f", required=True, help="expression in t")
        if side == "left":
            p.add_argument("--a", type=float, default=0.0, help="base point")
            p.add_argument("--g", help="inner function: evaluate the chain rule for f(g(t))")
        else:
            p.add_argument("--b", type=float, required=True, help="terminal point")
        p.add_argument("--count", type=int, default=1, help="sequential applications")
        p.add_argument("--backend", choices=("auto", "limit", "reduction"), default="auto")
        _common(p)
        p.set_defaults(run=lambda a, side=side: cmd_deriv(a, side))

    for name, side in (("integ", "left"), ("rinteg", "right")):
        p = sub.add_parser(name, help=f"{side} conformable integral of any order")
        p.add_argument("--f", help="expression in t")
        if side == "left":
            p.add_argument("--a", type=float, default=0.0, help="base point")
            p.add_argument("--rl", action="store_true", help="Riemann-Liouville integral instead")
            p.add_argument("--semigroup", type=float, metavar="MU",
                           help="print the composition-identity residual with second order MU")
        else:
            p.add_argument("--b", type=float, required=True, help="terminal point")
            p.set_defaults(rl=False, semigroup=None)
        p.add_argument("--power", type=float, metavar="MU",
                       help="integrate the distance to the base point raised to MU; "
                            "adds the closed form")
        _common(p)
        p.set_defaults(run=lambda a, side=side: cmd_integ(a, side))

    p = sub.add_parser("series", help="fractional power series")
    p.add_argument("--kind", choices=("frac_exp", "frac_sin", "frac_cos", "frac_geom"))
    p.add_argument("--f", help="expression in t (numeric coefficients, K <= 4)")
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--K", type=int, default=10)
    p.add_argument("--bound-M", dest="bound_M", type=float,
                   help="add the remainder bound with this derivative bound")
    p.add_argument("--estimate-radius", action="store_true")
    p.add_argument("--dump", action="store_true", help="print the plain-text series form")
    _common(p)
    p.set_defaults(run=cmd_series)

    p = sub.add_parser("laplace", help="numeric fractional Laplace transform")
    p.add_argument("--f", help="expression in t")
    _table_params(p)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--s", type=parse_floats, required=True, help="transform variable(s)")
    p.add_argument("--growth", type=float, help="growth constant of f in the scaled variable")
    p.add_argument("--f-at-a", dest="f_at_a", type=float,
                   help="also print the transform of the derivative, s F - f(a)")
    _common(p, points=False)
    p.set_defaults(run=cmd_laplace)

    p = sub.add_parser("table", help="closed-form Laplace table entry")
    _table_params(p)
    p.add_argument("--t0", type=float, default=0.0)
    p.add_argument("--s", type=parse_floats, required=True)
    _common(p, points=False)
    p.set_defaults(run=cmd_table)

    p = sub.add_parser("solve", help="scalar equation T y = lambda y")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--y0", type=float, required=True)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--picard", type=int, metavar="N", help="N-th successive approximation instead")
    _common(p)
    p.set_defaults(run=cmd_solve)

    p = sub.add_parser("system", help="linear system T y = A y + f(t)")
    p.add_argument("--file", required=True, help="n, then n rows of A, then c")
    p.add_argument("--f", help="forcing, one expression per component separated by ';'")
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--expm", action="store_true", help="print the fundamental matrix instead")
    p.add_argument("--check", action="store_true", help="add residual columns")
    _common(p)
    p.set_defaults(run=cmd_system)

    p = sub.add_parser("gronwall", help="check the Gronwall bound on a grid")
    p.add_argument("--f", required=True, help="the function r(t)")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--count", type=int, default=11, help="grid size")
    _common(p, points=False)
    p.set_defaults(run=cmd_gronwall)

    p = sub.add_parser("export", help="sampled f, derivative and integral as CSV")
    p.add_argument("--f", required=True)
    p.add_argument("--a", type=float, default=0.0)
    _common(p, fmt_default="csv")
    p.set_defaults(run=cmd_export)
    return ap


def run(argv: Optional[Sequence[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    """Parse ``argv``, run the subcommand, write the report; returns the exit code."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        rep = args.run(args)
    except NumericFailure as exc:
        err.write(f"conforma: numeric failure: {exc}\n")
        return EXIT_NUMERIC
    except (ConformaError, ValueError) as exc:
        err.write(f"conforma: error: {exc}\n")
        return EXIT_USER
    if rep.text is not None:
        out.write(rep.text)
    else:
        WRITERS[args.format](rep, out)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
