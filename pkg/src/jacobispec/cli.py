"""Command-line interface: quadrature dumps, transforms, solves, sweeps, self-test.

Exit codes: 0 success, 1 usage error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

import numpy as np

from .convergence import DOMAINS, fit_algebraic_rate, fit_exponential_rate, sweep
from .poisson import CHEBYSHEV_PARITY, JACOBI02, SingularSystemError, default_domains, max_collocation_error, solve_3d
from .problems import PROBLEMS, get_problem
from .quadrature import EigenvalueError, build_rule
from .selftest import SUITES, run_selftest
from .transform import NodalValues, forward

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2
CSV_HEADER = ("N_r", "domain", "error", "seconds")
BASES = (JACOBI02, CHEBYSHEV_PARITY)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _nr_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid N_r list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty N_r list")
    if any(v < 6 for v in values):
        raise argparse.ArgumentTypeError("N_r values must be >= 6")
    if values != sorted(set(values)):
        raise argparse.ArgumentTypeError("N_r values must be strictly ascending")
    return values


def _nr(text: str) -> int:
    values = _nr_list(text)
    if len(values) != 1:
        raise argparse.ArgumentTypeError(f"expected a single N_r, got {text!r}")
    return values[0]


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _table(fieldnames, rows, fmt: str, extra: dict | None = None) -> str:
    if fmt == "json":
        doc = {"rows": [dict(zip(fieldnames, r)) for r in rows]}
        doc.update(extra or {})
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fieldnames)
    for r in rows:
        w.writerow([_fmt(v) if isinstance(v, float) else v for v in r])
    for key, value in (extra or {}).items():
        buf.write(f"# {key}: {json.dumps(value)}\n")
    return buf.getvalue()


# --- subcommands -----------------------------------------------------------------


def cmd_quadrature(args) -> int:
    rule = build_rule((args.alpha, args.beta), args.n)
    rows = [(i, float(x), float(w)) for i, (x, w) in enumerate(zip(rule.nodes, rule.weights))]
    _emit(_table(("i", "node", "weight"), rows, args.format), args.output)
    return EXIT_OK


def cmd_transform(args) -> int:
    rule = build_rule((args.alpha, args.beta), args.n)
    if args.values is not None:
        values = np.array([float(v) for v in args.values.split(",")])
    else:
        values = np.loadtxt(args.values_file, dtype=float, ndmin=1)
    if values.size != rule.size:
        raise UsageError(f"expected {rule.size} nodal values for N={args.n}, got {values.size}")
    coeffs = forward(NodalValues(rule, values)).coeffs
    rows = [(m, float(c)) for m, c in enumerate(coeffs)]
    _emit(_table(("m", "coefficient"), rows, args.format), args.output)
    return EXIT_OK


def _file_source(path: str, n_r: int, n_theta: int, n_phi: int, basis: str):
    """Nodal source triple from a ``r theta phi value`` table in grid order."""
    from .poisson import _mesh
    from .sph_harm import build_grid

    try:
        table = np.loadtxt(path, dtype=float, ndmin=2)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read source file: {exc}") from None
    grid = build_grid(n_theta, n_phi)
    doms = default_domains(n_r, basis)
    expected = sum(d.size for d in doms) * n_theta * n_phi
    if table.shape != (expected, 4):
        raise UsageError(f"source file must have {expected} rows of 'r theta phi value', got {table.shape}")
    out, start = [], 0
    for d in doms:
        r, th, ph = (a.ravel() for a in _mesh(d, grid))
        block = table[start : start + r.size]
        start += r.size
        same_r = np.where(np.isinf(r), np.isinf(block[:, 0]), np.isclose(block[:, 0], r, rtol=1e-9, atol=1e-12))
        if not (np.all(same_r) and np.allclose(block[:, 1], th, atol=1e-9) and np.allclose(block[:, 2], ph, atol=1e-9)):
            raise UsageError(f"source file points do not match the {d.kind} collocation grid")
        out.append(block[:, 3].reshape((d.size, n_theta, n_phi)))
    return tuple(out)


def _grid_table(n_r: int, n_theta: int, n_phi: int, basis: str, solution=None) -> str:
    from .poisson import _mesh
    from .sph_harm import build_grid

    grid = build_grid(n_theta, n_phi)
    lines = []
    for k, d in enumerate(default_domains(n_r, basis)):
        r, th, ph = (a.ravel() for a in _mesh(d, grid))
        vals = np.zeros(r.size) if solution is None else solution.values[k].ravel()
        lines += [" ".join(_fmt(v) for v in row) for row in zip(r, th, ph, vals)]
    return "\n".join(lines) + "\n"


def cmd_solve(args) -> int:
    if args.write_grid:
        Path(args.write_grid).write_text(_grid_table(args.nr, args.n_theta, args.n_phi, args.basis))
        return EXIT_OK
    if args.source == "file":
        if not args.file:
            raise UsageError("--source file requires --file")
        source = _file_source(args.file, args.nr, args.n_theta, args.n_phi, args.basis)
        solution = None
    else:
        problem = get_problem(args.source)
        source, solution = problem.source, problem.solution
    t0 = time.perf_counter()
    sol = solve_3d(source, n_r=args.nr, n_theta=args.n_theta, n_phi=args.n_phi, nucleus_basis=args.basis)
    seconds = 0.0 if args.no_timing else time.perf_counter() - t0
    if solution is None:
        _emit(_grid_table(args.nr, args.n_theta, args.n_phi, args.basis, sol), args.output)
        return EXIT_OK
    rows = [(args.nr, d, max_collocation_error(sol, solution, d), seconds) for d in DOMAINS]
    _emit(_table(CSV_HEADER, rows, args.format), args.output)
    return EXIT_OK


def cmd_converge(args) -> int:
    if args.source in ("file",):
        raise UsageError("converge needs a built-in source with a known solution")
    bases = BASES if args.basis == "both" else (args.basis,)
    records = sweep(args.source, args.nr, bases, args.n_theta, args.n_phi)
    label = (lambda r: f"{r.domain}@{r.basis}") if len(bases) > 1 else (lambda r: r.domain)
    rows = [(r.n_r, label(r), r.error, 0.0 if args.no_timing else r.seconds) for r in records]
    extra = {}
    for b in bases:
        nuc = [r for r in records if r.basis == b and r.domain == "nucleus"]
        ns, es = [r.n_r for r in nuc], [r.error for r in nuc]
        if args.source == "sqrt":
            extra[f"algebraic_rate[{b}]"] = round(fit_algebraic_rate(ns, es), 6)
        elif args.source == "smooth":
            extra[f"exponential_rate[{b}]"] = round(fit_exponential_rate(ns, es), 6)
    _emit(_table(CSV_HEADER, rows, args.format, extra), args.output)
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = run_selftest(args.suite, perturb_weight=args.perturb_weight)
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.name} ({len(res.checks)} checks, {res.seconds:.2f} s)")
        for c in res.failures() if not args.verbose else res.checks:
            mark = "ok" if c.passed else "FAILED"
            print(f"    {mark}: {c.name}: {c.value:.3e} (tol {c.tol:.0e})")
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERICAL


# --- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="jacobispec", description="Jacobi-Gauss-Lobatto spectral tools and Poisson solver.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def out_opts(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", "-o", help="write to this file instead of stdout")

    def grid_opts(p):
        p.add_argument("--n-theta", type=int, default=17)
        p.add_argument("--n-phi", type=int, default=16)
        p.add_argument("--no-timing", action="store_true", help="write 0 in the seconds column")

    p = sub.add_parser("quadrature", help="Gauss-Lobatto nodes and weights")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--n", type=int, required=True)
    out_opts(p)
    p.set_defaults(func=cmd_quadrature)

    p = sub.add_parser("transform", help="nodal values -> Jacobi coefficients")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--n", type=int, required=True)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--values", help="comma-separated nodal values, ascending nodes")
    src.add_argument("--values-file", help="whitespace-separated nodal values")
    out_opts(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("solve", help="solve Laplacian f = S and report collocation errors")
    p.add_argument("--source", choices=sorted(PROBLEMS) + ["file"], default="smooth")
    p.add_argument("--file", help="'r theta phi value' table on the collocation grid (with --source file)")
    p.add_argument("--write-grid", metavar="PATH", help="write the collocation grid template and exit")
    p.add_argument("--nr", type=_nr, default=17)
    p.add_argument("--basis", choices=BASES, default=JACOBI02)
    grid_opts(p)
    out_opts(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("converge", help="convergence sweep over N_r")
    p.add_argument("--source", choices=sorted(PROBLEMS), default="smooth")
    p.add_argument("--nr", type=_nr_list, default=[9, 13, 17, 21, 25, 33])
    p.add_argument("--basis", choices=BASES + ("both",), default=JACOBI02)
    grid_opts(p)
    out_opts(p)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("selftest", help="run the closed-form checks")
    p.add_argument("--suite", action="append", choices=list(SUITES), help="run only this suite (repeatable)")
    p.add_argument("--verbose", "-v", action="store_true")
    p.add_argument("--perturb-weight", type=float, default=0.0, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"jacobispec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SingularSystemError, EigenvalueError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"jacobispec: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"jacobispec: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
