"""Command-line front end: ``qeclab {qec,table,region,verify,poly,matrix}``.

Exit codes: 0 success, 1 usage error, 2 computation failure.
"""
from __future__ import annotations

import argparse
import os
import re
import sys
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .graphs import GraphError, from_spec, parse_edge_list, path_graph
from .matrices import build_a, det_a, infinite_psd, is_psd_a
from .numerics import ConsistencyError, ConvergenceError, as_rational, min_eigenvalue
from .polynomials import SPECIAL_CASES, s_eval_closed, s_poly, s_roots_special
from .qec import CSV_HEADER, qec_report
from .region import DEFAULT_N_LIST, DEFAULT_S_RANGE, DEFAULT_STEPS, DEFAULT_T_RANGE, region_sample
from .verify import run_suites

EXIT_OK, EXIT_USAGE, EXIT_FAILURE = 0, 1, 2

_GENERATOR = re.compile(r"^(path|cycle|complete|star):\d+$")


class UsageError(Exception):
    pass


@dataclass
class Config:
    psd_tol: float | None = None
    bisect_tol: float = 1e-12
    s_range: tuple[float, float] = DEFAULT_S_RANGE
    t_range: tuple[float, float] = DEFAULT_T_RANGE
    steps: tuple[int, int] = DEFAULT_STEPS
    n_list: tuple[int, ...] = DEFAULT_N_LIST
    out: str | None = None
    fmt: str = "text"

    def validate(self) -> None:
        if not self.bisect_tol > 0:
            raise UsageError("bisection tolerance must be > 0")
        if self.psd_tol is not None and self.psd_tol < 0:
            raise UsageError("psd tolerance must be >= 0")
        if self.s_range[0] > self.s_range[1] or self.t_range[0] > self.t_range[1]:
            raise UsageError("grid bounds must be ordered (min <= max)")


def write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _parse_grid(spec: str):
    try:
        vals = [float(x) for x in spec.split(",")]
    except ValueError:
        raise UsageError(f"--grid expects numbers, got {spec!r}") from None
    if len(vals) == 5:
        steps = (int(vals[4]), int(vals[4]))
    elif len(vals) == 6:
        steps = (int(vals[4]), int(vals[5]))
    else:
        raise UsageError("--grid expects smin,smax,tmin,tmax,steps or smin,smax,tmin,tmax,s_steps,t_steps")
    return (vals[0], vals[1]), (vals[2], vals[3]), steps


def _rational_arg(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _fmt_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_qec(args, cfg: Config) -> int:
    source = args.input
    if _GENERATOR.match(source):
        graph, graph_id = from_spec(source), source
    elif os.path.exists(source):
        graph, graph_id = parse_edge_list(Path(source).read_text()), source
    else:
        raise UsageError(f"{source!r} is neither a generator spec (kind:n) nor a readable file")
    report = qec_report(graph, graph_id, bisect_tol=cfg.bisect_tol)
    if cfg.fmt == "csv":
        _emit(CSV_HEADER + "\n" + report.csv_row() + "\n", cfg.out)
    else:
        _emit(report.to_text(), cfg.out)
    return EXIT_OK


def cmd_table(args, cfg: Config) -> int:
    if not 2 <= args.n_min <= args.n_max:
        raise UsageError("need 2 <= n_min <= n_max")
    rows = [CSV_HEADER]
    for n in range(args.n_min, args.n_max + 1):
        report = qec_report(path_graph(n), f"path:{n}", bisect_tol=cfg.bisect_tol, jacobi_max_n=0)
        rows.append(report.csv_row())
    _emit("\n".join(rows) + "\n", cfg.out)
    return EXIT_OK


def cmd_region(args, cfg: Config) -> int:
    grid = region_sample(cfg.s_range, cfg.t_range, cfg.steps, cfg.n_list)
    if grid.monotonicity_violations():
        raise ConsistencyError(f"{grid.monotonicity_violations()} cells violate monotonicity in n")
    prefix = cfg.out or "region"
    if cfg.fmt in ("text", "csv", "both"):
        write_atomic(f"{prefix}.csv", grid.to_csv())
        print(f"wrote {prefix}.csv ({grid.cell_count} cells)")
    if cfg.fmt in ("svg", "both", "text"):
        write_atomic(f"{prefix}.svg", grid.to_svg())
        print(f"wrote {prefix}.svg")
    return EXIT_OK


def cmd_verify(args, cfg: Config) -> int:
    results = run_suites(args.n_max, tol=args.tol, seed=args.seed)
    lines = [r.line() for r in results]
    failed = [r for r in results if not r.passed]
    lines.append(f"{len(results) - len(failed)}/{len(results)} suites passed")
    for r in failed:
        lines.append(f"failing identity: {r.name}")
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK if not failed else EXIT_FAILURE


def cmd_poly(args, cfg: Config) -> int:
    a, b, n = args.a, args.b, args.n
    p = s_poly(a, b, n)
    lines = [
        f"S_{n}({_fmt_rational(a)}, {_fmt_rational(b)}; t) = {p}",
        "coefficients: " + " ".join(_fmt_rational(c) for c in p.coeffs),
    ]
    if args.t is not None:
        exact = p(args.t)
        lines.append(f"value at t={_fmt_rational(args.t)}: {_fmt_rational(exact)} "
                     f"({float(exact):.12g}; closed form {s_eval_closed(a, b, n, float(args.t)):.12g})")
    if args.roots:
        if (a, b) not in SPECIAL_CASES:
            raise UsageError("closed-form roots exist only for (a, b) in {(2,1), (1,1/2), (1,1), (3,1)}")
        lines.append("roots: " + " ".join(f"{r:.12g}" for r in s_roots_special((a, b), n)))
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def cmd_matrix(args, cfg: Config) -> int:
    s, t = args.s, args.t
    if args.n == "inf":
        verdict = infinite_psd(s, t)
        _emit(f"A_inf({_fmt_rational(s)}, {_fmt_rational(t)}) psd: {verdict}\n", cfg.out)
        return EXIT_OK
    try:
        n = int(args.n)
    except ValueError:
        raise UsageError(f"--n must be a positive integer or 'inf', got {args.n!r}") from None
    if n < 1:
        raise UsageError("--n must be >= 1")
    m = build_a(n, s, t)
    lines = [f"A_{n}({_fmt_rational(s)}, {_fmt_rational(t)})"]
    if n <= 12:
        lines += ["  " + " ".join(f"{_fmt_rational(x):>6s}" for x in row) for row in m.entries]
    lines.append(f"det: {_fmt_rational(det_a(n, s, t))}")
    lines.append(f"min eigenvalue: {min_eigenvalue(m):.12g}")
    lines.append(f"psd (criterion): {is_psd_a(n, s, t, method='criterion', tol=0 if cfg.psd_tol is None else cfg.psd_tol)}")
    lines.append(f"psd (eigen): {is_psd_a(n, s, t, method='eigen', tol=cfg.psd_tol)}")
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="tolerance override (bisection for qec/table, PSD for matrix, "
                             "every suite for verify)")
    common.add_argument("--out", default=None, help="output file (region: output prefix)")
    common.add_argument("--format", dest="fmt", choices=("text", "csv", "svg", "both"), default=None)

    parser = _Parser(prog="qeclab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("qec", parents=[common], help="QEC report for an edge-list file or generator")
    p.add_argument("input", help="edge-list file, or generator spec path:n | cycle:n | complete:n | star:n")
    p.set_defaults(func=cmd_qec)

    p = sub.add_parser("table", parents=[common], help="CSV table of path-graph quantities")
    p.add_argument("n_min", type=int)
    p.add_argument("n_max", type=int)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("region", parents=[common], help="PSD region of A_n(s, t) as CSV and SVG")
    p.add_argument("--grid", default=None, help="smin,smax,tmin,tmax,steps[,t_steps]")
    p.add_argument("--n-list", default=None, help="comma-separated sizes n, default 1,2,3,5,10")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("verify", parents=[common], help="run every verification suite")
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--seed", type=int, default=None, help="defaults to $QECLAB_SEED or 0")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("poly", parents=[common], help="print/evaluate S_n(a, b; t)")
    p.add_argument("--a", type=_rational_arg, required=True)
    p.add_argument("--b", type=_rational_arg, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=_rational_arg, default=None)
    p.add_argument("--roots", action="store_true", help="closed-form roots (special (a, b) only)")
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("matrix", parents=[common], help="det and PSD verdicts for A_n(s, t)")
    p.add_argument("--n", required=True, help="size, or 'inf'")
    p.add_argument("--s", type=_rational_arg, required=True)
    p.add_argument("--t", type=_rational_arg, required=True)
    p.set_defaults(func=cmd_matrix)
    return parser


def _config(args) -> Config:
    cfg = Config(out=args.out)
    if args.command in ("qec", "table") and args.tol is not None:
        cfg.bisect_tol = args.tol
    if args.command == "matrix":
        cfg.psd_tol = args.tol
    if args.command == "region":
        cfg.fmt = args.fmt or "both"
        if args.grid:
            cfg.s_range, cfg.t_range, cfg.steps = _parse_grid(args.grid)
        if args.n_list:
            try:
                cfg.n_list = tuple(int(x) for x in args.n_list.split(","))
            except ValueError:
                raise UsageError(f"--n-list expects integers, got {args.n_list!r}") from None
            if any(n < 1 for n in cfg.n_list):
                raise UsageError("--n-list entries must be >= 1")
    else:
        cfg.fmt = args.fmt or ("csv" if args.command == "table" else "text")
    cfg.validate()
    return cfg


_NEGATIVE_VALUE = re.compile(r"^-[\d.]")


def _attach_negative_values(argv: list[str]) -> list[str]:
    """Rewrite ``--t -1/4`` as ``--t=-1/4``; argparse would read ``-1/4`` as a flag."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if (tok.startswith("--") and "=" not in tok and i + 1 < len(argv)
                and _NEGATIVE_VALUE.match(argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_attach_negative_values(argv))
    try:
        cfg = _config(args)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"qeclab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphError, ConsistencyError, ConvergenceError, ValueError, OSError, ZeroDivisionError) as exc:
        print(f"qeclab: {args.command} failed: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
