"""Command-line entry point.

Exit codes: 0 success, 1 a reproduced check failed, 2 usage error,
3 statistically ambiguous bisection, 4 resource budget refusal.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import analysis
from .dust import scan_t
from .errors import BudgetExceeded, InvalidBracket, InvalidParameter
from .exact import RootBracket, isolate_root, theta_closed_form, two_terminal_poly
from .graph import (Graph, make_box, make_hexagonal_patch, make_theta,
                    make_triangular_patch, make_tree_glued)
from .mc import (P_C_TRIANGULAR, McConfig, bisect_tau_c, estimate_F_lattice,
                 estimate_triangle_AB)
from .report import (DUST_FIELDS, LATTICE_FIELDS, estimate_row, line_chart_svg,
                     write_csv)

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_AMBIGUOUS, EXIT_BUDGET = 0, 1, 2, 3, 4


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _run_config(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _grid(text: str) -> list[float]:
    """``start:stop:step`` (inclusive) or a comma list."""
    if ":" in text:
        start, stop, step = (Fraction(s) for s in text.split(":"))
        if step <= 0:
            raise InvalidParameter("grid step must be positive")
        out, x = [], start
        while x <= stop:
            out.append(float(x))
            x += step
        return out
    return [float(s) for s in text.split(",")]


def cmd_exact(args) -> int:
    n = args.n
    if args.what == "theta":
        if args.enumerate:
            g = make_theta(n)
            poly = two_terminal_poly(g, 0, n if args.target == "peak" else 1)
        else:
            poly = theta_closed_form(n, args.target)
        print(poly.to_text())
    elif args.what == "diff":
        print((theta_closed_form(n, "peak") - theta_closed_form(n, "middle")).to_text())
    elif args.what == "root":
        diff = theta_closed_form(n, "middle") - theta_closed_form(n, "peak")
        grid = [k / 1000 for k in range(1, 1000)]
        bracket = None
        for a, b in zip(grid, grid[1:]):
            if diff(Fraction(a)) * diff(Fraction(b)) < 0:
                bracket = RootBracket(a, b)
                break
        if bracket is None:
            print(f"no peak/middle crossing in (0, 1) for n={n}", file=sys.stderr)
            return EXIT_FAILED
        print(f"{isolate_root(diff, bracket, tol=args.tol):.10f}")
    return EXIT_OK


def cmd_poly(args) -> int:
    g = Graph.from_text(Path(args.graph).read_text())
    closed = [tuple(map(int, e.split("-"))) for e in args.closed] if args.closed else ()
    print(two_terminal_poly(g, args.u, args.v, closed, prune=args.prune,
                            workers=args.workers).to_text())
    return EXIT_OK


def cmd_graph(args) -> int:
    kind = args.kind
    if kind == "theta":
        g = make_theta(args.n)
    elif kind == "glued":
        g = make_tree_glued(args.n, args.k)
    elif kind == "box":
        g = make_box(args.d, args.r, args.remove_origin_edge)
    elif kind == "triangular":
        g = make_triangular_patch(args.r)
    else:
        g = make_hexagonal_patch(args.r)
    _emit(g.to_text(), args.out)
    return EXIT_OK


def cmd_tauc(args) -> int:
    cfg = McConfig(seed=args.seed, samples=args.samples, box_radius=args.radius)
    config = _run_config(args)
    try:
        bracket = bisect_tau_c(args.d, cfg, args.lo, args.hi, args.iterations,
                               workers=args.workers)
        status, evals = ("ambiguous" if bracket.ambiguous else "ok"), bracket.evaluations
    except InvalidBracket as exc:
        print(f"ambiguous bracket: {exc}", file=sys.stderr)
        for p, mean, ci in exc.details or ():
            print(f"  F({p}) = {mean} CI {ci}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    rows = [{"tag": "bisect", "d": args.d, "lattice": "hypercubic", "p": p,
             "radius": args.radius, "samples": args.samples, "seed": cfg.seed,
             **estimate_row(est)} for p, est in evals]
    config.update({"bracket_lo": bracket.lo, "bracket_hi": bracket.hi, "status": status})
    _emit(write_csv(LATTICE_FIELDS, rows, config), args.out)
    print(f"tau_c bracket: [{bracket.lo}, {bracket.hi}] ({status})", file=sys.stderr)
    return EXIT_AMBIGUOUS if bracket.ambiguous else EXIT_OK


def cmd_dustpipe(args) -> int:
    grid = _grid(args.grid)
    cfg = McConfig(seed=args.seed, samples=args.samples, box_radius=args.radius)
    curve = scan_t(args.d, args.lam, grid, cfg, workers=args.workers)
    rows = [{"lambda": args.lam, "t": t, "radius": args.radius, "samples": args.samples,
             "seed": args.seed, **estimate_row(est)} for t, est in curve]
    config = _run_config(args)
    text = write_csv(DUST_FIELDS, rows, config)
    if args.format in ("csv", "both"):
        _emit(text, f"{args.out}.csv" if args.out else None)
    if args.format in ("svg", "both"):
        svg = line_chart_svg([t for t, _ in curve], [e.mean for _, e in curve],
                             [e.interval[0] for _, e in curve],
                             [e.interval[1] for _, e in curve],
                             title=f"P(o <-> t e), lambda={args.lam}, d={args.d}, r={args.radius}",
                             ylabel="connection probability")
        _emit(svg, f"{args.out}.svg" if args.out else None)
    return EXIT_OK


def cmd_triangle(args) -> int:
    p = args.p
    cfg = McConfig(seed=args.seed, samples=args.samples, box_radius=args.radius)
    a, b = estimate_triangle_AB(p, cfg, workers=args.workers)
    f_t = estimate_F_lattice("triangular", p, cfg, workers=args.workers)
    f_h = estimate_F_lattice("hexagonal", 1 - p, cfg, workers=args.workers)
    base = {"d": 2, "radius": args.radius, "samples": args.samples, "seed": args.seed}
    rows = [
        {"tag": "A", "lattice": "triangular", "p": p, **base, **estimate_row(a)},
        {"tag": "B", "lattice": "triangular", "p": p, **base, **estimate_row(b)},
        {"tag": "F", "lattice": "triangular", "p": p, **base, **estimate_row(f_t)},
        {"tag": "F", "lattice": "hexagonal", "p": 1 - p, **base, **estimate_row(f_h)},
    ]
    _emit(write_csv(LATTICE_FIELDS, rows, _run_config(args)), args.out)
    return EXIT_OK


def cmd_counterexample(args) -> int:
    beta = args.beta
    n = analysis.smallest_theta_n(beta)
    peak, middle = theta_closed_form(n, "peak"), theta_closed_form(n, "middle")
    if 2 * (n - 1) <= 22:
        g = make_theta(n)
        if two_terminal_poly(g, 0, n) != peak or two_terminal_poly(g, 0, 1) != middle:
            print("closed form disagrees with enumeration", file=sys.stderr)
            return EXIT_FAILED
        source = "enumeration"
    else:
        source = "closed form"
    grid, step = [], Fraction(args.step)
    x = Fraction(str(beta))
    while x < 1:
        grid.append(x)
        x += step
    lines = [f"# beta={beta}", f"# n={n}", f"# threshold={analysis.theta_threshold(n)!r}",
             f"# polynomials={source}", "p,peak,middle,difference,peak_wins"]
    ok = True
    for p in grid:
        a, b = peak(p), middle(p)
        ok &= a > b
        lines.append(f"{float(p)!r},{float(a)!r},{float(b)!r},{float(a - b)!r},{a > b}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_reproduce(args) -> int:
    from .experiments import markdown_report, run_all

    results = run_all(progress=lambda c: print(c.line(), file=sys.stderr))
    Path(args.out).write_text(markdown_report(results))
    return EXIT_OK if all(c.passed for c in results) else EXIT_FAILED


def _mc_flags(p, radius, samples, seed=0):
    p.add_argument("--radius", type=int, default=radius)
    p.add_argument("--samples", type=int, default=samples)
    p.add_argument("--seed", type=int, default=seed)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="percmono", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="theta-graph polynomials, differences and crossings")
    p.add_argument("what", choices=["theta", "diff", "root"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--target", choices=["peak", "middle"], default="peak")
    p.add_argument("--enumerate", action="store_true",
                   help="enumerate edge subsets instead of expanding the closed form")
    p.add_argument("--tol", type=float, default=1e-14)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("poly", help="two-terminal polynomial of a graph file")
    p.add_argument("graph")
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--closed", nargs="*", help="edges to delete, as u-v")
    p.add_argument("--prune", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_poly)

    p = sub.add_parser("graph", help="write a constructed graph in text form")
    p.add_argument("kind", choices=["theta", "glued", "box", "triangular", "hexagonal"])
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--remove-origin-edge", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("tauc", help="bisect for the point where F(p) crosses p")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--lo", type=float, default=0.3)
    p.add_argument("--hi", type=float, default=0.9)
    p.add_argument("--iterations", type=int, default=4)
    _mc_flags(p, radius=32, samples=100_000)
    p.set_defaults(func=cmd_tauc)

    p = sub.add_parser("dustpipe", help="Pipe-Dust connection curve along the first axis edge")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--grid", default="0.1:1.0:0.1")
    p.add_argument("--format", choices=["csv", "svg", "both"], default="csv")
    _mc_flags(p, radius=6, samples=100_000)
    p.set_defaults(func=cmd_dustpipe)

    p = sub.add_parser("triangle", help="triangular/hexagonal A, B and F estimates")
    p.add_argument("--p", type=float, default=P_C_TRIANGULAR)
    _mc_flags(p, radius=32, samples=100_000)
    p.set_defaults(func=cmd_triangle)

    p = sub.add_parser("counterexample", help="theta graph beating monotonicity on [beta, 1)")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--step", default="0.01")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("reproduce-paper", help="run every check and write a markdown report")
    p.add_argument("--out", default="report.md")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidParameter, InvalidBracket, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
