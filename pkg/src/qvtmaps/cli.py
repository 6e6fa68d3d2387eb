"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 verification mismatch,
3 no witness found by an existence search.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from . import census, fmio, jsonfmt, poincare, tiler
from .surfmap import FlagMapError, summarize
from .vertex_type import InvalidVertexType, VertexType, analyze_type

EXIT_OK, EXIT_INPUT, EXIT_MISMATCH, EXIT_NO_WITNESS = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for verification failures
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _fmt_angle(x: float) -> str:
    return f"{x:.12f} ({x / math.pi:.12f} pi)"


def cmd_solve_type(args) -> int:
    t = VertexType.parse(args.type)
    ta = analyze_type(t)
    if args.json:
        sys.stdout.write(jsonfmt.dumps(ta.to_dict()))
        return EXIT_OK
    print(f"type        {t}")
    print(f"alpha       {ta.alpha}")
    print(f"class       {ta.curvature_class}")
    if ta.edge_length is not None:
        print(f"edge length {ta.edge_length:.15f}")
        for k, m in sorted(ta.metrics.items()):
            print(f"  {k:>3}-gon  theta={_fmt_angle(m.theta)}  R={m.R:.12f}  r={m.r:.12f}")
        print(f"residual    {ta.angle_residual():.3e}")
    return EXIT_OK


def cmd_build_f(args) -> int:
    f = poincare.build_fundamental_polygon(args.p)
    rep = poincare.trace_cycles(f)
    if args.json:
        Path(args.json).write_text(jsonfmt.dumps(rep.to_dict()))
    print(f"F({f.p}): {rep.boundary_vertex_count} boundary vertices, "
          f"{len(rep.pairings)} side pairings, simple={f.is_simple()}")
    print(f"labeling: {rep.labeling_note}")
    for pr in rep.pairings:
        print(f"  pair {pr['source']} -> {pr['target']}")
    print(f"{'cycle':<32} {'measured':>22} {'m':>3} {'residual':>10}  expected   verdict")
    for c in rep.cycles:
        members = ",".join(c.members)
        print(f"{members:<32} {c.measured_sum:>22.17g} {c.nearest_m:>3} {c.residual:>10.2e}  "
              f"{c.expected_sum_text or '-':<9}  {c.verdict}")
    print(f"all proper: {rep.all_proper}  all match: {rep.all_match}")
    if not rep.partition_ok(f.labels):
        return EXIT_MISMATCH
    return EXIT_OK if rep.all_match else EXIT_MISMATCH


def cmd_tile(args) -> int:
    f = poincare.build_fundamental_polygon(args.p)
    try:
        patch = tiler.expand(f, args.depth)
    except tiler.DedupCollision as exc:
        print(f"dedup collision: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    summary = tiler.summarize_patch(patch)
    tiler.render_svg(patch, args.svg)
    if args.json:
        Path(args.json).write_text(jsonfmt.dumps(summary.to_dict()))
    print(json.dumps(summary.to_dict()))
    return EXIT_OK if summary.homogeneous and summary.polyhedral else EXIT_MISMATCH


def cmd_census(args) -> int:
    t = VertexType.parse(args.type)
    orientable = True if args.orientable else False if args.nonorientable else None
    res = census.enumerate_maps(
        t, args.chi, polyhedral=args.polyhedral, orientable=orientable,
        mode="first" if args.first else "exhaustive",
        time_limit=args.time_limit, order_seed=args.seed)
    path = census.write_result(res, args.out)
    st = res.stats
    print(f"{t} chi={args.chi}: {len(res.maps)} map(s), nodes={st.nodes}, "
          f"complete={st.complete}, {st.wall_time:.2f}s -> {path}")
    if args.first and not res.maps:
        return EXIT_NO_WITNESS
    return EXIT_OK


def cmd_inspect(args) -> int:
    m = fmio.read(args.file)
    s = summarize(m)
    d = s.to_dict()
    d["digest"] = m.digest()
    if args.json:
        sys.stdout.write(jsonfmt.dumps(d))
    else:
        for k, v in d.items():
            print(f"{k:<14} {v}")
    return EXIT_OK


def cmd_dual(args) -> int:
    m = fmio.read(args.src)
    fmio.write(args.dst, m.dual())
    return EXIT_OK


def cmd_vt_check(args) -> int:
    ob = poincare.vt_obstruction_p33(args.p)
    if args.json:
        sys.stdout.write(jsonfmt.dumps(ob.to_dict()))
    else:
        extra = (f" (i, j) = ({ob.edge_contacts}, {ob.vertex_contacts})"
                 if ob.edge_contacts is not None else "")
        print(f"p={ob.p}: {ob.verdict}{extra}; {ob.note}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qvtmaps", description="Homogeneous [p,p,p,3] tilings and map census.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    sp = sub.add_parser("solve-type", help="angle sum, class and edge length of a vertex type")
    sp.add_argument("type", help="comma-separated face sizes, e.g. 5,5,5,3")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_solve_type)

    sp = sub.add_parser("build-f", help="build F(p) and check its vertex cycles")
    sp.add_argument("p", type=int)
    sp.add_argument("--json", metavar="PATH", help="write the cycle report as JSON")
    sp.set_defaults(func=cmd_build_f)

    sp = sub.add_parser("tile", help="expand a patch of the tiling, check it and render SVG")
    sp.add_argument("p", type=int)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--svg", required=True)
    sp.add_argument("--json", metavar="PATH", help="write the patch summary as JSON")
    sp.set_defaults(func=cmd_tile)

    sp = sub.add_parser("census", help="enumerate maps of a vertex type on a surface")
    sp.add_argument("--type", required=True)
    sp.add_argument("--chi", type=int, required=True)
    sp.add_argument("--polyhedral", action="store_true")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--orientable", action="store_true")
    g.add_argument("--nonorientable", action="store_true")
    sp.add_argument("--first", action="store_true", help="stop at the first map found")
    sp.add_argument("--out", required=True, help="output directory")
    sp.add_argument("--time-limit", type=float, default=None, help="seconds")
    sp.add_argument("--seed", type=int, default=None, help="shuffle the branching order")
    sp.set_defaults(func=cmd_census)

    sp = sub.add_parser("inspect", help="summarize a .fm map")
    sp.add_argument("file")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_inspect)

    sp = sub.add_parser("dual", help="write the dual of a .fm map")
    sp.add_argument("src")
    sp.add_argument("dst")
    sp.set_defaults(func=cmd_dual)

    sp = sub.add_parser("vt-check", help="vertex-transitivity obstruction for [p,p,p,3]")
    sp.add_argument("p", type=int)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_vt_check)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InvalidVertexType, poincare.NotHyperbolic, census.CensusError,
            fmio.FmFormatError, FlagMapError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
