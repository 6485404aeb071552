"""Command-line interface.

Subcommands cover the batch workflow: build curves from scored predictions,
maintain the hull, pick operating points under stated conditions, report
sensitivity and dominator tables, compute areas, run the hybrid over a score
file, and dump plot-ready data.

Exit codes: 0 success, 1 usage error, 2 data/validation error.  Failures
emit one machine-readable JSON line on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction
from pathlib import Path

from .curves import RocPoint, generate_roc_curve
from .decision import (
    OperatingConditions,
    dominator_table,
    expected_cost,
    iso_slope,
    select_constrained,
    select_min_cost,
    select_neyman_pearson,
    sensitivity,
    workforce_constraint,
)
from .hull import (
    DegenerateRule,
    HullVertex,
    RocchHull,
    VertexMixture,
    auc,
    build_hull,
    insert,
)
from .hybrid import classify_traced, policy_for
from .io import (
    FileFormatError,
    ScoreFileError,
    fmt12,
    instance_scores,
    parse_scores,
    read_curves,
    read_hull,
    sniff_artifact,
    write_curves,
    write_hull,
    write_plot_data,
    write_predictions,
)

SEED_ENV_VAR = "ROCCH_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rational(text: str) -> Fraction:
    # Fractions keep CLI-supplied priors/costs exact ("1/6" as well as "0.25").
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_curves_input(path: str) -> list:
    text = _read_text(path)
    kind = sniff_artifact(text)
    if kind == "scores":
        grouped = parse_scores(text)
        return [generate_roc_curve(examples, cid) for cid, examples in grouped.items()]
    if kind == "curves":
        return read_curves(text)
    raise FileFormatError(f"{path}: expected a score CSV or curves JSON, found a hull file")


def _rule_text(vertex: HullVertex) -> str:
    prov = vertex.provenance
    if isinstance(prov, DegenerateRule):
        return f"degenerate={prov.value}"
    threshold = "-" if prov.threshold is None else fmt12(prov.threshold)
    return f"classifier={prov.classifier_id} threshold={threshold}"


def _vertex_text(vertex: HullVertex) -> str:
    return f"fp={fmt12(vertex.fp)} tp={fmt12(vertex.tp)} {_rule_text(vertex)}"


def _print_selection(resolution) -> None:
    if isinstance(resolution, VertexMixture):
        print(f"selection: mixture weight={fmt12(resolution.weight)}")
        print(f"  left: {_vertex_text(resolution.left)}")
        print(f"  right: {_vertex_text(resolution.right)}")
    else:
        print(f"selection: vertex {_vertex_text(resolution)}")


def cmd_curve(args) -> int:
    grouped = parse_scores(_read_text(args.scores))
    curves = [generate_roc_curve(examples, cid) for cid, examples in grouped.items()]
    Path(args.out).write_text(write_curves(curves), encoding="utf-8")
    return 0


def cmd_hull(args) -> int:
    curves = _load_curves_input(args.input)
    out = Path(args.out)
    if args.add:
        if not out.exists():
            raise UsageError(f"--add needs an existing hull file at {args.out}")
        hull = read_hull(out.read_text(encoding="utf-8"))
        for curve in curves:
            hull, extended = insert(hull, curve)
            print(f"extended: {str(extended).lower()}")
    else:
        hull = build_hull(curves)
    out.write_text(write_hull(hull), encoding="utf-8")
    return 0


def cmd_select(args) -> int:
    hull = read_hull(_read_text(args.hull))
    modes = [args.prior is not None, args.fp_max is not None, args.caseload is not None]
    if sum(modes) != 1:
        raise UsageError("specify exactly one of --prior, --fp-max, --caseload")

    if args.prior is not None:
        cond = OperatingConditions(args.prior, args.cost_fp, args.cost_fn)
        vertex = select_min_cost(hull, cond)
        print(f"slope: {fmt12(iso_slope(cond))}")
        print(f"x: {fmt12(vertex.fp)}")
        _print_selection(vertex)
        print(f"expected_cost: {fmt12(expected_cost(vertex.point, cond))}")
    elif args.fp_max is not None:
        point, resolution = select_neyman_pearson(hull, float(args.fp_max))
        print(f"x: {fmt12(point.fp)}")
        print(f"point: fp={fmt12(point.fp)} tp={fmt12(point.tp)}")
        _print_selection(resolution)
    else:
        p_total, n_total, capacity = (float(v) for v in args.caseload)
        constraint = workforce_constraint(p_total, n_total, capacity)
        point, resolution = select_constrained(hull, constraint)
        print(f"x: {fmt12(point.fp)}")
        print(f"point: fp={fmt12(point.fp)} tp={fmt12(point.tp)}")
        _print_selection(resolution)
        print(f"expected_cases: {fmt12(constraint.value_at(point))}")
    return 0


def cmd_sensitivity(args) -> int:
    hull = read_hull(_read_text(args.hull))
    slope_range, vertices = sensitivity(
        hull, args.prior, tuple(args.cost_fp), tuple(args.cost_fn)
    )
    hi = "inf" if slope_range.hi == float("inf") else fmt12(slope_range.hi)
    print(f"slope_range: [{fmt12(slope_range.lo)}, {hi}]")
    print(f"candidates: {len(vertices)}")
    for vertex in vertices:
        print(f"  {_vertex_text(vertex)}")
    return 0


def cmd_dominators(args) -> int:
    hull = read_hull(_read_text(args.hull))
    table = dominator_table(hull)
    if args.format == "csv":
        print("slope_lo,slope_hi,rule,fp,tp")
        for row in table.rows:
            hi = "inf" if row.slope_range.hi == float("inf") else fmt12(row.slope_range.hi)
            print(
                f"{fmt12(row.slope_range.lo)},{hi},{_rule_text(row.vertex)},"
                f"{fmt12(row.vertex.fp)},{fmt12(row.vertex.tp)}"
            )
    else:
        for row in table.rows:
            if row.slope_range.hi == float("inf"):
                span = f"[{fmt12(row.slope_range.lo)}, inf)"
            else:
                span = f"[{fmt12(row.slope_range.lo)}, {fmt12(row.slope_range.hi)}]"
            print(f"{span} -> {_vertex_text(row.vertex)}")
    return 0


def cmd_auc(args) -> int:
    text = _read_text(args.input)
    kind = sniff_artifact(text)
    if kind == "hull":
        print(f"hull: {fmt12(auc(read_hull(text)))}")
        return 0
    curves = read_curves(text) if kind == "curves" else [
        generate_roc_curve(examples, cid) for cid, examples in parse_scores(text).items()
    ]
    for curve in curves:
        print(f"{curve.classifier_id}: {fmt12(auc(curve))}")
    print(f"hull: {fmt12(auc(build_hull(curves)))}")
    return 0


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from None


def cmd_hybrid(args) -> int:
    hull = read_hull(_read_text(args.hull))
    policy = policy_for(hull, float(args.x))
    feeds = instance_scores(parse_scores(_read_text(args.scores)))
    seed = _default_seed() if args.seed is None else args.seed
    rng = random.Random(seed)
    records = [(example_id, classify_traced(policy, scores, rng)) for example_id, scores in feeds]
    Path(args.out).write_text(write_predictions(records), encoding="utf-8")
    return 0


def _iso_series(hull: RocchHull, cond: OperatingConditions):
    m = iso_slope(cond)
    vertex = select_min_cost(hull, cond)
    candidates = []
    for fp in (0.0, 1.0):
        tp = vertex.tp + m * (fp - vertex.fp)
        if 0.0 <= tp <= 1.0:
            candidates.append((fp, tp))
    if m > 0:
        for tp in (0.0, 1.0):
            fp = vertex.fp + (tp - vertex.tp) / m
            if 0.0 <= fp <= 1.0:
                candidates.append((fp, tp))
    ends = sorted(set(candidates))
    points = [RocPoint(fp, tp) for fp, tp in (ends[0], ends[-1])]
    return f"iso(m={fmt12(m)})", points


def cmd_plot(args) -> int:
    text = _read_text(args.input)
    kind = sniff_artifact(text)
    series = []
    if kind == "hull":
        hull = read_hull(text)
        series.append(("hull", hull.vertex_points()))
    else:
        curves = read_curves(text) if kind == "curves" else [
            generate_roc_curve(examples, cid) for cid, examples in parse_scores(text).items()
        ]
        series.extend((c.classifier_id, c.roc_points()) for c in curves)
        hull = build_hull(curves)

    condition_args = (args.prior, args.cost_fp, args.cost_fn)
    if any(v is not None for v in condition_args):
        if args.prior is None:
            raise UsageError("iso overlays need --prior (costs default to 1)")
        cond = OperatingConditions(
            args.prior,
            args.cost_fp if args.cost_fp is not None else Fraction(1),
            args.cost_fn if args.cost_fn is not None else Fraction(1),
        )
        series.append(_iso_series(hull, cond))
    Path(args.out).write_text(write_plot_data(series), encoding="utf-8")
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="rocch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve", help="build per-classifier ROC curves from a score CSV")
    p.add_argument("scores")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("hull", help="build or extend the convex frontier")
    p.add_argument("input", help="score CSV or curves JSON")
    p.add_argument("--out", required=True)
    p.add_argument("--add", action="store_true", help="insert into the existing hull at --out")
    p.set_defaults(func=cmd_hull)

    p = sub.add_parser("select", help="pick the optimal operating point")
    p.add_argument("hull")
    p.add_argument("--prior", type=_rational)
    p.add_argument("--cost-fp", type=_rational, default=Fraction(1))
    p.add_argument("--cost-fn", type=_rational, default=Fraction(1))
    p.add_argument("--fp-max", type=_rational)
    p.add_argument("--caseload", nargs=3, type=_rational, metavar=("P", "N", "K"))
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("sensitivity", help="slope range and candidates for boxed conditions")
    p.add_argument("hull")
    p.add_argument("--prior", type=_rational, required=True)
    p.add_argument("--cost-fp", nargs=2, type=_rational, required=True, metavar=("LO", "HI"))
    p.add_argument("--cost-fn", nargs=2, type=_rational, required=True, metavar=("LO", "HI"))
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("dominators", help="slope intervals and their optimal classifiers")
    p.add_argument("hull")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_dominators)

    p = sub.add_parser("auc", help="area under each curve and under the hull")
    p.add_argument("input", help="score CSV, curves JSON, or hull JSON")
    p.set_defaults(func=cmd_auc)

    p = sub.add_parser("hybrid", help="classify a score file at a target FP rate")
    p.add_argument("hull")
    p.add_argument("scores")
    p.add_argument("--x", type=_rational, required=True)
    p.add_argument("--seed", type=int, default=None,
                   help=f"coin-flip seed (default: ${SEED_ENV_VAR} or 0)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_hybrid)

    p = sub.add_parser("plot", help="dump (series, fp, tp) TSV with optional iso overlay")
    p.add_argument("input", help="score CSV, curves JSON, or hull JSON")
    p.add_argument("--out", required=True)
    p.add_argument("--prior", type=_rational)
    p.add_argument("--cost-fp", type=_rational)
    p.add_argument("--cost-fn", type=_rational)
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(json.dumps({"error": "usage", "message": str(exc)}), file=sys.stderr)
        return 1
    except ScoreFileError as exc:
        print(
            json.dumps({"error": "data", "message": str(exc), "line": exc.line}),
            file=sys.stderr,
        )
        return 2
    except (ValueError, OSError) as exc:
        print(json.dumps({"error": "data", "message": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
