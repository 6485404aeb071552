"""Choosing frontier classifiers under priors, costs, and constraints.

Deployment conditions (class prior plus error costs) reduce to a single
number: the slope of the iso-performance lines along which expected cost is
constant.  Selection then reads the frontier at that slope.  Linearly
constrained criteria (maximum false alarm rate, bounded caseload) instead
pick the feasible frontier point with the best true positive rate, which may
sit inside a segment and is then realized by a vertex mixture.

Exact inputs stay exact: priors and costs may be given as ``fractions.Fraction``
(or any Real); arithmetic happens in the operand types and only the final
result is coerced to float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .curves import RocPoint
from .hull import HullVertex, RocchHull, VertexMixture, resolve_operating_point, slope_vertex
from .validation import as_range, check_finite, check_open_unit_interval, check_positive


@dataclass(frozen=True, slots=True)
class OperatingConditions:
    """Deployment environment: positive-class prior and error costs."""

    p_pos: float
    cost_fp: float = 1.0
    cost_fn: float = 1.0

    def __post_init__(self):
        check_open_unit_interval("p_pos", self.p_pos)
        check_positive("cost_fp", self.cost_fp)
        check_positive("cost_fn", self.cost_fn)


@dataclass(frozen=True, slots=True)
class SlopeRange:
    """Closed interval of iso-performance slopes; ``hi`` may be infinite."""

    lo: float
    hi: float

    def __post_init__(self):
        if self.lo < 0 or math.isnan(self.lo):
            raise ValueError(f"slope range lo must be >= 0, got {self.lo!r}")
        if self.hi < self.lo or math.isnan(self.hi):
            raise ValueError(f"slope range needs lo <= hi, got [{self.lo!r}, {self.hi!r}]")

    def contains(self, m: float) -> bool:
        return self.lo <= m <= self.hi


@dataclass(frozen=True, slots=True)
class LinearConstraint:
    """Feasibility region ``a * TP + b * FP <= c`` with a, b >= 0."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            check_finite(name, getattr(self, name))
        if self.a < 0 or self.b < 0:
            raise ValueError("constraint coefficients must be non-negative")
        if self.a == 0 and self.b == 0:
            raise ValueError("constraint coefficients must not both be zero")

    def value_at(self, point: RocPoint) -> float:
        return float(self.a * point.tp + self.b * point.fp)


def workforce_constraint(p_total: float, n_total: float, capacity: float) -> LinearConstraint:
    """Bound the expected number of selected cases: TP*P + FP*N <= K."""
    check_positive("p_total", p_total)
    check_positive("n_total", n_total)
    return LinearConstraint(p_total, n_total, capacity)


@dataclass(frozen=True, slots=True)
class DominatorRow:
    slope_range: SlopeRange
    vertex: HullVertex


@dataclass(frozen=True, slots=True)
class DominatorTable:
    """Which frontier vertex is optimal on each slope interval.

    Rows are ordered by increasing slope; the intervals share endpoints and
    cover [0, inf).
    """

    rows: tuple[DominatorRow, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))


def iso_slope(cond: OperatingConditions) -> float:
    """Slope of the iso-performance lines for the given conditions."""
    # Cost ratio and prior odds are formed separately so that round ratios
    # (5:1 priors, 25x costs) survive float conversion exactly.
    return float((cond.cost_fp / cond.cost_fn) * ((1 - cond.p_pos) / cond.p_pos))


def expected_cost(point: RocPoint, cond: OperatingConditions) -> float:
    """Expected per-instance cost of operating at a point."""
    return float(
        cond.p_pos * (1 - point.tp) * cond.cost_fn + (1 - cond.p_pos) * point.fp * cond.cost_fp
    )


def select_min_cost(hull: RocchHull, cond: OperatingConditions) -> HullVertex:
    """The frontier vertex with minimum expected cost under the conditions."""
    return slope_vertex(hull, iso_slope(cond))


def posterior_threshold(cond: OperatingConditions) -> float:
    """Probability cutoff above which alarming is cheaper than staying quiet.

    Applies when scores are calibrated posterior probabilities; only the two
    costs matter.
    """
    return float(cond.cost_fp / (cond.cost_fp + cond.cost_fn))


def sensitivity(hull: RocchHull, p_pos, cost_fp, cost_fn) -> tuple[SlopeRange, tuple[HullVertex, ...]]:
    """Slope range and candidate vertices for boxed, imprecise conditions.

    Each argument is a scalar or a (lo, hi) pair.  The slope is monotone in
    each parameter separately, so the extremes occur at box corners.  A
    single returned vertex means the choice of classifier is insensitive to
    the stated imprecision.
    """
    p_range = as_range("p_pos", p_pos)
    fp_range = as_range("cost_fp", cost_fp)
    fn_range = as_range("cost_fn", cost_fn)
    slopes = [
        iso_slope(OperatingConditions(p, cfp, cfn))
        for p in p_range
        for cfp in fp_range
        for cfn in fn_range
    ]
    rng = SlopeRange(min(slopes), max(slopes))

    candidates = []
    n_slopes = len(hull.slopes)
    for i, v in enumerate(hull.vertices):
        left = hull.slopes[i - 1] if i > 0 else math.inf
        right = hull.slopes[i] if i < n_slopes else 0.0
        if right <= rng.hi and left >= rng.lo:
            candidates.append(v)
    return rng, tuple(candidates)


def dominator_table(hull: RocchHull) -> DominatorTable:
    """One row per vertex with the slope interval on which it is optimal."""
    n_slopes = len(hull.slopes)
    rows = []
    for i in range(len(hull.vertices) - 1, -1, -1):
        left = hull.slopes[i - 1] if i > 0 else math.inf
        right = hull.slopes[i] if i < n_slopes else 0.0
        rows.append(DominatorRow(SlopeRange(right, left), hull.vertices[i]))
    return DominatorTable(tuple(rows))


def select_neyman_pearson(hull: RocchHull, fp_max: float) -> tuple[RocPoint, HullVertex | VertexMixture]:
    """Best true positive rate subject to FP <= fp_max.

    Returns the achieved point and the vertex (or adjacent-vertex mixture)
    that realizes it.
    """
    return resolve_operating_point(hull, fp_max)


def select_constrained(hull: RocchHull, constraint: LinearConstraint) -> tuple[RocPoint, HullVertex | VertexMixture]:
    """Maximize TP over the frontier subject to a linear budget.

    The optimum is the last feasible vertex or the intersection of the
    budget line with a hull segment, whichever reaches the higher rate; the
    boundary itself counts as feasible.  Ties prefer fewer false alarms.
    """
    if constraint.c < 0:
        raise ValueError(f"infeasible constraint: even (0, 0) violates the bound {constraint.c!r}")
    vs = hull.vertices
    last_ok = 0
    for i, v in enumerate(vs):
        if constraint.value_at(v.point) <= constraint.c:
            last_ok = i
        else:
            break
    # Among equally sensitive vertices (a trailing tp plateau), take the
    # earliest so alarms are not spent for nothing.
    best = last_ok
    while best > 0 and vs[best - 1].tp == vs[last_ok].tp:
        best -= 1
    best_vertex = vs[best]

    if last_ok + 1 < len(vs):
        left, right = vs[last_ok], vs[last_ok + 1]
        slope = hull.slopes[last_ok]
        if math.isinf(slope):
            # Vertical first segment: the budget line crosses it at fp = 0,
            # reachable as a blend of the segment's endpoints.
            if constraint.a > 0:
                tp = (constraint.c - constraint.b * left.fp) / constraint.a
                if left.tp < tp < right.tp:
                    weight = (tp - left.tp) / (right.tp - left.tp)
                    return RocPoint(left.fp, tp), VertexMixture(left, right, weight)
        elif slope > 0:
            denom = constraint.a * slope + constraint.b
            x = (constraint.c - constraint.a * left.tp + constraint.a * slope * left.fp) / denom
            if left.fp < x < right.fp:
                tp = left.tp + slope * (x - left.fp)
                tp = min(1.0, max(0.0, tp))
                if tp > best_vertex.tp:
                    return resolve_operating_point(hull, x)
    return best_vertex.point, best_vertex


def select_by_metric(hull: RocchHull, metric, constraint: LinearConstraint | None = None):
    """Maximize a caller-supplied metric(fp, tp) over the frontier.

    Candidates are the vertices plus, when a constraint is given, the
    intersections of the budget line with hull segments; infeasible
    candidates are dropped.  The result is only guaranteed optimal when the
    metric never decreases in TP and never increases in FP, which is the
    caller's responsibility.  Ties prefer fewer false alarms.
    """
    candidates: list[RocPoint] = [v.point for v in hull.vertices]
    if constraint is not None:
        if constraint.c < 0:
            raise ValueError("infeasible constraint")
        for left, right, slope in hull.segments():
            if math.isinf(slope):
                continue
            denom = constraint.a * slope + constraint.b
            if denom == 0:
                continue
            x = (constraint.c - constraint.a * left.tp + constraint.a * slope * left.fp) / denom
            if left.fp < x < right.fp:
                tp = min(1.0, max(0.0, left.tp + slope * (x - left.fp)))
                candidates.append(RocPoint(x, tp))
        candidates = [p for p in candidates if constraint.value_at(p) <= constraint.c + 1e-12]
        if not candidates:
            raise ValueError("constraint excludes the entire frontier")
    best = None
    best_score = None
    for p in candidates:
        score = metric(p.fp, p.tp)
        if best is None or score > best_score or (score == best_score and p.fp < best.fp):
            best, best_score = p, score
    for v in hull.vertices:
        if v.point == best:
            return best, v
    _, resolution = resolve_operating_point(hull, best.fp)
    return best, resolution
