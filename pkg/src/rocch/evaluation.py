"""Experiment harness: fold averaging, synthetic rankings, drift studies.

Also home to the brute-force oracles the test suite checks the fast paths
against: exhaustive cost minimization over raw points and the pairwise rank
statistic equal to trapezoidal curve area.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .curves import (
    ABOVE_ALL_SCORES,
    BELOW_ALL_SCORES,
    ClassLabel,
    CurvePoint,
    RocCurve,
    RocPoint,
    ScoredExample,
    generate_roc_curve,
    tp_at,
)
from .decision import OperatingConditions, expected_cost
from .hull import HullVertex, RocchHull
from .hybrid import ComponentKind, HybridPolicy, classify, policy_for, x_from_conditions
from .validation import check_unit_interval


@dataclass(frozen=True, slots=True)
class FoldedScores:
    """Cross-validation score sets for one classifier."""

    classifier_id: str
    folds: tuple[tuple[object, tuple[ScoredExample, ...]], ...]

    def __post_init__(self):
        folds = tuple((fold_id, tuple(examples)) for fold_id, examples in self.folds)
        object.__setattr__(self, "folds", folds)
        seen: set[str] = set()
        for fold_id, examples in folds:
            labels = {ex.label for ex in examples}
            if labels != {ClassLabel.POSITIVE, ClassLabel.NEGATIVE}:
                raise ValueError(f"fold {fold_id!r} must contain both classes")
            ids = {ex.example_id for ex in examples}
            if ids & seen:
                raise ValueError(f"fold {fold_id!r} shares example ids with an earlier fold")
            seen |= ids


def average_roc(folds: FoldedScores, grid) -> RocCurve:
    """Vertically averaged curve: mean TP across folds at each grid FP.

    The grid must be strictly increasing within [0, 1].  Grid thresholds are
    placeholders (the averaged curve is not a single score sweep); endpoints
    are pinned to (0, 0) and (1, 1).
    """
    grid = [float(g) for g in grid]
    if len(folds.folds) < 2:
        raise ValueError("need at least two folds to average")
    if not grid:
        raise ValueError("empty evaluation grid")
    for g in grid:
        check_unit_interval("grid value", g)
    for a, b in zip(grid, grid[1:]):
        if not b > a:
            raise ValueError("grid must be strictly increasing")

    curves = [
        generate_roc_curve(examples, f"{folds.classifier_id}/{fold_id}")
        for fold_id, examples in folds.folds
    ]
    n = len(curves)
    points = [CurvePoint(ABOVE_ALL_SCORES, RocPoint(0.0, 0.0))]
    for i, g in enumerate(grid):
        mean_tp = sum(tp_at(c, g) for c in curves) / n
        if (g, mean_tp) in ((0.0, 0.0), (1.0, 1.0)):
            continue
        points.append(CurvePoint(float(-i), RocPoint(g, mean_tp)))
    points.append(CurvePoint(BELOW_ALL_SCORES, RocPoint(1.0, 1.0)))
    return RocCurve(f"avg({folds.classifier_id})", tuple(points))


def make_ranking_pair(n: int) -> tuple[list[ScoredExample], list[ScoredExample]]:
    """Two idealized rankers whose curves cross at the half-population cutoff.

    Over a class-balanced population of ``n`` cases, the first ranker pins
    20% of the population (all positives) above everything else and is
    random on the rest; the second pins 20% (all negatives) below everything
    else.  Randomness-on-the-rest is encoded as one tied score block, whose
    pooled segment is exactly the chance diagonal.
    """
    if n % 10 != 0 or n <= 0:
        raise ValueError(f"population size must be a positive multiple of 10, got {n}")
    half = n // 2
    pinned = n // 5

    top_ranker = []
    for i in range(half):
        score = 2.0 if i < pinned else 1.0
        top_ranker.append(ScoredExample(f"p{i:04d}", ClassLabel.POSITIVE, score))
    for i in range(half):
        top_ranker.append(ScoredExample(f"n{i:04d}", ClassLabel.NEGATIVE, 1.0))

    bottom_ranker = []
    for i in range(half):
        bottom_ranker.append(ScoredExample(f"p{i:04d}", ClassLabel.POSITIVE, 1.0))
    for i in range(half):
        score = 0.0 if i < pinned else 1.0
        bottom_ranker.append(ScoredExample(f"n{i:04d}", ClassLabel.NEGATIVE, score))

    return top_ranker, bottom_ranker


def expected_positives_at_cutoff(examples, cutoff: float) -> float:
    """Expected positives among the top ``cutoff`` cases of a ranking.

    Tied blocks contribute proportionally, matching the expectation over a
    uniformly random ordering within each tie.
    """
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    ordered = sorted(examples, key=lambda e: -e.score)
    remaining = float(cutoff)
    total = 0.0
    i = 0
    while i < len(ordered) and remaining > 0:
        j = i
        block_pos = 0.0
        block_all = 0.0
        while j < len(ordered) and ordered[j].score == ordered[i].score:
            block_all += ordered[j].weight
            if ordered[j].is_positive:
                block_pos += ordered[j].weight
            j += 1
        if remaining >= block_all:
            total += block_pos
            remaining -= block_all
        else:
            total += block_pos * remaining / block_all
            remaining = 0.0
        i = j
    return total


def rank_auc(examples) -> float:
    """Pairwise rank statistic: weighted share of positive-over-negative pairs.

    Ties count half.  Quadratic in the number of examples; intended as an
    independent check of trapezoidal curve area.
    """
    positives = [(e.score, e.weight) for e in examples if e.is_positive]
    negatives = [(e.score, e.weight) for e in examples if not e.is_positive]
    if not positives or not negatives:
        raise ValueError("degenerate class distribution")
    num = 0.0
    for sp, wp in positives:
        for sn, wn in negatives:
            if sp > sn:
                num += wp * wn
            elif sp == sn:
                num += 0.5 * wp * wn
    w_pos = sum(w for _, w in positives)
    w_neg = sum(w for _, w in negatives)
    return num / (w_pos * w_neg)


def brute_force_best(points, cond: OperatingConditions) -> RocPoint:
    """Exhaustive minimum-expected-cost point; cost ties prefer fewer alarms."""
    best = None
    best_cost = None
    for point in points:
        cost = expected_cost(point, cond)
        if (
            best is None
            or cost < best_cost - 1e-12
            or (abs(cost - best_cost) <= 1e-12 and point.fp < best.fp)
        ):
            best, best_cost = point, cost
    if best is None:
        raise ValueError("no points supplied")
    return best


def _vertex_rates(policy: HybridPolicy) -> dict[str, list[tuple[float, float, float]]]:
    # Per referenced scored classifier: (threshold, tp, fp) entries sorted by
    # descending threshold, so nested rate draws stay coherent when a mixture
    # blends two thresholds of the same scorer.
    resolution = policy.resolution
    vertices = (
        (resolution,) if isinstance(resolution, HullVertex) else (resolution.left, resolution.right)
    )
    feeds: dict[str, list[tuple[float, float, float]]] = {}
    for vertex, comp in zip(vertices, policy.components()):
        if comp.kind is ComponentKind.SCORED:
            feeds.setdefault(comp.classifier_id, []).append(
                (comp.threshold, vertex.tp, vertex.fp)
            )
    for entries in feeds.values():
        entries.sort(key=lambda e: -e[0])
    return feeds


def simulate_policy(
    policy: HybridPolicy, n_instances: int, p_pos: float, rng: random.Random
) -> tuple[float, float]:
    """Empirical (FP, TP) of a policy over synthetic score feeds.

    Labels are drawn from ``p_pos``; each referenced scorer's feed is drawn
    so that thresholding it reproduces that scorer's vertex rates for the
    instance's class.  Returns observed false and true positive rates.
    """
    feeds = _vertex_rates(policy)
    alarms_pos = alarms_neg = 0
    n_pos = n_neg = 0
    for _ in range(n_instances):
        positive = rng.random() < p_pos
        scores: dict[str, float] = {}
        for classifier_id, entries in feeds.items():
            u = rng.random()
            score = entries[-1][0] - 1.0  # below every threshold
            for threshold, tp_rate, fp_rate in entries:
                rate = tp_rate if positive else fp_rate
                if u < rate:
                    score = threshold
                    break
            scores[classifier_id] = score
        prediction = classify(policy, scores, rng)
        if positive:
            n_pos += 1
            alarms_pos += prediction.value == "Y"
        else:
            n_neg += 1
            alarms_neg += prediction.value == "Y"
    if n_pos == 0 or n_neg == 0:
        raise ValueError("simulation produced a degenerate class distribution")
    return alarms_neg / n_neg, alarms_pos / n_pos


@dataclass(frozen=True, slots=True)
class DriftScenario:
    """A timeline of changing deployment conditions.

    ``n_instances`` > 0 additionally drives an empirical simulation of the
    re-tuned policy at each epoch (seeded, deterministic).
    """

    timeline: tuple[tuple[object, OperatingConditions], ...]
    n_instances: int = 0
    seed: int = 0

    def __post_init__(self):
        timeline = tuple((epoch, cond) for epoch, cond in self.timeline)
        object.__setattr__(self, "timeline", timeline)
        if not timeline:
            raise ValueError("a drift scenario needs at least one epoch")


@dataclass(frozen=True, slots=True)
class DriftEpoch:
    epoch: object
    conditions: OperatingConditions
    x: float
    fixed_cost: float
    hybrid_cost: float
    best_cost: float
    hybrid_empirical_cost: float | None = None

    def to_dict(self) -> dict:
        return {
            "epoch": self.epoch,
            "p_pos": float(self.conditions.p_pos),
            "cost_fp": float(self.conditions.cost_fp),
            "cost_fn": float(self.conditions.cost_fn),
            "x": self.x,
            "fixed_cost": self.fixed_cost,
            "hybrid_cost": self.hybrid_cost,
            "best_cost": self.best_cost,
            "hybrid_empirical_cost": self.hybrid_empirical_cost,
        }


@dataclass(frozen=True, slots=True)
class DriftReport:
    epochs: tuple[DriftEpoch, ...]
    fixed_regret: float
    hybrid_regret: float

    def to_dict(self) -> dict:
        return {
            "epochs": [row.to_dict() for row in self.epochs],
            "fixed_regret": self.fixed_regret,
            "hybrid_regret": self.hybrid_regret,
        }


def run_drift(scenario: DriftScenario, hull: RocchHull, fixed: HullVertex) -> DriftReport:
    """Compare a frozen vertex against the re-tuned hybrid across epochs.

    Per-epoch regret is measured against the exhaustive best frontier vertex
    for that epoch's conditions; the report accumulates it for both
    strategies.
    """
    rng = random.Random(scenario.seed)
    rows = []
    fixed_regret = 0.0
    hybrid_regret = 0.0
    for epoch, cond in scenario.timeline:
        best_cost = min(expected_cost(v.point, cond) for v in hull.vertices)
        x = x_from_conditions(hull, conditions=cond)
        policy = policy_for(hull, x)
        hybrid_cost = expected_cost(policy.expected_point, cond)
        fixed_cost = expected_cost(fixed.point, cond)
        empirical = None
        if scenario.n_instances > 0:
            fp_hat, tp_hat = simulate_policy(policy, scenario.n_instances, cond.p_pos, rng)
            empirical = expected_cost(
                RocPoint(min(1.0, fp_hat), min(1.0, tp_hat)), cond
            )
        fixed_regret += fixed_cost - best_cost
        hybrid_regret += hybrid_cost - best_cost
        rows.append(
            DriftEpoch(epoch, cond, x, fixed_cost, hybrid_cost, best_cost, empirical)
        )
    return DriftReport(tuple(rows), fixed_regret, hybrid_regret)
