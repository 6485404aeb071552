"""Labeled score data and ROC curves built from ranked examples.

An ROC curve plots false positive rate (x) against true positive rate (y)
as a decision threshold sweeps over a scorer's output.  Curves are built
with a single descending-score pass that emits a point only when the score
changes, so a run of tied scores contributes one pooled segment whose shape
does not depend on the ordering within the tie.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .validation import check_finite, check_open_unit_interval, check_positive, check_unit_interval

# Threshold sentinels for the two degenerate ends of a threshold sweep:
# "score >= ABOVE_ALL_SCORES" alarms on nothing, "score >= BELOW_ALL_SCORES"
# alarms on everything.
ABOVE_ALL_SCORES = math.inf
BELOW_ALL_SCORES = -math.inf


class ClassLabel(enum.Enum):
    """True class of an example: positive ``p`` or negative ``n``."""

    POSITIVE = "p"
    NEGATIVE = "n"

    @classmethod
    def parse(cls, text: str) -> "ClassLabel":
        for member in cls:
            if member.value == text:
                return member
        raise ValueError(f"invalid class label {text!r} (expected 'p' or 'n')")

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class ScoredExample:
    """One labeled instance with a scorer's numeric output.

    Higher scores mean "more positive".  ``weight`` scales the example's
    contribution to rate tallies; non-uniform costs within an error type can
    be expressed by weighting instances proportionally.
    """

    example_id: str
    label: ClassLabel
    score: float
    weight: float = 1.0

    def __post_init__(self):
        if not isinstance(self.label, ClassLabel):
            raise TypeError(f"label must be a ClassLabel, got {self.label!r}")
        check_finite("score", self.score)
        check_positive("weight", self.weight)

    @property
    def is_positive(self) -> bool:
        return self.label is ClassLabel.POSITIVE


@dataclass(frozen=True, slots=True)
class RocPoint:
    """A (false positive rate, true positive rate) pair in the unit square."""

    fp: float
    tp: float

    def __post_init__(self):
        check_unit_interval("fp", self.fp)
        check_unit_interval("tp", self.tp)


@dataclass(frozen=True, slots=True)
class CurvePoint:
    """A curve point together with the decision threshold that realizes it.

    The threshold is the score of the last example tallied before the point
    was emitted: predicting positive iff ``score >= threshold`` reproduces
    the point's rates.  The (0,0) and (1,1) endpoints carry the
    ``ABOVE_ALL_SCORES`` / ``BELOW_ALL_SCORES`` sentinels.
    """

    threshold: float
    point: RocPoint


@dataclass(frozen=True, slots=True)
class RocCurve:
    """Threshold-ordered ROC points for one scorer."""

    classifier_id: str
    points: tuple[CurvePoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        pts = self.points
        if len(pts) < 2:
            raise ValueError("a curve needs at least the two endpoints")
        first, last = pts[0].point, pts[-1].point
        if (first.fp, first.tp) != (0.0, 0.0):
            raise ValueError(f"curve must start at (0, 0), got ({first.fp}, {first.tp})")
        if (last.fp, last.tp) != (1.0, 1.0):
            raise ValueError(f"curve must end at (1, 1), got ({last.fp}, {last.tp})")
        for a, b in zip(pts, pts[1:]):
            if b.point.fp < a.point.fp or b.point.tp < a.point.tp:
                raise ValueError("curve points must be monotone in both rates")
            if not b.threshold < a.threshold:
                raise ValueError("thresholds must be strictly decreasing along the curve")

    def roc_points(self) -> tuple[RocPoint, ...]:
        return tuple(cp.point for cp in self.points)


@dataclass(frozen=True, slots=True)
class ConfusionCounts:
    """Weighted confusion-matrix tallies."""

    tp_count: float
    fp_count: float
    tn_count: float
    fn_count: float

    def __post_init__(self):
        for name in ("tp_count", "fp_count", "tn_count", "fn_count"):
            value = getattr(self, name)
            check_finite(name, value)
            if value < 0:
                raise ValueError(f"{name} must be >= 0, got {value!r}")

    @property
    def p_total(self) -> float:
        return self.tp_count + self.fn_count

    @property
    def n_total(self) -> float:
        return self.fp_count + self.tn_count


def _sweep_order(examples) -> list[ScoredExample]:
    # Canonical total order: descending score, then stable identifiers.  This
    # makes weighted tallies permutation invariant bit-for-bit.
    return sorted(examples, key=lambda e: (-e.score, e.example_id, e.label.value))


def generate_roc_curve(examples, classifier_id: str) -> RocCurve:
    """Build the ROC curve of one scorer from its labeled, scored examples.

    Single pass over the examples in descending score order; a point is
    emitted each time the score changes, so tied scores are pooled into one
    segment.  Tallies add each example's ``weight``, making an example with
    integer weight w equivalent to w unit-weight duplicates.

    Raises ``ValueError`` when the examples do not contain both classes.
    """
    ordered = _sweep_order(examples)
    if not ordered:
        raise ValueError("cannot build a curve from zero examples")

    p_total = 0.0
    n_total = 0.0
    for ex in ordered:
        if ex.is_positive:
            p_total += ex.weight
        else:
            n_total += ex.weight
    if p_total == 0.0 or n_total == 0.0:
        raise ValueError(
            f"degenerate class distribution for {classifier_id!r}: "
            "need at least one positive and one negative example"
        )

    points: list[CurvePoint] = []
    tp_tally = 0.0
    fp_tally = 0.0
    last_score: float | None = None
    for ex in ordered:
        if ex.score != last_score:
            threshold = ABOVE_ALL_SCORES if last_score is None else last_score
            points.append(CurvePoint(threshold, RocPoint(fp_tally / n_total, tp_tally / p_total)))
            last_score = ex.score
        if ex.is_positive:
            tp_tally += ex.weight
        else:
            fp_tally += ex.weight
    points.append(CurvePoint(BELOW_ALL_SCORES, RocPoint(fp_tally / n_total, tp_tally / p_total)))
    return RocCurve(classifier_id, tuple(points))


def rates_from_counts(counts: ConfusionCounts) -> RocPoint:
    """Turn confusion tallies into an ROC point."""
    if counts.p_total <= 0 or counts.n_total <= 0:
        raise ValueError("rates need positive totals for both classes")
    return RocPoint(counts.fp_count / counts.n_total, counts.tp_count / counts.p_total)


def accuracy(point: RocPoint, p_pos) -> float:
    """Expected accuracy of an operating point under a positive-class prior."""
    check_open_unit_interval("p_pos", p_pos)
    return float(p_pos * point.tp + (1 - p_pos) * (1 - point.fp))


def tp_at(curve: RocCurve, fp: float) -> float:
    """Interpolated true positive rate of a curve at a false positive rate.

    On a vertical stretch (several points sharing ``fp``) the topmost value
    is reported, i.e. the best rate the scorer can reach at that budget.
    """
    check_unit_interval("fp", fp)
    pts = curve.roc_points()
    lo = 0
    for i, pt in enumerate(pts):
        if pt.fp <= fp:
            lo = i
        else:
            break
    left = pts[lo]
    if left.fp == fp:
        return left.tp
    right = pts[lo + 1]
    frac = (fp - left.fp) / (right.fp - left.fp)
    return left.tp + frac * (right.tp - left.tp)


def precision_at(point: RocPoint, p_total: float, n_total: float) -> float | None:
    """Fraction of selected cases that are positive; None when nothing is selected."""
    check_positive("p_total", p_total)
    check_positive("n_total", n_total)
    selected = point.tp * p_total + point.fp * n_total
    if selected == 0:
        return None
    return point.tp * p_total / selected


def lift_at(point: RocPoint, p_total: float, n_total: float) -> float | None:
    """Positive rate among selected cases relative to the base rate."""
    check_positive("p_total", p_total)
    check_positive("n_total", n_total)
    selected = point.tp * p_total + point.fp * n_total
    if selected == 0:
        return None
    return point.tp * (p_total + n_total) / selected


@dataclass(frozen=True, slots=True)
class ThresholdMetrics:
    threshold: float
    precision: float | None
    recall: float
    lift: float | None


def threshold_curve_metrics(curve: RocCurve, p_total: float, n_total: float) -> tuple[ThresholdMetrics, ...]:
    """Per-threshold precision / recall / lift for the curve's interior points.

    Recall equals the true positive rate.  The two degenerate endpoints are
    skipped; precision and lift are reported absent where nothing is selected.
    """
    check_positive("p_total", p_total)
    check_positive("n_total", n_total)
    records = []
    for cp in curve.points[1:-1]:
        records.append(
            ThresholdMetrics(
                threshold=cp.threshold,
                precision=precision_at(cp.point, p_total, n_total),
                recall=cp.point.tp,
                lift=lift_at(cp.point, p_total, n_total),
            )
        )
    return tuple(records)
