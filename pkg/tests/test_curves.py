"""Curve generation, tie pooling, and pointwise metrics."""

import math
import random
from fractions import Fraction

import pytest

from rocch import (
    ABOVE_ALL_SCORES,
    BELOW_ALL_SCORES,
    ClassLabel,
    ConfusionCounts,
    RocPoint,
    ScoredExample,
    accuracy,
    generate_roc_curve,
    lift_at,
    precision_at,
    rates_from_counts,
    threshold_curve_metrics,
    tp_at,
)

P = ClassLabel.POSITIVE
N = ClassLabel.NEGATIVE


def make_examples(pairs, weights=None):
    weights = weights or [1.0] * len(pairs)
    return [
        ScoredExample(f"e{i}", label, score, w)
        for i, ((label, score), w) in enumerate(zip(pairs, weights))
    ]


def curve_points(curve):
    return [(cp.point.fp, cp.point.tp) for cp in curve.points]


TIE_CASE = [(P, 0.9), (N, 0.8), (P, 0.7), (N, 0.7), (N, 0.5)]


class TestGenerateRocCurve:
    def test_tied_pair_emits_single_segment(self):
        curve = generate_roc_curve(make_examples(TIE_CASE), "ca")
        assert curve_points(curve) == [
            (0.0, 0.0),
            (0.0, 0.5),
            (1 / 3, 0.5),
            (2 / 3, 1.0),
            (1.0, 1.0),
        ]

    def test_thresholds_descend_with_sentinels(self):
        curve = generate_roc_curve(make_examples(TIE_CASE), "ca")
        assert [cp.threshold for cp in curve.points] == [
            ABOVE_ALL_SCORES,
            0.9,
            0.8,
            0.7,
            BELOW_ALL_SCORES,
        ]

    def test_perfect_ranking_touches_top_left(self):
        pairs = [(P, 0.9), (P, 0.8), (N, 0.4), (N, 0.3)]
        curve = generate_roc_curve(make_examples(pairs), "perfect")
        assert curve_points(curve) == [(0, 0), (0, 0.5), (0, 1), (0.5, 1), (1, 1)]

    def test_all_tied_is_chance_diagonal(self):
        pairs = [(P, 0.5), (N, 0.5), (P, 0.5), (N, 0.5)]
        curve = generate_roc_curve(make_examples(pairs), "flat")
        assert curve_points(curve) == [(0.0, 0.0), (1.0, 1.0)]

    def test_rejects_single_class(self):
        with pytest.raises(ValueError, match="degenerate class distribution"):
            generate_roc_curve(make_examples([(P, 0.4), (P, 0.2)]), "only-pos")
        with pytest.raises(ValueError, match="degenerate class distribution"):
            generate_roc_curve(make_examples([(N, 0.4), (N, 0.2)]), "only-neg")

    def test_rejects_empty_and_non_finite(self):
        with pytest.raises(ValueError):
            generate_roc_curve([], "none")
        with pytest.raises(ValueError):
            ScoredExample("e", P, math.nan)
        with pytest.raises(ValueError):
            ScoredExample("e", P, math.inf)
        with pytest.raises(ValueError):
            ScoredExample("e", P, 0.5, weight=0.0)

    def test_permutation_invariance(self):
        rng = random.Random(11)
        for _ in range(50):
            pairs = [
                (P if rng.random() < 0.5 else N, rng.choice([0.1, 0.3, 0.3, 0.7, 0.9]))
                for _ in range(20)
            ]
            pairs += [(P, 0.5), (N, 0.5)]
            weights = [rng.choice([0.5, 1.0, 2.5]) for _ in pairs]
            examples = make_examples(pairs, weights)
            reference = generate_roc_curve(examples, "c")
            for _ in range(5):
                shuffled = examples[:]
                rng.shuffle(shuffled)
                assert generate_roc_curve(shuffled, "c") == reference

    def test_integer_weight_equals_duplication(self):
        rng = random.Random(23)
        for _ in range(30):
            pairs = [
                (P if rng.random() < 0.5 else N, round(rng.random(), 1)) for _ in range(12)
            ]
            pairs += [(P, 0.5), (N, 0.4)]
            weights = [float(rng.randint(1, 4)) for _ in pairs]
            weighted = [
                ScoredExample(f"e{i}", lab, sc, w)
                for i, ((lab, sc), w) in enumerate(zip(pairs, weights))
            ]
            duplicated = [
                ScoredExample(f"e{i}", lab, sc)
                for i, ((lab, sc), w) in enumerate(zip(pairs, weights))
                for _ in range(int(w))
            ]
            assert curve_points(generate_roc_curve(weighted, "w")) == curve_points(
                generate_roc_curve(duplicated, "d")
            )


def ordered_variant(examples, positives_first):
    """Rebreak ties into distinct scores with a chosen within-group order."""
    groups = {}
    for ex in examples:
        groups.setdefault(ex.score, []).append(ex)
    out = []
    rank = len(examples)
    for score in sorted(groups, reverse=True):
        block = sorted(groups[score], key=lambda e: (e.is_positive != positives_first, e.example_id))
        for ex in block:
            out.append(ScoredExample(ex.example_id, ex.label, float(rank), ex.weight))
            rank -= 1
    return out


class TestTieBisection:
    def random_examples(self, rng):
        n = rng.randint(4, 40)
        pairs = [
            (P if rng.random() < 0.5 else N, rng.choice([0.1, 0.2, 0.2, 0.5, 0.5, 0.9]))
            for _ in range(n)
        ]
        pairs += [(P, 0.2), (N, 0.5)]  # both classes guaranteed
        return make_examples(pairs)

    def test_vertices_lie_on_both_orderings(self):
        rng = random.Random(97)
        for _ in range(200):
            examples = self.random_examples(rng)
            pooled = generate_roc_curve(examples, "c")
            optimistic = generate_roc_curve(ordered_variant(examples, True), "opt")
            pessimistic = generate_roc_curve(ordered_variant(examples, False), "pess")
            opt_pts = set(curve_points(optimistic))
            pess_pts = set(curve_points(pessimistic))
            for fp, tp in curve_points(pooled):
                assert (fp, tp) in opt_pts
                assert (fp, tp) in pess_pts

    def test_area_is_exact_average_of_orderings(self):
        from rocch import auc

        rng = random.Random(31)
        for _ in range(200):
            examples = self.random_examples(rng)
            pooled = auc(generate_roc_curve(examples, "c"))
            optimistic = auc(generate_roc_curve(ordered_variant(examples, True), "opt"))
            pessimistic = auc(generate_roc_curve(ordered_variant(examples, False), "pess"))
            assert pooled == pytest.approx((optimistic + pessimistic) / 2, abs=1e-12)

    def test_segment_midpoints_average_the_orderings(self):
        rng = random.Random(53)
        for _ in range(100):
            examples = self.random_examples(rng)
            pooled = generate_roc_curve(examples, "c")
            optimistic = generate_roc_curve(ordered_variant(examples, True), "opt")
            pessimistic = generate_roc_curve(ordered_variant(examples, False), "pess")
            pts = curve_points(pooled)
            for (f1, _), (f2, _) in zip(pts, pts[1:]):
                if f2 <= f1:
                    continue
                mid = (f1 + f2) / 2
                blended = (tp_at(optimistic, mid) + tp_at(pessimistic, mid)) / 2
                assert tp_at(pooled, mid) == pytest.approx(blended, abs=1e-12)


class TestRates:
    def test_direct_ratio(self):
        counts = ConfusionCounts(tp_count=50, fp_count=20, tn_count=80, fn_count=50)
        assert rates_from_counts(counts) == RocPoint(0.2, 0.5)

    def test_never_and_always_alarm(self):
        assert rates_from_counts(ConfusionCounts(0, 0, 30, 70)) == RocPoint(0.0, 0.0)
        assert rates_from_counts(ConfusionCounts(70, 30, 0, 0)) == RocPoint(1.0, 1.0)

    def test_zero_totals_rejected(self):
        with pytest.raises(ValueError):
            rates_from_counts(ConfusionCounts(0, 5, 5, 0))
        with pytest.raises(ValueError):
            rates_from_counts(ConfusionCounts(5, 0, 0, 5))


class TestAccuracy:
    def test_skewed_prior_never_alarm(self):
        assert accuracy(RocPoint(0, 0), Fraction(1, 1000)) == 0.999

    def test_always_alarm_equals_prior(self):
        assert accuracy(RocPoint(1, 1), 0.3) == pytest.approx(0.3)

    def test_formula_matches_counting(self):
        # 10 examples at prior 0.5: point (0.2, 0.5) -> 5*0.5 correct positives
        # + 5*0.8 correct negatives = 6.5 of 10.
        assert accuracy(RocPoint(0.2, 0.5), 0.5) == pytest.approx(0.65)

    def test_complementary_endpoints(self):
        for p in (0.01, 0.25, 0.5, 0.9):
            assert accuracy(RocPoint(0, 0), p) + accuracy(RocPoint(1, 1), p) == pytest.approx(1.0)


class TestThresholdMetrics:
    def test_clean_selection(self):
        assert precision_at(RocPoint(0, 0.5), 50, 50) == pytest.approx(1.0)
        assert lift_at(RocPoint(0, 0.5), 50, 50) == pytest.approx(2.0)

    def test_select_everything(self):
        assert precision_at(RocPoint(1, 1), 30, 70) == pytest.approx(0.3)
        assert lift_at(RocPoint(1, 1), 30, 70) == pytest.approx(1.0)

    def test_on_diagonal_is_chance(self):
        assert precision_at(RocPoint(0.2, 0.2), 40, 40) == pytest.approx(0.5)
        assert lift_at(RocPoint(0.2, 0.2), 40, 40) == pytest.approx(1.0)

    def test_empty_selection_reported_absent(self):
        assert precision_at(RocPoint(0, 0), 10, 10) is None
        assert lift_at(RocPoint(0, 0), 10, 10) is None

    def test_records_skip_endpoints(self):
        curve = generate_roc_curve(make_examples(TIE_CASE), "ca")
        records = threshold_curve_metrics(curve, p_total=2, n_total=3)
        assert [rec.threshold for rec in records] == [0.9, 0.8, 0.7]
        assert records[0].recall == 0.5
        assert records[0].precision == pytest.approx(1.0)
        # (1/3, 0.5): one of two positives among 1 + 1 selected
        assert records[1].precision == pytest.approx(0.5)
        assert records[1].lift == pytest.approx(0.5 * 5 / 2)


class TestTpAt:
    def test_interpolates_and_tops_verticals(self):
        curve = generate_roc_curve(make_examples(TIE_CASE), "ca")
        assert tp_at(curve, 0.0) == 0.5  # top of the vertical stretch
        assert tp_at(curve, 1.0) == 1.0
        assert tp_at(curve, 0.5) == pytest.approx(0.5 + (0.5 - 1 / 3) / (1 / 3) * 0.5)
