"""Acceptance gate: one test per exit criterion, in order.

Each criterion prints a PASS/FAIL line (visible under ``pytest -s``) and
enforces its runtime budget where one is stated.
"""

import random
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

from rocch import (
    ClassLabel,
    FeedbackDirection,
    FeedbackSignal,
    KnobTuner,
    OperatingConditions,
    RocPoint,
    auc,
    brute_force_best,
    build_hull,
    expected_cost,
    generate_roc_curve,
    insert,
    iso_slope,
    policy_for,
    select_constrained,
    select_min_cost,
    sensitivity,
    simulate_policy,
    tp_at,
    workforce_constraint,
    x_from_conditions,
)
from rocch.evaluation import DriftScenario, make_ranking_pair, expected_positives_at_cutoff, run_drift

from test_curves import make_examples, ordered_variant

P = ClassLabel.POSITIVE
N = ClassLabel.NEGATIVE

RUNNING_HULL = build_hull(
    [("a", RocPoint(0.1, 0.5)), ("b", RocPoint(0.2, 0.5)), ("c", RocPoint(0.5, 0.9))]
)


@contextmanager
def criterion(name, budget_seconds=None):
    start = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"FAIL: {name}")
        raise
    elapsed = time.monotonic() - start
    if budget_seconds is not None and elapsed >= budget_seconds:
        print(f"FAIL: {name} (runtime {elapsed:.2f}s exceeds {budget_seconds}s)")
        raise AssertionError(f"{name}: runtime {elapsed:.2f}s exceeds {budget_seconds}s budget")
    print(f"PASS: {name} ({elapsed:.2f}s)")


def test_criterion_1_ranked_sweep_conformance_and_tie_bisection():
    with criterion("1. ranked-sweep conformance + tie bisection (1000 sets)", 5.0):
        pairs = [(P, 0.9), (N, 0.8), (P, 0.7), (N, 0.7), (N, 0.5)]
        curve = generate_roc_curve(make_examples(pairs), "ca")
        assert [(cp.point.fp, cp.point.tp) for cp in curve.points] == [
            (0.0, 0.0),
            (0.0, 0.5),
            (1 / 3, 0.5),
            (2 / 3, 1.0),
            (1.0, 1.0),
        ]

        rng = random.Random(1001)
        score_pool = [0.1, 0.2, 0.2, 0.4, 0.5, 0.5, 0.5, 0.8, 0.9]
        for _ in range(1000):
            n = rng.randint(2, 40)
            pairs = [
                (P if rng.random() < 0.5 else N, rng.choice(score_pool)) for _ in range(n)
            ]
            pairs += [(P, 0.4), (N, 0.4)]
            examples = make_examples(pairs)
            pooled = generate_roc_curve(examples, "c")
            opt_pts = {
                (cp.point.fp, cp.point.tp)
                for cp in generate_roc_curve(ordered_variant(examples, True), "o").points
            }
            pess_pts = {
                (cp.point.fp, cp.point.tp)
                for cp in generate_roc_curve(ordered_variant(examples, False), "p").points
            }
            for cp in pooled.points:
                vertex = (cp.point.fp, cp.point.tp)
                assert vertex in opt_pts and vertex in pess_pts


def test_criterion_2_min_cost_matches_brute_force_oracle():
    with criterion("2. min-cost selection == brute force (500 sets x 1000 conditions)", 30.0):
        rng = random.Random(2024)
        for _ in range(500):
            k = rng.randint(1, 20)
            points = [RocPoint(rng.random(), rng.random()) for _ in range(k)]
            hull = build_hull((f"c{i}", p) for i, p in enumerate(points))
            fps = np.array([p.fp for p in points])
            tps = np.array([p.tp for p in points])

            priors = np.array([rng.uniform(0.02, 0.98) for _ in range(1000)])
            cost_fp = np.array([rng.uniform(0.05, 20.0) for _ in range(1000)])
            cost_fn = np.array([rng.uniform(0.05, 20.0) for _ in range(1000)])
            # exhaustive minimum, vectorized over the condition draws
            costs = (
                priors * cost_fn * (1.0 - tps[:, None]) + (1.0 - priors) * cost_fp * fps[:, None]
            )
            oracle_min = costs.min(axis=0)

            for j in range(1000):
                cond = OperatingConditions(priors[j], cost_fp[j], cost_fn[j])
                chosen = select_min_cost(hull, cond)
                assert expected_cost(chosen.point, cond) <= oracle_min[j] + 1e-9
                if j < 3:  # cross-check the vectorized oracle against the named one
                    reference = brute_force_best(points, cond)
                    assert expected_cost(reference, cond) == pytest.approx(
                        oracle_min[j], abs=1e-12
                    )


def test_criterion_3_scenario_slopes_and_sensitivity_box_exact():
    with criterion("3. scenario slopes 5 and 1/5; sensitivity box [0.2, 0.5]"):
        assert iso_slope(OperatingConditions(Fraction(1, 6), 1, 1)) == 5.0
        assert iso_slope(OperatingConditions(Fraction(1, 6), 1, 25)) == 1 / 5
        slope_range, _ = sensitivity(
            RUNNING_HULL,
            Fraction(1, 6),
            (Fraction(10), Fraction(20)),
            (Fraction(200), Fraction(250)),
        )
        assert slope_range.lo == 0.2
        assert slope_range.hi == 0.5


def test_criterion_4_mixture_sampling_hits_target_rates():
    with criterion("4. mixture at x=0.3: empirical rates within 0.01 (100k draws)", 10.0):
        policy = policy_for(RUNNING_HULL, 0.3)
        fp_hat, tp_hat = simulate_policy(policy, 100_000, 0.5, random.Random(42))
        assert abs(fp_hat - 0.3) <= 0.01
        assert abs(tp_hat - 0.7) <= 0.01


def _random_curves(rng, tag):
    curves = []
    for c in range(rng.randint(2, 4)):
        n = rng.randint(20, 60)
        pairs = [
            (P if rng.random() < 0.5 else N, round(rng.random(), 2)) for _ in range(n)
        ]
        pairs += [(P, 0.5), (N, 0.5)]
        curves.append(generate_roc_curve(make_examples(pairs), f"{tag}-{c}"))
    return curves


def _dominates(curve, curves):
    for other in curves:
        for cp in other.points:
            if tp_at(curve, cp.point.fp) < cp.point.tp - 1e-9:
                return False
    return True


def test_criterion_5_hull_area_is_maximal():
    with criterion("5. hull AUC >= every component AUC (200 inputs), strict without a dominator"):
        rng = random.Random(5005)
        strict_cases = 0
        for i in range(200):
            curves = _random_curves(rng, f"s{i}")
            hull = build_hull(curves)
            best = max(auc(c) for c in curves)
            assert auc(hull) >= best - 1e-12
            if not any(_dominates(c, curves) for c in curves):
                assert auc(hull) > best + 1e-12
                strict_cases += 1
        assert strict_cases > 100  # the generator makes crossing curves common


def test_criterion_6_workforce_utilization():
    with criterion("6. caseload P=20 N=100 K=30: x = 11/60, 30 expected cases; 200-case oracle"):
        x = x_from_conditions(RUNNING_HULL, caseload=(20, 100, 30))
        assert x == pytest.approx(11 / 60, abs=1e-9)
        constraint = workforce_constraint(20, 100, 30)
        point, _ = select_constrained(RUNNING_HULL, constraint)
        assert constraint.value_at(point) == pytest.approx(30, abs=1e-9)

        rng = random.Random(6006)
        grid = np.arange(0.0, 1.0 + 1e-4, 1e-4)
        for _ in range(200):
            points = [RocPoint(rng.random(), rng.random()) for _ in range(rng.randint(2, 15))]
            hull = build_hull((f"c{i}", p) for i, p in enumerate(points))
            a, b = rng.uniform(0, 50), rng.uniform(0, 100)
            if a + b == 0:
                a = 1.0
            c = rng.uniform(0, a + b)
            best, _ = select_constrained(hull, workforce_constraint(a + 1e-9, b + 1e-9, c))
            # dense sampling of the frontier, independent interpolation
            vfps = np.array([v.fp for v in hull.vertices])
            vtps = np.array([v.tp for v in hull.vertices])
            tp_grid = np.interp(grid, vfps, vtps)
            feasible = (a + 1e-9) * tp_grid + (b + 1e-9) * grid <= c
            if feasible.any():
                assert best.tp >= tp_grid[feasible].max() - 1e-9
            for q in points:
                if (a + 1e-9) * q.tp + (b + 1e-9) * q.fp <= c:
                    assert best.tp >= q.tp - 1e-9


def test_criterion_7_incremental_equals_batch():
    with criterion("7. 1000 insertion orders reproduce the batch hull (50-point sets)"):
        rng = random.Random(7007)
        for _ in range(50):
            labeled = [
                (f"c{i}", RocPoint(rng.random(), rng.random())) for i in range(50)
            ]
            batch = [v.point for v in build_hull(labeled).vertices]
            for _ in range(20):
                order = labeled[:]
                rng.shuffle(order)
                hull = build_hull([])
                for item in order:
                    hull, _ = insert(hull, item)
                assert [v.point for v in hull.vertices] == batch


def test_criterion_8_ranking_crossover():
    with criterion("8. ranking pair: equal AUC, crossing curves, cutoff preferences flip"):
        top, bottom = make_ranking_pair(100)
        curve_top = generate_roc_curve(top, "Ra")
        curve_bottom = generate_roc_curve(bottom, "Rb")
        assert auc(curve_top) == auc(curve_bottom)
        diffs = [
            tp_at(curve_top, k / 1000) - tp_at(curve_bottom, k / 1000) for k in range(1001)
        ]
        assert max(diffs) > 0 and min(diffs) < 0
        assert expected_positives_at_cutoff(top, 30) > expected_positives_at_cutoff(bottom, 30)
        assert expected_positives_at_cutoff(bottom, 70) > expected_positives_at_cutoff(top, 70)


def test_criterion_9_knob_converges():
    with criterion("9. knob reaches 100 hidden targets within 0.01 in <= 20 rounds"):
        rng = random.Random(9009)
        for _ in range(100):
            target = rng.random()
            tuner = KnobTuner(RUNNING_HULL, x=0.5, step=0.25)
            for _ in range(20):
                if abs(tuner.x - target) <= 0.01:
                    break
                if tuner.x > target:
                    signal = FeedbackDirection.TOO_MANY_FALSE_ALARMS
                else:
                    signal = FeedbackDirection.TOO_FEW_CASES
                tuner.observe(FeedbackSignal(signal))
            assert abs(tuner.x - target) <= 0.01


def test_criterion_10_drift_robustness():
    with criterion("10. drift: every fixed vertex pays regret, the hybrid pays none"):
        flip = OperatingConditions(Fraction(1, 6), 1, 1)  # slope 5
        flop = OperatingConditions(Fraction(1, 6), 1, 25)  # slope 1/5
        scenario = DriftScenario(tuple((e, flip if e % 2 == 0 else flop) for e in range(10)))
        for fixed in RUNNING_HULL.vertices:
            report = run_drift(scenario, RUNNING_HULL, fixed)
            assert report.fixed_regret > 0
            assert abs(report.hybrid_regret) <= 1e-9
