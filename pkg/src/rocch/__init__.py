"""ROC convex hull analysis and the randomized frontier hybrid classifier.

Build ROC curves from scored predictions, keep the convex frontier over any
mix of curves and single operating points, select optimal classifiers under
priors/costs or linear constraints, and run the frontier hybrid that
realizes any point on the frontier by coin-flipping between adjacent stored
classifiers.
"""

from .curves import (
    ABOVE_ALL_SCORES,
    BELOW_ALL_SCORES,
    ClassLabel,
    ConfusionCounts,
    CurvePoint,
    RocCurve,
    RocPoint,
    ScoredExample,
    ThresholdMetrics,
    accuracy,
    generate_roc_curve,
    lift_at,
    precision_at,
    rates_from_counts,
    threshold_curve_metrics,
    tp_at,
)
from .decision import (
    DominatorRow,
    DominatorTable,
    LinearConstraint,
    OperatingConditions,
    SlopeRange,
    dominator_table,
    expected_cost,
    iso_slope,
    posterior_threshold,
    select_by_metric,
    select_constrained,
    select_min_cost,
    select_neyman_pearson,
    sensitivity,
    workforce_constraint,
)
from .estimator import RocchHybrid
from .evaluation import (
    DriftEpoch,
    DriftReport,
    DriftScenario,
    FoldedScores,
    average_roc,
    brute_force_best,
    expected_positives_at_cutoff,
    make_ranking_pair,
    rank_auc,
    run_drift,
    simulate_policy,
)
from .hull import (
    DegenerateRule,
    HullVertex,
    Provenance,
    RocchHull,
    VertexMixture,
    auc,
    build_hull,
    hull_tp_at,
    insert,
    resolve_operating_point,
    slope_vertex,
)
from .io import (
    FileFormatError,
    ScoreFileError,
    parse_scores,
    read_curves,
    read_hull,
    write_curves,
    write_hull,
    write_scores,
)
from .hybrid import (
    ClassificationTrace,
    ComponentClassifier,
    ComponentKind,
    FeedbackDirection,
    FeedbackSignal,
    HybridPolicy,
    KnobTuner,
    MissingScoreError,
    Prediction,
    classify,
    classify_traced,
    component_for,
    policy_for,
    tune,
    x_from_conditions,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
