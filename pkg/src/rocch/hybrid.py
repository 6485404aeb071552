"""The frontier hybrid classifier and its feedback knob.

A hybrid policy pins a target false positive rate ``x`` and dispatches each
instance to the stored frontier classifier at ``x`` or, when ``x`` falls
between vertices, to one of the two adjacent classifiers chosen by an
independent per-instance coin flip.  The coin weight places the mixture's
expected rates exactly at ``x`` on the frontier, so sweeping ``x`` over
[0, 1] traces out the frontier itself.

Coin flips are drawn from an explicit ``random.Random`` stream threaded
through classification; identical seeds replay identical decisions.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from typing import Mapping

from .curves import RocPoint
from .decision import (
    LinearConstraint,
    OperatingConditions,
    select_constrained,
    select_min_cost,
    workforce_constraint,
)
from .hull import (
    DegenerateRule,
    HullVertex,
    Provenance,
    RocchHull,
    VertexMixture,
    resolve_operating_point,
)
from .validation import check_unit_interval


class MissingScoreError(ValueError):
    """An instance lacks the score feed for a referenced classifier."""


class Prediction(enum.Enum):
    """Emitted classification: alarm (Y) or not (N)."""

    Y = "Y"
    N = "N"

    def __str__(self) -> str:
        return self.value


class ComponentKind(enum.Enum):
    SCORED = "scored"
    CONSTANT_NEGATIVE = "constant-negative"
    CONSTANT_POSITIVE = "constant-positive"


# Conventional cutoff used to drive single-point (binary) classifiers whose
# decisions arrive as a 0/1 feed instead of a graded score.
BINARY_DECISION_THRESHOLD = 0.5


@dataclass(frozen=True, slots=True)
class ComponentClassifier:
    """A runnable decision rule behind a frontier vertex."""

    classifier_id: str
    kind: ComponentKind
    threshold: float | None = None

    def __post_init__(self):
        if self.kind is ComponentKind.SCORED:
            if self.threshold is None or not math.isfinite(self.threshold):
                raise ValueError("scored components need a finite threshold")

    def decide(self, scores: Mapping[str, float]) -> Prediction:
        if self.kind is ComponentKind.CONSTANT_NEGATIVE:
            return Prediction.N
        if self.kind is ComponentKind.CONSTANT_POSITIVE:
            return Prediction.Y
        try:
            score = scores[self.classifier_id]
        except KeyError:
            raise MissingScoreError(
                f"no score supplied for classifier {self.classifier_id!r}"
            ) from None
        return Prediction.Y if score >= self.threshold else Prediction.N


def component_for(vertex: HullVertex) -> ComponentClassifier:
    """Materialize the decision rule a hull vertex stands for."""
    prov = vertex.provenance
    if prov is DegenerateRule.NEVER_ALARM:
        return ComponentClassifier("never-alarm", ComponentKind.CONSTANT_NEGATIVE)
    if prov is DegenerateRule.ALWAYS_ALARM:
        return ComponentClassifier("always-alarm", ComponentKind.CONSTANT_POSITIVE)
    assert isinstance(prov, Provenance)
    threshold = prov.threshold
    if threshold is None:
        threshold = BINARY_DECISION_THRESHOLD
    if threshold == math.inf:
        return ComponentClassifier(prov.classifier_id, ComponentKind.CONSTANT_NEGATIVE)
    if threshold == -math.inf:
        return ComponentClassifier(prov.classifier_id, ComponentKind.CONSTANT_POSITIVE)
    return ComponentClassifier(prov.classifier_id, ComponentKind.SCORED, threshold)


@dataclass(frozen=True, slots=True)
class HybridPolicy:
    """A resolved knob setting: target rate ``x`` plus frontier machinery."""

    hull: RocchHull
    x: float
    resolution: HullVertex | VertexMixture

    @property
    def expected_point(self) -> RocPoint:
        """Rates the policy attains in expectation, assuming component rates."""
        if isinstance(self.resolution, HullVertex):
            return self.resolution.point
        left, right, w = self.resolution.left, self.resolution.right, self.resolution.weight
        return RocPoint(
            min(1.0, max(0.0, left.fp + w * (right.fp - left.fp))),
            min(1.0, max(0.0, left.tp + w * (right.tp - left.tp))),
        )

    def components(self) -> tuple[ComponentClassifier, ...]:
        if isinstance(self.resolution, HullVertex):
            return (component_for(self.resolution),)
        return (component_for(self.resolution.left), component_for(self.resolution.right))


def policy_for(hull: RocchHull, x: float) -> HybridPolicy:
    """Resolve a target false positive rate into a dispatch policy."""
    _, resolution = resolve_operating_point(hull, x)
    return HybridPolicy(hull, x, resolution)


@dataclass(frozen=True, slots=True)
class ClassificationTrace:
    prediction: Prediction
    component_id: str
    coin: str | None  # "left" / "right" for mixtures, None for pure vertices


def classify_traced(
    policy: HybridPolicy, scores: Mapping[str, float], rng: random.Random
) -> ClassificationTrace:
    """Classify one instance, recording which component and coin side fired.

    All scored components the policy references must have a score present,
    whether or not the coin picks them.  For a mixture exactly one draw is
    taken from ``rng`` per instance.
    """
    components = policy.components()
    for comp in components:
        if comp.kind is ComponentKind.SCORED and comp.classifier_id not in scores:
            raise MissingScoreError(f"no score supplied for classifier {comp.classifier_id!r}")
    if isinstance(policy.resolution, HullVertex):
        comp = components[0]
        return ClassificationTrace(comp.decide(scores), comp.classifier_id, None)
    take_right = rng.random() < policy.resolution.weight
    comp = components[1] if take_right else components[0]
    side = "right" if take_right else "left"
    return ClassificationTrace(comp.decide(scores), comp.classifier_id, side)


def classify(policy: HybridPolicy, scores: Mapping[str, float], rng: random.Random) -> Prediction:
    """Classify one instance under the policy."""
    return classify_traced(policy, scores, rng).prediction


def x_from_conditions(
    hull: RocchHull,
    conditions: OperatingConditions | None = None,
    fp_max: float | None = None,
    caseload: tuple | None = None,
    constraint: LinearConstraint | None = None,
) -> float:
    """Translate a target-environment description into a knob setting.

    Exactly one of the keyword forms must be given: prior/cost conditions
    (minimum expected cost), a false-alarm cap, a ``(P, N, K)`` caseload
    budget, or a general linear budget.
    """
    given = [v is not None for v in (conditions, fp_max, caseload, constraint)]
    if sum(given) != 1:
        raise ValueError("specify exactly one of conditions, fp_max, caseload, constraint")
    if conditions is not None:
        return select_min_cost(hull, conditions).fp
    if fp_max is not None:
        check_unit_interval("fp_max", fp_max)
        return fp_max
    if caseload is not None:
        p_total, n_total, capacity = caseload
        constraint = workforce_constraint(p_total, n_total, capacity)
    point, _ = select_constrained(hull, constraint)
    return point.fp


class FeedbackDirection(enum.Enum):
    TOO_MANY_FALSE_ALARMS = "too-many-false-alarms"
    TOO_FEW_CASES = "too-few-cases"
    ACCEPTABLE = "acceptable"


@dataclass(frozen=True, slots=True)
class FeedbackSignal:
    direction: FeedbackDirection
    magnitude: float | None = None


def tune(policy: HybridPolicy, feedback: FeedbackSignal, step: float) -> HybridPolicy:
    """Move the knob one step against the complaint, clamped to [0, 1].

    Too many false alarms turns the knob left, too few cases turns it right,
    acceptable keeps the current setting.
    """
    if not 0 < step <= 1:
        raise ValueError(f"step must lie in (0, 1], got {step!r}")
    direction = feedback.direction
    if direction is FeedbackDirection.TOO_MANY_FALSE_ALARMS:
        x = max(0.0, policy.x - step)
    elif direction is FeedbackDirection.TOO_FEW_CASES:
        x = min(1.0, policy.x + step)
    else:
        x = policy.x
    return policy_for(policy.hull, x)


class KnobTuner:
    """Stateful hill-climbing controller for the knob.

    Repeated one-sided feedback keeps marching; a direction reversal or an
    "acceptable" report halves the step, so the knob homes in on the
    environment's implied target bisection-style.
    """

    def __init__(self, hull: RocchHull, x: float = 0.5, step: float = 0.25):
        if not 0 < step <= 1:
            raise ValueError(f"step must lie in (0, 1], got {step!r}")
        self.policy = policy_for(hull, x)
        self.step = step
        self._last_direction: FeedbackDirection | None = None

    @property
    def x(self) -> float:
        return self.policy.x

    def observe(self, feedback: FeedbackSignal) -> HybridPolicy:
        direction = feedback.direction
        if direction is FeedbackDirection.ACCEPTABLE:
            self.step /= 2
            self._last_direction = None
            return self.policy
        if self._last_direction is not None and direction is not self._last_direction:
            self.step /= 2
        self._last_direction = direction
        self.policy = tune(self.policy, feedback, self.step)
        return self.policy
