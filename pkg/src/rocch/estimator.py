"""Scikit-learn style front door for the frontier hybrid.

Each column of ``X`` is one upstream scorer's output (higher means more
positive); ``fit`` evaluates every scorer on the labeled validation data,
builds the convex frontier over their ROC curves, and resolves the
requested operating conditions to a dispatch policy.  ``predict`` then
routes each row to the stored frontier classifier (or coin-flips between
two adjacent ones).
"""

from __future__ import annotations

import random

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError

from .curves import ClassLabel, ScoredExample, generate_roc_curve
from .decision import OperatingConditions
from .hull import build_hull
from .hybrid import Prediction, classify, policy_for, x_from_conditions


def check_score_matrix(X, expected_columns: int | None = None) -> np.ndarray:
    """Validate a 2-D finite float matrix of scorer outputs."""
    Xa = np.asarray(X, dtype=float)
    if Xa.ndim != 2:
        raise ValueError(f"X must be 2-dimensional, got shape {Xa.shape}")
    if Xa.shape[0] == 0 or Xa.shape[1] == 0:
        raise ValueError(f"X must be non-empty, got shape {Xa.shape}")
    if not np.all(np.isfinite(Xa)):
        raise ValueError("X contains non-finite scores")
    if expected_columns is not None and Xa.shape[1] != expected_columns:
        raise ValueError(f"X has {Xa.shape[1]} columns, expected {expected_columns}")
    return Xa


def check_binary_target(y, pos_label=None):
    """Validate a two-class target; returns (positive mask, classes, pos label).

    The positive class is ``pos_label`` when given, else inferred for the
    common vocabularies {'p','n'}, {0,1}, {-1,1}, {False,True}.
    """
    ya = np.asarray(y)
    if ya.ndim != 1:
        raise ValueError(f"y must be 1-dimensional, got shape {ya.shape}")
    classes = np.unique(ya)
    if len(classes) != 2:
        raise ValueError(f"y must contain exactly two classes, got {list(classes)}")
    if pos_label is None:
        known = {
            frozenset(("p", "n")): "p",
            frozenset((0, 1)): 1,
            frozenset((-1, 1)): 1,
            frozenset((False, True)): True,
        }
        key = frozenset(classes.tolist())
        if key not in known:
            raise ValueError(
                f"cannot infer the positive class from {list(classes)}; pass pos_label"
            )
        pos_label = known[key]
    elif pos_label not in classes:
        raise ValueError(f"pos_label {pos_label!r} does not occur in y")
    return ya == pos_label, classes, pos_label


class RocchHybrid(ClassifierMixin, BaseEstimator):
    """Frontier hybrid over a bank of scorers, as a sklearn classifier.

    Parameters
    ----------
    x : float, optional
        Target false positive rate.  Overrides every other condition.
    fp_max : float, optional
        Alarm-rate cap: maximize the hit rate subject to FP <= fp_max.
    caseload : tuple (P, N, K), optional
        Budget: at most K expected selections from P positives / N negatives.
    prior : float, optional
        Positive-class prior for cost minimization.  Defaults to the
        weighted training prior when no other condition is given.
    cost_fp, cost_fn : float
        Error costs used with ``prior``.
    pos_label : optional
        Which value of ``y`` counts as positive; inferred for the usual
        binary vocabularies.
    random_state : int, optional
        Seed for the per-row mixing coin.  Each ``predict`` call replays
        the same stream.

    Attributes
    ----------
    curves_ : tuple of per-scorer ROC curves.
    hull_ : the convex frontier over all scorers.
    x_ : resolved target false positive rate.
    policy_ : dispatch policy realizing ``x_``.
    """

    def __init__(
        self,
        x=None,
        fp_max=None,
        caseload=None,
        prior=None,
        cost_fp=1.0,
        cost_fn=1.0,
        pos_label=None,
        random_state=None,
    ):
        self.x = x
        self.fp_max = fp_max
        self.caseload = caseload
        self.prior = prior
        self.cost_fp = cost_fp
        self.cost_fn = cost_fn
        self.pos_label = pos_label
        self.random_state = random_state

    def _column_ids(self, X) -> list[str]:
        columns = getattr(X, "columns", None)
        if columns is not None:
            return [str(c) for c in columns]
        return [f"scorer_{i}" for i in range(np.asarray(X).shape[1])]

    def fit(self, X, y):
        ids = self._column_ids(X)
        Xa = check_score_matrix(X)
        positive, classes, pos_label = check_binary_target(y, self.pos_label)
        if len(positive) != Xa.shape[0]:
            raise ValueError(f"X has {Xa.shape[0]} rows but y has {len(positive)}")
        self.classes_ = classes
        self._pos_label = pos_label
        self._neg_label = classes[classes != pos_label][0]
        self.n_features_in_ = Xa.shape[1]
        self._ids = ids

        labels = [ClassLabel.POSITIVE if p else ClassLabel.NEGATIVE for p in positive]
        self.curves_ = tuple(
            generate_roc_curve(
                [
                    ScoredExample(str(row), labels[row], float(Xa[row, col]))
                    for row in range(Xa.shape[0])
                ],
                ids[col],
            )
            for col in range(Xa.shape[1])
        )
        self.hull_ = build_hull(self.curves_)
        self._train_prior = float(np.mean(positive))
        self.set_operating_point(
            x=self.x,
            fp_max=self.fp_max,
            caseload=self.caseload,
            prior=self.prior,
        )
        return self

    def set_operating_point(self, x=None, fp_max=None, caseload=None, prior=None):
        """Re-aim the fitted hybrid without refitting the frontier."""
        if not hasattr(self, "hull_"):
            raise NotFittedError("fit the estimator before setting an operating point")
        if x is not None:
            self.x_ = float(x)
        elif fp_max is not None:
            self.x_ = x_from_conditions(self.hull_, fp_max=float(fp_max))
        elif caseload is not None:
            self.x_ = x_from_conditions(self.hull_, caseload=tuple(caseload))
        else:
            cond = OperatingConditions(
                self._train_prior if prior is None else prior, self.cost_fp, self.cost_fn
            )
            self.x_ = x_from_conditions(self.hull_, conditions=cond)
        self.policy_ = policy_for(self.hull_, self.x_)
        return self

    def predict(self, X):
        if not hasattr(self, "policy_"):
            raise NotFittedError("fit the estimator before predicting")
        Xa = check_score_matrix(X, expected_columns=self.n_features_in_)
        rng = random.Random(self.random_state)
        out = []
        for row in Xa:
            scores = dict(zip(self._ids, row))
            label = classify(self.policy_, scores, rng)
            out.append(self._pos_label if label is Prediction.Y else self._neg_label)
        return np.asarray(out)
