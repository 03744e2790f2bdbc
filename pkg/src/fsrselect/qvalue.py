"""Data-driven q-value selection engine.

The estimated false-selection proportion of the rule "assign the argmax
class to every test sample whose top score is at least t" is a step
function of t that only changes at observed scores, so all quantities are
evaluated on the finite grid of distinct observed top scores (plus 0, so
"select everything" is representable).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    INDECISION,
    SelectionResult,
    check_alpha,
    check_labels,
    check_scores,
    derived_score,
)


@dataclass(frozen=True)
class QCurve:
    """Estimated FSP evaluated on a threshold grid.

    ``prefix_min[i]`` is the minimum of ``q_values[: i + 1]``; it realises
    the infimum over all thresholds below a given score, which is what the
    per-sample R-value needs.
    """

    grid: np.ndarray
    q_values: np.ndarray
    prefix_min: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if self.grid.shape != self.q_values.shape:
            raise ValueError("grid and q_values must be aligned")


def build_grid(cal_top, test_top):
    """Distinct observed top scores plus the sentinel 0."""
    return np.unique(np.concatenate([[0.0], cal_top, test_top]))


def _count_ge(sorted_values, thresholds):
    """Number of entries of ``sorted_values`` >= each threshold."""
    return sorted_values.size - np.searchsorted(
        sorted_values, thresholds, side="left"
    )


def _prep(cal_scores, cal_labels, test_scores):
    cal_scores = check_scores(cal_scores)
    k = cal_scores.shape[1]
    test_scores = check_scores(test_scores, n_classes=k)
    cal_labels = check_labels(cal_labels, k, n_samples=cal_scores.shape[0])
    cal_top, cal_pred = derived_score(cal_scores)
    test_top, test_pred = derived_score(test_scores)
    wrong = cal_pred != cal_labels
    return cal_top, wrong, test_top, test_pred


def q_hat(cal_scores, cal_labels, test_scores, t):
    """Estimated FSP at a single threshold t.

    Numerator: smoothed share of calibration samples at or above t whose
    argmax class is wrong. Denominator: share of test samples at or above
    t, with the raw count floored at 1 before scaling by 1/n_test.
    """
    cal_top, wrong, test_top, _ = _prep(cal_scores, cal_labels, test_scores)
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    n_cal = cal_top.size
    n_test = test_top.size
    num = (np.sum((cal_top >= t) & wrong) + 1) / (n_cal + 1)
    den = max(1, np.sum(test_top >= t)) / n_test
    return num / den


def q_curve(cal_scores, cal_labels, test_scores):
    """Evaluate the estimated FSP on the full observed-score grid.

    Equivalent to calling :func:`q_hat` at every grid point, computed with
    one sort and suffix counts.
    """
    cal_top, wrong, test_top, _ = _prep(cal_scores, cal_labels, test_scores)
    grid = build_grid(cal_top, test_top)
    q = _q_on_grid(grid, cal_top, wrong, test_top)
    return QCurve(grid=grid, q_values=q, prefix_min=np.minimum.accumulate(q))


def _q_on_grid(grid, cal_top, wrong, test_top):
    n_cal = cal_top.size
    n_test = test_top.size
    wrong_sorted = np.sort(cal_top[wrong])
    test_sorted = np.sort(test_top)
    num = (_count_ge(wrong_sorted, grid) + 1) / (n_cal + 1)
    den = np.maximum(1, _count_ge(test_sorted, grid)) / n_test
    return num / den


def tau(curve, alpha):
    """Smallest grid threshold whose estimated FSP is at most alpha.

    Returns None when no grid point qualifies (nothing gets selected).
    """
    alpha = check_alpha(alpha)
    hits = np.flatnonzero(curve.q_values <= alpha)
    if hits.size == 0:
        return None
    return float(curve.grid[hits[0]])


def r_values(curve, test_scores):
    """Per-sample infimum of the estimated FSP over thresholds below the
    sample's top score.

    Selecting samples with R-value <= alpha is equivalent to thresholding
    the top score at the level returned by :func:`tau`, for every alpha.
    """
    test_top, _ = derived_score(test_scores)
    idx = np.searchsorted(curve.grid, test_top, side="right") - 1
    if np.any(idx < 0):
        raise ValueError("test scores fall below the threshold grid")
    return curve.prefix_min[idx]


def decide(test_scores, r, alpha):
    """Assign the argmax class where the R-value clears alpha."""
    _, pred = derived_score(test_scores)
    return np.where(np.asarray(r) <= alpha, pred, INDECISION)


def select_base(cal_scores, cal_labels, test_scores, alpha):
    """Exchangeability-based selection at target error level alpha.

    The same formulas serve binary and K-class problems: the derived score
    is the maximum over the K entries and a calibration error is an argmax
    that disagrees with the true label.
    """
    alpha = check_alpha(alpha)
    curve = q_curve(cal_scores, cal_labels, test_scores)
    r = r_values(curve, test_scores)
    return SelectionResult(
        decisions=decide(test_scores, r, alpha),
        r_values=r,
        tau=tau(curve, alpha),
        alpha=alpha,
        method="base",
    )
