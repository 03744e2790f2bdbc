"""Weighted selection: test data counted with integer weight K.

Giving the test side a K-fold weight in the denominator of the estimated
FSP is useful when the calibration data is less reliable than the test
data (noisy or simulated calibration scores). K = 0 degenerates to a
calibration-only estimate and is allowed for diagnostics, but the error
control guarantee covers positive integers only.
"""

from __future__ import annotations

import numpy as np

from .core import SelectionResult, check_alpha, derived_score
from .qvalue import QCurve, _count_ge, _prep, build_grid, decide, r_values, tau


def check_weight(k_weight):
    k = k_weight
    if isinstance(k, float) and not k.is_integer():
        raise ValueError("test-data weight must be a non-negative integer")
    k = int(k)
    if k != k_weight or k < 0:
        raise ValueError("test-data weight must be a non-negative integer")
    return k


def q_hat_weighted(cal_scores, cal_labels, test_scores, t, k_weight):
    """Weighted estimated FSP at a single threshold t."""
    cal_top, wrong, test_top, _ = _prep(cal_scores, cal_labels, test_scores)
    k = check_weight(k_weight)
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    n_cal = cal_top.size
    n_test = test_top.size
    num = (np.sum((cal_top >= t) & wrong) + 1) / (n_cal + 1)
    den_count = np.sum(cal_top >= t) + k * (np.sum(test_top >= t) + 1)
    if den_count == 0:
        # only reachable for k = 0 with no calibration sample above t
        return np.inf
    return num / (den_count / (n_cal + k * (n_test + 1)))


def q_curve_weighted(cal_scores, cal_labels, test_scores, k_weight):
    """Weighted estimated FSP on the full observed-score grid."""
    cal_top, wrong, test_top, _ = _prep(cal_scores, cal_labels, test_scores)
    k = check_weight(k_weight)
    grid = build_grid(cal_top, test_top)
    n_cal = cal_top.size
    n_test = test_top.size
    cal_sorted = np.sort(cal_top)
    wrong_sorted = np.sort(cal_top[wrong])
    test_sorted = np.sort(test_top)
    num = (_count_ge(wrong_sorted, grid) + 1) / (n_cal + 1)
    den_count = _count_ge(cal_sorted, grid) + k * (_count_ge(test_sorted, grid) + 1)
    with np.errstate(divide="ignore"):
        q = np.where(
            den_count > 0,
            num / (den_count / (n_cal + k * (n_test + 1))),
            np.inf,
        )
    return QCurve(grid=grid, q_values=q, prefix_min=np.minimum.accumulate(q))


def select_weighted(cal_scores, cal_labels, test_scores, alpha, k_weight):
    """Selection at level alpha with K-fold weight on the test data."""
    alpha = check_alpha(alpha)
    k = check_weight(k_weight)
    curve = q_curve_weighted(cal_scores, cal_labels, test_scores, k)
    r = r_values(curve, test_scores)
    info = {"k_weight": k}
    if k == 0:
        info["diagnostic"] = "zero test weight: no error-control certificate"
    return SelectionResult(
        decisions=decide(test_scores, r, alpha),
        r_values=r,
        tau=tau(curve, alpha),
        alpha=alpha,
        method="weighted",
        info=info,
    )
