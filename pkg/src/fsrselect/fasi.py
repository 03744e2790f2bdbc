"""Per-class threshold baseline (FASI-style comparator).

Each class gets its own estimated-FSP curve and its own error budget,
split proportionally to the calibration class frequencies. Thresholds are
restricted to [0.5, 1] so that with s1 + s2 = 1 no test sample can be
assigned both classes. Binary problems only.
"""

from __future__ import annotations

import numpy as np

from .core import (
    INDECISION,
    SelectionResult,
    check_alpha,
    check_labels,
    check_scores,
)
from .shift import EmptyStratumError


def _class_grid(cal_sc, test_sc):
    values = np.concatenate([[0.5], cal_sc, test_sc])
    return np.unique(values[values >= 0.5])


def q_hat_class(cal_scores, cal_labels, test_scores, t, class_label):
    """Per-class estimated FSP at threshold t for one class.

    A calibration sample counts as an error for class c when its class-c
    score clears t but its true label is not c.
    """
    cal_scores = check_scores(cal_scores, n_classes=2)
    test_scores = check_scores(test_scores, n_classes=2)
    labels = check_labels(cal_labels, 2, cal_scores.shape[0])
    c = int(class_label)
    if c not in (1, 2):
        raise ValueError("class_label must be 1 or 2")
    t = float(t)
    if not 0.5 <= t <= 1.0:
        raise ValueError("per-class thresholds must lie in [0.5, 1]")
    col = c - 1
    n_cal = labels.size
    n_test = test_scores.shape[0]
    num = (np.sum((cal_scores[:, col] >= t) & (labels != c)) + 1) / (n_cal + 1)
    den = max(1, np.sum(test_scores[:, col] >= t)) / n_test
    return num / den


def _class_curve(cal_sc, cal_other, test_sc, n_cal, n_test):
    grid = _class_grid(cal_sc, test_sc)
    err_sorted = np.sort(cal_sc[cal_other])
    test_sorted = np.sort(test_sc)
    num = (
        err_sorted.size - np.searchsorted(err_sorted, grid, side="left") + 1
    ) / (n_cal + 1)
    den = (
        np.maximum(1, test_sorted.size - np.searchsorted(test_sorted, grid, side="left"))
        / n_test
    )
    q = num / den
    return grid, q, np.minimum.accumulate(q)


def select_fasi(cal_scores, cal_labels, test_scores, alpha):
    """Per-class selection with budgets alpha * class frequency.

    A test sample is assigned class c when its class-c score clears that
    class's threshold; the (measure-zero) case of clearing both thresholds
    at exactly 0.5 resolves to class 1.
    """
    alpha = check_alpha(alpha)
    cal_scores = check_scores(cal_scores, n_classes=2)
    test_scores = check_scores(test_scores, n_classes=2)
    labels = check_labels(cal_labels, 2, cal_scores.shape[0])
    if not (np.any(labels == 1) and np.any(labels == 2)):
        raise EmptyStratumError("both classes must appear in the calibration set")

    n_cal = labels.size
    n_test = test_scores.shape[0]
    pi_cal = float(np.mean(labels == 1))
    budgets = {1: alpha * pi_cal, 2: alpha * (1.0 - pi_cal)}
    shares = {1: pi_cal, 2: 1.0 - pi_cal}

    taus = {}
    r_by_class = {}
    for c in (1, 2):
        col = c - 1
        grid, q, pmin = _class_curve(
            cal_scores[:, col], labels != c, test_scores[:, col], n_cal, n_test
        )
        hits = np.flatnonzero(q <= budgets[c])
        taus[c] = float(grid[hits[0]]) if hits.size else None
        idx = np.searchsorted(grid, test_scores[:, col], side="right") - 1
        # scores below 0.5 have no admissible threshold: R-value is vacuous
        r_c = np.where(idx >= 0, pmin[np.maximum(idx, 0)] / shares[c], np.inf)
        r_by_class[c] = r_c

    sel1 = test_scores[:, 0] >= taus[1] if taus[1] is not None else np.zeros(n_test, bool)
    sel2 = test_scores[:, 1] >= taus[2] if taus[2] is not None else np.zeros(n_test, bool)
    decisions = np.full(n_test, INDECISION, dtype=int)
    decisions[sel2] = 2
    decisions[sel1] = 1  # ties at exactly 0.5/0.5 resolve to class 1

    r = np.minimum(np.minimum(r_by_class[1], r_by_class[2]), 1.0)
    return SelectionResult(
        decisions=decisions,
        r_values=r,
        tau=None,
        alpha=alpha,
        method="fasi",
        info={"tau_by_class": taus, "pi_cal_hat": pi_cal},
    )
