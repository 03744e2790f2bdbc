"""Correction for class-proportion shift between calibration and test data.

The calibration and test sets may contain the two classes in different
proportions. The estimated FSP is then rescaled by the ratio of the
estimated misclassification mass on the test side (via Storey's
exceedance estimator of the test-side class-1 proportion) to the observed
misclassification rate on the calibration side. Binary problems only.
"""

from __future__ import annotations

import numpy as np

from .core import (
    SelectionResult,
    check_alpha,
    check_labels,
    check_scores,
    derived_score,
)
from .qvalue import QCurve, decide, q_curve, r_values, tau

USE_S1 = "s1"
USE_S2 = "s2"


class DegenerateLambdaError(ValueError):
    """The exceedance threshold sits at or beyond the calibration support."""


class EmptyStratumError(ValueError):
    """A per-class calibration stratum required for estimation is empty."""


class EmpiricalCdf:
    """Right-closed empirical CDF: F(x) = #{values <= x} / count."""

    def __init__(self, values):
        values = np.asarray(values, dtype=float)
        if values.size == 0:
            raise EmptyStratumError("cannot build an empirical CDF from no data")
        self.sorted_values = np.sort(values)

    def __call__(self, x):
        pos = np.searchsorted(self.sorted_values, x, side="right")
        return pos / self.sorted_values.size


def storey_pi(test_s1, lam, f11):
    """Exceedance estimate of the test-side class-1 proportion.

    ``f11`` is the calibration empirical CDF of the class-1 score among
    true class-1 samples. The raw estimate is clamped into [0, 1]; it is
    upward biased by construction, which is the conservative direction.
    """
    test_s1 = np.asarray(test_s1, dtype=float)
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lambda must lie in [0, 1]")
    tail = 1.0 - f11(lam)
    if tail <= 0.0:
        # includes lam == 1.0, where the tail is empty by construction
        raise DegenerateLambdaError(
            "empirical CDF reaches 1 at lambda; choose a smaller lambda"
        )
    w = int(np.sum(test_s1 > lam))
    return float(np.clip(w / (test_s1.size * tail), 0.0, 1.0))


def choose_side(f11_at_half, f12_at_half):
    """Pick which class-1 score tail the exceedance estimator should use.

    Using the side indicated here guarantees the estimator's bias points
    upward; the other side would bias it downward.
    """
    return USE_S1 if f12_at_half + f11_at_half - 1.0 >= 0.0 else USE_S2


def p_test_hat(pi_hat, f11_at_half, f12_at_half, floor=0.0):
    """Estimated share of test samples whose argmax class is wrong."""
    raw = 1.0 - f12_at_half + pi_hat * (f12_at_half - 1.0 + f11_at_half)
    return max(float(floor), float(raw))


def p_cal_hat(cal_scores, cal_labels, floor=None):
    """Observed share of calibration samples whose argmax class is wrong.

    Floored at 1/(n_cal + 1) by default so the correction ratio stays
    finite on perfectly separable calibration data.
    """
    cal_scores = check_scores(cal_scores)
    labels = check_labels(cal_labels, cal_scores.shape[1], cal_scores.shape[0])
    _, pred = derived_score(cal_scores)
    n = labels.size
    if floor is None:
        floor = 1.0 / (n + 1)
    return max(float(floor), float(np.mean(pred != labels)))


def _estimate_p_test(cal_s1, cal_labels, test_s1, lam):
    """Storey-corrected estimate of the test misclassification share.

    Assumes class-1 orientation (the caller mirrors the data first when
    the class-2 side is the right one to use).
    """
    f11 = EmpiricalCdf(cal_s1[cal_labels == 1])
    f12 = EmpiricalCdf(cal_s1[cal_labels == 2])
    pi_hat = storey_pi(test_s1, lam, f11)
    floor = 1.0 / (cal_labels.size + 1)
    return pi_hat, p_test_hat(pi_hat, f11(0.5), f12(0.5), floor=floor)


def select_corrected(cal_scores, cal_labels, test_scores, alpha):
    """Proportion-shift-corrected selection at level alpha (binary only).

    Two passes: the uncorrected procedure first fixes the exceedance
    threshold lambda at its own score threshold (falling back to the 0.5
    decision boundary when it selects nothing), then the estimated FSP is
    rescaled by the estimated test/calibration misclassification ratio and
    thresholds and R-values are recomputed from the rescaled curve.
    """
    alpha = check_alpha(alpha)
    cal_scores = check_scores(cal_scores, n_classes=2)
    test_scores = check_scores(test_scores, n_classes=2)
    labels = check_labels(cal_labels, 2, cal_scores.shape[0])
    if not (np.any(labels == 1) and np.any(labels == 2)):
        raise EmptyStratumError("both classes must appear in the calibration set")

    curve = q_curve(cal_scores, labels, test_scores)
    tau_base = tau(curve, alpha)
    lam = 0.5 if tau_base is None else tau_base

    f11 = EmpiricalCdf(cal_scores[labels == 1, 0])
    f12 = EmpiricalCdf(cal_scores[labels == 2, 0])
    side = choose_side(f11(0.5), f12(0.5))
    if side == USE_S1:
        cal_s1, lab, test_s1 = cal_scores[:, 0], labels, test_scores[:, 0]
    else:
        # mirror the construction onto the class-2 score, swapping roles
        cal_s1, lab, test_s1 = cal_scores[:, 1], 3 - labels, test_scores[:, 1]
    try:
        pi_hat, p_test = _estimate_p_test(cal_s1, lab, test_s1, lam)
    except DegenerateLambdaError:
        if lam == 0.5:
            raise
        lam = 0.5
        pi_hat, p_test = _estimate_p_test(cal_s1, lab, test_s1, lam)
    p_cal = p_cal_hat(cal_scores, labels)

    multiplier = p_test / p_cal
    q_tilde = multiplier * curve.q_values
    corrected = QCurve(
        grid=curve.grid,
        q_values=q_tilde,
        prefix_min=np.minimum.accumulate(q_tilde),
    )
    r = np.minimum(r_values(corrected, test_scores), 1.0)
    return SelectionResult(
        decisions=decide(test_scores, r, alpha),
        r_values=r,
        tau=tau(corrected, alpha),
        alpha=alpha,
        method="corrected",
        info={
            "pi_test_hat": pi_hat,
            "p_test_hat": p_test,
            "p_cal_hat": p_cal,
            "multiplier": multiplier,
            "lambda": lam,
            "side": side,
        },
    )


def shift_bound_constant(pi_cal, pi_test, mean_p_cal, mean_p_test):
    """Certified inflation factor for the corrected procedure's error level
    when the true class proportions are known (simulation diagnostics only).
    """
    return (mean_p_cal / mean_p_test) * (
        pi_test / pi_cal + (1.0 - pi_test) / (1.0 - pi_cal)
    )
