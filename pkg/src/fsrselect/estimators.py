"""scikit-learn style front end for the selection procedures."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .core import check_alpha, check_labels, check_scores
from .fasi import select_fasi
from .qvalue import select_base
from .shift import select_corrected
from .weighted import check_weight, select_weighted

_METHODS = ("base", "corrected", "weighted", "fasi")


class SelectiveClassifier(BaseEstimator):
    """Selective classifier with false-selection-rate control.

    Fit on calibration scores and labels, then predict on test scores:
    each test sample receives either a class label (1..K) or 0 for
    indecision, such that the expected share of wrong labels among the
    definitive ones is controlled at ``alpha``.

    The procedure is transductive: the threshold depends on the test batch
    as a whole, so predictions are per-batch, not per-sample.

    Parameters
    ----------
    alpha : float, default=0.1
        Target false selection rate, strictly between 0 and 1.
    method : {"base", "corrected", "weighted", "fasi"}, default="base"
        Selection variant. "corrected" adjusts for class-proportion shift
        between calibration and test data (binary only); "weighted" gives
        the test data ``weight``-fold weight; "fasi" is the per-class
        threshold baseline (binary only).
    weight : int, default=1
        Test-data weight, used by the "weighted" method only.
    """

    def __init__(self, alpha=0.1, method="base", weight=1):
        self.alpha = alpha
        self.method = method
        self.weight = weight

    def fit(self, X, y):
        """Store validated calibration scores and labels."""
        check_alpha(self.alpha)
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}")
        if self.method == "weighted":
            check_weight(self.weight)
        X = check_scores(X)
        self.n_classes_ = X.shape[1]
        self.calibration_scores_ = X
        self.calibration_labels_ = check_labels(y, self.n_classes_, X.shape[0])
        return self

    def predict(self, X):
        """Decide each test sample: a class in 1..K, or 0 for indecision.

        Also exposes the batch details afterwards as ``selection_result_``,
        ``tau_`` and ``r_values_``.
        """
        if not hasattr(self, "calibration_scores_"):
            raise ValueError("fit must be called before predict")
        X = check_scores(X, n_classes=self.n_classes_)
        args = (self.calibration_scores_, self.calibration_labels_, X, self.alpha)
        if self.method == "base":
            result = select_base(*args)
        elif self.method == "corrected":
            result = select_corrected(*args)
        elif self.method == "weighted":
            result = select_weighted(*args, self.weight)
        else:
            result = select_fasi(*args)
        self.selection_result_ = result
        self.tau_ = result.tau
        self.r_values_ = result.r_values
        return np.asarray(result.decisions)
