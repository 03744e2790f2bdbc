"""Core types and metrics for selective classification.

Conventions used throughout the package:

* scores are (n, K) float arrays with entries in [0, 1]; column j holds the
  classifier score for class j+1,
* labels are (n,) integer arrays with values in 1..K,
* decisions are (n,) integer arrays where 0 encodes indecision (abstention)
  and 1..K encode a definitive class assignment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

#: Decision code for "no definitive class assigned".
INDECISION = 0

#: Tolerance for the binary score-sum constraint s1 + s2 = 1.
_BINARY_SUM_TOL = 1e-9


def check_scores(scores, n_classes=None, require_binary_sum=True):
    """Validate a score matrix and return it as a float ndarray.

    Scores must be two-dimensional with at least two columns and entries in
    [0, 1]. For binary problems the two columns must sum to one (within
    1e-9) unless ``require_binary_sum`` is disabled; score matrices with
    more than two classes are only range-checked.
    """
    arr = np.asarray(scores, dtype=float)
    if arr.ndim != 2 or arr.shape[1] < 2:
        raise ValueError("scores must be a 2-D array with at least 2 columns")
    if arr.shape[0] == 0:
        raise ValueError("scores must contain at least one sample")
    if not np.all(np.isfinite(arr)):
        raise ValueError("scores must be finite")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError("scores must lie in [0, 1]")
    if n_classes is not None and arr.shape[1] != n_classes:
        raise ValueError(
            f"expected {n_classes} score columns, got {arr.shape[1]}"
        )
    if require_binary_sum and arr.shape[1] == 2:
        if np.max(np.abs(arr.sum(axis=1) - 1.0)) > _BINARY_SUM_TOL:
            raise ValueError("binary score rows must sum to 1")
    return arr


def check_labels(labels, n_classes, n_samples=None):
    """Validate a label vector with values in 1..n_classes."""
    arr = np.asarray(labels)
    if arr.ndim != 1:
        raise ValueError("labels must be a 1-D array")
    if not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise ValueError("labels must be integers")
        arr = arr.astype(int)
    if arr.size and (arr.min() < 1 or arr.max() > n_classes):
        raise ValueError(f"labels must lie in 1..{n_classes}")
    if n_samples is not None and arr.shape[0] != n_samples:
        raise ValueError("labels and scores have mismatched lengths")
    return arr.astype(int)


def binary_scores(s1):
    """Build a two-column score matrix from class-1 scores."""
    s1 = np.asarray(s1, dtype=float)
    return np.column_stack([s1, 1.0 - s1])


def derived_score(scores):
    """Reduce score vectors to (max score, argmax class).

    Ties are broken deterministically toward the lowest class index.
    Returns a pair of arrays ``(s, yhat)`` where ``s`` is the maximum score
    per row and ``yhat`` the corresponding 1-based class.
    """
    arr = check_scores(scores)
    s = arr.max(axis=1)
    yhat = arr.argmax(axis=1) + 1  # argmax picks the first maximum
    return s, yhat


class PowerCounts(NamedTuple):
    correct_selections: int
    rejections: int
    indecisions: int


def _check_aligned(decisions, truths):
    d = np.asarray(decisions, dtype=int)
    y = np.asarray(truths, dtype=int)
    if d.shape != y.shape or d.ndim != 1:
        raise ValueError("decisions and truths must be aligned 1-D arrays")
    return d, y


def fsp(decisions, truths):
    """False selection proportion: wrong definitive decisions over all
    definitive decisions, with the denominator floored at one.

    An all-indecision vector therefore yields 0.
    """
    d, y = _check_aligned(decisions, truths)
    definitive = d != INDECISION
    errors = int(np.sum(definitive & (d != y)))
    return errors / max(1, int(definitive.sum()))


def power_counts(decisions, truths):
    """Count correct selections, definitive decisions, and indecisions."""
    d, y = _check_aligned(decisions, truths)
    definitive = d != INDECISION
    return PowerCounts(
        correct_selections=int(np.sum(definitive & (d == y))),
        rejections=int(definitive.sum()),
        indecisions=int(np.sum(~definitive)),
    )


@dataclass(frozen=True)
class SelectionResult:
    """Outcome of a selection procedure on one test set.

    ``decisions`` and ``r_values`` are aligned with the test-set order.
    ``tau`` is the score threshold actually used, or None when no threshold
    attains the target level (in which case every decision is indecision).
    """

    decisions: np.ndarray
    r_values: np.ndarray
    tau: float | None
    alpha: float
    method: str
    info: dict = field(default_factory=dict)

    @property
    def n_selected(self):
        return int(np.sum(self.decisions != INDECISION))


def check_alpha(alpha):
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie strictly between 0 and 1")
    return alpha
