"""Oracle selection under a known score distribution.

When scores are true posterior probabilities, the conditional error rate
of "select everything with top score >= t" decreases monotonically in t,
so the target level has a well-defined threshold. The conditional error
rate is estimated by Monte Carlo (the clipped-Gaussian score law used in
the simulations has atoms that make quadrature awkward); all randomness is
seed-threaded and reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    INDECISION,
    SelectionResult,
    check_alpha,
    check_scores,
    derived_score,
)

_ORACLE_STREAM = 0x0AC1E


def _rng(seed, *path):
    return np.random.default_rng([int(seed), _ORACLE_STREAM, *map(int, path)])


@dataclass(frozen=True)
class BinaryGaussianMixture:
    """Binary score model: class-1 score is a clipped Gaussian per class.

    ``pi`` is the class-1 proportion; ``mean_class1`` / ``mean_class2``
    are the class-conditional means of the class-1 score, shared variance.
    """

    pi: float
    mean_class1: float
    mean_class2: float
    variance: float

    def __post_init__(self):
        if not 0.0 <= self.pi <= 1.0:
            raise ValueError("pi must lie in [0, 1]")
        if self.variance <= 0.0:
            raise ValueError("variance must be positive")

    def sample(self, rng, n):
        """Draw (scores, labels); labels are 1/2, scores are (n, 2)."""
        labels = np.where(rng.random(n) < self.pi, 1, 2)
        means = np.where(labels == 1, self.mean_class1, self.mean_class2)
        s1 = np.clip(rng.normal(means, np.sqrt(self.variance)), 0.0, 1.0)
        return np.column_stack([s1, 1.0 - s1]), labels


@dataclass(frozen=True)
class UniformTopScore:
    """Toy model with the top score uniform on [0.5, 1].

    The true label matches the argmax class with probability equal to the
    top score, as posterior calibration requires. Closed forms exist for
    this model, which makes it the reference case for testing.
    """

    def sample(self, rng, n):
        s = rng.uniform(0.5, 1.0, n)
        correct = rng.random(n) < s
        labels = np.where(correct, 1, 2)
        return np.column_stack([s, 1.0 - s]), labels


def oracle_q(model, t, mc_draws=100_000, seed=0):
    """Monte Carlo estimate of the conditional error rate at threshold t.

    Error mass is read off the scores themselves: a sample with top score
    s is misclassified by the argmax rule with probability 1 - s.
    """
    t = float(t)
    rng = _rng(seed)
    scores, _ = model.sample(rng, int(mc_draws))
    top, _ = derived_score(scores)
    selected = top >= t
    n_sel = int(selected.sum())
    if n_sel == 0:
        raise ValueError(f"threshold {t} is beyond the score support")
    return float(np.sum(1.0 - top[selected]) / n_sel)


def oracle_threshold(model, alpha, mc_draws=100_000, tol=1e-4, seed=0):
    """Invert the conditional error rate by bisection on [0.5, 1].

    Returns 0.5 (the select-everything regime) when the error rate at 0.5
    is already at or below alpha. Each evaluation draws a fresh seeded
    sample, so the result is deterministic given the seed.
    """
    alpha = check_alpha(alpha)
    if oracle_q(model, 0.5, mc_draws, seed=seed) <= alpha:
        return 0.5
    lo, hi = 0.5, 1.0
    step = 0
    while hi - lo > tol:
        step += 1
        mid = 0.5 * (lo + hi)
        try:
            q_mid = oracle_q(model, mid, mc_draws, seed=seed + step)
        except ValueError:
            q_mid = 0.0  # nothing above mid: error rate vacuously low
        if q_mid > alpha:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def oracle_decide(test_scores, t_star, alpha):
    """Threshold true-posterior scores directly at t_star."""
    test_scores = check_scores(test_scores)
    alpha = check_alpha(alpha)
    top, pred = derived_score(test_scores)
    selected = top >= t_star
    return SelectionResult(
        decisions=np.where(selected, pred, INDECISION),
        r_values=np.where(selected, 0.0, 1.0),
        tau=float(t_star),
        alpha=alpha,
        method="oracle",
    )


def to_prediction_set(decision):
    """Map a binary decision to its prediction-set counterpart."""
    d = int(decision)
    if d == INDECISION:
        return frozenset({1, 2})
    if d in (1, 2):
        return frozenset({d})
    raise ValueError("binary decisions must be 0, 1 or 2")


def from_prediction_set(prediction_set):
    """Inverse of :func:`to_prediction_set`."""
    s = frozenset(prediction_set)
    if not s:
        raise ValueError("prediction sets must be non-empty")
    if s == frozenset({1, 2}):
        return INDECISION
    if len(s) == 1 and next(iter(s)) in (1, 2):
        return next(iter(s))
    raise ValueError(f"not a binary prediction set: {set(s)}")


def set_size_identity(decisions):
    """Average mapped-set size and indecision fraction.

    The average prediction-set size always exceeds the indecision fraction
    by exactly one; the identity is asserted at the integer-count level.
    """
    d = np.asarray(decisions, dtype=int)
    if d.ndim != 1 or d.size == 0:
        raise ValueError("decisions must be a non-empty 1-D array")
    sizes = np.where(d == INDECISION, 2, 1)
    n = d.size
    n_id = int(np.sum(d == INDECISION))
    assert int(sizes.sum()) == n + n_id
    return sizes.sum() / n, n_id / n
