"""Selective classification with false selection rate (FSR) control.

Given black-box classifier scores for a labeled calibration set and an
unlabeled test set, the procedures here return a per-sample decision
(a class, or 0 for indecision) such that the expected share of wrong
labels among the definitive decisions is controlled at a user level.
"""

__version__ = "0.1.0"

from .core import (
    INDECISION,
    PowerCounts,
    SelectionResult,
    binary_scores,
    derived_score,
    fsp,
    power_counts,
)
from .estimators import SelectiveClassifier
from .fasi import q_hat_class, select_fasi
from .oracle import (
    BinaryGaussianMixture,
    UniformTopScore,
    from_prediction_set,
    oracle_decide,
    oracle_q,
    oracle_threshold,
    set_size_identity,
    to_prediction_set,
)
from .qvalue import QCurve, q_curve, q_hat, r_values, select_base, tau
from .shift import (
    EmpiricalCdf,
    choose_side,
    p_cal_hat,
    p_test_hat,
    select_corrected,
    storey_pi,
)
from .sim import ExperimentReport, SimConfig, gen_dataset, preset_configs, run_grid
from .weighted import q_curve_weighted, q_hat_weighted, select_weighted

__all__ = [
    "INDECISION",
    "PowerCounts",
    "SelectionResult",
    "SelectiveClassifier",
    "BinaryGaussianMixture",
    "UniformTopScore",
    "QCurve",
    "EmpiricalCdf",
    "ExperimentReport",
    "SimConfig",
    "binary_scores",
    "choose_side",
    "derived_score",
    "from_prediction_set",
    "fsp",
    "gen_dataset",
    "oracle_decide",
    "oracle_q",
    "oracle_threshold",
    "p_cal_hat",
    "p_test_hat",
    "power_counts",
    "preset_configs",
    "q_curve",
    "q_curve_weighted",
    "q_hat",
    "q_hat_class",
    "q_hat_weighted",
    "r_values",
    "run_grid",
    "select_base",
    "select_corrected",
    "select_fasi",
    "select_weighted",
    "set_size_identity",
    "storey_pi",
    "tau",
    "to_prediction_set",
]
