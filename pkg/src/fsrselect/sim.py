"""Replicated simulation harness for the selection procedures.

Scores are generated directly (no features, no model fitting): each
sample's class-1 score is a clipped Gaussian whose mean depends on the
true class. Per-replication RNG substreams are derived from
(seed, stream, replication index), so results do not depend on execution
order and replications parallelize freely.

Note on orientation: the published experiment assigns mean 3/8 to class 1
and 5/8 to class 2, which makes the argmax classifier wrong on most
samples (class-1 samples rarely carry the larger class-1 score). The
``swapped_means`` preset flips the assignment to the orientation in which
the classifier is informative; both are exposed.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
import pandas as pd

from .core import fsp, power_counts
from .fasi import select_fasi
from .qvalue import select_base
from .shift import select_corrected
from .weighted import select_weighted

_DATA_STREAM = 0xDA7A

PAPER_MEAN_CLASS1 = 3.0 / 8.0
PAPER_MEAN_CLASS2 = 5.0 / 8.0
PAPER_VARIANCE = 1.0 / 64.0

METHODS = ("base", "corrected", "weighted", "fasi")


@dataclass(frozen=True)
class SimConfig:
    pi_cal: float = 0.5
    pi_test: float = 0.5
    n_cal: int = 1500
    n_test: int = 1000
    alpha: float = 0.1
    reps: int = 100
    seed: int = 0
    methods: tuple = ("base",)
    weights: tuple = (1,)
    mean_class1: float = PAPER_MEAN_CLASS1
    mean_class2: float = PAPER_MEAN_CLASS2
    variance: float = PAPER_VARIANCE

    def __post_init__(self):
        for name in ("pi_cal", "pi_test"):
            p = getattr(self, name)
            if not 0.0 < p < 1.0:
                raise ValueError(f"{name} must lie strictly between 0 and 1")
        if self.n_cal < 1 or self.n_test < 1 or self.reps < 1:
            raise ValueError("sizes and reps must be at least 1")
        if self.variance <= 0.0:
            raise ValueError("variance must be positive")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods: {sorted(unknown)}")


def swapped_means(cfg):
    """Same configuration with the class-mean assignment flipped."""
    return replace(cfg, mean_class1=cfg.mean_class2, mean_class2=cfg.mean_class1)


def _draw(rng, cfg, n, pi):
    labels = np.where(rng.random(n) < pi, 1, 2)
    means = np.where(labels == 1, cfg.mean_class1, cfg.mean_class2)
    s1 = np.clip(rng.normal(means, np.sqrt(cfg.variance)), 0.0, 1.0)
    return np.column_stack([s1, 1.0 - s1]), labels


def gen_dataset(cfg, rep):
    """Generate one replication: calibration scores/labels and test
    scores/labels (test labels are retained only for metric evaluation).
    """
    rng = np.random.default_rng([int(cfg.seed), _DATA_STREAM, int(rep)])
    cal_scores, cal_labels = _draw(rng, cfg, cfg.n_cal, cfg.pi_cal)
    test_scores, test_labels = _draw(rng, cfg, cfg.n_test, cfg.pi_test)
    return cal_scores, cal_labels, test_scores, test_labels


def _method_runs(cfg):
    for method in cfg.methods:
        if method == "weighted":
            for w in cfg.weights:
                yield method, int(w)
        else:
            yield method, None


def run_replication(cfg, rep):
    """Run every requested method on one generated dataset."""
    cal_scores, cal_labels, test_scores, test_labels = gen_dataset(cfg, rep)
    records = []
    for method, weight in _method_runs(cfg):
        base = {
            "method": method,
            "weight": weight,
            "rep": rep,
            "pi_cal": cfg.pi_cal,
            "pi_test": cfg.pi_test,
            "alpha": cfg.alpha,
            "seed": cfg.seed,
        }
        try:
            if method == "base":
                res = select_base(cal_scores, cal_labels, test_scores, cfg.alpha)
            elif method == "corrected":
                res = select_corrected(cal_scores, cal_labels, test_scores, cfg.alpha)
            elif method == "weighted":
                res = select_weighted(
                    cal_scores, cal_labels, test_scores, cfg.alpha, weight
                )
            else:
                res = select_fasi(cal_scores, cal_labels, test_scores, cfg.alpha)
        except Exception as exc:  # failures are recorded, not fatal
            records.append({**base, "error": f"{type(exc).__name__}: {exc}"})
            continue
        counts = power_counts(res.decisions, test_labels)
        records.append(
            {
                **base,
                "fsp": fsp(res.decisions, test_labels),
                "rejections": counts.rejections,
                "correct_selections": counts.correct_selections,
                "indecisions": counts.indecisions,
                "tau": res.tau,
                "error": None,
            }
        )
    return records


@dataclass
class ExperimentReport:
    """Per-replication records plus recomputable aggregates."""

    records: pd.DataFrame

    _GROUP_KEYS = ["pi_cal", "pi_test", "alpha", "method", "weight"]
    _METRICS = ["fsp", "rejections", "correct_selections", "indecisions"]

    def summary(self):
        ok = self.records[self.records["error"].isna()]
        grouped = ok.groupby(self._GROUP_KEYS, dropna=False)[self._METRICS]
        agg = grouped.agg(["mean", "std", "median", _q1, _q3]).reset_index()
        agg.columns = [
            c[0] if not c[1] else f"{c[0]}_{c[1].lstrip('_')}" for c in agg.columns
        ]
        return agg

    def mean_fsp(self, method, **filters):
        rows = self.records[self.records["method"] == method]
        for key, value in filters.items():
            rows = rows[rows[key] == value]
        rows = rows[rows["error"].isna()]
        return float(rows["fsp"].mean())

    def to_csv(self, path):
        self.records.to_csv(path, index=False)

    def summary_dict(self):
        summary = self.summary()
        return {
            "n_records": int(len(self.records)),
            "n_failures": int(self.records["error"].notna().sum()),
            "groups": summary.to_dict(orient="records"),
        }


def _q1(x):
    return x.quantile(0.25)


def _q3(x):
    return x.quantile(0.75)


def run_grid(configs, n_workers=None):
    """Run every (config, replication) job and assemble the report.

    ``n_workers`` > 1 runs replications in a thread pool; output is
    identical either way because substreams are index-derived.
    """
    configs = list(configs)
    jobs = [(cfg, rep) for cfg in configs for rep in range(cfg.reps)]
    if n_workers is None:
        n_workers = int(os.environ.get("FSR_SELECT_THREADS", "1"))
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            chunks = list(pool.map(lambda job: run_replication(*job), jobs))
    else:
        chunks = [run_replication(cfg, rep) for cfg, rep in jobs]
    records = [rec for chunk in chunks for rec in chunk]
    frame = pd.DataFrame.from_records(records)
    return ExperimentReport(records=frame)


PI_GRID = tuple(round(0.1 * i, 1) for i in range(1, 10))


def preset_configs(name, seed=0, reps=100, alpha=0.1, swapped=False):
    """Experiment grids behind the three published figures.

    figure1: calibration proportion swept, shift-corrected method vs the
    per-class baseline. figure2: test proportion swept, base method vs the
    per-class baseline. figure3: weight sweep of the weighted method.
    """
    base = SimConfig(seed=seed, reps=reps, alpha=alpha)
    if swapped:
        base = swapped_means(base)
    if name == "figure1":
        return [
            replace(base, pi_cal=p, pi_test=0.5, methods=("corrected", "fasi"))
            for p in PI_GRID
        ]
    if name == "figure2":
        return [
            replace(base, pi_cal=0.5, pi_test=p, methods=("base", "fasi"))
            for p in PI_GRID
        ]
    if name == "figure3":
        return [
            replace(
                base,
                pi_cal=0.5,
                pi_test=0.5,
                methods=("weighted",),
                weights=(0, 1, 2, 3, 4),
            )
        ]
    raise ValueError(f"unknown preset: {name!r}")
