"""Command-line interface.

Two subcommands: ``select`` applies a selection procedure to score CSV
files, ``simulate`` runs the replicated experiment grids. Exit codes:
0 success, 2 usage error, 3 data error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .fasi import select_fasi
from .io import DataFormatError, read_score_file, write_decisions, write_json
from .qvalue import select_base
from .shift import select_corrected
from .sim import SimConfig, preset_configs, run_grid, swapped_means
from .weighted import select_weighted

EXIT_USAGE = 2
EXIT_DATA = 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fsrselect",
        description="Selective classification with false selection rate control.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sel = sub.add_parser("select", help="run a selection procedure on score CSVs")
    sel.add_argument("cal", help="calibration score CSV (with label column)")
    sel.add_argument("test", help="test score CSV")
    sel.add_argument("--alpha", type=float, default=0.1)
    sel.add_argument(
        "--method",
        choices=["base", "corrected", "weighted", "fasi"],
        default="base",
    )
    sel.add_argument("--weight", type=int, default=None,
                     help="test-data weight (required for --method weighted)")
    sel.add_argument("--out-dir", default=".", help="output directory")

    simp = sub.add_parser("simulate", help="run replicated experiments")
    simp.add_argument("--preset", choices=["figure1", "figure2", "figure3"])
    simp.add_argument("--alpha", type=float, default=0.1)
    simp.add_argument("--seed", type=int, default=0)
    simp.add_argument("--reps", type=int, default=100)
    simp.add_argument("--pi-cal", type=float, default=0.5)
    simp.add_argument("--pi-test", type=float, default=0.5)
    simp.add_argument("--n-cal", type=int, default=1500)
    simp.add_argument("--n-test", type=int, default=1000)
    simp.add_argument(
        "--method",
        action="append",
        choices=["base", "corrected", "weighted", "fasi"],
        help="method to run (repeatable; ignored with --preset)",
    )
    simp.add_argument("--weight", type=int, action="append",
                      help="weight for the weighted method (repeatable)")
    simp.add_argument("--swapped-means", action="store_true",
                      help="use the informative class-mean orientation")
    simp.add_argument("--out-dir", default=".", help="output directory")
    return parser


def _run_select(args):
    if args.method == "weighted" and args.weight is None:
        raise UsageError("--method weighted requires --weight")
    if args.method != "weighted" and args.weight is not None:
        raise UsageError("--weight only applies to --method weighted")
    if not 0.0 < args.alpha < 1.0:
        raise UsageError("--alpha must lie strictly between 0 and 1")

    cal_scores, cal_labels = read_score_file(args.cal, require_labels=True)
    test_scores, _ = read_score_file(
        args.test, require_labels=False, n_classes=cal_scores.shape[1]
    )
    try:
        if args.method == "base":
            result = select_base(cal_scores, cal_labels, test_scores, args.alpha)
        elif args.method == "corrected":
            result = select_corrected(cal_scores, cal_labels, test_scores, args.alpha)
        elif args.method == "weighted":
            result = select_weighted(
                cal_scores, cal_labels, test_scores, args.alpha, args.weight
            )
        else:
            result = select_fasi(cal_scores, cal_labels, test_scores, args.alpha)
    except ValueError as exc:
        raise DataFormatError(str(exc)) from None

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_decisions(out_dir / "decisions.csv", result)
    sidecar = {
        "method": args.method,
        "alpha": args.alpha,
        "tau": result.tau,
        "n_cal": int(cal_scores.shape[0]),
        "n_test": int(test_scores.shape[0]),
        "n_selected": result.n_selected,
    }
    sidecar.update(
        {k: v for k, v in result.info.items() if isinstance(v, (int, float, str))}
    )
    write_json(out_dir / "selection.json", sidecar)
    print(f"wrote {out_dir / 'decisions.csv'} and {out_dir / 'selection.json'}")


def _run_simulate(args):
    if not 0.0 < args.alpha < 1.0:
        raise UsageError("--alpha must lie strictly between 0 and 1")
    if args.preset:
        configs = preset_configs(
            args.preset,
            seed=args.seed,
            reps=args.reps,
            alpha=args.alpha,
            swapped=args.swapped_means,
        )
    else:
        methods = tuple(args.method) if args.method else ("base",)
        weights = tuple(args.weight) if args.weight else (1,)
        try:
            cfg = SimConfig(
                pi_cal=args.pi_cal,
                pi_test=args.pi_test,
                n_cal=args.n_cal,
                n_test=args.n_test,
                alpha=args.alpha,
                reps=args.reps,
                seed=args.seed,
                methods=methods,
                weights=weights,
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if args.swapped_means:
            cfg = swapped_means(cfg)
        configs = [cfg]

    n_workers = int(os.environ.get("FSR_SELECT_THREADS", "1"))
    report = run_grid(configs, n_workers=n_workers)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report.to_csv(out_dir / "replications.csv")
    write_json(out_dir / "summary.json", report.summary_dict())
    print(f"wrote {out_dir / 'replications.csv'} and {out_dir / 'summary.json'}")


class UsageError(Exception):
    pass


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "select":
            _run_select(args)
        else:
            _run_simulate(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
