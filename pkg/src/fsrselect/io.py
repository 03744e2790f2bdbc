"""CSV score-file reading and result writing for the CLI.

Score files are UTF-8 CSV with a header row: columns ``score_1`` ..
``score_K`` and an optional ``label`` column (0 or empty = no label).
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .core import check_labels, check_scores


class DataFormatError(ValueError):
    """Malformed or inconsistent input data file."""


def _score_columns(header):
    cols = []
    k = 1
    while f"score_{k}" in header:
        cols.append(header.index(f"score_{k}"))
        k += 1
    if len(cols) < 2:
        raise DataFormatError(
            "header must contain score_1..score_K columns (K >= 2)"
        )
    return cols


def read_score_file(path, require_labels=False, n_classes=None):
    """Read a score CSV; returns (scores, labels) with labels possibly None.

    Raises :class:`DataFormatError` with the offending line number on
    malformed rows.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError(f"{path}: empty file") from None
        score_cols = _score_columns(header)
        label_col = header.index("label") if "label" in header else None
        if require_labels and label_col is None:
            raise DataFormatError(f"{path}: calibration file needs a label column")

        rows, labels = [], []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                rows.append([float(row[i]) for i in score_cols])
            except (ValueError, IndexError):
                raise DataFormatError(f"{path}: bad score row at line {line_no}") from None
            if label_col is not None:
                cell = row[label_col].strip() if label_col < len(row) else ""
                try:
                    labels.append(int(cell) if cell else 0)
                except ValueError:
                    raise DataFormatError(
                        f"{path}: bad label at line {line_no}"
                    ) from None

    if not rows:
        raise DataFormatError(f"{path}: no data rows")
    try:
        scores = check_scores(np.array(rows), n_classes=n_classes)
    except ValueError as exc:
        raise DataFormatError(f"{path}: {exc}") from None

    if label_col is None:
        return scores, None
    labels = np.array(labels, dtype=int)
    if require_labels:
        if np.any(labels == 0):
            raise DataFormatError(f"{path}: calibration labels must all be set")
        try:
            labels = check_labels(labels, scores.shape[1], scores.shape[0])
        except ValueError as exc:
            raise DataFormatError(f"{path}: {exc}") from None
    return scores, labels


def write_decisions(path, result):
    """Write per-sample decisions and R-values."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "decision", "r_value"])
        for i, (d, r) in enumerate(zip(result.decisions, result.r_values)):
            writer.writerow([i, int(d), repr(float(r))])


def write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")
