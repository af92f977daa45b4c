"""CSV ingestion with line-numbered diagnostics.

Formats:
  p-values    header ``id,p`` (extra columns allowed, selectable as annotations)
  two-sample  header ``<id-col>,<sample...>`` with one numeric cell per sample;
              a column named by ``chrom_col`` is treated as an annotation
  labels      header ``sample_id,group`` with group in {1, 2}
"""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .core import PValueVector, TwoSampleDataset

__all__ = ["FileFormatError", "load_pvalues_csv", "load_two_sample_csv"]


class FileFormatError(ValueError):
    """Malformed input file; the message names the offending line."""


def _read_rows(path) -> list[list[str]]:
    path = Path(path)
    if not path.exists():
        raise FileFormatError(f"{path}: file not found")
    with path.open(newline="") as fh:
        rows = [row for row in csv.reader(fh)]
    if not rows:
        raise FileFormatError(f"{path}: empty file")
    return rows


def load_pvalues_csv(path, chrom_col: str | None = None):
    """Read ``id,p`` rows; returns (PValueVector, ids, annotations)."""
    rows = _read_rows(path)
    header = [h.strip() for h in rows[0]]
    if "id" not in header or "p" not in header:
        raise FileFormatError(f"{path}: line 1: header must contain 'id' and 'p' columns")
    annotation_cols = [h for h in header if h not in ("id", "p")]
    if chrom_col is not None and chrom_col not in annotation_cols:
        raise FileFormatError(f"{path}: line 1: no column named {chrom_col!r}")
    idx = {name: header.index(name) for name in header}
    ids: list[str] = []
    values: list[float] = []
    annotations: dict[str, list[str]] = {name: [] for name in annotation_cols}
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise FileFormatError(
                f"{path}: line {lineno}: expected {len(header)} cells, got {len(row)}"
            )
        ids.append(row[idx["id"]].strip())
        raw = row[idx["p"]].strip()
        try:
            value = float(raw)
        except ValueError:
            raise FileFormatError(f"{path}: line {lineno}: p-value {raw!r} is not a number") from None
        if not 0.0 <= value <= 1.0 or np.isnan(value):
            raise FileFormatError(f"{path}: line {lineno}: p-value {value} outside [0, 1]")
        values.append(value)
        for name in annotation_cols:
            annotations[name].append(row[idx[name]].strip())
    if not values:
        raise FileFormatError(f"{path}: no data rows")
    if len(set(ids)) != len(ids):
        dup = next(i for i in ids if ids.count(i) > 1)
        raise FileFormatError(f"{path}: duplicate id {dup!r}")
    return PValueVector(np.array(values)), ids, {k: np.array(v) for k, v in annotations.items()}


def _load_labels_csv(path) -> dict[str, int]:
    rows = _read_rows(path)
    header = [h.strip() for h in rows[0]]
    if header[:2] != ["sample_id", "group"]:
        raise FileFormatError(f"{path}: line 1: header must be 'sample_id,group'")
    labels: dict[str, int] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) < 2:
            raise FileFormatError(f"{path}: line {lineno}: expected 2 cells")
        sample, raw = row[0].strip(), row[1].strip()
        if raw not in ("1", "2"):
            raise FileFormatError(f"{path}: line {lineno}: group must be 1 or 2, got {raw!r}")
        if sample in labels:
            raise FileFormatError(f"{path}: line {lineno}: duplicate sample id {sample!r}")
        labels[sample] = int(raw)
    if not labels:
        raise FileFormatError(f"{path}: no label rows")
    return labels


def load_two_sample_csv(data_path, labels_path, chrom_col: str | None = None):
    """Read a measurement matrix plus group labels.

    Returns (TwoSampleDataset, row ids, annotations). Sample columns are taken
    in header order; every sample column must appear in the labels file and
    vice versa.
    """
    rows = _read_rows(data_path)
    header = [h.strip() for h in rows[0]]
    if len(header) < 2:
        raise FileFormatError(f"{data_path}: line 1: need an id column plus sample columns")
    annotation_names = [chrom_col] if chrom_col is not None else []
    for name in annotation_names:
        if name not in header[1:]:
            raise FileFormatError(f"{data_path}: line 1: no column named {name!r}")
    sample_cols = [
        (j, name) for j, name in enumerate(header) if j > 0 and name not in annotation_names
    ]
    if not sample_cols:
        raise FileFormatError(f"{data_path}: line 1: no sample columns left")
    labels_by_sample = _load_labels_csv(labels_path)
    sample_names = [name for _, name in sample_cols]
    missing = [s for s in sample_names if s not in labels_by_sample]
    extra = [s for s in labels_by_sample if s not in sample_names]
    if missing or extra:
        raise FileFormatError(
            f"{labels_path}: sample columns and labels disagree "
            f"(unlabeled: {missing or 'none'}, unmatched labels: {extra or 'none'})"
        )
    ids: list[str] = []
    cells: list[list[float]] = []
    annotations: dict[str, list[str]] = {name: [] for name in annotation_names}
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise FileFormatError(
                f"{data_path}: line {lineno}: expected {len(header)} cells, got {len(row)}"
            )
        ids.append(row[0].strip())
        parsed = []
        for j, name in sample_cols:
            raw = row[j].strip()
            try:
                parsed.append(float(raw))
            except ValueError:
                raise FileFormatError(
                    f"{data_path}: line {lineno}: cell {raw!r} in column {name!r} is not numeric"
                ) from None
        cells.append(parsed)
        for name in annotation_names:
            annotations[name].append(row[header.index(name)].strip())
    if not cells:
        raise FileFormatError(f"{data_path}: no data rows")
    if len(set(ids)) != len(ids):
        dup = next(i for i in ids if ids.count(i) > 1)
        raise FileFormatError(f"{data_path}: duplicate id {dup!r}")
    labels = np.array([labels_by_sample[name] for name in sample_names])
    ds = TwoSampleDataset(np.array(cells), labels)
    return ds, ids, {k: np.array(v) for k, v in annotations.items()}
