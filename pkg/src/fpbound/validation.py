"""Input validation helpers shared by the domain types, estimators and IO layer."""

from __future__ import annotations

import numpy as np


class SelectionTooLargeError(ValueError):
    """Raised when the exhaustive interpolation bound is asked for an oversized selection."""


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


def check_pvalue_array(values) -> np.ndarray:
    """Validate and return a read-only float64 vector of p-values in [0, 1]."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"p-values must be one-dimensional, got shape {arr.shape}")
    if arr.size < 1:
        raise ValueError("need at least one p-value")
    if np.isnan(arr).any():
        raise ValueError("p-values must not contain NaN")
    if (arr < 0).any() or (arr > 1).any():
        bad = arr[(arr < 0) | (arr > 1)][0]
        raise ValueError(f"p-values must lie in [0, 1], got {bad}")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


def check_indices(indices, m: int | None = None) -> np.ndarray:
    """Validate a 1-based index selection.

    Accepts an integer sequence (any order, duplicates rejected) or a boolean
    mask of length ``m``. Returns a read-only, strictly increasing int64 array.
    """
    arr = np.asarray(indices)
    if arr.dtype == bool:
        if m is not None and arr.size != m:
            raise ValueError(f"boolean mask has length {arr.size}, expected {m}")
        arr = np.flatnonzero(arr) + 1
    else:
        arr = np.asarray(arr, dtype=np.int64).reshape(-1)
    arr = np.asarray(arr, dtype=np.int64)
    if arr.size:
        arr = np.sort(arr)
        if arr[0] < 1:
            raise ValueError(f"indices are 1-based, got {arr[0]}")
        if m is not None and arr[-1] > m:
            raise ValueError(f"index {arr[-1]} out of range for m={m}")
        if (np.diff(arr) == 0).any():
            dup = arr[:-1][np.diff(arr) == 0][0]
            raise ValueError(f"duplicate index {dup} in selection")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


def check_labels(labels) -> np.ndarray:
    """Validate two-group labels: entries in {1, 2}, at least one of each."""
    arr = np.asarray(labels, dtype=np.int64).reshape(-1)
    if not np.isin(arr, (1, 2)).all():
        bad = arr[~np.isin(arr, (1, 2))][0]
        raise ValueError(f"group labels must be 1 or 2, got {bad}")
    if (arr == 1).sum() < 1 or (arr == 2).sum() < 1:
        raise ValueError("each group needs at least one sample")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


def check_matrix(data) -> np.ndarray:
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"data must be a 2-d matrix, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 2:
        raise ValueError(f"data must have >= 1 row and >= 2 columns, got {arr.shape}")
    if np.isnan(arr).any():
        raise ValueError("data must not contain NaN")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr
