"""Domain primitives: p-value vectors, index sets, two-sample data and special functions.

Everything here is a pure function of immutable inputs; instances can be
shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .validation import (
    check_indices,
    check_labels,
    check_matrix,
    check_pvalue_array,
)

__all__ = [
    "PValueVector",
    "IndexSet",
    "TwoSampleDataset",
    "GroundTruth",
    "FoldChange",
    "sorted_restriction",
    "beta_cdf",
    "beta_quantile",
    "gaussian_tail",
    "gaussian_tail_inv",
    "two_sample_pvalues",
    "fold_change",
]


@dataclass(frozen=True)
class PValueVector:
    """A vector of m p-values in [0, 1], the unit of inference."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", check_pvalue_array(self.values))

    @property
    def m(self) -> int:
        return self.values.shape[0]

    def sorted(self) -> np.ndarray:
        return np.sort(self.values, kind="stable")


@dataclass(frozen=True)
class IndexSet:
    """A duplicate-free set of 1-based hypothesis indices, stored sorted."""

    indices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "indices", check_indices(self.indices))

    @classmethod
    def of(cls, indices, m: int | None = None) -> "IndexSet":
        return cls(check_indices(indices, m))

    @classmethod
    def empty(cls) -> "IndexSet":
        return cls(np.array([], dtype=np.int64))

    @classmethod
    def full(cls, m: int) -> "IndexSet":
        return cls(np.arange(1, m + 1, dtype=np.int64))

    def __len__(self) -> int:
        return self.indices.shape[0]

    def mask(self, m: int) -> np.ndarray:
        out = np.zeros(m, dtype=bool)
        out[self.indices - 1] = True
        return out

    def intersection_size(self, other: "IndexSet") -> int:
        return np.intersect1d(self.indices, other.indices, assume_unique=True).size

    def validate_against(self, m: int) -> None:
        if len(self) and self.indices[-1] > m:
            raise ValueError(f"index {self.indices[-1]} out of range for m={m}")


@dataclass(frozen=True)
class GroundTruth:
    """True-null indices of a simulated scenario (simulation use only)."""

    h0: IndexSet


@dataclass(frozen=True)
class TwoSampleDataset:
    """An m x n measurement matrix with a binary group label per column.

    Group membership is positional: ``labels[j]`` is the group of column j,
    and stays fixed when columns are permuted.
    """

    data: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "data", check_matrix(self.data))
        object.__setattr__(self, "labels", check_labels(self.labels))
        if self.labels.shape[0] != self.data.shape[1]:
            raise ValueError(
                f"labels length {self.labels.shape[0]} does not match "
                f"{self.data.shape[1]} data columns"
            )

    @property
    def m(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1]

    @property
    def n1(self) -> int:
        return int((self.labels == 1).sum())

    @property
    def n2(self) -> int:
        return int((self.labels == 2).sum())

    def group_means(self) -> tuple[np.ndarray, np.ndarray]:
        g1 = self.data[:, self.labels == 1].mean(axis=1)
        g2 = self.data[:, self.labels == 2].mean(axis=1)
        return g1, g2

    def restrict_rows(self, rows: IndexSet) -> "TwoSampleDataset":
        rows.validate_against(self.m)
        return TwoSampleDataset(self.data[rows.indices - 1], self.labels)


@dataclass(frozen=True)
class FoldChange:
    """Per-row ratio of group-2 to group-1 means, with undefined entries flagged."""

    ratio: np.ndarray
    log_ratio: np.ndarray
    undefined: np.ndarray  # True where the ratio or its log does not exist


def sorted_restriction(p: PValueVector, subset: IndexSet) -> np.ndarray:
    """Ascending p-values restricted to ``subset`` (ties keep all copies)."""
    subset.validate_against(p.m)
    return np.sort(p.values[subset.indices - 1], kind="stable")


def _check_beta_params(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if (a <= 0).any() or (b <= 0).any():
        raise ValueError("beta parameters must be positive")
    return a, b


def beta_cdf(x, a, b):
    """Regularized incomplete beta function, the CDF of Beta(a, b) at x."""
    a, b = _check_beta_params(a, b)
    x = np.asarray(x, dtype=np.float64)
    if (x < 0).any() or (x > 1).any():
        raise ValueError("x must lie in [0, 1]")
    out = special.betainc(a, b, x)
    return float(out) if out.ndim == 0 else out


def beta_quantile(q, a, b):
    """Quantile of Beta(a, b): inverse of :func:`beta_cdf` in its first argument."""
    a, b = _check_beta_params(a, b)
    q = np.asarray(q, dtype=np.float64)
    if (q < 0).any() or (q > 1).any():
        raise ValueError("q must lie in [0, 1]")
    out = special.betaincinv(a, b, q)
    return float(out) if out.ndim == 0 else out


def gaussian_tail(z):
    """Standard normal upper tail P(Z >= z)."""
    z = np.asarray(z, dtype=np.float64)
    out = special.ndtr(-z)
    return float(out) if out.ndim == 0 else out


def gaussian_tail_inv(q):
    """Inverse of :func:`gaussian_tail` on (0, 1)."""
    q = np.asarray(q, dtype=np.float64)
    if (q <= 0).any() or (q >= 1).any():
        raise ValueError("q must lie strictly inside (0, 1)")
    out = -special.ndtri(q)
    return float(out) if out.ndim == 0 else out


def two_sample_pvalues(ds: TwoSampleDataset, studentized: bool = False) -> PValueVector:
    """Two-sided p-values for equality of group means, one per row.

    The default statistic assumes unit row variance:
    p_i = 2 (1 - Phi(|mean2_i - mean1_i| / s)) with s = sqrt(1/n1 + 1/n2).
    With ``studentized=True`` the difference is scaled by the Welch standard
    error estimated from the data instead (still a normal reference).
    """
    g1, g2 = ds.group_means()
    diff = np.abs(g2 - g1)
    if studentized:
        if ds.n1 < 2 or ds.n2 < 2:
            raise ValueError("studentized statistic needs at least 2 samples per group")
        v1 = ds.data[:, ds.labels == 1].var(axis=1, ddof=1)
        v2 = ds.data[:, ds.labels == 2].var(axis=1, ddof=1)
        scale = np.sqrt(v1 / ds.n1 + v2 / ds.n2)
        # rows with zero estimated variance carry no evidence either way
        z = np.divide(diff, scale, out=np.zeros_like(diff), where=scale > 0)
    else:
        z = diff / np.sqrt(1.0 / ds.n1 + 1.0 / ds.n2)
    return PValueVector(2.0 * gaussian_tail(z))


def fold_change(ds: TwoSampleDataset) -> FoldChange:
    """Ratio of group-2 to group-1 means per row, plus its natural log.

    Zero group-1 means (and non-positive ratios, for the log) are flagged in
    ``undefined`` rather than raising.
    """
    g1, g2 = ds.group_means()
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(g1 != 0, g2 / g1, np.nan)
        log_ratio = np.where(ratio > 0, np.log(np.where(ratio > 0, ratio, 1.0)), np.nan)
    return FoldChange(ratio=ratio, log_ratio=log_ratio, undefined=np.isnan(log_ratio))
