"""Closed-form post hoc bounds, valid uniformly over all selections.

Every bound here returns an integer V with 0 <= V <= |S| upper-bounding the
number of false positives in the selection S, simultaneously over all S at
confidence 1 - alpha (under the assumptions of the respective method).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import IndexSet, PValueVector, sorted_restriction
from .templates import Template
from .validation import check_alpha

__all__ = [
    "BoundValue",
    "Envelope",
    "bonferroni_bound",
    "simes_bound",
    "simes_line_shift",
    "threshold_bound",
    "envelope",
    "threshold_envelope",
    "level_set_order",
]


@dataclass(frozen=True)
class BoundValue:
    """An evaluated bound: V false positives at most, with method metadata."""

    v: int
    method: str
    alpha: float | None = None
    lam: float | None = None

    def __post_init__(self):
        if self.v < 0:
            raise ValueError("bound value must be nonnegative")


@dataclass(frozen=True)
class Envelope:
    """Confidence curves over the nested level sets S_1 ... S_m of sorted p-values."""

    k: np.ndarray
    v: np.ndarray
    tp_lower: np.ndarray
    fdp_upper: np.ndarray


def _counting_min(sorted_subset: np.ndarray, thresholds: np.ndarray, offsets: np.ndarray) -> int:
    """min_j (#{p in subset : p >= t_j} + z_j), capped at the subset size."""
    size = sorted_subset.size
    if size == 0:
        return 0
    counts = size - np.searchsorted(sorted_subset, thresholds, side="left")
    return int(min(size, (counts + offsets).min()))


def bonferroni_bound(p: PValueVector, S: IndexSet, alpha: float, k0: int) -> BoundValue:
    """k0-Bonferroni bound: count of p_i >= alpha*k0/m plus k0 - 1, capped at |S|."""
    alpha = check_alpha(alpha)
    if not 1 <= k0 <= p.m:
        raise ValueError(f"k0 must lie in [1, {p.m}], got {k0}")
    ps = sorted_restriction(p, S)
    v = _counting_min(ps, np.array([alpha * k0 / p.m]), np.array([k0 - 1]))
    return BoundValue(v=v, method=f"bonferroni(k0={k0})", alpha=alpha)


def simes_bound(p: PValueVector, S: IndexSet, alpha: float) -> BoundValue:
    """Simes bound: the best k0-Bonferroni bound over k0 = 1..|S|.

    Valid whenever the Simes inequality holds for the null p-values (e.g.
    independence, or PRDS positive dependence).
    """
    alpha = check_alpha(alpha)
    ps = sorted_restriction(p, S)
    k = np.arange(1, ps.size + 1)
    v = _counting_min(ps, alpha * k / p.m, k - 1)
    return BoundValue(v=v, method="simes", alpha=alpha)


def simes_line_shift(p: PValueVector, S: IndexSet, alpha: float) -> int:
    """Smallest shift u of the line v -> alpha*(v-u)/m lying weakly below the
    sorted p-values of S; equals |S| minus the Simes bound."""
    alpha = check_alpha(alpha)
    ps = sorted_restriction(p, S)
    s = ps.size
    ranks = np.arange(1, s + 1)
    for u in range(0, s + 1):
        if np.all(ps[u:] >= alpha * (ranks[u:] - u) / p.m):
            return u
    return s  # u = s is vacuously admissible


def threshold_bound(p: PValueVector, S: IndexSet, template: Template, lam: float) -> BoundValue:
    """Template bound V^lam: min over curves k of (#{p_i >= t_k(lam)} + k - 1).

    Only the template's first min(|S|, K) curves enter the minimization.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lam must lie in [0, 1], got {lam}")
    if template.m != p.m:
        raise ValueError(f"template built for m={template.m}, p-values have m={p.m}")
    ps = sorted_restriction(p, S)
    kmax = min(ps.size, template.size)
    if kmax == 0:
        return BoundValue(v=0, method=f"threshold({template.kind})", lam=lam)
    k = np.arange(1, kmax + 1)
    v = _counting_min(ps, np.asarray(template.threshold(k, lam)), k - 1)
    return BoundValue(v=v, method=f"threshold({template.kind})", lam=lam)


def level_set_order(p: PValueVector) -> np.ndarray:
    """1-based hypothesis indices ordered by increasing p-value, ties by index."""
    return np.argsort(p.values, kind="stable") + 1


def envelope(p: PValueVector, bound: Callable[[IndexSet], "BoundValue | int"]) -> Envelope:
    """Evaluate a post hoc bound on every level set S_k of the k smallest p-values.

    Emits the true-positive lower curve k - V(S_k) and the false discovery
    proportion upper curve V(S_k)/k. The bound must be a valid post hoc bound
    for the curves to inherit simultaneous coverage.
    """
    order = level_set_order(p)
    vs = np.empty(p.m, dtype=np.int64)
    for k in range(1, p.m + 1):
        res = bound(IndexSet.of(order[:k]))
        vs[k - 1] = getattr(res, "v", res)
    return _make_envelope(vs)


def _make_envelope(vs: np.ndarray) -> Envelope:
    k = np.arange(1, vs.size + 1)
    return Envelope(k=k, v=vs, tp_lower=k - vs, fdp_upper=vs / k)


def threshold_envelope(p: PValueVector, thresholds: np.ndarray, offsets: np.ndarray) -> Envelope:
    """Fast envelope for counting bounds min_j (#{p_i >= t_j} + z_j) over level sets.

    Requires nondecreasing thresholds (true for all built-in templates).
    Equivalent to :func:`envelope` with the corresponding bound, in
    O((m + K) log K) instead of O(m K).
    """
    thresholds = np.asarray(thresholds, dtype=np.float64)
    offsets = np.asarray(offsets, dtype=np.int64)
    if thresholds.size != offsets.size or thresholds.size == 0:
        raise ValueError("thresholds and offsets must be nonempty and of equal length")
    if np.any(np.diff(thresholds) < 0):
        raise ValueError("thresholds must be nondecreasing in the curve index")
    m = p.m
    # c[j] = how many of all m p-values fall strictly below threshold j
    c = np.searchsorted(np.sort(p.values), thresholds, side="left")
    # split the minimization at j*(k) = first curve with c_j >= k:
    #   curves j >= j*:  k - k + z_j           -> suffix minimum of z
    #   curves j <  j*:  k - c_j + z_j         -> k + prefix minimum of (z - c)
    prefix = np.minimum.accumulate(offsets - c)
    suffix = np.minimum.accumulate(offsets[::-1])[::-1]
    ks = np.arange(1, m + 1)
    jstar = np.searchsorted(c, ks, side="left")  # count of curves with c_j < k
    big = np.iinfo(np.int64).max // 2
    from_flat = np.where(jstar < c.size, suffix[np.minimum(jstar, c.size - 1)], big)
    from_counts = np.where(jstar > 0, ks + prefix[np.maximum(jstar - 1, 0)], big)
    vs = np.minimum(ks, np.minimum(from_flat, from_counts))
    return _make_envelope(vs.astype(np.int64))
