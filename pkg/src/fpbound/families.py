"""Reference families: regions with false-positive budgets, and the bounds
interpolated from them.

A reference family is a collection of pairs (R_k, zeta_k) whose joint error
rate is controlled: with probability 1 - alpha, every region R_k contains at
most zeta_k true nulls. Any such family yields a bound for arbitrary
selections by interpolation; the exact interpolation is NP-hard in general,
so two computable relaxations are provided, each exact under a structural
condition (nested / disjoint).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import GroundTruth, IndexSet, PValueVector
from .templates import Template
from .validation import SelectionTooLargeError, check_alpha

__all__ = [
    "ReferenceFamily",
    "optimal_bound",
    "augmentation_bound",
    "disjoint_sum_bound",
    "markov_budget",
    "dkw_budget",
    "dkw_budget_at",
    "jer_holds",
    "threshold_reference_family",
]

OPTIMAL_BOUND_MAX_SIZE = 24


@dataclass(frozen=True)
class ReferenceFamily:
    """K regions with integer budgets; the structure tag is verified, not trusted."""

    regions: tuple[IndexSet, ...]
    budgets: np.ndarray
    structure: str = "general"

    def __post_init__(self):
        budgets = np.asarray(self.budgets, dtype=np.int64).reshape(-1)
        if budgets.shape[0] != len(self.regions):
            raise ValueError("one budget per region required")
        if (budgets < 0).any():
            raise ValueError("budgets must be nonnegative")
        # budgets above the region size are vacuous; store them clamped
        sizes = np.array([len(r) for r in self.regions], dtype=np.int64)
        budgets = np.minimum(budgets, sizes)
        budgets.flags.writeable = False
        object.__setattr__(self, "budgets", budgets)
        object.__setattr__(self, "regions", tuple(self.regions))
        if self.structure not in ("general", "nested", "disjoint"):
            raise ValueError(f"unknown structure tag {self.structure!r}")
        if self.structure == "nested":
            for a, b in zip(self.regions, self.regions[1:]):
                if np.setdiff1d(a.indices, b.indices, assume_unique=True).size:
                    raise ValueError("regions tagged nested are not nested")
        if self.structure == "disjoint":
            all_idx = np.concatenate([r.indices for r in self.regions]) if self.regions else np.array([])
            if np.unique(all_idx).size != all_idx.size:
                raise ValueError("regions tagged disjoint overlap")

    @property
    def K(self) -> int:
        return len(self.regions)


def optimal_bound(S: IndexSet, family: ReferenceFamily) -> int:
    """Exact interpolation bound: the largest subset of S meeting every budget.

    Exhaustive (branch and bound) and limited to |S| <= 24; it exists as a
    test oracle. Use :func:`augmentation_bound` or :func:`disjoint_sum_bound`
    for larger selections.
    """
    s = len(S)
    if s > OPTIMAL_BOUND_MAX_SIZE:
        raise SelectionTooLargeError(
            f"|S|={s} exceeds the exhaustive-search guard of {OPTIMAL_BOUND_MAX_SIZE}; "
            "use augmentation_bound or disjoint_sum_bound instead"
        )
    if family.K == 0 or s == 0:
        return s
    membership = np.stack(
        [np.isin(S.indices, r.indices, assume_unique=True) for r in family.regions]
    )
    # elements constrained by no region are always admissible
    constrained = membership.any(axis=0)
    base = int((~constrained).sum())
    cols = np.flatnonzero(constrained)
    # visit tightly-constrained elements first: better pruning
    cols = cols[np.argsort(-membership[:, cols].sum(axis=0), kind="stable")]
    member_lists = [np.flatnonzero(membership[:, c]) for c in cols]

    best = 0
    remaining = family.budgets.copy()

    def search(i: int, current: int) -> None:
        nonlocal best
        if current + (len(cols) - i) <= best:
            return
        if i == len(cols):
            best = max(best, current)
            return
        rows = member_lists[i]
        if (remaining[rows] > 0).all():
            remaining[rows] -= 1
            search(i + 1, current + 1)
            remaining[rows] += 1
        search(i + 1, current)

    search(0, 0)
    return min(s, base + best)


def augmentation_bound(S: IndexSet, family: ReferenceFamily) -> int:
    """Relaxation min_k (|S \\ R_k| + zeta_k), capped at |S|; exact for nested families."""
    s = len(S)
    best = s
    for region, zeta in zip(family.regions, family.budgets):
        outside = s - region.intersection_size(S)
        best = min(best, outside + int(zeta))
    return best


def disjoint_sum_bound(S: IndexSet, family: ReferenceFamily) -> int:
    """Relaxation sum_k min(|S n R_k|, zeta_k) + |S outside all regions|,
    capped at |S|; exact for disjoint families."""
    s = len(S)
    if family.K == 0:
        return s
    total = 0
    for region, zeta in zip(family.regions, family.budgets):
        total += min(region.intersection_size(S), int(zeta))
    union = np.unique(np.concatenate([r.indices for r in family.regions]))
    leftover = s - np.isin(S.indices, union, assume_unique=True).sum()
    return min(s, total + int(leftover))


def markov_budget(p: PValueVector, region: IndexSet, alpha: float, t: float) -> int:
    """Budget floor(#{p_i > t} / (1 - t/alpha)) for one fixed region, via Markov."""
    alpha = check_alpha(alpha)
    if not 0.0 < t < alpha:
        raise ValueError(f"t must lie in (0, alpha)={alpha}, got {t}")
    ps = p.values[region.indices - 1]
    count = int((ps > t).sum())
    return min(len(region), math.floor(count / (1.0 - t / alpha)))


def _dkw_value(count: int, t: float, C: float) -> int:
    half = C / (2.0 * (1.0 - t))
    return math.floor(half + math.sqrt(half * half + count / (1.0 - t)))


def dkw_budget_at(p: PValueVector, region: IndexSet, alpha: float, t: float) -> int:
    """The DKW budget evaluated at one fixed threshold t (before minimizing)."""
    alpha = check_alpha(alpha)
    if not 0.0 <= t < 1.0:
        raise ValueError(f"t must lie in [0, 1), got {t}")
    C = math.sqrt(0.5 * math.log(1.0 / alpha))
    count = int((p.values[region.indices - 1] > t).sum())
    return min(len(region), _dkw_value(count, t, C) ** 2)


def dkw_budget(
    p: PValueVector, region: IndexSet, alpha: float, floor_of_square: bool = False
) -> int:
    """Budget from the DKW inequality, minimized over the threshold t.

    For a fixed exceedance count the objective increases in t, so the minimum
    sits at t = 0 or at a p-value where the count drops; only those candidates
    are evaluated. The default squares the floored root-scale quantity;
    ``floor_of_square`` instead floors the squared quantity, which is never
    smaller and is the variant whose validity follows directly from the
    root-scale inequality.
    """
    alpha = check_alpha(alpha)
    size = len(region)
    if size == 0:
        return 0
    C = math.sqrt(0.5 * math.log(1.0 / alpha))
    ps = np.sort(p.values[region.indices - 1])
    candidates = np.unique(np.concatenate(([0.0], ps[ps < 1.0])))
    counts = size - np.searchsorted(ps, candidates, side="right")  # strict >
    best = size
    for t, count in zip(candidates, counts):
        half = C / (2.0 * (1.0 - t))
        value = half + math.sqrt(half * half + count / (1.0 - t))
        budget = math.floor(value * value) if floor_of_square else math.floor(value) ** 2
        best = min(best, budget)
    return int(best)


def jer_holds(family: ReferenceFamily, truth: GroundTruth) -> bool:
    """True iff every region's true-null count stays within its budget."""
    for region, zeta in zip(family.regions, family.budgets):
        if region.intersection_size(truth.h0) > zeta:
            return False
    return True


def threshold_reference_family(p: PValueVector, template: Template, lam: float) -> ReferenceFamily:
    """The nested level-set family behind a template bound:
    R_k = {i : p_i < t_k(lam)} with budget k - 1."""
    regions = []
    for k in range(1, template.size + 1):
        t = template.threshold(k, lam)
        regions.append(IndexSet.of(np.flatnonzero(p.values < t) + 1))
    budgets = np.arange(template.size)
    return ReferenceFamily(tuple(regions), budgets, structure="nested")
