"""Permutation calibration of template bounds.

Under the two-sample randomization hypothesis (group labels exchangeable under
the null), the template parameter lam is chosen as an order statistic of the
pivot min_k t_k^{-1}(p_(k:m)) evaluated on B column permutations of the data,
the first being the identity. The resulting bound V^lam has simultaneous
coverage 1 - alpha jointly over the data and the permutation draw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import BoundValue, threshold_bound
from .core import IndexSet, PValueVector, TwoSampleDataset, two_sample_pvalues
from .templates import BetaTemplate, Template
from .validation import check_alpha

__all__ = [
    "PermutationPlan",
    "CalibrationResult",
    "apply_group_element",
    "pivot_statistic",
    "calibrate_lambda",
    "calibrated_bound",
    "permutation_beta_budget",
]


@dataclass(frozen=True)
class PermutationPlan:
    """B column permutations: the identity plus B-1 uniform i.i.d. draws.

    Permutation j is generated from its own stream keyed by (seed, j), so any
    subset of the plan can be materialized in any order with identical results.
    """

    n: int
    B: int
    seed: int

    def __post_init__(self):
        if self.B < 2:
            raise ValueError("B must be >= 2")
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")

    def permutation(self, j: int) -> np.ndarray:
        """0-based column order for the j-th group element, j in [1, B]."""
        if not 1 <= j <= self.B:
            raise ValueError(f"j must lie in [1, {self.B}]")
        if j == 1:
            return np.arange(self.n)
        return np.random.default_rng([self.seed, j]).permutation(self.n)


@dataclass(frozen=True)
class CalibrationResult:
    lam: float
    pivots: np.ndarray  # sorted ascending, length B
    alpha: float
    template: dict

    @property
    def B(self) -> int:
        return self.pivots.shape[0]

    @property
    def order_index(self) -> int:
        """1-based rank of the selected pivot: floor(alpha*B) + 1."""
        return math.floor(self.alpha * self.B) + 1


def apply_group_element(ds: TwoSampleDataset, g: np.ndarray) -> TwoSampleDataset:
    """Reorder columns by the permutation g; labels stay positional."""
    g = np.asarray(g, dtype=np.int64)
    if g.shape != (ds.n,) or not np.array_equal(np.sort(g), np.arange(ds.n)):
        raise ValueError(f"g must be a permutation of 0..{ds.n - 1}")
    return TwoSampleDataset(ds.data[:, g], ds.labels)


def pivot_statistic(p: PValueVector, template: Template) -> float:
    """min over curves k of the template inverse at the k-th smallest p-value."""
    if template.m != p.m:
        raise ValueError(f"template built for m={template.m}, p-values have m={p.m}")
    k = np.arange(1, template.size + 1)
    return float(np.min(template.inverse(k, p.sorted()[: template.size])))


def calibrate_lambda(
    ds: TwoSampleDataset,
    alpha: float,
    template: Template,
    plan: PermutationPlan,
) -> CalibrationResult:
    """Pick lam as the floor(alpha*B)+1 smallest permutation pivot."""
    alpha = check_alpha(alpha)
    if plan.n != ds.n:
        raise ValueError(f"plan built for n={plan.n}, dataset has n={ds.n}")
    rank = math.floor(alpha * plan.B) + 1
    if rank > plan.B:
        raise ValueError(f"alpha={alpha} too large for B={plan.B}")
    pivots = np.empty(plan.B)
    for j in range(1, plan.B + 1):
        permuted = ds if j == 1 else apply_group_element(ds, plan.permutation(j))
        pivots[j - 1] = pivot_statistic(two_sample_pvalues(permuted), template)
    pivots.sort()
    pivots.flags.writeable = False
    return CalibrationResult(
        lam=float(pivots[rank - 1]),
        pivots=pivots,
        alpha=alpha,
        template=template.describe(),
    )


def calibrated_bound(
    ds: TwoSampleDataset,
    alpha: float,
    template: Template,
    plan: PermutationPlan,
    S: IndexSet,
) -> BoundValue:
    """Template bound at the permutation-calibrated lam, evaluated on S."""
    result = calibrate_lambda(ds, alpha, template, plan)
    raw = threshold_bound(two_sample_pvalues(ds), S, template, result.lam)
    return BoundValue(
        v=raw.v, method=f"calibrated({template.kind})", alpha=alpha, lam=result.lam
    )


def permutation_beta_budget(
    ds: TwoSampleDataset,
    region: IndexSet,
    alpha: float,
    plan: PermutationPlan,
) -> int:
    """Confidence budget for false positives inside one fixed region.

    Runs the calibration restricted to the region's rows with a beta template
    of size |region|, then evaluates the calibrated bound on the whole region.
    """
    if len(region) == 0:
        raise ValueError("region must be nonempty")
    sub = ds.restrict_rows(region)
    template = BetaTemplate(m=len(region))
    result = calibrate_lambda(sub, alpha, template, plan)
    bound = threshold_bound(
        two_sample_pvalues(sub), IndexSet.full(len(region)), template, result.lam
    )
    return bound.v
