"""Spatially structured reference families.

Hypotheses laid out along a genome (or any line) are grouped into disjoint
fixed-size segments per chromosome. Each segment receives a budget from a
single-region rule at a union-bound-adjusted level, yielding a disjoint
family whose interpolation bound is exact. A multi-scale variant aggregates
neighboring segments into a binary tree and minimizes over all partitions of
each root into tree nodes, computed by dynamic programming.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .calibration import PermutationPlan, permutation_beta_budget
from .core import IndexSet, PValueVector, TwoSampleDataset
from .families import ReferenceFamily, dkw_budget, markov_budget
from .validation import check_alpha

__all__ = [
    "SegmentFamily",
    "AggregationTree",
    "TreeNode",
    "BudgetRule",
    "MarkovRule",
    "DKWRule",
    "PermutationBetaRule",
    "build_segments",
    "calibrate_family",
    "build_tree",
    "tree_bound",
]


@dataclass(frozen=True)
class SegmentFamily:
    """Disjoint covering intervals of size s per chromosome (last may be short).

    Intervals are stored as global 1-based inclusive (start, end) pairs;
    chromosome c occupies the index range (offset_c, offset_c + m_c].
    """

    chrom_sizes: tuple[int, ...]
    segment_size: int
    segments: tuple[tuple[tuple[int, int], ...], ...] = field(init=False)

    def __post_init__(self):
        if self.segment_size < 1:
            raise ValueError("segment size must be >= 1")
        if not self.chrom_sizes or any(mc < 1 for mc in self.chrom_sizes):
            raise ValueError("chromosome sizes must be positive")
        object.__setattr__(self, "chrom_sizes", tuple(int(mc) for mc in self.chrom_sizes))
        per_chrom = []
        offset = 0
        for mc in self.chrom_sizes:
            intervals = []
            for start in range(1, mc + 1, self.segment_size):
                intervals.append((offset + start, offset + min(start + self.segment_size - 1, mc)))
            per_chrom.append(tuple(intervals))
            offset += mc
        object.__setattr__(self, "segments", tuple(per_chrom))

    @property
    def m(self) -> int:
        return sum(self.chrom_sizes)

    @property
    def n_chromosomes(self) -> int:
        return len(self.chrom_sizes)

    def segment_counts(self) -> list[int]:
        return [len(chrom) for chrom in self.segments]


def build_segments(m_per_chrom, segment_size: int) -> SegmentFamily:
    """Cover each chromosome with consecutive disjoint intervals of the given size."""
    sizes = tuple(int(mc) for mc in np.atleast_1d(m_per_chrom))
    return SegmentFamily(chrom_sizes=sizes, segment_size=int(segment_size))


def _interval_set(start: int, end: int) -> IndexSet:
    return IndexSet(np.arange(start, end + 1, dtype=np.int64))


class BudgetRule:
    """Computes a confidence budget for one fixed region at a given level."""

    name = ""
    needs_dataset = False

    def budget(self, data, region: IndexSet, alpha: float) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class MarkovRule(BudgetRule):
    """Markov-inequality budget; with t=None the threshold is alpha**2 at the
    effective per-region level (always inside (0, alpha))."""

    t: float | None = None
    name = "markov"

    def budget(self, data: PValueVector, region: IndexSet, alpha: float) -> int:
        t = alpha * alpha if self.t is None else self.t
        return markov_budget(data, region, alpha, t)


@dataclass(frozen=True)
class DKWRule(BudgetRule):
    """DKW budget: level enters only logarithmically, the default for trees."""

    floor_of_square: bool = False
    name = "dkw"

    def budget(self, data: PValueVector, region: IndexSet, alpha: float) -> int:
        return dkw_budget(data, region, alpha, floor_of_square=self.floor_of_square)


@dataclass(frozen=True)
class PermutationBetaRule(BudgetRule):
    """Per-region permutation-calibrated beta-template budget (two-sample data)."""

    B: int = 100
    seed: int = 0
    name = "perm-beta"
    needs_dataset = True

    def budget(self, data: TwoSampleDataset, region: IndexSet, alpha: float) -> int:
        plan = PermutationPlan(n=data.n, B=self.B, seed=self.seed)
        return permutation_beta_budget(data, region, alpha, plan)


def _check_rule_data(data, rule: BudgetRule, m: int):
    if rule.needs_dataset:
        if not isinstance(data, TwoSampleDataset):
            raise ValueError(f"budget rule {rule.name!r} requires two-sample data")
    elif isinstance(data, TwoSampleDataset):
        from .core import two_sample_pvalues

        data = two_sample_pvalues(data)
    if data.m != m:
        raise ValueError(f"data has m={data.m}, segment family covers m={m}")
    return data


def calibrate_family(
    data: PValueVector | TwoSampleDataset,
    segments: SegmentFamily,
    alpha: float,
    rule: BudgetRule,
) -> ReferenceFamily:
    """Give every segment a budget at its union-bound level.

    Chromosome c gets level alpha_c = alpha * m_c / m, split evenly over its
    K_c segments, so the whole family controls the joint error rate at alpha.
    """
    alpha = check_alpha(alpha)
    data = _check_rule_data(data, rule, segments.m)
    m = segments.m
    regions: list[IndexSet] = []
    budgets: list[int] = []
    for mc, chrom in zip(segments.chrom_sizes, segments.segments):
        level = alpha * mc / m / len(chrom)
        for start, end in chrom:
            region = _interval_set(start, end)
            regions.append(region)
            budgets.append(rule.budget(data, region, level))
    return ReferenceFamily(tuple(regions), np.array(budgets), structure="disjoint")


@dataclass(frozen=True)
class TreeNode:
    start: int
    end: int
    zeta: int
    children: tuple["TreeNode", ...] = ()

    def intersection_size(self, S: IndexSet) -> int:
        lo = np.searchsorted(S.indices, self.start, side="left")
        hi = np.searchsorted(S.indices, self.end, side="right")
        return int(hi - lo)


@dataclass(frozen=True)
class AggregationTree:
    """One binary aggregation tree per chromosome, budgets attached to every node."""

    roots: tuple[TreeNode, ...]

    def node_count(self) -> int:
        def count(node: TreeNode) -> int:
            return 1 + sum(count(c) for c in node.children)

        return sum(count(r) for r in self.roots)

    def nodes(self) -> list[TreeNode]:
        out: list[TreeNode] = []

        def walk(node: TreeNode) -> None:
            out.append(node)
            for c in node.children:
                walk(c)

        for r in self.roots:
            walk(r)
        return out


def _aggregate_intervals(leaves: list[tuple[int, int]]) -> list[list[tuple[int, int, int | None, int | None]]]:
    """Levels of (start, end, left_child_pos, right_child_pos) built by pairwise
    merging; an unpaired rightmost interval is promoted unchanged."""
    levels = [[(s, e, None, None) for s, e in leaves]]
    while len(levels[-1]) > 1:
        prev = levels[-1]
        nxt = []
        for i in range(0, len(prev) - 1, 2):
            nxt.append((prev[i][0], prev[i + 1][1], i, i + 1))
        if len(prev) % 2 == 1:
            nxt.append(prev[-1][:2] + (len(prev) - 1, None))
        levels.append(nxt)
    return levels


def build_tree(
    data: PValueVector | TwoSampleDataset,
    segments: SegmentFamily,
    alpha: float,
    rule: BudgetRule,
) -> AggregationTree:
    """Recursively merge neighboring segments pairwise and budget every node.

    Within chromosome c the union-bound level alpha_c is split evenly over the
    tree's node count (at most 2*K_c - 1, counting each promoted node once).
    """
    alpha = check_alpha(alpha)
    data = _check_rule_data(data, rule, segments.m)
    m = segments.m
    roots: list[TreeNode] = []
    for mc, chrom in zip(segments.chrom_sizes, segments.segments):
        levels = _aggregate_intervals(list(chrom))
        # a promoted (unpaired) interval re-appears higher up but is one node
        distinct = {(s, e) for level in levels for (s, e, _, _) in level}
        level_alpha = alpha * mc / m / len(distinct)

        def make(level_idx: int, pos: int, cache: dict) -> TreeNode:
            start, end, left, right = levels[level_idx][pos]
            if left is not None and right is None:
                return make(level_idx - 1, left, cache)  # promoted node, reuse
            key = (start, end)
            if key in cache:
                return cache[key]
            children = ()
            if left is not None:
                children = (
                    make(level_idx - 1, left, cache),
                    make(level_idx - 1, right, cache),
                )
            zeta = rule.budget(data, _interval_set(start, end), level_alpha)
            node = TreeNode(start=start, end=end, zeta=zeta, children=children)
            cache[key] = node
            return node

        roots.append(make(len(levels) - 1, 0, {}))
    return AggregationTree(roots=tuple(roots))


def tree_bound(S: IndexSet, tree: AggregationTree) -> int:
    """Best multi-scale bound: minimize over all partitions of each root into
    tree nodes, using each node's own budget, via bottom-up dynamic programming.
    Selection indices outside every root count as unconstrained."""

    def best(node: TreeNode) -> int:
        direct = min(node.zeta, node.intersection_size(S))
        if not node.children:
            return direct
        return min(direct, sum(best(c) for c in node.children))

    inside_bound = sum(best(r) for r in tree.roots)
    covered = sum(r.intersection_size(S) for r in tree.roots)
    outside = len(S) - covered
    return min(len(S), inside_bound + outside)
