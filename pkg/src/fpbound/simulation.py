"""Monte Carlo laboratory: scenario generators and coverage experiments.

Each bound's simultaneous-coverage claim is tested through its worst-case
reduction (the event that some selection could break the bound), so one
indicator per replicate settles the uniform statement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from scipy import integrate, special

from .calibration import PermutationPlan, calibrate_lambda, permutation_beta_budget
from .core import (
    GroundTruth,
    IndexSet,
    PValueVector,
    TwoSampleDataset,
    beta_cdf,
    gaussian_tail,
    gaussian_tail_inv,
    two_sample_pvalues,
)
from .families import dkw_budget, jer_holds, markov_budget
from .spatial import DKWRule, MarkovRule, PermutationBetaRule, build_segments, calibrate_family
from .templates import make_template
from .validation import check_alpha

__all__ = [
    "ScenarioConfig",
    "MethodSpec",
    "CoverageReport",
    "simulate",
    "draw_replicate",
    "simes_violation_probability",
    "simes_violation_mc",
    "coverage_experiment",
    "selection_effect_demo",
]

SCENARIOS = ("full_null_iid", "two_sample_gaussian", "equicorrelated_pairs")


@dataclass(frozen=True)
class ScenarioConfig:
    kind: str
    m: int
    replications: int
    seed: int
    alpha: float = 0.05
    n1: int = 50
    n2: int = 50
    delta: float = 0.0
    alt_fraction: float = 0.5
    rho: float = 0.0

    def __post_init__(self):
        if self.kind not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.kind!r}; choose from {SCENARIOS}")
        if self.m < 1 or self.replications < 1:
            raise ValueError("m and replications must be >= 1")
        if self.kind == "equicorrelated_pairs" and self.m % 2:
            raise ValueError("equicorrelated_pairs needs an even m")
        if not -1.0 <= self.rho <= 1.0:
            raise ValueError("rho must lie in [-1, 1]")
        if self.delta < 0:
            raise ValueError("delta must be >= 0")
        check_alpha(self.alpha)


def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng([seed, *key])


def draw_replicate(cfg: ScenarioConfig, r: int):
    """Replicate r of the configured scenario, from its own stream (seed, r)."""
    rng = _rng(cfg.seed, r)
    m = cfg.m
    if cfg.kind == "full_null_iid":
        p = PValueVector(rng.uniform(size=m))
        return p, GroundTruth(IndexSet.full(m))
    if cfg.kind == "two_sample_gaussian":
        n = cfg.n1 + cfg.n2
        data = rng.standard_normal((m, n))
        labels = np.repeat([1, 2], [cfg.n1, cfg.n2])
        if cfg.delta > 0:
            n_alt = int(round(cfg.alt_fraction * m))
            scale = math.sqrt(1.0 / cfg.n1 + 1.0 / cfg.n2)
            if n_alt > 0:
                data[m - n_alt :, cfg.n1 :] += cfg.delta / scale
            h0 = IndexSet.of(np.arange(1, m - n_alt + 1)) if n_alt < m else IndexSet.empty()
        else:
            h0 = IndexSet.full(m)
        return TwoSampleDataset(data, labels), GroundTruth(h0)
    # equicorrelated_pairs: one bivariate normal pair spread over two blocks
    a, b = rng.standard_normal(2)
    x2 = cfg.rho * a + math.sqrt(max(0.0, 1.0 - cfg.rho**2)) * b
    p_pair = gaussian_tail(np.array([a, x2]))
    p = PValueVector(np.repeat(p_pair, m // 2))
    return p, GroundTruth(IndexSet.full(m))


def simulate(cfg: ScenarioConfig) -> Iterator[tuple]:
    """Reproducible stream of (data, ground truth) pairs."""
    for r in range(cfg.replications):
        yield draw_replicate(cfg, r)


def simes_violation_probability(rho: float, alpha: float) -> float:
    """Simes joint-error probability in the two-block one-sided setting.

    Two blocks of p-values are produced by a centered unit-variance bivariate
    normal with correlation rho. The probability that some ordered null
    p-value dips under its Simes threshold equals
    alpha/2 + int_{alpha/2}^{alpha} Phibar((z_a - rho z(w)) / sqrt(1-rho^2)) dw
            + int_{alpha}^{1}      Phibar((z_{a/2} - rho z(w)) / sqrt(1-rho^2)) dw
    with z(w) the upper-tail quantile; at rho=0 it collapses to alpha. The
    upper limit of the second integral is 1 because w ranges over a p-value.
    """
    alpha = check_alpha(alpha)
    if not -1.0 < rho < 1.0:
        raise ValueError("rho must lie strictly inside (-1, 1)")
    z_a = gaussian_tail_inv(alpha)
    z_a2 = gaussian_tail_inv(alpha / 2.0)
    den = math.sqrt(1.0 - rho * rho)

    def tail_given(z_fixed):
        def f(w):
            zw = -special.ndtri(min(max(w, 1e-300), 1.0 - 1e-16))
            return special.ndtr(-(z_fixed - rho * zw) / den)

        return f

    i1, _ = integrate.quad(tail_given(z_a), alpha / 2.0, alpha, epsabs=1e-10, limit=200)
    i2, _ = integrate.quad(tail_given(z_a2), alpha, 1.0, epsabs=1e-10, limit=200)
    return alpha / 2.0 + i1 + i2


def simes_violation_mc(
    rho: float, alpha: float, draws: int = 1_000_000, seed: int = 0
) -> tuple[float, float]:
    """Monte Carlo estimate (rate, sd) of the same violation event:
    {min(p1, p2) < alpha/2} union {max(p1, p2) < alpha}."""
    alpha = check_alpha(alpha)
    rng = _rng(seed)
    a = rng.standard_normal(draws)
    b = rng.standard_normal(draws)
    x2 = rho * a + math.sqrt(max(0.0, 1.0 - rho * rho)) * b
    p1 = gaussian_tail(a)
    p2 = gaussian_tail(x2)
    hit = (np.minimum(p1, p2) < alpha / 2.0) | (np.maximum(p1, p2) < alpha)
    rate = float(hit.mean())
    return rate, math.sqrt(rate * (1.0 - rate) / draws)


@dataclass(frozen=True)
class MethodSpec:
    """Which bound to stress and with what parameters."""

    kind: str
    k0: int = 1
    s0: int = 10
    template: str = "linear"
    n_curves: int | None = None
    n_permutations: int = 100
    lam: float | None = None
    t: float | None = None
    segment_size: int = 10
    budget: str = "dkw"
    floor_of_square: bool = False
    region: tuple[int, ...] | None = None

    KINDS = (
        "bonferroni",
        "simes",
        "threshold",
        "calibrated",
        "single_markov",
        "single_dkw",
        "single_beta",
        "spatial",
        "naive_bonferroni",
    )

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown method {self.kind!r}; choose from {self.KINDS}")

    def label(self) -> str:
        if self.kind == "bonferroni":
            return f"bonferroni(k0={self.k0})"
        if self.kind in ("threshold", "calibrated"):
            return f"{self.kind}({self.template})"
        return self.kind


@dataclass(frozen=True)
class CoverageReport:
    method: str
    scenario: str
    alpha: float
    replications: int
    violations: int
    violation_rate: float
    mc_sd: float  # binomial sd at the nominal level: sqrt(alpha(1-alpha)/R)
    empirical_sd: float

    @property
    def coverage(self) -> float:
        return 1.0 - self.violation_rate

    def within_nominal(self, n_sd: float = 3.0) -> bool:
        return self.violation_rate <= self.alpha + n_sd * self.mc_sd


def _pvalues_and_truth(drawn, truth) -> tuple[PValueVector, GroundTruth]:
    if isinstance(drawn, TwoSampleDataset):
        return two_sample_pvalues(drawn), truth
    return drawn, truth


def _sorted_null(p: PValueVector, truth: GroundTruth) -> np.ndarray:
    return np.sort(p.values[truth.h0.indices - 1])


def _budget_rule(spec: MethodSpec):
    if spec.budget == "dkw":
        return DKWRule(floor_of_square=spec.floor_of_square)
    if spec.budget == "markov":
        return MarkovRule(t=spec.t)
    if spec.budget == "perm-beta":
        return PermutationBetaRule(B=spec.n_permutations)
    raise ValueError(f"unknown budget rule {spec.budget!r}")


def _violated(cfg: ScenarioConfig, spec: MethodSpec, r: int, drawn, truth: GroundTruth) -> bool:
    alpha, m = cfg.alpha, cfg.m
    p, truth = _pvalues_and_truth(drawn, truth)
    null_sorted = _sorted_null(p, truth)
    n0 = null_sorted.size

    if spec.kind == "naive_bonferroni":
        # fixed-selection bound applied to the s0 smallest p-values: the
        # data-snooped coverage event reduces to the k0-th order statistic
        return bool(np.sort(p.values)[spec.k0 - 1] < alpha * spec.k0 / spec.s0)
    if spec.kind == "bonferroni":
        return bool((null_sorted < alpha * spec.k0 / m).sum() >= spec.k0)
    if spec.kind == "simes":
        if n0 == 0:
            return False
        ks = np.arange(1, n0 + 1)
        return bool((null_sorted < alpha * ks / m).any())
    if spec.kind in ("threshold", "calibrated"):
        template = make_template(spec.template, m, spec.n_curves)
        if spec.kind == "threshold":
            lam = spec.lam if spec.lam is not None else alpha
        else:
            if not isinstance(drawn, TwoSampleDataset):
                raise ValueError("calibrated method needs a two-sample scenario")
            plan_seed = int(_rng(cfg.seed, r, 1).integers(2**63))
            plan = PermutationPlan(n=drawn.n, B=spec.n_permutations, seed=plan_seed)
            lam = calibrate_lambda(drawn, alpha, template, plan).lam
        kmax = min(template.size, n0)
        if kmax == 0:
            return False
        ks = np.arange(1, kmax + 1)
        thresholds = np.asarray(template.threshold(ks, lam))
        return bool((null_sorted[:kmax] < thresholds).any())
    if spec.kind in ("single_markov", "single_dkw", "single_beta"):
        region = IndexSet.of(spec.region, m) if spec.region else IndexSet.full(m)
        if spec.kind == "single_markov":
            t = spec.t if spec.t is not None else alpha * alpha
            zeta = markov_budget(p, region, alpha, t)
        elif spec.kind == "single_dkw":
            zeta = dkw_budget(p, region, alpha, floor_of_square=spec.floor_of_square)
        else:
            if not isinstance(drawn, TwoSampleDataset):
                raise ValueError("single_beta needs a two-sample scenario")
            plan_seed = int(_rng(cfg.seed, r, 1).integers(2**63))
            plan = PermutationPlan(n=drawn.n, B=spec.n_permutations, seed=plan_seed)
            zeta = permutation_beta_budget(drawn, region, alpha, plan)
        return zeta < region.intersection_size(truth.h0)
    if spec.kind == "spatial":
        segments = build_segments([m], spec.segment_size)
        rule = _budget_rule(spec)
        data = drawn if rule.needs_dataset else p
        family = calibrate_family(data, segments, alpha, rule)
        return not jer_holds(family, truth)
    raise AssertionError(spec.kind)


def coverage_experiment(cfg: ScenarioConfig, spec: MethodSpec) -> CoverageReport:
    """Frequency of the worst-case violation event across replicates."""
    violations = 0
    for r, (drawn, truth) in enumerate(simulate(cfg)):
        violations += _violated(cfg, spec, r, drawn, truth)
    rate = violations / cfg.replications
    return CoverageReport(
        method=spec.label(),
        scenario=cfg.kind,
        alpha=cfg.alpha,
        replications=cfg.replications,
        violations=violations,
        violation_rate=rate,
        mc_sd=math.sqrt(cfg.alpha * (1.0 - cfg.alpha) / cfg.replications),
        empirical_sd=math.sqrt(max(rate * (1.0 - rate), 0.0) / cfg.replications),
    )


def selection_effect_demo(
    m: int = 500,
    s0: int = 10,
    k0: int = 5,
    alpha: float = 0.05,
    replications: int = 100_000,
    seed: int = 0,
) -> dict:
    """Why fixed-selection confidence bounds break after snooping.

    Applying the fixed-S bound at threshold alpha*k0/s0 to the s0 smallest of
    m i.i.d. uniform p-values covers only when the k0-th order statistic
    clears the threshold: a Beta(k0, m-k0+1) tail event, far below the
    intended 1 - alpha. Returns the analytic value and a vectorized
    simulation estimate.
    """
    check_alpha(alpha)
    threshold = alpha * k0 / s0
    analytic = 1.0 - beta_cdf(threshold, k0, m - k0 + 1)
    rng = _rng(seed)
    hits = 0
    remaining = replications
    chunk = 20_000
    while remaining > 0:
        rows = min(chunk, remaining)
        block = rng.uniform(size=(rows, m))
        # covering means the k0-th order statistic clears the threshold,
        # i.e. fewer than k0 of the m p-values fall below it
        below = (block < threshold).sum(axis=1)
        hits += int((below < k0).sum())
        remaining -= rows
    simulated = hits / replications
    return {
        "m": m,
        "s0": s0,
        "k0": k0,
        "alpha": alpha,
        "threshold": threshold,
        "analytic_coverage": float(analytic),
        "simulated_coverage": simulated,
        "replications": replications,
        "mc_sd": math.sqrt(max(simulated * (1 - simulated), 1e-12) / replications),
    }
