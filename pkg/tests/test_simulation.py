import numpy as np
import pytest
from scipy import stats

from fpbound import (
    MethodSpec,
    ScenarioConfig,
    TwoSampleDataset,
    coverage_experiment,
    selection_effect_demo,
    simes_violation_mc,
    simes_violation_probability,
    simulate,
)
from fpbound.simulation import draw_replicate


class TestScenarios:
    def test_full_null_ground_truth(self):
        cfg = ScenarioConfig(kind="full_null_iid", m=10, replications=3, seed=1)
        for p, truth in simulate(cfg):
            assert p.m == 10
            assert len(truth.h0) == 10

    def test_two_sample_delta_zero_all_null(self):
        cfg = ScenarioConfig(kind="two_sample_gaussian", m=8, replications=2, seed=1,
                             n1=5, n2=5, delta=0.0)
        for ds, truth in simulate(cfg):
            assert isinstance(ds, TwoSampleDataset)
            assert len(truth.h0) == 8

    def test_two_sample_half_null(self):
        cfg = ScenarioConfig(kind="two_sample_gaussian", m=8, replications=1, seed=1,
                             n1=5, n2=5, delta=2.0, alt_fraction=0.5)
        ds, truth = next(iter(simulate(cfg)))
        assert list(truth.h0.indices) == [1, 2, 3, 4]
        # shifted rows have larger group-2 means
        g1, g2 = ds.group_means()
        assert np.all((g2 - g1)[4:] > 1.0)

    def test_equicorrelated_two_values(self):
        cfg = ScenarioConfig(kind="equicorrelated_pairs", m=12, replications=2, seed=3,
                             rho=0.4)
        for p, truth in simulate(cfg):
            assert len(np.unique(p.values)) <= 2
            assert (p.values[:6] == p.values[0]).all()
            assert len(truth.h0) == 12

    def test_equicorrelated_degenerate_rho(self):
        cfg = ScenarioConfig(kind="equicorrelated_pairs", m=6, replications=1, seed=5,
                             rho=1.0)
        p, _ = next(iter(simulate(cfg)))
        assert len(np.unique(p.values)) == 1

    def test_equicorrelated_odd_m_rejected(self):
        with pytest.raises(ValueError):
            ScenarioConfig(kind="equicorrelated_pairs", m=5, replications=1, seed=0)

    def test_unknown_scenario(self):
        with pytest.raises(ValueError):
            ScenarioConfig(kind="cauchy_pairs", m=4, replications=1, seed=0)

    def test_replicates_deterministic_and_independent_of_order(self):
        cfg = ScenarioConfig(kind="full_null_iid", m=6, replications=5, seed=9)
        direct = draw_replicate(cfg, 3)[0].values
        streamed = list(simulate(cfg))[3][0].values
        assert np.array_equal(direct, streamed)

    def test_full_null_uniformity(self):
        cfg = ScenarioConfig(kind="full_null_iid", m=1000, replications=100, seed=17)
        pooled = np.concatenate([p.values for p, _ in simulate(cfg)])
        d = stats.kstest(pooled, "uniform").statistic
        assert d < 0.02


class TestSimesViolationProbability:
    def test_independence_identity(self):
        for alpha in (0.05, 0.1, 0.2):
            assert simes_violation_probability(0.0, alpha) == pytest.approx(alpha, abs=1e-6)

    def test_degenerate_rho_rejected(self):
        with pytest.raises(ValueError):
            simes_violation_probability(1.0, 0.2)

    def test_positive_dependence_conservative(self):
        assert simes_violation_probability(0.99, 0.2) < 0.2

    @pytest.mark.parametrize("rho", [-0.5, 0.0, 0.5, 0.9])
    def test_quadrature_matches_mc(self, rho):
        exact = simes_violation_probability(rho, 0.2)
        rate, sd = simes_violation_mc(rho, 0.2, draws=200_000, seed=101)
        assert abs(exact - rate) <= 3 * sd

    def test_mc_event_is_generic_simes_reduction(self):
        # the two-block worst case equals the generic sorted-null reduction
        cfg = ScenarioConfig(kind="equicorrelated_pairs", m=10, replications=400,
                             seed=23, alpha=0.2, rho=0.5)
        report = coverage_experiment(cfg, MethodSpec(kind="simes"))
        exact = simes_violation_probability(0.5, 0.2)
        assert abs(report.violation_rate - exact) <= 4 * np.sqrt(exact * (1 - exact) / 400)


class TestCoverageExperiment:
    def test_bonferroni_exercise_small(self):
        cfg = ScenarioConfig(kind="full_null_iid", m=500, replications=2000, seed=7,
                             alpha=0.05)
        report = coverage_experiment(cfg, MethodSpec(kind="bonferroni", k0=1))
        expected = (1 - 0.05 / 500) ** 500
        assert abs(report.coverage - expected) < 0.02

    def test_simes_violation_within_nominal(self):
        cfg = ScenarioConfig(kind="full_null_iid", m=100, replications=2000, seed=8,
                             alpha=0.1)
        report = coverage_experiment(cfg, MethodSpec(kind="simes"))
        assert report.within_nominal()
        assert report.violation_rate <= 0.1 + 3 * report.mc_sd

    def test_threshold_fixed_lambda(self):
        cfg = ScenarioConfig(kind="full_null_iid", m=50, replications=1000, seed=9,
                             alpha=0.1)
        report = coverage_experiment(cfg, MethodSpec(kind="threshold", template="beta",
                                                     lam=0.02))
        assert 0 <= report.violation_rate < 0.3

    def test_single_set_rules_valid(self):
        # square m: the default floor-then-square DKW form is only cleanly
        # valid when sqrt(|H0 n R1|) is an integer
        cfg = ScenarioConfig(kind="full_null_iid", m=64, replications=800, seed=10,
                             alpha=0.1)
        for kind in ("single_markov", "single_dkw"):
            report = coverage_experiment(cfg, MethodSpec(kind=kind))
            assert report.within_nominal(), kind

    def test_single_dkw_floor_of_square_valid_any_size(self):
        cfg = ScenarioConfig(kind="full_null_iid", m=60, replications=800, seed=10,
                             alpha=0.1)
        report = coverage_experiment(
            cfg, MethodSpec(kind="single_dkw", floor_of_square=True)
        )
        assert report.within_nominal()

    def test_spatial_family_valid(self):
        # per-segment null counts are not perfect squares, so the valid
        # floor-of-square DKW variant is the one with a coverage guarantee
        cfg = ScenarioConfig(kind="full_null_iid", m=60, replications=400, seed=11,
                             alpha=0.2)
        report = coverage_experiment(
            cfg, MethodSpec(kind="spatial", segment_size=10, floor_of_square=True)
        )
        assert report.within_nominal()

    def test_spatial_markov_family_valid(self):
        cfg = ScenarioConfig(kind="full_null_iid", m=60, replications=400, seed=11,
                             alpha=0.2)
        report = coverage_experiment(
            cfg, MethodSpec(kind="spatial", segment_size=10, budget="markov")
        )
        assert report.within_nominal()

    def test_calibrated_smoke(self):
        cfg = ScenarioConfig(kind="two_sample_gaussian", m=20, replications=150,
                             seed=12, alpha=0.2, n1=10, n2=10)
        report = coverage_experiment(
            cfg, MethodSpec(kind="calibrated", template="linear", n_permutations=40)
        )
        assert report.violation_rate <= 0.2 + 3 * np.sqrt(0.16 / 150)

    def test_calibrated_requires_two_sample(self):
        cfg = ScenarioConfig(kind="full_null_iid", m=10, replications=2, seed=1)
        with pytest.raises(ValueError):
            coverage_experiment(cfg, MethodSpec(kind="calibrated"))

    def test_naive_bonferroni_breaks(self):
        # the selection-effect reduction: coverage collapses to ~0.005
        cfg = ScenarioConfig(kind="full_null_iid", m=500, replications=2000, seed=13,
                             alpha=0.05)
        report = coverage_experiment(cfg, MethodSpec(kind="naive_bonferroni", k0=5, s0=10))
        assert report.coverage < 0.02


class TestSelectionEffectDemo:
    def test_analytic_and_simulated_agree(self):
        demo = selection_effect_demo(replications=30_000, seed=3)
        assert demo["analytic_coverage"] == pytest.approx(0.00495, abs=2e-4)
        assert abs(demo["simulated_coverage"] - demo["analytic_coverage"]) < 0.002
