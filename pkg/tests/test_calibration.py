import numpy as np
import pytest

from fpbound import (
    BetaTemplate,
    IndexSet,
    LinearTemplate,
    PermutationPlan,
    PValueVector,
    TwoSampleDataset,
    apply_group_element,
    beta_quantile,
    calibrate_lambda,
    calibrated_bound,
    permutation_beta_budget,
    pivot_statistic,
    simes_bound,
    threshold_bound,
    two_sample_pvalues,
)


def gaussian_dataset(rng, m=20, n1=10, n2=10, shift=0.0, n_shifted=0):
    data = rng.standard_normal((m, n1 + n2))
    if n_shifted:
        data[m - n_shifted :, n1:] += shift
    return TwoSampleDataset(data, np.repeat([1, 2], [n1, n2]))


class TestPermutationPlan:
    def test_first_is_identity(self):
        plan = PermutationPlan(n=6, B=4, seed=9)
        assert np.array_equal(plan.permutation(1), np.arange(6))

    def test_deterministic_and_order_free(self):
        plan = PermutationPlan(n=8, B=5, seed=3)
        third = plan.permutation(3)
        _ = plan.permutation(2), plan.permutation(5)
        assert np.array_equal(plan.permutation(3), third)
        again = PermutationPlan(n=8, B=5, seed=3)
        assert np.array_equal(again.permutation(3), third)

    def test_permutations_are_bijections(self):
        plan = PermutationPlan(n=7, B=10, seed=1)
        for j in range(1, 11):
            assert np.array_equal(np.sort(plan.permutation(j)), np.arange(7))

    def test_validation(self):
        with pytest.raises(ValueError):
            PermutationPlan(n=4, B=1, seed=0)
        plan = PermutationPlan(n=4, B=3, seed=0)
        with pytest.raises(ValueError):
            plan.permutation(0)
        with pytest.raises(ValueError):
            plan.permutation(4)


class TestApplyGroupElement:
    def test_identity(self, rng):
        ds = gaussian_dataset(rng)
        out = apply_group_element(ds, np.arange(ds.n))
        assert np.array_equal(out.data, ds.data)

    def test_within_group_swap_preserves_pvalues(self, rng):
        ds = gaussian_dataset(rng, n1=5, n2=5)
        g = np.arange(10)
        g[[0, 1]] = g[[1, 0]]  # swap two group-1 columns
        out = apply_group_element(ds, g)
        assert np.allclose(
            two_sample_pvalues(out).values, two_sample_pvalues(ds).values
        )

    def test_two_column_swap_two_sided(self, rng):
        ds = gaussian_dataset(rng, m=3, n1=1, n2=1)
        out = apply_group_element(ds, np.array([1, 0]))
        assert np.allclose(
            two_sample_pvalues(out).values, two_sample_pvalues(ds).values
        )

    def test_rejects_non_bijection(self, rng):
        ds = gaussian_dataset(rng)
        with pytest.raises(ValueError):
            apply_group_element(ds, np.zeros(ds.n, dtype=int))


class TestPivotStatistic:
    def test_linear_worked_example(self):
        p = PValueVector([0.1, 0.2, 0.9])
        assert pivot_statistic(p, LinearTemplate(3)) == pytest.approx(0.3, abs=1e-12)

    def test_zero_pvalue_pins_pivot(self):
        p = PValueVector([0.0, 0.7, 0.4])
        assert pivot_statistic(p, BetaTemplate(3)) == 0.0

    def test_beta_single(self):
        assert pivot_statistic(PValueVector([0.4]), BetaTemplate(1)) == pytest.approx(
            0.4, abs=1e-12
        )

    def test_template_m_mismatch(self):
        with pytest.raises(ValueError):
            pivot_statistic(PValueVector([0.4, 0.5]), BetaTemplate(3))


class TestCalibrateLambda:
    def test_rank_arithmetic_small_B(self, rng):
        ds = gaussian_dataset(rng, m=5)
        plan = PermutationPlan(n=ds.n, B=2, seed=4)
        result = calibrate_lambda(ds, 0.4, LinearTemplate(5), plan)
        assert result.order_index == 1
        assert result.lam == result.pivots[0] == result.pivots.min()

    def test_rank_index_large_B(self, rng):
        ds = gaussian_dataset(rng, m=4, n1=4, n2=4)
        plan = PermutationPlan(n=ds.n, B=1000, seed=4)
        result = calibrate_lambda(ds, 0.1, LinearTemplate(4), plan)
        assert result.order_index == 101
        assert result.lam == result.pivots[100]

    def test_determinism(self, rng):
        ds = gaussian_dataset(rng)
        plan = PermutationPlan(n=ds.n, B=30, seed=11)
        tpl = BetaTemplate(ds.m)
        a = calibrate_lambda(ds, 0.2, tpl, plan)
        b = calibrate_lambda(ds, 0.2, tpl, plan)
        assert a.lam == b.lam
        assert np.array_equal(a.pivots, b.pivots)

    def test_lambda_nondecreasing_in_alpha(self, rng):
        ds = gaussian_dataset(rng)
        plan = PermutationPlan(n=ds.n, B=40, seed=2)
        tpl = LinearTemplate(ds.m)
        lams = [calibrate_lambda(ds, a, tpl, plan).lam for a in (0.05, 0.1, 0.2, 0.4, 0.6)]
        assert all(x <= y + 1e-15 for x, y in zip(lams, lams[1:]))

    def test_adaptivity_implication(self, rng):
        # whenever the calibrated parameter exceeds alpha, the calibrated
        # bound is at least as sharp as Simes
        for _ in range(20):
            ds = gaussian_dataset(rng, m=15, n1=8, n2=8)
            alpha = 0.25
            plan = PermutationPlan(n=ds.n, B=40, seed=int(rng.integers(1 << 31)))
            tpl = LinearTemplate(ds.m)
            result = calibrate_lambda(ds, alpha, tpl, plan)
            p = two_sample_pvalues(ds)
            if result.lam >= alpha:
                for _ in range(5):
                    S = IndexSet.of(rng.uniform(size=ds.m) < 0.5)
                    assert (
                        threshold_bound(p, S, tpl, result.lam).v
                        <= simes_bound(p, S, alpha).v
                    )

    def test_composition(self, rng):
        ds = gaussian_dataset(rng, m=12)
        plan = PermutationPlan(n=ds.n, B=25, seed=7)
        tpl = BetaTemplate(12)
        S = IndexSet.of([1, 4, 9, 12])
        expected = threshold_bound(
            two_sample_pvalues(ds), S, tpl, calibrate_lambda(ds, 0.3, tpl, plan).lam
        ).v
        got = calibrated_bound(ds, 0.3, tpl, plan, S)
        assert got.v == expected
        assert got.alpha == 0.3 and got.lam is not None

    def test_empty_selection(self, rng):
        ds = gaussian_dataset(rng, m=6)
        plan = PermutationPlan(n=ds.n, B=10, seed=0)
        assert calibrated_bound(ds, 0.2, LinearTemplate(6), plan, IndexSet.empty()).v == 0

    def test_half_null_more_severe(self, rng):
        # alternatives inflate permuted statistics, pulling lambda down
        wins = 0
        total = 100
        for r in range(total):
            noise_rng = np.random.default_rng([777, r])
            noise = noise_rng.standard_normal((50, 100))
            labels = np.repeat([1, 2], 50)
            scale = np.sqrt(1 / 50 + 1 / 50)
            full = TwoSampleDataset(noise, labels)
            shifted = noise.copy()
            shifted[25:, 50:] += 3.0 / scale
            half = TwoSampleDataset(shifted, labels)
            tpl = LinearTemplate(50)
            plan = PermutationPlan(n=100, B=100, seed=r)
            lam_full = calibrate_lambda(full, 0.2, tpl, plan).lam
            lam_half = calibrate_lambda(half, 0.2, tpl, plan).lam
            wins += lam_half <= lam_full
        assert wins >= 90


class TestPermutationBetaBudget:
    def test_singleton_region(self, rng):
        ds = gaussian_dataset(rng, m=8)
        region = IndexSet.of([5])
        plan = PermutationPlan(n=ds.n, B=20, seed=3)
        zeta = permutation_beta_budget(ds, region, 0.3, plan)
        sub = ds.restrict_rows(region)
        lam = calibrate_lambda(sub, 0.3, BetaTemplate(1), plan).lam
        p_val = two_sample_pvalues(sub).values[0]
        assert zeta in (0, 1)
        assert zeta == int(p_val >= beta_quantile(lam, 1, 1))

    def test_full_region_equals_calibrated_bound(self, rng):
        ds = gaussian_dataset(rng, m=10)
        plan = PermutationPlan(n=ds.n, B=30, seed=6)
        full = IndexSet.full(10)
        zeta = permutation_beta_budget(ds, full, 0.2, plan)
        direct = calibrated_bound(ds, 0.2, BetaTemplate(10), plan, full)
        assert zeta == direct.v

    def test_empty_region_rejected(self, rng):
        ds = gaussian_dataset(rng, m=4)
        plan = PermutationPlan(n=ds.n, B=10, seed=0)
        with pytest.raises(ValueError):
            permutation_beta_budget(ds, IndexSet.empty(), 0.2, plan)


def test_coverage_smoke(rng):
    # small-scale check of the calibration theorem; the full-scale version
    # lives in the acceptance suite
    violations = 0
    reps = 200
    for r in range(reps):
        data_rng = np.random.default_rng([55, r])
        ds = TwoSampleDataset(
            data_rng.standard_normal((20, 20)), np.repeat([1, 2], 10)
        )
        tpl = LinearTemplate(20)
        plan = PermutationPlan(n=20, B=50, seed=r)
        lam = calibrate_lambda(ds, 0.2, tpl, plan).lam
        null_sorted = np.sort(two_sample_pvalues(ds).values)
        ks = np.arange(1, 21)
        violations += bool((null_sorted < np.asarray(tpl.threshold(ks, lam))).any())
    rate = violations / reps
    assert rate <= 0.2 + 3 * np.sqrt(0.2 * 0.8 / reps)
