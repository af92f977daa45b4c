import numpy as np
import pytest
from sklearn.base import clone

from fpbound import (
    BonferroniBound,
    CalibratedBound,
    IndexSet,
    PermutationPlan,
    PValueVector,
    SimesBound,
    TwoSampleDataset,
    bonferroni_bound,
    calibrate_lambda,
    simes_bound,
    two_sample_pvalues,
)
from fpbound.templates import BetaTemplate


@pytest.fixture
def design(rng):
    X = rng.standard_normal((20, 12))  # 20 samples, 12 hypotheses
    X[10:, :4] += 1.5
    y = np.repeat([1, 2], 10)
    return X, y


class TestSklearnProtocol:
    def test_get_set_params(self):
        est = CalibratedBound(alpha=0.2, template="beta", n_permutations=64)
        params = est.get_params()
        assert params["alpha"] == 0.2 and params["template"] == "beta"
        est.set_params(alpha=0.1)
        assert est.alpha == 0.1

    def test_clone(self):
        est = SimesBound(alpha=0.3)
        twin = clone(est)
        assert twin.alpha == 0.3 and twin is not est

    def test_unfitted_raises(self):
        with pytest.raises(RuntimeError, match="not fitted"):
            SimesBound().bound([1])


class TestSimesEstimator:
    def test_fit_pvalues(self):
        est = SimesBound(alpha=0.4).fit([0.01, 0.05, 0.2, 0.35])
        assert est.m_ == 4
        assert est.bound([1, 2, 3, 4]) == 2
        assert est.true_positive_bound([1, 2, 3, 4]) == 2
        assert est.fdp_bound([1, 2, 3, 4]) == pytest.approx(0.5)

    def test_boolean_mask_selection(self):
        est = SimesBound(alpha=0.4).fit([0.01, 0.05, 0.2, 0.35])
        assert est.bound(np.array([True, True, True, True])) == 2

    def test_two_sample_fit(self, design):
        X, y = design
        est = SimesBound(alpha=0.1).fit(X, y)
        expected = two_sample_pvalues(TwoSampleDataset(X.T, y))
        assert np.allclose(est.p_values_.values, expected.values)

    def test_matches_functional_layer(self, rng):
        values = rng.uniform(size=15)
        est = SimesBound(alpha=0.2).fit(values)
        S = IndexSet.of([2, 3, 9])
        assert est.bound([2, 3, 9]) == simes_bound(PValueVector(values), S, 0.2).v

    def test_empty_selection(self):
        est = SimesBound(alpha=0.2).fit([0.5, 0.6])
        assert est.bound([]) == 0
        assert est.fdp_bound([]) == 0.0

    def test_2d_without_labels_rejected(self, design):
        X, _ = design
        with pytest.raises(ValueError, match="1-d"):
            SimesBound().fit(X)


class TestBonferroniEstimator:
    def test_matches_functional_layer(self, rng):
        values = rng.uniform(size=10)
        est = BonferroniBound(alpha=0.3, k0=2).fit(values)
        S = IndexSet.full(10)
        assert est.bound(range(1, 11)) == bonferroni_bound(
            PValueVector(values), S, 0.3, 2
        ).v


class TestCalibratedEstimator:
    def test_requires_labels(self):
        with pytest.raises(ValueError, match="labels"):
            CalibratedBound().fit([0.1, 0.2])

    def test_fit_sets_lambda(self, design):
        X, y = design
        est = CalibratedBound(alpha=0.2, template="beta", n_permutations=30,
                              random_state=7).fit(X, y)
        assert 0.0 <= est.lambda_ <= 1.0
        assert est.pivots_.shape == (30,)

    def test_matches_functional_composition(self, design):
        X, y = design
        est = CalibratedBound(alpha=0.2, template="beta", n_permutations=30,
                              random_state=7).fit(X, y)
        ds = TwoSampleDataset(X.T, y)
        plan = PermutationPlan(n=20, B=30, seed=7)
        expected = calibrate_lambda(ds, 0.2, BetaTemplate(12), plan)
        assert est.lambda_ == expected.lam

    def test_deterministic_under_random_state(self, design):
        X, y = design
        a = CalibratedBound(n_permutations=25, random_state=3).fit(X, y)
        b = CalibratedBound(n_permutations=25, random_state=3).fit(X, y)
        assert a.lambda_ == b.lambda_

    def test_envelope_consistent_with_bound(self, design):
        X, y = design
        est = CalibratedBound(alpha=0.2, n_permutations=25, random_state=1).fit(X, y)
        env = est.envelope()
        from fpbound import level_set_order

        order = level_set_order(est.p_values_)
        for k in (1, 5, 12):
            assert env.v[k - 1] == est.bound(np.sort(order[:k]))
