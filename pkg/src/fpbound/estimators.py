"""Scikit-learn style estimators wrapping the post hoc bounds.

Estimators follow the fit-then-query pattern: ``fit`` ingests either a 1-d
vector of p-values or a two-sample design ``(X, y)`` with samples as rows,
features as hypotheses and y in {1, 2}; afterwards :meth:`bound`,
:meth:`true_positive_bound`, :meth:`fdp_bound` and :meth:`envelope` answer
queries about arbitrary selections. Hyperparameters live in ``__init__`` and
are introspectable through ``get_params`` / ``set_params``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array

from .bounds import BoundValue, Envelope, simes_bound, bonferroni_bound, threshold_bound, envelope
from .calibration import PermutationPlan, calibrate_lambda
from .core import IndexSet, PValueVector, TwoSampleDataset, two_sample_pvalues
from .templates import make_template
from .validation import check_alpha

__all__ = ["SimesBound", "BonferroniBound", "CalibratedBound"]


class _BasePostHocBound(BaseEstimator):
    """Shared fit/query plumbing; subclasses provide the bound itself."""

    def __init__(self, alpha=0.05):
        self.alpha = alpha

    def _ingest(self, X, y):
        check_alpha(self.alpha)
        X = np.asarray(X)
        if y is None:
            if X.ndim != 1:
                raise ValueError(
                    "without labels y, X must be a 1-d vector of p-values; "
                    f"got shape {X.shape}"
                )
            self.p_values_ = PValueVector(X)
            self.dataset_ = None
        else:
            X = check_array(X, dtype=np.float64)
            self.dataset_ = TwoSampleDataset(X.T, np.asarray(y))
            self.p_values_ = two_sample_pvalues(self.dataset_)
        self.m_ = self.p_values_.m
        return self

    def fit(self, X, y=None):
        """Learn from data. X: p-values (1-d) or an (n_samples, m) matrix with
        group labels y in {1, 2}."""
        return self._ingest(X, y)

    def _check_fitted(self):
        if not hasattr(self, "p_values_"):
            raise RuntimeError("estimator is not fitted; call fit first")

    def _selection(self, selection) -> IndexSet:
        if isinstance(selection, IndexSet):
            selection.validate_against(self.m_)
            return selection
        return IndexSet.of(selection, self.m_)

    def _bound_value(self, S: IndexSet) -> BoundValue:
        raise NotImplementedError

    def bound(self, selection) -> int:
        """Upper confidence bound on false positives in the selection
        (1-based indices or a boolean mask)."""
        self._check_fitted()
        return self._bound_value(self._selection(selection)).v

    def true_positive_bound(self, selection) -> int:
        """Lower confidence bound on true positives: |S| - V(S)."""
        self._check_fitted()
        S = self._selection(selection)
        return len(S) - self._bound_value(S).v

    def fdp_bound(self, selection) -> float:
        """Upper confidence bound on the false discovery proportion V(S)/|S|."""
        self._check_fitted()
        S = self._selection(selection)
        if len(S) == 0:
            return 0.0
        return self._bound_value(S).v / len(S)

    def envelope(self) -> Envelope:
        """Bound curves over the nested level sets of sorted p-values."""
        self._check_fitted()
        return envelope(self.p_values_, self._bound_value)


class SimesBound(_BasePostHocBound):
    """Simes post hoc bound (valid under independence or PRDS dependence).

    Parameters
    ----------
    alpha : float
        Simultaneous error level in (0, 1).
    """

    def _bound_value(self, S: IndexSet) -> BoundValue:
        return simes_bound(self.p_values_, S, self.alpha)


class BonferroniBound(_BasePostHocBound):
    """k0-Bonferroni post hoc bound (no dependence assumptions).

    Parameters
    ----------
    alpha : float
        Simultaneous error level in (0, 1).
    k0 : int
        Which order-statistic threshold to use; the bound is at least k0 - 1.
    """

    def __init__(self, alpha=0.05, k0=1):
        super().__init__(alpha=alpha)
        self.k0 = k0

    def _bound_value(self, S: IndexSet) -> BoundValue:
        return bonferroni_bound(self.p_values_, S, self.alpha, self.k0)


class CalibratedBound(_BasePostHocBound):
    """Permutation-calibrated template bound for two-sample designs.

    ``fit`` requires a two-sample design (X, y): the template parameter is
    calibrated by B column permutations of the data, giving simultaneous
    1 - alpha coverage under label exchangeability regardless of the
    dependence between hypotheses.

    Parameters
    ----------
    alpha : float
        Simultaneous error level in (0, 1).
    template : {"linear", "beta"}
        Threshold family shape.
    n_curves : int or None
        Number of template curves K (default: m).
    n_permutations : int
        B, the identity plus B-1 random permutations.
    random_state : int
        Seed for the permutation draw.

    Attributes
    ----------
    lambda_ : float
        Calibrated template parameter.
    pivots_ : ndarray
        Sorted permutation pivots (length B).
    """

    def __init__(self, alpha=0.05, template="linear", n_curves=None,
                 n_permutations=1000, random_state=0):
        super().__init__(alpha=alpha)
        self.template = template
        self.n_curves = n_curves
        self.n_permutations = n_permutations
        self.random_state = random_state

    def fit(self, X, y=None):
        if y is None:
            raise ValueError("CalibratedBound needs group labels y to permute")
        self._ingest(X, y)
        self.template_ = make_template(self.template, self.m_, self.n_curves)
        plan = PermutationPlan(
            n=self.dataset_.n, B=self.n_permutations, seed=self.random_state
        )
        self.calibration_ = calibrate_lambda(self.dataset_, self.alpha, self.template_, plan)
        self.lambda_ = self.calibration_.lam
        self.pivots_ = self.calibration_.pivots
        return self

    def _bound_value(self, S: IndexSet) -> BoundValue:
        raw = threshold_bound(self.p_values_, S, self.template_, self.lambda_)
        return BoundValue(
            v=raw.v, method=f"calibrated({self.template})", alpha=self.alpha, lam=self.lambda_
        )
