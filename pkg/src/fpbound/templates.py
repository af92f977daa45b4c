"""Threshold families ("templates") and their generalized inverses.

A template is a family of curves t_k(lam), k = 1..K, nondecreasing and
left-continuous in lam on [0, 1] with t_k(0) = 0. The generalized inverse is
t_k^{-1}(y) = max{x in [0,1] : t_k(x) <= y}. Both directions accept scalar or
vector k and broadcast.
"""

from __future__ import annotations

from abc import ABC, abstractmethod

import numpy as np

from .core import beta_cdf, beta_quantile

__all__ = ["Template", "LinearTemplate", "BetaTemplate", "make_template", "TEMPLATE_KINDS"]


class Template(ABC):
    """Base class; concrete templates implement the curve and its inverse."""

    kind: str = ""

    def __init__(self, m: int, size: int | None = None):
        if m < 1:
            raise ValueError("m must be >= 1")
        size = m if size is None else int(size)
        if not 1 <= size <= m:
            raise ValueError(f"template size must lie in [1, {m}], got {size}")
        self.m = int(m)
        self.size = size

    def _check_k(self, k) -> np.ndarray:
        k = np.asarray(k, dtype=np.int64)
        if (k < 1).any() or (k > self.size).any():
            raise ValueError(f"curve index k out of range [1, {self.size}]")
        return k

    @staticmethod
    def _check_unit(x, name: str) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if (x < 0).any() or (x > 1).any():
            raise ValueError(f"{name} must lie in [0, 1]")
        return x

    @abstractmethod
    def threshold(self, k, lam):
        """Value of the k-th curve at lam."""

    @abstractmethod
    def inverse(self, k, y):
        """Generalized inverse of the k-th curve at y (capped at 1)."""

    def thresholds(self, lam) -> np.ndarray:
        """All K curve values at lam, in curve order."""
        return np.atleast_1d(self.threshold(np.arange(1, self.size + 1), lam))

    def describe(self) -> dict:
        return {"kind": self.kind, "m": self.m, "size": self.size}

    def __repr__(self) -> str:
        return f"{type(self).__name__}(m={self.m}, size={self.size})"


class LinearTemplate(Template):
    """Simes-type thresholds t_k(lam) = lam * k / m."""

    kind = "linear"

    def threshold(self, k, lam):
        k = self._check_k(k)
        lam = self._check_unit(lam, "lam")
        out = lam * k / self.m
        return float(out) if out.ndim == 0 else out

    def inverse(self, k, y):
        k = self._check_k(k)
        y = self._check_unit(y, "y")
        out = np.minimum(y * self.m / k, 1.0)
        return float(out) if out.ndim == 0 else out


class BetaTemplate(Template):
    """Order-statistic thresholds: t_k(lam) is the lam-quantile of Beta(k, m-k+1)."""

    kind = "beta"

    def threshold(self, k, lam):
        k = self._check_k(k)
        lam = self._check_unit(lam, "lam")
        return beta_quantile(lam, k, self.m - k + 1)

    def inverse(self, k, y):
        k = self._check_k(k)
        y = self._check_unit(y, "y")
        return beta_cdf(y, k, self.m - k + 1)


TEMPLATE_KINDS: dict[str, type[Template]] = {
    LinearTemplate.kind: LinearTemplate,
    BetaTemplate.kind: BetaTemplate,
}


def register_template(cls: type[Template]) -> type[Template]:
    """Register a new template kind for lookup by name."""
    if not cls.kind:
        raise ValueError("template class must define a non-empty 'kind'")
    TEMPLATE_KINDS[cls.kind] = cls
    return cls


def make_template(kind: str, m: int, size: int | None = None) -> Template:
    try:
        cls = TEMPLATE_KINDS[kind]
    except KeyError:
        raise ValueError(
            f"unknown template kind {kind!r}; available: {sorted(TEMPLATE_KINDS)}"
        ) from None
    return cls(m, size)
