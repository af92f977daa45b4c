"""One loaded analysis: data, calibrations and selection/bound queries.

The CLI builds a session per invocation; the server builds one at startup and
answers every request from it. Both evaluate bounds through this module, so
their numbers agree by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bounds import (
    BoundValue,
    Envelope,
    bonferroni_bound,
    level_set_order,
    simes_bound,
    threshold_bound,
    threshold_envelope,
)
from .calibration import CalibrationResult, PermutationPlan, calibrate_lambda
from .core import FoldChange, IndexSet, PValueVector, TwoSampleDataset, fold_change
from .templates import Template, make_template
from .validation import check_alpha

__all__ = ["AnalysisSession", "bh_selection", "build_session"]

METHODS = ("simes", "bonferroni", "calibrated")


def bh_selection(p: PValueVector, q: float) -> IndexSet:
    """Benjamini-Hochberg step-up rejection set, used purely as a selection rule."""
    check_alpha(q)
    ps = np.sort(p.values)
    ks = np.arange(1, p.m + 1)
    passing = np.flatnonzero(ps <= q * ks / p.m)
    if passing.size == 0:
        return IndexSet.empty()
    cutoff = ps[passing[-1]]
    return IndexSet.of(np.flatnonzero(p.values <= cutoff) + 1)


@dataclass
class AnalysisSession:
    p: PValueVector
    ids: list[str]
    alpha: float
    dataset: TwoSampleDataset | None = None
    fold: FoldChange | None = None
    seed: int = 0
    n_permutations: int = 1000
    digests: dict[str, str] = field(default_factory=dict)
    annotations: dict[str, np.ndarray] = field(default_factory=dict)
    calibrations: dict[str, CalibrationResult] = field(default_factory=dict)
    templates: dict[str, Template] = field(default_factory=dict)

    def __post_init__(self):
        check_alpha(self.alpha)
        if len(self.ids) != self.p.m:
            raise ValueError("one id per hypothesis required")
        self._id_to_index = {rid: i + 1 for i, rid in enumerate(self.ids)}

    @property
    def m(self) -> int:
        return self.p.m

    @property
    def two_sample(self) -> bool:
        return self.dataset is not None

    # -- calibration ------------------------------------------------------

    def ensure_calibration(self, kind: str, n_curves: int | None = None) -> CalibrationResult:
        """Calibrate (once) the template of the given kind on this session's data."""
        if kind in self.calibrations:
            return self.calibrations[kind]
        if not self.two_sample:
            raise ValueError("calibrated bounds need two-sample data")
        template = make_template(kind, self.m, n_curves)
        plan = PermutationPlan(n=self.dataset.n, B=self.n_permutations, seed=self.seed)
        result = calibrate_lambda(self.dataset, self.alpha, template, plan)
        self.templates[kind] = template
        self.calibrations[kind] = result
        return result

    # -- selections -------------------------------------------------------

    def resolve_selection(
        self,
        *,
        ids=None,
        indices=None,
        top_k: int | None = None,
        fc_above: float | None = None,
        fc_below: float | None = None,
        bh_level: float | None = None,
    ) -> tuple[IndexSet, str]:
        """Intersect the given criteria into one selection with a readable name.

        With no criteria the selection is every hypothesis. Explicit ids or
        indices form the base; fold-change thresholds keep the union of the
        two tails; ``bh_level`` intersects with the BH rejection set at that
        level; ``top_k`` with the k smallest p-values.
        """
        parts: list[str] = []
        mask = np.ones(self.m, dtype=bool)
        if ids is not None:
            unknown = [rid for rid in ids if rid not in self._id_to_index]
            if unknown:
                raise KeyError(f"unknown ids: {unknown}")
            base = np.zeros(self.m, dtype=bool)
            for rid in ids:
                base[self._id_to_index[rid] - 1] = True
            mask &= base
            parts.append(f"ids[{int(base.sum())}]")
        if indices is not None:
            chosen = IndexSet.of(indices, self.m)
            mask &= chosen.mask(self.m)
            parts.append(f"indices[{len(chosen)}]")
        if fc_above is not None or fc_below is not None:
            if self.fold is None:
                raise ValueError("fold-change selection needs two-sample data")
            tails = np.zeros(self.m, dtype=bool)
            log_fc = self.fold.log_ratio
            with np.errstate(invalid="ignore"):
                if fc_above is not None:
                    tails |= log_fc > fc_above
                    parts.append(f"logfc>{fc_above:g}")
                if fc_below is not None:
                    tails |= log_fc < fc_below
                    parts.append(f"logfc<{fc_below:g}")
            mask &= tails
        if bh_level is not None:
            mask &= bh_selection(self.p, bh_level).mask(self.m)
            parts.append(f"bh:{bh_level:g}")
        if top_k is not None:
            if not 0 <= top_k <= self.m:
                raise ValueError(f"top_k must lie in [0, {self.m}]")
            base = np.zeros(self.m, dtype=bool)
            base[level_set_order(self.p)[:top_k] - 1] = True
            mask &= base
            parts.append(f"top:{top_k}")
        name = "&".join(parts) if parts else "all"
        return IndexSet.of(mask), name

    # -- bounds -----------------------------------------------------------

    def evaluate(
        self,
        S: IndexSet,
        method: str,
        template: str = "linear",
        k0: int = 1,
        n_curves: int | None = None,
    ) -> BoundValue:
        if method == "simes":
            return simes_bound(self.p, S, self.alpha)
        if method == "bonferroni":
            return bonferroni_bound(self.p, S, self.alpha, k0)
        if method == "calibrated":
            result = self.ensure_calibration(template, n_curves)
            raw = threshold_bound(self.p, S, self.templates[template], result.lam)
            return BoundValue(
                v=raw.v, method=f"calibrated({template})", alpha=self.alpha, lam=result.lam
            )
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")

    def method_envelope(
        self, method: str, template: str = "linear", k0: int = 1, n_curves: int | None = None
    ) -> Envelope:
        if method == "simes":
            ks = np.arange(1, self.m + 1)
            return threshold_envelope(self.p, self.alpha * ks / self.m, ks - 1)
        if method == "bonferroni":
            return threshold_envelope(
                self.p, np.array([self.alpha * k0 / self.m]), np.array([k0 - 1])
            )
        if method == "calibrated":
            result = self.ensure_calibration(template, n_curves)
            tpl = self.templates[template]
            ks = np.arange(1, tpl.size + 1)
            return threshold_envelope(self.p, np.asarray(tpl.threshold(ks, result.lam)), ks - 1)
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")

    def method_label(self, method: str, template: str = "linear", k0: int = 1) -> str:
        if method == "bonferroni":
            return f"bonferroni(k0={k0})"
        if method == "calibrated":
            return f"calibrated({template})"
        return method

    def points(self) -> list[dict]:
        """One record per hypothesis for the volcano view (two-sample only),
        in stable id order."""
        if self.fold is None:
            raise ValueError("points need two-sample data")
        out = []
        for i, rid in enumerate(self.ids):
            lfc = self.fold.log_ratio[i]
            out.append(
                {
                    "id": rid,
                    "p": float(self.p.values[i]),
                    "log_fc": float(lfc) if np.isfinite(lfc) else None,
                }
            )
        out.sort(key=lambda record: record["id"])
        return out


def build_session(
    *,
    pvalues_path=None,
    data_path=None,
    labels_path=None,
    alpha: float = 0.05,
    seed: int = 0,
    n_permutations: int = 1000,
    chrom_col: str | None = None,
) -> AnalysisSession:
    """Load input files into a session (p-value mode or two-sample mode)."""
    from .core import two_sample_pvalues
    from .io import load_pvalues_csv, load_two_sample_csv
    from .report import file_digests

    if (pvalues_path is None) == (data_path is None):
        raise ValueError("provide either a p-value file or a data+labels pair")
    if pvalues_path is not None:
        p, ids, annotations = load_pvalues_csv(pvalues_path, chrom_col)
        return AnalysisSession(
            p=p,
            ids=ids,
            alpha=alpha,
            seed=seed,
            n_permutations=n_permutations,
            digests=file_digests({"pvalues": pvalues_path}),
            annotations=annotations,
        )
    if labels_path is None:
        raise ValueError("two-sample mode needs a labels file")
    ds, ids, annotations = load_two_sample_csv(data_path, labels_path, chrom_col)
    return AnalysisSession(
        p=two_sample_pvalues(ds),
        ids=ids,
        alpha=alpha,
        dataset=ds,
        fold=fold_change(ds),
        seed=seed,
        n_permutations=n_permutations,
        digests=file_digests({"data": data_path, "labels": labels_path}),
        annotations=annotations,
    )
