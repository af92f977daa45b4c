"""Post hoc confidence bounds on false positives in arbitrary selections.

The package provides bounds V(S) on the number of false positives in any
selection S of hypotheses, valid simultaneously over all selections at
confidence 1 - alpha, so the selection may be chosen freely after seeing the
data. Available routes: Simes/Bonferroni closed forms, permutation-calibrated
template bounds for two-sample designs, interpolation from arbitrary
reference families, and spatial multi-scale tree bounds.
"""

from .bounds import (
    BoundValue,
    Envelope,
    bonferroni_bound,
    envelope,
    level_set_order,
    simes_bound,
    simes_line_shift,
    threshold_bound,
    threshold_envelope,
)
from .calibration import (
    CalibrationResult,
    PermutationPlan,
    apply_group_element,
    calibrate_lambda,
    calibrated_bound,
    permutation_beta_budget,
    pivot_statistic,
)
from .core import (
    FoldChange,
    GroundTruth,
    IndexSet,
    PValueVector,
    TwoSampleDataset,
    beta_cdf,
    beta_quantile,
    fold_change,
    gaussian_tail,
    gaussian_tail_inv,
    sorted_restriction,
    two_sample_pvalues,
)
from .estimators import BonferroniBound, CalibratedBound, SimesBound
from .families import (
    ReferenceFamily,
    augmentation_bound,
    disjoint_sum_bound,
    dkw_budget,
    jer_holds,
    markov_budget,
    optimal_bound,
    threshold_reference_family,
)
from .simulation import (
    CoverageReport,
    MethodSpec,
    ScenarioConfig,
    coverage_experiment,
    selection_effect_demo,
    simes_violation_mc,
    simes_violation_probability,
    simulate,
)
from .spatial import (
    AggregationTree,
    BudgetRule,
    DKWRule,
    MarkovRule,
    PermutationBetaRule,
    SegmentFamily,
    build_segments,
    build_tree,
    calibrate_family,
    tree_bound,
)
from .templates import BetaTemplate, LinearTemplate, Template, make_template
from .validation import SelectionTooLargeError

__version__ = "0.1.0"

__all__ = [
    "BoundValue",
    "Envelope",
    "bonferroni_bound",
    "envelope",
    "level_set_order",
    "simes_bound",
    "simes_line_shift",
    "threshold_bound",
    "threshold_envelope",
    "CalibrationResult",
    "PermutationPlan",
    "apply_group_element",
    "calibrate_lambda",
    "calibrated_bound",
    "permutation_beta_budget",
    "pivot_statistic",
    "FoldChange",
    "GroundTruth",
    "IndexSet",
    "PValueVector",
    "TwoSampleDataset",
    "beta_cdf",
    "beta_quantile",
    "fold_change",
    "gaussian_tail",
    "gaussian_tail_inv",
    "sorted_restriction",
    "two_sample_pvalues",
    "BonferroniBound",
    "CalibratedBound",
    "SimesBound",
    "ReferenceFamily",
    "augmentation_bound",
    "disjoint_sum_bound",
    "dkw_budget",
    "jer_holds",
    "markov_budget",
    "optimal_bound",
    "threshold_reference_family",
    "CoverageReport",
    "MethodSpec",
    "ScenarioConfig",
    "coverage_experiment",
    "selection_effect_demo",
    "simes_violation_mc",
    "simes_violation_probability",
    "simulate",
    "AggregationTree",
    "BudgetRule",
    "DKWRule",
    "MarkovRule",
    "PermutationBetaRule",
    "SegmentFamily",
    "build_segments",
    "build_tree",
    "calibrate_family",
    "tree_bound",
    "BetaTemplate",
    "LinearTemplate",
    "Template",
    "make_template",
    "SelectionTooLargeError",
]
