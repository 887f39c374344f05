"""Depth kernels, median search and the statistical procedures built on them.

Import convenience:
>>> from backend.models import Dataset, halfspace_depth, tukey_median
"""

from .dataset import Dataset, DepthResult, GridSpec
from .halfspace_depth import (
    depth_1d,
    depth_2d_exact,
    depth_approx,
    depth_exact_combinatorial,
    depth_grid,
    halfspace_depth,
)
from .lp_symmetric import LpSymmetricModel, scaled_sum_discrepancy
from .sequence_depth import SequenceModel, decay_experiment, depth_upper_bound, verify_optimal_alpha
from .sphericity import SphericityCurve, central_hull, smallest_enclosing_ball, sphericity_curve
from .symmetry_test import (
    StudyConfig,
    SymmetryTestResult,
    angular_symmetry_test,
    run_study,
    sample_distribution,
)
from .tukey_median import MedianResult, max_depth, tukey_median

__all__ = [
    "Dataset",
    "DepthResult",
    "GridSpec",
    "LpSymmetricModel",
    "MedianResult",
    "SequenceModel",
    "SphericityCurve",
    "StudyConfig",
    "SymmetryTestResult",
    "angular_symmetry_test",
    "central_hull",
    "decay_experiment",
    "depth_1d",
    "depth_2d_exact",
    "depth_approx",
    "depth_exact_combinatorial",
    "depth_grid",
    "depth_upper_bound",
    "halfspace_depth",
    "scaled_sum_discrepancy",
    "max_depth",
    "run_study",
    "sample_distribution",
    "smallest_enclosing_ball",
    "sphericity_curve",
    "tukey_median",
    "verify_optimal_alpha",
]
