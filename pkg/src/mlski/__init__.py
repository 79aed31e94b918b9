"""
Multilevel sparse kernel-based interpolation.

Anisotropic RBF interpolants on the sub-grids of a sparse grid, combined with
the combination formula (SKI) and refined by multilevel residual correction
(MLSKI), plus full-grid RBF / MLRBF baselines.
"""
from .baselines import FullGridInterpolant, mlrbf_fit, rbf_fit
from .errors import (CapacityError, DegenerateDataError, DomainError, IllConditionedError,
                     IncompleteDataError, MLSKIError, UnsupportedDimensionError)
from .functions import REGISTRY, TestFunction, get_function, register
from .grids import (combination_index_sets, full_grid, halton_points, multi_indices, scaling_diagonal,
                    sparse_grid, sparse_grid_size, tensor_grid)
from .harness import RunConfig, RunRecord, evaluate_errors, run, run_experiment
from .kernels import (KernelFamily, KernelSpec, ShapeRule, anisotropic_eval, kernel_eval,
                      separation_distance, shape_for_level)
from .mlski import MultilevelInterpolant, level_specs, mlski_eval, mlski_fit
from .ski import NodeValues, SparseInterpolant, SubGridInterpolant, ski_eval, ski_fit
from .solver import FitReport, assemble, condition_2norm, factor_solve

__version__ = "0.1.0"
