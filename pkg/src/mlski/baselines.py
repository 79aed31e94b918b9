"""
Full-grid RBF interpolation and its multilevel variant (MLRBF).

The full grid of level ``n`` is the tensor grid ``(n, ..., n)``, so its
scaling ``2**n * I`` is isotropic.  Using the same level-normalized distance
as the sub-grid problems makes the shape parameter mean the same thing in
both methods, and in one dimension the full-grid interpolant coincides with
SKI.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import grids
from .errors import CapacityError
from .kernels import KernelSpec
from .mlski import LevelReport, MultilevelInterpolant, SpecProvider, _spec_for, residual_cascade
from .ski import DataSource, SubGridInterpolant, fit_tensor_grid

DEFAULT_MAX_CENTERS = 20_000


@dataclass
class FullGridInterpolant(SubGridInterpolant):
    """Isotropic RBF interpolant on the uniform grid of one level."""

    @property
    def level(self) -> int:
        return self.index[0]

    @property
    def node_count(self) -> int:
        return self.centers.shape[0]

    @property
    def max_condition(self):
        return self.report.condition_2norm

    def compute_conditions(self) -> float:
        return self.compute_condition()


def rbf_fit(n: int, dim: int, data: DataSource, spec: KernelSpec,
            max_centers: int = DEFAULT_MAX_CENTERS, compute_cond: bool = False) -> FullGridInterpolant:
    """
    Standard RBF interpolation on the full grid with ``(2**n + 1)**dim`` nodes.

    Raises
    ------
    CapacityError
        If the grid has more than ``max_centers`` nodes.
    """
    if n < 0:
        raise ValueError(f"level must be >= 0, got {n}")
    size = grids.grid_size((n,) * dim)
    if size > max_centers:
        raise CapacityError(f"full grid of level {n} in {dim}D has {size} centers, above the cap {max_centers}")
    spec.check_dimension(dim)
    return fit_tensor_grid((n,) * dim, data, spec, compute_cond=compute_cond,
                           min_level=0, cls=FullGridInterpolant)


def iter_mlrbf(n0: int, n: int, dim: int, f, spec: SpecProvider,
               max_centers: int = DEFAULT_MAX_CENTERS, compute_cond: bool = False):
    if not 0 <= n0 <= n:
        raise ValueError(f"need 0 <= n0 <= n, got n0={n0}, n={n}")

    def nodes_for(k):
        size = grids.grid_size((k,) * dim)
        if size > max_centers:
            raise CapacityError(f"full grid of level {k} in {dim}D has {size} centers, above the cap {max_centers}")
        return grids.full_grid(k, dim).points

    def fit_level(k, data):
        return rbf_fit(k, dim, data, _spec_for(spec, k), max_centers=max_centers, compute_cond=compute_cond)

    for corr, dt, resid in residual_cascade(f, range(n0, n + 1), nodes_for, fit_level):
        yield corr, LevelReport(corr.level, corr.node_count, corr.spec.shape,
                                corr.max_condition, dt, resid)


def mlrbf_fit(n0: int, n: int, dim: int, f, spec: SpecProvider,
              max_centers: int = DEFAULT_MAX_CENTERS, compute_cond: bool = False) -> MultilevelInterpolant:
    """Multilevel residual correction on full grids of levels ``n0..n``."""
    corrections, reports = [], []
    for corr, rep in iter_mlrbf(n0, n, dim, f, spec, max_centers=max_centers, compute_cond=compute_cond):
        corrections.append(corr)
        reports.append(rep)
    return MultilevelInterpolant(corrections, reports)
