"""
Sparse kernel-based interpolation (SKI).

Each sub-grid ``X_l`` of the combination formula gets its own anisotropic
RBF interpolant with scaling ``diag(2**l)``; the sparse interpolant is the
signed sum of these with coefficients ``(-1)**q * C(d-1, q)``.  All
sub-grids interpolate the same data, looked up by exact node coordinates.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping, Union

import numpy as np

from . import grids
from .errors import DomainError, IllConditionedError, IncompleteDataError
from .kernels import KernelSpec
from .solver import FitReport, assemble, condition_2norm, cross_matrix, factor_solve

# cap on the size of one evaluation block (rows x centers)
EVAL_BLOCK = 2_000_000


class NodeValues(Mapping):
    """
    Data values keyed by exact node coordinates.

    Sub-grid nodes are subsets of the sparse grid, and all coordinates are
    dyadic, so plain tuple keys give exact matches.
    """

    def __init__(self, points, values):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        vals = np.asarray(values, dtype=float).reshape(-1)
        if pts.shape[0] != vals.shape[0]:
            raise DomainError(f"{pts.shape[0]} nodes but {vals.shape[0]} values")
        self.dim = pts.shape[1]
        self._index = {tuple(row): i for i, row in enumerate(pts.tolist())}
        self._values = vals

    def __getitem__(self, node):
        key = tuple(float(v) for v in node)
        try:
            return self._values[self._index[key]]
        except KeyError:
            raise IncompleteDataError(key) from None

    def __iter__(self):
        return iter(self._index)

    def __len__(self):
        return len(self._index)

    def lookup(self, points) -> np.ndarray:
        """Values at every row of ``points``; raises on the first missing node."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != self.dim:
            raise DomainError(f"table holds {self.dim}-d nodes, got {pts.shape[1]}-d points")
        idx = np.empty(pts.shape[0], dtype=np.intp)
        for i, row in enumerate(pts.tolist()):
            j = self._index.get(tuple(row))
            if j is None:
                raise IncompleteDataError(row)
            idx[i] = j
        return self._values[idx]


DataSource = Union[Callable[[np.ndarray], np.ndarray], NodeValues]


def values_at(data: DataSource, points: np.ndarray) -> np.ndarray:
    """Pull data values at ``points`` from a table or a vectorized callable."""
    if isinstance(data, NodeValues):
        return data.lookup(points)
    vals = np.asarray(data(points), dtype=float).reshape(-1)
    if vals.shape[0] != points.shape[0]:
        raise DomainError(f"data callable returned {vals.shape[0]} values for {points.shape[0]} points")
    return vals


def as_points(points, dim: int) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(1, -1) if dim > 1 else pts.reshape(-1, 1)
    if pts.ndim != 2 or pts.shape[1] != dim:
        raise DomainError(f"expected points of dimension {dim}, got array of shape {np.shape(points)}")
    return pts


def _blocks(m: int, n_centers: int):
    step = max(1, min(m, EVAL_BLOCK // max(n_centers, 1)))
    for start in range(0, m, step):
        yield slice(start, min(start + step, m))


@dataclass
class SubGridInterpolant:
    """One solved anisotropic RBF problem on a tensor grid."""

    index: grids.MultiIndex
    centers: np.ndarray = field(repr=False)
    coefficients: np.ndarray = field(repr=False)
    scaling: np.ndarray
    spec: KernelSpec
    report: FitReport

    @property
    def dim(self) -> int:
        return self.centers.shape[1]

    def compute_condition(self) -> float:
        """Fill ``report.condition_2norm`` (reassembles the matrix) and return it."""
        if self.report.condition_2norm is None:
            mat = assemble(self.centers, self.spec, self.scaling)
            self.report.condition_2norm, self.report.singular = condition_2norm(mat)
        return self.report.condition_2norm

    def __call__(self, points) -> np.ndarray:
        pts = as_points(points, self.dim)
        out = np.empty(pts.shape[0])
        for sl in _blocks(pts.shape[0], self.centers.shape[0]):
            out[sl] = cross_matrix(pts[sl], self.centers, self.spec, self.scaling) @ self.coefficients
        return out


def fit_tensor_grid(index, data: DataSource, spec: KernelSpec, compute_cond: bool = False,
                    min_level: int = 1, cls=SubGridInterpolant):
    """Fit the anisotropic interpolant on ``tensor_grid(index)`` to ``data``."""
    t0 = time.perf_counter()
    grid = grids.tensor_grid(index, min_level=min_level)
    scaling = grids.scaling_diagonal(grid.index)
    y = values_at(data, grid.points)
    mat = assemble(grid.points, spec, scaling)
    try:
        coef, shifted = factor_solve(mat, y, index=grid.index)
    except IllConditionedError as exc:
        exc.index = grid.index
        raise
    resid = float(np.max(np.abs(mat @ coef - y))) if y.size else 0.0
    elapsed = time.perf_counter() - t0
    kappa, singular = (condition_2norm(mat) if compute_cond else (None, False))
    report = FitReport(kappa, resid, elapsed, shifted=shifted, singular=singular)
    return cls(grid.index, grid.points, coef, scaling, spec, report)


@dataclass
class SparseInterpolant:
    """Level-``n`` SKI: signed combination of sub-grid interpolants."""

    level: int
    dim: int
    spec: KernelSpec
    terms: list[tuple[int, SubGridInterpolant]] = field(repr=False)

    @property
    def node_count(self) -> int:
        return grids.sparse_grid_size(self.level, self.dim)

    @property
    def max_condition(self) -> float | None:
        ks = [t.report.condition_2norm for _, t in self.terms]
        if any(k is None for k in ks):
            return None
        return max(ks)

    @property
    def fit_time(self) -> float:
        return sum(t.report.wall_time for _, t in self.terms)

    def compute_conditions(self) -> float:
        """Condition numbers for all sub-grids not yet measured; returns the maximum."""
        return max(sub.compute_condition() for _, sub in self.terms)

    def __call__(self, points, workers: int = 1) -> np.ndarray:
        return ski_eval(self, points, workers=workers)


def ski_fit(n: int, dim: int, data: DataSource, spec: KernelSpec, workers: int = 1,
            compute_cond: bool = False) -> SparseInterpolant:
    """
    Fit every sub-grid problem of the level-``n`` combination formula.

    Parameters
    ----------
    n, dim : int
        Sparse-grid level (>= 1) and space dimension.
    data : callable or NodeValues
        Vectorized target ``f(points) -> values`` or a node table covering
        the sparse grid of level ``n``.
    spec : KernelSpec
        Kernel shared by all sub-grids.
    workers : int
        Thread pool size for the independent sub-grid solves.  Results do
        not depend on it.
    compute_cond : bool
        Also compute the 2-norm condition number of every sub-grid matrix.
    """
    spec.check_dimension(dim)
    terms = list(grids.iter_combination_terms(n, dim))

    def fit(term):
        return fit_tensor_grid(term[1], data, spec, compute_cond=compute_cond)

    if workers > 1 and len(terms) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            fitted = list(pool.map(fit, terms))
    else:
        fitted = [fit(t) for t in terms]
    return SparseInterpolant(n, dim, spec, [(coef, s) for (coef, _), s in zip(terms, fitted)])


def _eval_block(S: SparseInterpolant, pts: np.ndarray) -> np.ndarray:
    out = np.zeros(pts.shape[0])
    for coef, sub in S.terms:
        out += coef * sub(pts)
    return out


def ski_eval(S: SparseInterpolant, points, workers: int = 1) -> np.ndarray:
    """
    Evaluate the sparse interpolant.

    Terms are accumulated in the fixed order of the combination layers, so
    the result is bit-identical for any ``workers``.
    """
    pts = as_points(points, S.dim)
    # fixed-size point chunks so the parallel schedule cannot change any sum
    chunk = 4096
    slices = [slice(i, min(i + chunk, pts.shape[0])) for i in range(0, pts.shape[0], chunk)]
    if workers > 1 and len(slices) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda sl: _eval_block(S, pts[sl]), slices))
    else:
        parts = [_eval_block(S, pts[sl]) for sl in slices]
    return np.concatenate(parts) if parts else np.zeros(0)
