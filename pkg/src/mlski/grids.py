"""
Dyadic grids on the unit cube.

A multi-index ``l = (l_1, ..., l_d)`` with ``l_j >= 1`` selects the tensor
grid with spacing ``2**-l_j`` along axis ``j``.  The sparse grid of level
``n`` is the union of all tensor grids with ``|l|_1 = n + d - 1``; the
combination technique additionally needs the coarser layers
``|l|_1 = n + d - 1 - q`` for ``q = 1, ..., d - 1``.

All coordinates are dyadic rationals and therefore exact in binary floating
point, so points from different sub-grids can be compared with ``==``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np
from scipy.stats import qmc

from .errors import CapacityError, DomainError, UnsupportedDimensionError

MultiIndex = tuple[int, ...]

# 2**62 + 1 still fits a signed 64-bit index
MAX_AXIS_LEVEL = 61
# hard ceiling on materialized point sets, ~1.6 GB at d = 4 in float64
MAX_POINTS = 50_000_000

HALTON_MAX_DIM = 4


def as_multi_index(levels: Sequence[int], min_level: int = 1) -> MultiIndex:
    idx = tuple(int(v) for v in levels)
    if len(idx) == 0:
        raise DomainError("multi-index must have at least one component")
    if any(v < min_level for v in idx):
        raise DomainError(f"multi-index components must be >= {min_level}, got {idx}")
    if any(v > MAX_AXIS_LEVEL for v in idx):
        raise CapacityError(f"axis level above {MAX_AXIS_LEVEL} overflows the node index type: {idx}")
    return idx


def grid_size(levels: Sequence[int]) -> int:
    """Number of nodes ``prod(2**l_j + 1)`` of the tensor grid ``levels``."""
    return int(np.prod([(1 << int(l)) + 1 for l in levels], dtype=object))


def scaling_diagonal(levels: Sequence[int]) -> np.ndarray:
    """Diagonal ``(2**l_1, ..., 2**l_d)`` of the anisotropic scaling matrix."""
    return np.array([2.0 ** int(l) for l in levels])


@dataclass(frozen=True)
class TensorGrid:
    """Anisotropic tensor grid ``X_l`` in lexicographic node order."""

    index: MultiIndex
    points: np.ndarray = field(repr=False)

    @property
    def count(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return len(self.index)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple((1 << l) + 1 for l in self.index)


@dataclass(frozen=True)
class SparseGrid:
    level: int
    dim: int
    points: np.ndarray = field(repr=False)

    @property
    def count(self) -> int:
        return self.points.shape[0]


def _check_capacity(count: int) -> None:
    if count > MAX_POINTS:
        raise CapacityError(f"grid with {count} points exceeds the limit of {MAX_POINTS}")


def tensor_grid(levels: Sequence[int], min_level: int = 1) -> TensorGrid:
    """
    Build the tensor grid with ``2**l_j + 1`` equispaced nodes on axis ``j``.

    Nodes are ordered lexicographically in ``(i_1, ..., i_d)`` (last axis
    fastest).  ``min_level=0`` admits zero components for full-grid corner
    cases.
    """
    idx = as_multi_index(levels, min_level=min_level)
    _check_capacity(grid_size(idx))
    axes = [np.arange((1 << l) + 1, dtype=float) / float(1 << l) for l in idx]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    pts.setflags(write=False)
    return TensorGrid(idx, pts)


def multi_indices(total: int, dim: int) -> list[MultiIndex]:
    """All ``l`` with ``l_j >= 1`` and ``|l|_1 == total``, in lexicographic order."""
    if dim < 1:
        raise DomainError("dimension must be >= 1")
    if total < dim:
        return []
    if dim == 1:
        return [(total,)]
    out = []
    for first in range(total - dim + 1, 0, -1):
        for rest in multi_indices(total - first, dim - 1):
            out.append((first,) + rest)
    return out


@dataclass(frozen=True)
class CombinationLayer:
    q: int
    coefficient: int
    indices: tuple[MultiIndex, ...]


def combination_index_sets(n: int, dim: int) -> list[CombinationLayer]:
    """
    Layers of the combination formula for level ``n`` in ``dim`` dimensions.

    Layer ``q`` carries coefficient ``(-1)**q * C(dim-1, q)`` and every
    multi-index with ``|l|_1 = n + dim - 1 - q``.  Inner lists may be empty.
    """
    if n < 1:
        raise DomainError(f"level must be >= 1, got {n}")
    if dim < 1:
        raise DomainError(f"dimension must be >= 1, got {dim}")
    layers = []
    for q in range(dim):
        coeff = (-1) ** q * comb(dim - 1, q)
        layers.append(CombinationLayer(q, coeff, tuple(multi_indices(n + dim - 1 - q, dim))))
    return layers


def sparse_grid_size(n: int, dim: int) -> int:
    """Node count of the sparse grid without materializing it.

    Each 1D node gets a hierarchical level: 1 for ``{0, 1/2, 1}`` and ``k``
    for the ``2**(k-1)`` nodes first appearing at spacing ``2**-k``.  A
    d-dimensional node is in the grid iff its levels sum to at most
    ``n + dim - 1``.
    """
    def new_nodes(k):
        return 3 if k == 1 else 1 << (k - 1)

    total = n + dim - 1

    @lru_cache(maxsize=None)
    def count(budget, axes):
        if axes == 0:
            return 1
        return sum(new_nodes(k) * count(budget - k, axes - 1) for k in range(1, budget - axes + 2))

    return count(total, dim)


@lru_cache(maxsize=32)
def _sparse_grid_cached(n: int, dim: int) -> SparseGrid:
    _check_capacity(sparse_grid_size(n, dim))
    parts = [tensor_grid(l).points for l in multi_indices(n + dim - 1, dim)]
    # np.unique sorts rows lexicographically, which fixes the node order
    pts = np.unique(np.vstack(parts), axis=0)
    pts.setflags(write=False)
    return SparseGrid(n, dim, pts)


def sparse_grid(n: int, dim: int) -> SparseGrid:
    """Deduplicated sparse grid of level ``n``, nodes sorted lexicographically."""
    if n < 1:
        raise DomainError(f"sparse grid level must be >= 1, got {n}")
    if dim < 1:
        raise DomainError(f"dimension must be >= 1, got {dim}")
    return _sparse_grid_cached(int(n), int(dim))


def full_grid(n: int, dim: int) -> TensorGrid:
    """Uniform grid with ``(2**n + 1)**dim`` nodes."""
    if n < 0:
        raise DomainError(f"full grid level must be >= 0, got {n}")
    if dim < 1:
        raise DomainError(f"dimension must be >= 1, got {dim}")
    return tensor_grid((n,) * dim, min_level=0)


def halton_points(count: int, dim: int) -> np.ndarray:
    """
    First ``count`` Halton points in bases 2, 3, 5, 7, starting at index 1.

    The all-zero point at index 0 is skipped.  No scrambling.
    """
    if not 1 <= dim <= HALTON_MAX_DIM:
        raise UnsupportedDimensionError(f"Halton points supported for 1 <= d <= {HALTON_MAX_DIM}, got {dim}")
    if count < 1:
        raise DomainError(f"count must be positive, got {count}")
    engine = qmc.Halton(d=dim, scramble=False)
    engine.fast_forward(1)
    return engine.random(count)


def parse_eval_spec(spec: str) -> int:
    """Parse ``halton:<count>`` into the point count."""
    kind, _, arg = spec.partition(":")
    if kind != "halton" or not arg:
        raise ValueError(f"evaluation spec must look like 'halton:<count>', got {spec!r}")
    count = int(arg)
    if count < 1:
        raise ValueError(f"evaluation count must be positive, got {count}")
    return count


def write_points_csv(path, points: np.ndarray) -> None:
    """Dump a point set as CSV, one point per row, ``x1,...,xd`` header."""
    points = np.atleast_2d(points)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{j + 1}" for j in range(points.shape[1])])
        for row in points:
            writer.writerow([repr(float(v)) for v in row])


def iter_combination_terms(n: int, dim: int):
    """Flatten the combination layers into ``(coefficient, index)`` pairs in fixed order."""
    for layer in combination_index_sets(n, dim):
        for idx in layer.indices:
            yield layer.coefficient, idx


__all__ = [
    "MultiIndex",
    "TensorGrid",
    "SparseGrid",
    "CombinationLayer",
    "as_multi_index",
    "grid_size",
    "scaling_diagonal",
    "tensor_grid",
    "multi_indices",
    "combination_index_sets",
    "iter_combination_terms",
    "sparse_grid",
    "sparse_grid_size",
    "full_grid",
    "halton_points",
    "parse_eval_spec",
    "write_points_csv",
]
