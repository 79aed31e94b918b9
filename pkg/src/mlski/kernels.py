"""
Radial kernels, anisotropic scaling and shape-parameter selection.

Every family is written in terms of a shape parameter ``c`` (inverse length)
applied to the distance before the profile is evaluated:

- gaussian: ``exp(-(c r)**2)``
- wendland32: ``(1 - c r)_+**6 * (35 (c r)**2 + 18 c r + 3)``, support ``r < 1/c``
- imq: ``(1 + (c r)**2)**-0.5``

The anisotropic version of a kernel measures distances after a diagonal
scaling, ``phi(||A (x - y)||)``; the scalar ``c`` is applied on top of it.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.spatial import cKDTree

from .errors import DegenerateDataError, DomainError, UnsupportedDimensionError
from . import grids


class KernelFamily(str, enum.Enum):
    GAUSSIAN = "gaussian"
    WENDLAND32 = "wendland32"
    IMQ = "imq"


# highest space dimension for which each family is positive definite
_MAX_DIM = {
    KernelFamily.GAUSSIAN: None,
    KernelFamily.WENDLAND32: 3,
    KernelFamily.IMQ: None,
}


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus positive shape parameter ``c``."""

    family: KernelFamily
    shape: float

    def __post_init__(self):
        object.__setattr__(self, "family", KernelFamily(self.family))
        shape = float(self.shape)
        if not np.isfinite(shape) or shape <= 0:
            raise DomainError(f"shape parameter must be a positive finite number, got {self.shape}")
        object.__setattr__(self, "shape", shape)

    @property
    def value_at_zero(self) -> float:
        return 3.0 if self.family is KernelFamily.WENDLAND32 else 1.0

    @property
    def support_radius(self) -> float:
        """Radius beyond which the kernel vanishes (``inf`` for global kernels)."""
        if self.family is KernelFamily.WENDLAND32:
            return 1.0 / self.shape
        return np.inf

    def check_dimension(self, dim: int) -> None:
        """Reject dimensions in which the family is not positive definite."""
        limit = _MAX_DIM[self.family]
        if limit is not None and dim > limit:
            raise UnsupportedDimensionError(
                f"{self.family.value} is positive definite only for d <= {limit}, got d = {dim}"
            )

    def with_shape(self, shape: float) -> "KernelSpec":
        return KernelSpec(self.family, shape)


def _profile(family: KernelFamily, cr: np.ndarray) -> np.ndarray:
    if family is KernelFamily.GAUSSIAN:
        return np.exp(-(cr * cr))
    if family is KernelFamily.IMQ:
        return 1.0 / np.sqrt(1.0 + cr * cr)
    t = np.maximum(1.0 - cr, 0.0)
    t2 = t * t
    return t2 * t2 * t2 * (35.0 * cr * cr + 18.0 * cr + 3.0)


def kernel_eval(spec: KernelSpec, r):
    """
    Evaluate ``phi(r)`` for scalar or array distances.

    Raises
    ------
    DomainError
        If any distance is negative or NaN.
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(~(r_arr >= 0)):
        raise DomainError("kernel distances must be nonnegative")
    out = _profile(spec.family, spec.shape * r_arr)
    return float(out) if out.ndim == 0 else out


def _unchecked_eval(spec: KernelSpec, r: np.ndarray) -> np.ndarray:
    # hot path for assembled distances, which are nonnegative by construction
    return _profile(spec.family, spec.shape * r)


def anisotropic_eval(spec: KernelSpec, scaling, x, center) -> float:
    """``phi(||A (x - center)||_2)`` with ``A = diag(scaling)``."""
    a = np.asarray(scaling, dtype=float)
    x = np.asarray(x, dtype=float)
    center = np.asarray(center, dtype=float)
    if a.ndim != 1 or x.shape != a.shape or center.shape != a.shape:
        raise DomainError(
            f"dimension mismatch: scaling {a.shape}, x {x.shape}, center {center.shape}"
        )
    if np.any(a <= 0):
        raise DomainError("scaling entries must be positive")
    return kernel_eval(spec, float(np.linalg.norm(a * (x - center))))


def separation_distance(points) -> float:
    """Half the smallest pairwise Euclidean distance of a point set."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.shape[0] < 2:
        raise DegenerateDataError("separation distance needs at least two points")
    dist, _ = cKDTree(pts).query(pts, k=2)
    q = 0.5 * float(dist[:, 1].min())
    if q == 0.0:
        raise DegenerateDataError("point set contains duplicate points")
    return q


@lru_cache(maxsize=128)
def grid_separation(n: int, dim: int, grid: str = "sparse") -> float:
    """Separation distance of the sparse or full grid of level ``n`` (cached)."""
    if grid == "sparse":
        pts = grids.sparse_grid(n, dim).points
    elif grid == "full":
        pts = grids.full_grid(n, dim).points
    else:
        raise ValueError(f"grid must be 'sparse' or 'full', got {grid!r}")
    return separation_distance(pts)


SHAPE_RATIOS = ("fine_over_coarse", "coarse_over_fine")


def shape_for_level(n: int, dim: int, K: float, grid: str = "sparse",
                    ratio: str = "fine_over_coarse") -> float:
    """
    Shape parameter for level ``n`` from separation distances of the grid family.

    ``ratio="fine_over_coarse"`` returns ``q(level n+1) / (K q(level n))``;
    ``"coarse_over_fine"`` returns ``q(level n) / (K q(level n+1))``.  For
    dyadic grids these are ``1/(2K)`` and ``2/K``.  Separation distances are
    measured on the actual point sets.
    """
    if n < 1:
        raise DomainError(f"level must be >= 1, got {n}")
    if not K > 0:
        raise DomainError(f"K must be positive, got {K}")
    if ratio not in SHAPE_RATIOS:
        raise ValueError(f"ratio must be one of {SHAPE_RATIOS}, got {ratio!r}")
    q_coarse = grid_separation(n, dim, grid)
    q_fine = grid_separation(n + 1, dim, grid)
    if ratio == "fine_over_coarse":
        return q_fine / (K * q_coarse)
    return q_coarse / (K * q_fine)


class ShapeRule:
    """Per-level shape parameter: either a fixed ``c`` or the separation rule with ``K``."""

    def __init__(self, shape: float | None = None, K: float | None = None,
                 grid: str = "sparse", ratio: str = "coarse_over_fine"):
        if (shape is None) == (K is None):
            raise ValueError("give exactly one of shape or K")
        if shape is not None and not shape > 0:
            raise DomainError(f"shape must be positive, got {shape}")
        if K is not None and not K > 0:
            raise DomainError(f"K must be positive, got {K}")
        self.shape = shape
        self.K = K
        self.grid = grid
        self.ratio = ratio

    def __call__(self, level: int, dim: int) -> float:
        if self.shape is not None:
            return float(self.shape)
        return shape_for_level(level, dim, self.K, grid=self.grid, ratio=self.ratio)

    def describe(self) -> str:
        if self.shape is not None:
            return f"c={self.shape:g}"
        return f"K={self.K:g}"

    def __repr__(self):
        if self.shape is not None:
            return f"ShapeRule(shape={self.shape!r})"
        return f"ShapeRule(K={self.K!r}, grid={self.grid!r}, ratio={self.ratio!r})"
