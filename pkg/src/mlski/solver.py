"""
Dense kernel systems: assembly, Cholesky solve and 2-norm condition numbers.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg
from scipy.sparse import linalg as sparse_linalg
from scipy.spatial.distance import cdist, pdist, squareform

from .errors import DegenerateDataError, DomainError, IllConditionedError
from .kernels import KernelFamily, KernelSpec, _unchecked_eval

logger = logging.getLogger(__name__)

# systems up to this order get a full eigendecomposition for the condition number
EIG_CUTOFF = 1024
ITER_RTOL = 1e-6
ITER_MAXIT = 500
# "safe" conditioning threshold for the residual guarantee
SAFE_CONDITION = 1e10
SHIFT_FACTOR = 1e-12


@dataclass
class FitReport:
    """Diagnostics of one solved kernel system.

    ``condition_2norm`` is ``None`` unless it was requested; it is ``inf``
    when the matrix is numerically singular (``singular`` is then set).
    """

    condition_2norm: float | None
    solve_residual_inf: float
    wall_time: float
    shifted: bool = False
    singular: bool = False


def _scaled(points, scaling) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if scaling is None:
        return pts
    a = np.asarray(scaling, dtype=float)
    if a.shape != (pts.shape[1],):
        raise DomainError(f"scaling of length {a.size} does not match dimension {pts.shape[1]}")
    return pts * a


def _gaussian_from_sq(d2: np.ndarray) -> np.ndarray:
    # exp(-(c r)^2) from squared distances of c-scaled points, in place
    np.negative(d2, out=d2)
    return np.exp(d2, out=d2)


def assemble(centers, spec: KernelSpec, scaling=None) -> np.ndarray:
    """
    Kernel Gram matrix ``phi(||A (x_i - x_j)||)`` over the centers.

    Only the strict upper triangle is computed; the result is exactly
    symmetric with ``phi(0)`` on the diagonal.

    Raises
    ------
    DegenerateDataError
        If two centers coincide.
    """
    pts = _scaled(centers, scaling)
    n = pts.shape[0]
    if n == 0:
        raise DegenerateDataError("cannot assemble a system without centers")
    if n == 1:
        return np.array([[spec.value_at_zero]])
    if spec.family is KernelFamily.GAUSSIAN:
        r = pdist(pts * spec.shape, "sqeuclidean")
    else:
        r = pdist(pts)
    if np.any(r == 0.0):
        raise DegenerateDataError("duplicate centers make the kernel matrix singular")
    mat = squareform(_gaussian_from_sq(r) if spec.family is KernelFamily.GAUSSIAN else _unchecked_eval(spec, r))
    np.fill_diagonal(mat, spec.value_at_zero)
    return mat


def cross_matrix(points, centers, spec: KernelSpec, scaling=None) -> np.ndarray:
    """Evaluation matrix ``phi(||A (p_i - x_j)||)`` of shape ``(len(points), len(centers))``."""
    p, q = _scaled(points, scaling), _scaled(centers, scaling)
    if spec.family is KernelFamily.GAUSSIAN:
        return _gaussian_from_sq(cdist(p * spec.shape, q * spec.shape, "sqeuclidean"))
    return _unchecked_eval(spec, cdist(p, q))


def factor_solve(matrix: np.ndarray, rhs, index=None) -> tuple[np.ndarray, bool]:
    """
    Solve the SPD system with an unpivoted Cholesky factorization.

    On breakdown the factorization is retried once with the diagonal shifted
    by ``1e-12 * trace / N``.  Returns the coefficients and whether the shift
    was needed.

    Raises
    ------
    IllConditionedError
        If the shifted factorization fails too; ``index`` is attached.
    """
    y = np.asarray(rhs, dtype=float)
    if y.shape != (matrix.shape[0],):
        raise DomainError(f"rhs of shape {y.shape} does not match matrix of order {matrix.shape[0]}")
    try:
        factor = linalg.cho_factor(matrix, lower=False, check_finite=False)
        return linalg.cho_solve(factor, y, check_finite=False), False
    except linalg.LinAlgError:
        pass
    shift = SHIFT_FACTOR * np.trace(matrix) / matrix.shape[0]
    logger.warning("Cholesky breakdown%s, retrying with diagonal shift %.3g",
                   f" on sub-grid {index}" if index is not None else "", shift)
    shifted = matrix + shift * np.eye(matrix.shape[0])
    try:
        factor = linalg.cho_factor(shifted, lower=False, check_finite=False)
    except linalg.LinAlgError as exc:
        raise IllConditionedError("kernel matrix is not numerically positive definite",
                                  index=index) from exc
    return linalg.cho_solve(factor, y, check_finite=False), True


def _largest_eigenvalue(op, v0) -> float:
    """Largest eigenvalue of a symmetric operator by Lanczos (ARPACK)."""
    try:
        vals = sparse_linalg.eigsh(op, k=1, which="LA", v0=v0, tol=ITER_RTOL,
                                   maxiter=ITER_MAXIT, return_eigenvectors=False)
    except sparse_linalg.ArpackNoConvergence as exc:
        if len(exc.eigenvalues) == 0:
            raise
        vals = exc.eigenvalues
    return float(vals[-1])


def _iterative_extremes(matrix) -> tuple[float, float]:
    n = matrix.shape[0]
    v0 = np.random.default_rng(0).standard_normal(n)
    hi = _largest_eigenvalue(matrix, v0)
    try:
        factor = linalg.cho_factor(matrix, lower=False, check_finite=False)
    except linalg.LinAlgError:
        return 0.0, hi
    inv = sparse_linalg.LinearOperator((n, n), dtype=float,
                                       matvec=lambda v: linalg.cho_solve(factor, v, check_finite=False))
    mu = _largest_eigenvalue(inv, v0)
    return (1.0 / mu if mu > 0 else 0.0), hi


def condition_2norm(matrix: np.ndarray) -> tuple[float, bool]:
    """
    Spectral condition number ``lambda_max / lambda_min`` of a symmetric matrix.

    Uses ``eigvalsh`` up to order 1024.  Above that, Lanczos iteration runs on
    the matrix and on its Cholesky-factored inverse.
    Returns ``(kappa, singular)``; a nonpositive smallest eigenvalue gives
    ``(inf, True)``.
    """
    n = matrix.shape[0]
    if n <= EIG_CUTOFF:
        ev = linalg.eigvalsh(matrix, check_finite=False)
        lo, hi = float(ev[0]), float(ev[-1])
    else:
        try:
            lo, hi = _iterative_extremes(matrix)
        except sparse_linalg.ArpackNoConvergence:
            logger.warning("Lanczos did not converge on order %d, using a full eigendecomposition", n)
            ev = linalg.eigvalsh(matrix, check_finite=False)
            lo, hi = float(ev[0]), float(ev[-1])
    if lo <= 0.0 or hi <= 0.0:
        return np.inf, True
    return hi / lo, False
