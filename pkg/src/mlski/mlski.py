"""
Multilevel residual correction over nested grids.

The first correction interpolates the data on the coarsest grid; every later
correction interpolates the residual ``f - sum(previous corrections)`` at the
nodes of the next finer grid.  The multilevel interpolant is the plain sum of
all corrections.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Iterator, Union

import numpy as np

from . import grids
from .errors import MLSKIError
from .kernels import KernelFamily, KernelSpec, ShapeRule
from .ski import NodeValues, SparseInterpolant, ski_fit

SpecProvider = Union[KernelSpec, Callable[[int], KernelSpec]]


def level_specs(family, rule: ShapeRule, dim: int) -> Callable[[int], KernelSpec]:
    """Spec provider pairing one kernel family with a per-level shape rule."""
    family = KernelFamily(family)
    return lambda level: KernelSpec(family, rule(level, dim))


def _spec_for(provider: SpecProvider, level: int) -> KernelSpec:
    return provider if isinstance(provider, KernelSpec) else provider(level)


@dataclass
class LevelReport:
    level: int
    nodes: int
    shape: float
    max_condition: float | None
    time_sec: float
    max_node_residual: float


@dataclass
class MultilevelInterpolant:
    """Ordered level corrections; evaluates to their sum in level order."""

    corrections: list = field(repr=False)
    reports: list[LevelReport] = field(default_factory=list)

    def __post_init__(self):
        if len(self.corrections) == 0:
            raise ValueError("a multilevel interpolant needs at least one correction")

    @property
    def n0(self) -> int:
        return self.corrections[0].level

    @property
    def n(self) -> int:
        return self.corrections[-1].level

    @property
    def dim(self) -> int:
        return self.corrections[0].dim

    def __call__(self, points, workers: int = 1) -> np.ndarray:
        return mlski_eval(self, points, workers=workers)


def _evaluate(interp, points, workers):
    if isinstance(interp, SparseInterpolant):
        return interp(points, workers=workers)
    return interp(points)


def residual_cascade(f, levels, nodes_for: Callable[[int], np.ndarray],
                     fit_level: Callable[[int, NodeValues], object],
                     workers: int = 1) -> Iterator[tuple[object, float, float]]:
    """
    Drive the residual recursion level by level.

    Yields ``(correction, seconds, max_node_residual)`` per level, where the
    timing covers the residual evaluation at the new nodes plus the fit, and
    the node residual is ``max |f - sum(corrections)|`` over the new nodes
    after adding the correction.
    """
    done = []
    for k in levels:
        t0 = time.perf_counter()
        try:
            nodes = nodes_for(k)
            target = np.asarray(f(nodes), dtype=float).reshape(-1)
            prior = np.zeros_like(target)
            for c in done:
                prior += _evaluate(c, nodes, workers)
            resid = target - prior
            corr = fit_level(k, NodeValues(nodes, resid))
        except MLSKIError as exc:
            exc.level = k
            raise
        elapsed = time.perf_counter() - t0
        after = float(np.max(np.abs(resid - _evaluate(corr, nodes, workers))))
        done.append(corr)
        yield corr, elapsed, after


def iter_mlski(n0: int, n: int, dim: int, f, spec: SpecProvider, workers: int = 1,
               compute_cond: bool = False) -> Iterator[tuple[SparseInterpolant, LevelReport]]:
    """Generator form of :func:`mlski_fit`, yielding each correction as soon as it is fitted."""
    if not 1 <= n0 <= n:
        raise ValueError(f"need 1 <= n0 <= n, got n0={n0}, n={n}")

    def nodes_for(k):
        return grids.sparse_grid(k, dim).points

    def fit_level(k, data):
        return ski_fit(k, dim, data, _spec_for(spec, k), workers=workers, compute_cond=compute_cond)

    for corr, dt, resid in residual_cascade(f, range(n0, n + 1), nodes_for, fit_level, workers):
        yield corr, LevelReport(corr.level, corr.node_count, corr.spec.shape,
                                corr.max_condition, dt, resid)


def mlski_fit(n0: int, n: int, dim: int, f, spec: SpecProvider, workers: int = 1,
              compute_cond: bool = False) -> MultilevelInterpolant:
    """
    Multilevel sparse kernel-based interpolant of ``f`` from level ``n0`` to ``n``.

    ``spec`` is a fixed :class:`KernelSpec` or a callable mapping the level
    to one (see :func:`level_specs`).  ``f`` must be vectorized over
    ``(m, dim)`` arrays.
    """
    corrections, reports = [], []
    for corr, rep in iter_mlski(n0, n, dim, f, spec, workers=workers, compute_cond=compute_cond):
        corrections.append(corr)
        reports.append(rep)
    return MultilevelInterpolant(corrections, reports)


def mlski_eval(M: MultilevelInterpolant, points, workers: int = 1) -> np.ndarray:
    """Sum of all corrections at ``points``, accumulated in level order."""
    pts = np.asarray(points, dtype=float)
    out = None
    for corr in M.corrections:
        v = _evaluate(corr, pts, workers)
        out = v if out is None else out + v
    return out
