"""
Benchmark target functions on the unit cube.

All functions are vectorized: they take an ``(m, d)`` array (or a single
point) and return ``m`` values.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError


def _cols(x, dim):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x.reshape(1, -1)
    if x.shape[1] != dim:
        raise DomainError(f"expected {dim}-d points, got shape {x.shape}")
    return [9.0 * x[:, j] for j in range(dim)]


def franke2d(x) -> np.ndarray:
    """Franke's function, with the ``/4`` divisors of the classical form in the first and third terms."""
    a, b = _cols(x, 2)
    return (0.75 * np.exp(-((a - 2) ** 2 + (b - 2) ** 2) / 4)
            + 0.75 * np.exp(-(a + 1) ** 2 / 49 - (b + 1) ** 2 / 10)
            + 0.5 * np.exp(-((a - 7) ** 2 + (b - 3) ** 2) / 4)
            - 0.2 * np.exp(-(a - 4) ** 2 - (b - 7) ** 2))


def franke2d_printed(x) -> np.ndarray:
    """Alternate 2D Franke transcription: no divisor in the first exponent, ``/4`` on x1 only in terms three and four."""
    a, b = _cols(x, 2)
    return (0.75 * np.exp(-(a - 2) ** 2 - (b - 2) ** 2)
            + 0.75 * np.exp(-(a + 1) ** 2 / 49 - (b + 1) ** 2 / 10)
            + 0.5 * np.exp(-(a - 7) ** 2 / 4 - (b - 3) ** 2)
            - 0.2 * np.exp(-(a - 4) ** 2 / 4 - (b - 7) ** 2))


def franke3d(x) -> np.ndarray:
    a, b, c = _cols(x, 3)
    return (0.75 * np.exp(-((a - 2) ** 2 + (b - 2) ** 2 + (c - 2) ** 2) / 4)
            + 0.75 * np.exp(-(a + 1) ** 2 / 49 - (b + 1) ** 2 / 10 - (c + 1) ** 2 / 29)
            + 0.5 * np.exp(-(a - 7) ** 2 / 4 - (b - 3) ** 2 - (c - 5) ** 2 / 2)
            - 0.2 * np.exp(-(a - 4) ** 2 / 4 - (b - 7) ** 2 - (c - 5) ** 2))


def franke4d(x) -> np.ndarray:
    # divisor pattern differs per term and per axis; kept as given
    a, b, c, e = _cols(x, 4)
    return (0.75 * np.exp(-((a - 2) ** 2 + (b - 2) ** 2 + (c - 2) ** 2) / 4 - (e - 2) ** 2 / 8)
            + 0.75 * np.exp(-(a + 1) ** 2 / 49 - (b + 1) ** 2 / 10 - (c + 1) ** 2 / 29 - (e + 1) ** 2 / 39)
            + 0.5 * np.exp(-(a - 7) ** 2 / 4 - (b - 3) ** 2 - (c - 5) ** 2 / 2 - (e - 5) ** 2 / 4)
            - 0.2 * np.exp(-(a - 4) ** 2 / 4 - (b - 7) ** 2 - (c - 5) ** 2 - (e - 5) ** 2))


def quad4d(x) -> np.ndarray:
    """``4**4 * prod x_i (1 - x_i)``; equals 1 at the cube center."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x.reshape(1, -1)
    if x.shape[1] != 4:
        raise DomainError(f"expected 4-d points, got shape {x.shape}")
    return 256.0 * np.prod(x * (1.0 - x), axis=1)


def _radial_log(x, dim):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x.reshape(1, -1)
    if x.shape[1] != dim:
        raise DomainError(f"expected {dim}-d points, got shape {x.shape}")
    r = np.sqrt(np.sum(x * x, axis=1))
    out = np.zeros_like(r)
    pos = r > 0
    rp = r[pos]
    out[pos] = (rp ** 2 + rp ** 4) * np.log(rp)
    return out


def r3d(x) -> np.ndarray:
    """``(r**2 + r**4) log r`` with ``r = |x|``, continuously extended by 0 at the origin."""
    return _radial_log(x, 3)


def r4d(x) -> np.ndarray:
    return _radial_log(x, 4)


@dataclass(frozen=True)
class TestFunction:
    __test__ = False  # not a pytest class

    name: str
    dim: int
    evaluator: Callable[[np.ndarray], np.ndarray]

    def __call__(self, x) -> np.ndarray:
        return self.evaluator(x)


REGISTRY: dict[str, TestFunction] = {}


def register(name: str, dim: int, evaluator: Callable[[np.ndarray], np.ndarray]) -> TestFunction:
    """Add a user function to the registry (it must be vectorized over rows)."""
    fn = TestFunction(name, dim, evaluator)
    REGISTRY[name] = fn
    return fn


def get_function(name: str) -> TestFunction:
    try:
        return REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown test function {name!r}; known: {', '.join(sorted(REGISTRY))}") from None


for _name, _dim, _fn in [
    ("franke2d", 2, franke2d),
    ("franke2d_printed", 2, franke2d_printed),
    ("franke3d", 3, franke3d),
    ("franke4d", 4, franke4d),
    ("quad4d", 4, quad4d),
    ("r3d", 3, r3d),
    ("r4d", 4, r4d),
]:
    register(_name, _dim, _fn)
