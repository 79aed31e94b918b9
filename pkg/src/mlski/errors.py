"""Exception hierarchy for the interpolation package."""


class MLSKIError(Exception):
    """Base class for all package errors."""


class DomainError(MLSKIError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class DegenerateDataError(MLSKIError, ValueError):
    """Data sites that cannot define an interpolation problem (duplicates, too few)."""


class CapacityError(MLSKIError):
    """Requested grid or system is larger than the configured capacity."""


class UnsupportedDimensionError(MLSKIError, ValueError):
    pass


class IncompleteDataError(MLSKIError, KeyError):
    """A node value required by a sub-grid fit is missing."""

    def __init__(self, node):
        self.node = tuple(float(v) for v in node)
        super().__init__(f"no data value for node {self.node}")

    def __str__(self):
        return self.args[0]


class IllConditionedError(MLSKIError):
    """Cholesky factorization broke down even after a diagonal shift.

    ``index`` carries the multi-index of the offending sub-grid when known
    and ``level`` the multilevel step.
    """

    def __init__(self, message, index=None, level=None):
        self.index = index
        self.level = level
        super().__init__(message)

    def __str__(self):
        parts = [self.args[0]]
        if self.index is not None:
            parts.append(f"sub-grid {self.index}")
        if self.level is not None:
            parts.append(f"level {self.level}")
        return "; ".join(parts)
