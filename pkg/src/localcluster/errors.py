"""Exception hierarchy shared by every module.

The CLI maps these onto process exit codes, so the split between the
classes below is part of the public contract: parameter problems are
distinct from input problems, which are distinct from solver failures.
"""

from __future__ import annotations

__all__ = [
    "ClusterError",
    "ParameterError",
    "InputError",
    "GraphFormatError",
    "InvalidSetError",
    "OracleCapError",
    "ConvergenceError",
    "InfeasibleError",
    "SeedTooLargeError",
    "DegenerateResultError",
    "UnattainableCorrelationError",
    "UnboundedFlowError",
]


class ClusterError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(ClusterError):
    """A parameter is outside its documented range (CLI exit code 1)."""


class OracleCapError(ParameterError):
    """A brute-force oracle was asked for an instance above its size cap."""


class InputError(ClusterError):
    """Problem with user-supplied data such as files or labels (exit code 2)."""


class GraphFormatError(InputError):
    """An edge list or seed file failed validation."""


class InvalidSetError(InputError):
    """A node set refers to vertices outside the graph."""


class ConvergenceError(ClusterError):
    """An iterative solver hit its work cap (exit code 3).

    Attributes
    ----------
    achieved : float
        Residual reached when the cap was hit.
    """

    def __init__(self, message: str, achieved: float = float("nan")):
        super().__init__(message)
        self.achieved = achieved


class InfeasibleError(ClusterError):
    """The request has no valid answer on this input (exit code 4)."""


class SeedTooLargeError(InfeasibleError):
    """The seed set covers the whole graph, so its complement has no volume."""


class DegenerateResultError(InfeasibleError):
    """The computation produced an empty or otherwise unusable result."""


class UnattainableCorrelationError(InfeasibleError):
    """No rho in the search bracket reaches the requested correlation.

    Carries the correlations achievable at the two bracket ends so callers
    can report what is actually reachable.
    """

    def __init__(self, message: str, low_end: float, high_end: float):
        super().__init__(message)
        self.low_end = low_end
        self.high_end = high_end


class UnboundedFlowError(InfeasibleError):
    """Every source-sink cut has infinite capacity; max-flow is unbounded."""
