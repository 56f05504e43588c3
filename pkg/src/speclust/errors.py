"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations


class SpeclustError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatch(SpeclustError):
    """Operands have incompatible shapes."""


class InvalidFormat(SpeclustError):
    """A matrix or file violates its structural invariants."""


class DuplicateEntry(SpeclustError):
    """A (row, col) pair occurs more than once under the 'error' policy."""


class DegenerateVector(SpeclustError):
    """A vector is unusable for the requested similarity measure.

    Cosine rejects zero vectors, cross-correlation rejects constant vectors.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class NotSquare(SpeclustError):
    """Operation requires a square matrix."""


class IsolatedNode(SpeclustError):
    """Zero-degree nodes found while policy forbids them."""

    def __init__(self, indices):
        super().__init__(f"isolated nodes (zero degree): {list(indices)}")
        self.indices = list(indices)


class ZeroDegree(SpeclustError):
    """Degree vector contains a non-positive entry."""


class BadConfig(SpeclustError):
    """A configuration violates its invariants."""


class Breakdown(SpeclustError):
    """Lanczos basis could not be extended past an invariant subspace."""


class MaxRestartsExceeded(SpeclustError):
    """Eigensolver hit its restart budget before all pairs converged.

    Carries the latest Ritz values and residual estimates for diagnostics.
    """

    def __init__(self, message: str, values=None, residuals=None):
        super().__init__(message)
        self.values = values
        self.residuals = residuals


class NotConverged(SpeclustError):
    """Results requested from a session that has not converged."""


class NotSymmetric(SpeclustError):
    """Matrix failed the randomized symmetry check."""


class EmptyPart(SpeclustError):
    """A partition part is empty where the objective divides by its size."""


class ZeroVolumePart(SpeclustError):
    """A partition part has zero volume where the objective divides by it."""


class PipelineError(SpeclustError):
    """A pipeline stage failed; wraps the cause with its stage tag."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause


class EigenNotConverged(PipelineError):
    """Eigen stage ran out of restarts; carries partial residual info."""

    def __init__(self, cause: MaxRestartsExceeded):
        super().__init__("eigen", cause)
        self.values = cause.values
        self.residuals = cause.residuals
