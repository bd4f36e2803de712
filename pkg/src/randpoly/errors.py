"""Exception hierarchy shared by all randpoly modules."""


class RandpolyError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(RandpolyError, ValueError):
    """An argument violates a documented precondition."""


class DegenerateGeometryError(RandpolyError):
    """Input is not in general position within the working tolerance.

    Raised instead of perturbing: ties have probability zero for sampled
    inputs, so hitting one usually means hand-made or corrupted data.
    """


class DegenerateInputError(DegenerateGeometryError):
    """A hull simplex is flat or a point lies on a facet hyperplane."""


class DegenerateSectionError(DegenerateGeometryError):
    """A section plane is parallel to a facet hyperplane."""


class OriginNotInteriorError(RandpolyError):
    """The operation needs the origin strictly inside the polytope."""


class SingularSystemError(RandpolyError):
    """A linear system is too ill-conditioned to solve reliably."""


class ThresholdUnattainableError(ValidationError):
    """No cap height reaches the requested surface fraction (max is 1/2)."""


class InsufficientGridError(ValidationError):
    """Too few distinct grid points for a log-log fit."""


class ExperimentAbortedError(RandpolyError):
    """More than 1% of the trials in an experiment cell failed."""
