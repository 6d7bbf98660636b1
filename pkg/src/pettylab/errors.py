"""Exception hierarchy shared by every module."""


class PettyLabError(Exception):
    """Base class for all library errors."""


class ParameterError(PettyLabError, ValueError):
    """An argument is outside its admissible range."""


class ShapeError(PettyLabError, ValueError):
    """Matrix shapes do not match."""


class DegenerateInputError(PettyLabError, ValueError):
    """Input is lower-dimensional or otherwise degenerate."""


class PolarUndefinedError(PettyLabError):
    """The origin is not interior, so the polar body is unbounded."""


class MeasureUndefinedError(PettyLabError):
    """The Lp surface measure is not finite (h_K vanishes on a facet normal)."""


class UnsupportedBodyError(PettyLabError, TypeError):
    """The body representation is not supported by the requested operation."""


class NotStarBodyError(PettyLabError):
    """A radial function is zero or infinite on a quadrature node."""


class SamplerError(PettyLabError):
    """Rejection sampling is too inefficient to be trusted."""


class ConvergenceError(PettyLabError):
    """An iterative method did not converge; ``trace`` holds its history."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace or [])


class ProjectionNotFoundError(PettyLabError):
    """The zero search for a rank-one projection exhausted its budget."""


class TruncationError(PettyLabError):
    """A radial integral has a tail that is too heavy for the truncation."""


class ConfigError(PettyLabError):
    """A suite configuration failed validation."""
