"""Exception types shared across the package."""


class RuledminError(Exception):
    """Base class for every error this package raises on purpose."""


class UsageError(RuledminError, ValueError):
    """Malformed input: bad dimensions, bad JSON, invalid option values."""


class DimensionMismatchError(UsageError):
    """A vector's length does not match the ambient dimension."""


class PreconditionError(RuledminError):
    """A documented precondition of an operation does not hold."""


class ConventionError(PreconditionError):
    """Input violates a normalization convention (arc length, unit direction, gauge).

    The message names the failed check so callers can repair the input
    instead of silently rounding it into shape.
    """


class DegenerateMetricError(RuledminError):
    """The induced metric is degenerate at a specific point."""

    def __init__(self, s: float, t: float, det_g: float | None = None):
        self.s = float(s)
        self.t = float(t)
        self.det_g = None if det_g is None else float(det_g)
        msg = f"degenerate induced metric at (s, t) = ({self.s!r}, {self.t!r})"
        if det_g is not None:
            msg += f", det g = {self.det_g!r}"
        super().__init__(msg)


class EverywhereDegenerateError(RuledminError):
    """Every sampled point has a degenerate tangent metric."""


class NullDirectionError(RuledminError):
    """The direction curve is null and non-parallel.

    Such a ruled surface is never minimal, so classification stops here
    with a not-minimal diagnosis instead of a case label.
    """


class NoWitnessError(RuledminError):
    """No frame with the requested norm pattern exists in this signature."""


class NonExistenceError(RuledminError):
    """A requested family does not exist in the signature; carries the result."""

    def __init__(self, result, message: str | None = None):
        self.result = result
        super().__init__(message or "no witness exists; see attached certificate")
