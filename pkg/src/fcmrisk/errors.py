"""Exception types shared across the package."""


class FcmError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(FcmError):
    """An input document or matrix violates the expected schema or value ranges."""


class UnknownNodeError(FcmError, KeyError):
    """A node id does not exist in the graph."""

    def __str__(self) -> str:  # KeyError quotes its args; keep plain messages
        return Exception.__str__(self)


class NoPathsError(FcmError):
    """No usable risk-transmission path ends at the requested target."""


class MissingValueError(FcmError):
    """A node on a transmission path carries no vulnerability value."""


class MeasureError(FcmError):
    """A fuzzy measure is malformed: not normalized, not monotone, or degenerate."""


class EvaluationOrderError(FcmError):
    """Bottom-up evaluation cannot proceed: unvalued leaf or cyclic dependency."""


class UniverseMismatchError(FcmError):
    """Two matrices being combined are defined over different node universes."""
