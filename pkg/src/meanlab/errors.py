"""Exception types shared by every meanlab module."""

from __future__ import annotations


class MeanLabError(Exception):
    """Base class for all library errors."""


class DomainError(MeanLabError, ValueError):
    """A function could not be evaluated (bad argument, non-finite value)."""

    def __init__(self, message: str, point: float | None = None):
        super().__init__(message if point is None else f"{message} (at x={point!r})")
        self.point = point


class RangeError(MeanLabError, ValueError):
    """A target value lies outside the range a monotone map attains."""

    def __init__(self, message: str, admissible: tuple[float, float] | None = None):
        if admissible is not None:
            message = f"{message}; admissible range is [{admissible[0]!r}, {admissible[1]!r}]"
        super().__init__(message)
        self.admissible = admissible


class NoBracketError(RangeError):
    """The function has the same sign at both ends of the search bracket."""


class MonotonicityError(MeanLabError, ValueError):
    """Sampling found a pair of points where strict monotonicity fails."""

    def __init__(self, message: str, witness: tuple[float, float]):
        super().__init__(f"{message}; witness pair {witness!r}")
        self.witness = witness


class ParseError(MeanLabError, ValueError):
    """Syntax error in an expression or mean-spec string."""

    def __init__(self, message: str, offset: int, expected: frozenset[str] | set[str] = frozenset()):
        self.offset = offset
        self.expected = frozenset(expected)
        text = f"{message} at offset {offset}"
        if self.expected:
            text += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(text)


class SpecError(MeanLabError, ValueError):
    """A mean spec is malformed or violates a constructor invariant."""

    def __init__(self, message: str, spec: object = None):
        super().__init__(message if spec is None else f"{message} [in {spec}]")
        self.spec = spec


class InvalidMeanError(MeanLabError, ValueError):
    """Generators fail a mean constructor's hypotheses on the given interval."""

    def __init__(self, message: str, spec: object = None):
        super().__init__(message if spec is None else f"{spec}: {message}")
        self.spec = spec
