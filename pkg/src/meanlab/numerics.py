"""Intervals, monotonicity sampling, and bracketed root finding.

Everything the mean constructors need to turn ``(h)^{-1}(target)`` into a
number lives here.  Open intervals are represented by their endpoints plus a
relative ``inset``; sampling and bracketing always happen on the closed
*working* interval ``[lo + inset*w, hi - inset*w]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, MonotonicityError, NoBracketError, RangeError

DEFAULT_INSET = 1e-6
DEFAULT_TOL = 1e-12
DEFAULT_SAMPLES = 1024

INCREASING = "increasing"
DECREASING = "decreasing"

# relative tolerance handed to brentq; 4*eps is the smallest value it accepts
_RTOL = 4 * np.finfo(float).eps


@dataclass(frozen=True)
class Interval:
    """Open bounded interval ``(lo, hi)``."""

    lo: float
    hi: float
    inset: float = DEFAULT_INSET

    def __post_init__(self):
        lo, hi, inset = float(self.lo), float(self.hi), float(self.inset)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError(f"interval endpoints must be finite, got ({lo}, {hi})")
        if not lo < hi:
            raise ValueError(f"interval needs lo < hi, got ({lo}, {hi})")
        if not 0.0 < inset <= 0.01:
            raise ValueError(f"inset must lie in (0, 0.01], got {inset}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "inset", inset)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def work_lo(self) -> float:
        return self.lo + self.inset * self.width

    @property
    def work_hi(self) -> float:
        return self.hi - self.inset * self.width

    def contains(self, x: float) -> bool:
        """Membership in the open interval."""
        return self.lo < x < self.hi

    def grid(self, n: int) -> np.ndarray:
        """``n`` equally spaced points covering the working interval."""
        if n < 1:
            raise ValueError("grid needs at least one point")
        if n == 1:
            return np.array([0.5 * (self.work_lo + self.work_hi)])
        return np.linspace(self.work_lo, self.work_hi, n)

    def __str__(self) -> str:
        return f"({self.lo:g}, {self.hi:g})"


@dataclass(frozen=True)
class ScalarFn:
    """A real function on an interval with a declared monotone direction."""

    fn: Callable[[float], float]
    domain: Interval
    direction: str
    name: str = "f"

    def __call__(self, x: float) -> float:
        return self.fn(x)

    @property
    def sign(self) -> int:
        return 1 if self.direction == INCREASING else -1


class MonotoneCheck(NamedTuple):
    """Outcome of :func:`check_monotone`: a direction or a violating pair."""

    direction: str | None
    witness: tuple[float, float] | None = None

    @property
    def ok(self) -> bool:
        return self.direction is not None


def _finite_eval(f: Callable[[float], float], x: float) -> float:
    try:
        value = f(x)
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"evaluation failed: {exc}", x) from exc
    if not math.isfinite(value):
        raise DomainError(f"non-finite value {value!r}", x)
    return value


def _first_violation(xs, ys, sign: int):
    for i in range(len(xs) - 1):
        if not sign * (ys[i + 1] - ys[i]) > 0:
            return (float(xs[i]), float(xs[i + 1]))
    return None


def check_monotone(f: Callable[[float], float], iv: Interval, n: int = DEFAULT_SAMPLES,
                   refine: bool = True) -> MonotoneCheck:
    """Sample ``f`` on ``n`` points of the working interval.

    The direction is taken from the first adjacent pair; the first pair that
    is not strictly ordered that way is returned as a witness.  With
    ``refine`` the neighbourhood of the flattest adjacent pair is resampled
    once more at the same density.  This is a sampling check, not a proof.
    """
    if n < 3:
        raise ValueError("check_monotone needs n >= 3")
    xs = iv.grid(n)
    ys = [_finite_eval(f, float(x)) for x in xs]
    diff = ys[1] - ys[0]
    if diff == 0:
        return MonotoneCheck(None, (float(xs[0]), float(xs[1])))
    sign = 1 if diff > 0 else -1
    witness = _first_violation(xs, ys, sign)
    if witness is not None:
        return MonotoneCheck(None, witness)

    if refine:
        steps = np.abs(np.diff(ys))
        k = int(np.argmin(steps))
        a = float(xs[max(k - 1, 0)])
        b = float(xs[min(k + 2, n - 1)])
        fine = np.linspace(a, b, n)
        fine_ys = [_finite_eval(f, float(x)) for x in fine]
        witness = _first_violation(fine, fine_ys, sign)
        if witness is not None:
            return MonotoneCheck(None, witness)

    return MonotoneCheck(INCREASING if sign > 0 else DECREASING)


def require_monotone(f: Callable[[float], float], iv: Interval, n: int = DEFAULT_SAMPLES,
                     name: str = "f") -> ScalarFn:
    """Wrap ``f`` as a :class:`ScalarFn`, raising if sampling finds a violation."""
    result = check_monotone(f, iv, n)
    if not result.ok:
        raise MonotonicityError(f"{name} is not strictly monotone on {iv}", result.witness)
    return ScalarFn(f, iv, result.direction, name)


def _bounds(bracket) -> tuple[float, float]:
    if isinstance(bracket, Interval):
        return bracket.work_lo, bracket.work_hi
    a, b = bracket
    return float(a), float(b)


def solve_bracketed(g: Callable[[float], float], bracket, tol: float = DEFAULT_TOL,
                    ga: float | None = None, gb: float | None = None) -> float:
    """Root of ``g`` inside ``bracket`` (an :class:`Interval` or a pair ``(a, b)``).

    Brent's method keeps the sign-change bracket at every step, so the
    returned point is within ``tol`` of a root for continuous ``g``.
    Known endpoint values may be passed as ``ga``/``gb`` to save calls.
    """
    a, b = _bounds(bracket)
    if ga is None:
        ga = _finite_eval(g, a)
    if gb is None:
        gb = _finite_eval(g, b)
    if ga == 0.0:
        return a
    if gb == 0.0:
        return b
    if (ga > 0) == (gb > 0):
        raise NoBracketError(f"no sign change on [{a!r}, {b!r}] (g(a)={ga!r}, g(b)={gb!r})")

    def checked(x):
        return _finite_eval(g, x)

    return brentq(checked, a, b, xtol=tol, rtol=_RTOL)


def invert_monotone(f: ScalarFn, y: float, tol: float = DEFAULT_TOL, bracket=None) -> float:
    """Solve ``f(x) = y`` for monotone ``f``.

    The search runs over ``bracket`` (default: the working interval of
    ``f.domain``).  Raises :class:`RangeError` naming the attainable range if
    ``y`` is not attained there.
    """
    a, b = _bounds(f.domain if bracket is None else bracket)
    fa, fb = _finite_eval(f, a), _finite_eval(f, b)
    low, high = min(fa, fb), max(fa, fb)
    if not low <= y <= high:
        raise RangeError(f"{f.name} does not attain {y!r} on [{a!r}, {b!r}]", (low, high))
    return solve_bracketed(lambda x: f(x) - y, (a, b), tol, fa - y, fb - y)


def invert_between(h: Callable[[float], float], target: float, a: float, ha: float,
                   b: float, hb: float, tol: float = DEFAULT_TOL) -> float:
    """Solve ``h(s) = target`` for ``s`` between ``a`` and ``b``.

    Used by mean evaluators, where the mean-value property guarantees that
    the solution lies between the two arguments.  Targets pushed past
    ``h(a)`` or ``h(b)`` by rounding are clamped to that endpoint.
    """
    if not math.isfinite(target):
        raise DomainError(f"non-finite inversion target {target!r}")
    if a > b:
        a, ha, b, hb = b, hb, a, ha
    ga, gb = ha - target, hb - target
    if ga == 0.0:
        return a
    if gb == 0.0:
        return b
    if (ga > 0) == (gb > 0):
        # target is outside [h(a), h(b)] only through rounding
        return a if abs(ga) <= abs(gb) else b
    return brentq(lambda s: h(s) - target, a, b, xtol=tol, rtol=_RTOL)
