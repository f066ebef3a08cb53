"""Two-variable means: constructor specs, compilation, and a spec mini-language.

A *spec* is a plain immutable description (``QuasiArithmetic("log(x)")``,
``Fitted(m1, m2)``, ...).  :func:`make_mean` validates the generators on an
interval and returns a :class:`Mean`, a callable ``(x, y) -> value``.

Spec grammar::

    spec  := name [ '(' [ arg (',' arg)* ] ')' ]
    arg   := spec | key '=' (string | number | spec)

with ``qa(phi=...)``, ``weighted(phi=..., t=...)``, ``matkowski(f=..., g=...)``,
``bajraktarevic(f=..., g=...)``, ``cauchy(f=..., g=...)``,
``examplek(phi=..., t=...)``, ``fit(A, B)``, ``conj(A, phi=...)``, ``sym(A)``
and the bare names ``min``, ``max``, ``proj1``, ``proj2``.  Expression
arguments are quoted strings in the generator grammar of
:mod:`meanlab.genexpr`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Union

from .errors import InvalidMeanError, MonotonicityError, DomainError, ParseError, SpecError
from .genexpr import (
    BinOp, Expr, GenFn, X, as_expr, compile_expr, differentiate, to_str, validate_generator,
)
from .numerics import DEFAULT_TOL, Interval, check_monotone, invert_between


def _expr_field(obj, name):
    value = getattr(obj, name)
    if isinstance(value, str):
        object.__setattr__(obj, name, as_expr(value))


def _weight_field(obj):
    t = float(obj.t)
    if not 0.0 < t < 1.0:
        raise SpecError(f"weight t must lie in (0, 1), got {t}")
    object.__setattr__(obj, "t", t)


@dataclass(frozen=True)
class QuasiArithmetic:
    phi: Expr

    def __post_init__(self):
        _expr_field(self, "phi")

    def __str__(self):
        return f'qa(phi="{to_str(self.phi)}")'


@dataclass(frozen=True)
class WeightedQA:
    """``phi^{-1}(t*phi(x) + (1-t)*phi(y))``."""

    phi: Expr
    t: float

    def __post_init__(self):
        _expr_field(self, "phi")
        _weight_field(self)

    def __str__(self):
        return f'weighted(phi="{to_str(self.phi)}", t={self.t!r})'


@dataclass(frozen=True)
class Matkowski:
    """``(f+g)^{-1}(f(x) + g(y))``."""

    f: Expr
    g: Expr

    def __post_init__(self):
        _expr_field(self, "f")
        _expr_field(self, "g")

    def __str__(self):
        return f'matkowski(f="{to_str(self.f)}", g="{to_str(self.g)}")'


@dataclass(frozen=True)
class Bajraktarevic:
    """``(f/g)^{-1}((f(x)+f(y)) / (g(x)+g(y)))``."""

    f: Expr
    g: Expr

    def __post_init__(self):
        _expr_field(self, "f")
        _expr_field(self, "g")

    def __str__(self):
        return f'bajraktarevic(f="{to_str(self.f)}", g="{to_str(self.g)}")'


@dataclass(frozen=True)
class Cauchy:
    """``(f'/g')^{-1}((f(x)-f(y)) / (g(x)-g(y)))`` off the diagonal."""

    f: Expr
    g: Expr

    def __post_init__(self):
        _expr_field(self, "f")
        _expr_field(self, "g")

    def __str__(self):
        return f'cauchy(f="{to_str(self.f)}", g="{to_str(self.g)}")'


@dataclass(frozen=True)
class Proj1:
    def __str__(self):
        return "proj1"


@dataclass(frozen=True)
class Proj2:
    def __str__(self):
        return "proj2"


@dataclass(frozen=True)
class MinMean:
    def __str__(self):
        return "min"


@dataclass(frozen=True)
class MaxMean:
    def __str__(self):
        return "max"


@dataclass(frozen=True)
class Fitted:
    """``m1`` where ``x <= y``, ``m2`` where ``x > y``."""

    m1: "MeanSpec"
    m2: "MeanSpec"

    def __str__(self):
        return f"fit({self.m1}, {self.m2})"


@dataclass(frozen=True)
class Conjugate:
    """``phi^{-1}(m(phi(x), phi(y)))``; ``m`` lives on the image of ``phi``."""

    m: "MeanSpec"
    phi: Expr

    def __post_init__(self):
        _expr_field(self, "phi")

    def __str__(self):
        return f'conj({self.m}, phi="{to_str(self.phi)}")'


@dataclass(frozen=True)
class Symmetrized:
    """``m(min(x, y), max(x, y))``."""

    m: "MeanSpec"

    def __str__(self):
        return f"sym({self.m})"


@dataclass(frozen=True)
class ExampleK:
    """Weighted mean with weight ``t`` on the smaller argument.

    ``x <= y`` gives ``A^t_phi(x, y)``, ``x > y`` gives ``A^{1-t}_phi(x, y)``.
    """

    phi: Expr
    t: float

    def __post_init__(self):
        _expr_field(self, "phi")
        _weight_field(self)

    def __str__(self):
        return f'examplek(phi="{to_str(self.phi)}", t={self.t!r})'


MeanSpec = Union[QuasiArithmetic, WeightedQA, Matkowski, Bajraktarevic, Cauchy, Proj1, Proj2,
                 MinMean, MaxMean, Fitted, Conjugate, Symmetrized, ExampleK]

ARITHMETIC = QuasiArithmetic(X)


@dataclass(frozen=True, eq=False)
class Mean:
    """A compiled mean on ``interval``; call it as ``m(x, y)``."""

    spec: MeanSpec
    interval: Interval
    fn: Callable[[float, float], float] = field(repr=False)
    tol: float = DEFAULT_TOL

    def __call__(self, x: float, y: float) -> float:
        if x == y:
            return x
        return self.fn(x, y)

    def __str__(self):
        return str(self.spec)


# --------------------------------------------------------------------------
# compilation


def _generator(expr: Expr, iv: Interval, spec, role: str) -> GenFn:
    try:
        return validate_generator(expr, iv, name=f"{role}={to_str(expr)}")
    except (MonotonicityError, DomainError) as exc:
        raise InvalidMeanError(str(exc), spec) from exc


def _weighted(phi: GenFn, t: float, tol: float):
    """Evaluator for ``phi^{-1}(t*phi(x) + (1-t)*phi(y))``."""
    s = 1.0 - t
    if phi.is_identity:
        return lambda x, y: t * x + s * y
    h = phi.fn

    def fn(x, y):
        hx, hy = h(x), h(y)
        return invert_between(h, t * hx + s * hy, x, hx, y, hy, tol)
    return fn


def _build_qa(spec: QuasiArithmetic, iv, tol):
    phi = _generator(spec.phi, iv, spec, "phi")
    if phi.is_identity:
        return lambda x, y: (x + y) / 2
    return _weighted(phi, 0.5, tol)


def _build_weighted(spec: WeightedQA, iv, tol):
    return _weighted(_generator(spec.phi, iv, spec, "phi"), spec.t, tol)


def _build_matkowski(spec: Matkowski, iv, tol):
    f = _generator(spec.f, iv, spec, "f")
    g = _generator(spec.g, iv, spec, "g")
    if f.direction != g.direction:
        raise InvalidMeanError(f"f is {f.direction} but g is {g.direction}; "
                               "generators must be monotone in the same sense", spec)
    ff, gf = f.fn, g.fn

    def h(s):
        return ff(s) + gf(s)

    def fn(x, y):
        return invert_between(h, ff(x) + gf(y), x, h(x), y, h(y), tol)
    return fn


def _ratio_generator(num: Expr, den: Expr, iv: Interval, spec, what: str):
    """Compile ``num/den`` after checking ``den`` keeps one strict sign."""
    nf, df = compile_expr(num), compile_expr(den)
    try:
        dens = [df(float(x)) for x in iv.grid(257)]
    except DomainError as exc:
        raise InvalidMeanError(str(exc), spec) from exc
    if not (all(d > 0 for d in dens) or all(d < 0 for d in dens)):
        raise InvalidMeanError(f"{what} denominator vanishes or changes sign on {iv}", spec)

    def ratio(s):
        return nf(s) / df(s)
    try:
        result = check_monotone(ratio, iv)
    except (DomainError, ZeroDivisionError) as exc:
        raise InvalidMeanError(str(exc), spec) from exc
    if not result.ok:
        raise InvalidMeanError(f"{what} ratio is not invertible on {iv} "
                               f"(witness {result.witness!r})", spec)
    return nf, df, ratio


def _build_bajraktarevic(spec: Bajraktarevic, iv, tol):
    f, g, ratio = _ratio_generator(spec.f, spec.g, iv, spec, "f/g")

    def fn(x, y):
        fx, fy, gx, gy = f(x), f(y), g(x), g(y)
        return invert_between(ratio, (fx + fy) / (gx + gy), x, fx / gx, y, fy / gy, tol)
    return fn


def _build_cauchy(spec: Cauchy, iv, tol):
    f, g = compile_expr(spec.f), compile_expr(spec.g)
    _, _, ratio = _ratio_generator(differentiate(spec.f), differentiate(spec.g), iv, spec, "f'/g'")

    def fn(x, y):
        dg = g(x) - g(y)
        if dg == 0.0:
            # arguments closer than the resolution of g
            return 0.5 * (x + y)
        return invert_between(ratio, (f(x) - f(y)) / dg, x, ratio(x), y, ratio(y), tol)
    return fn


def _build_fitted(spec: Fitted, iv, tol):
    m1, m2 = make_mean(spec.m1, iv, tol), make_mean(spec.m2, iv, tol)

    def fn(x, y):
        return m1(x, y) if x <= y else m2(x, y)
    return fn


def _build_conjugate(spec: Conjugate, iv, tol):
    phi = _generator(spec.phi, iv, spec, "phi")
    a, b = phi(iv.work_lo), phi(iv.work_hi)
    inner = make_mean(spec.m, Interval(min(a, b), max(a, b), iv.inset), tol)
    if phi.is_identity:
        return inner.fn
    h = phi.fn

    def fn(x, y):
        hx, hy = h(x), h(y)
        return invert_between(h, inner(hx, hy), x, hx, y, hy, tol)
    return fn


def _build_symmetrized(spec: Symmetrized, iv, tol):
    m = make_mean(spec.m, iv, tol)

    def fn(x, y):
        return m(x, y) if x <= y else m(y, x)
    return fn


def _build_example_k(spec: ExampleK, iv, tol):
    phi = _generator(spec.phi, iv, spec, "phi")
    lower = _weighted(phi, spec.t, tol)
    upper = _weighted(phi, 1.0 - spec.t, tol)

    def fn(x, y):
        return lower(x, y) if x <= y else upper(x, y)
    return fn


_BUILDERS = {
    QuasiArithmetic: _build_qa,
    WeightedQA: _build_weighted,
    Matkowski: _build_matkowski,
    Bajraktarevic: _build_bajraktarevic,
    Cauchy: _build_cauchy,
    Proj1: lambda spec, iv, tol: (lambda x, y: x),
    Proj2: lambda spec, iv, tol: (lambda x, y: y),
    MinMean: lambda spec, iv, tol: min,
    MaxMean: lambda spec, iv, tol: max,
    Fitted: _build_fitted,
    Conjugate: _build_conjugate,
    Symmetrized: _build_symmetrized,
    ExampleK: _build_example_k,
}


@lru_cache(maxsize=256)
def make_mean(spec: MeanSpec | str, iv: Interval, tol: float = DEFAULT_TOL) -> Mean:
    """Validate ``spec`` on ``iv`` and compile it into a :class:`Mean`.

    Raises :class:`InvalidMeanError` when a generator fails its constructor's
    hypotheses (monotonicity, matching directions, non-vanishing
    denominators, invertible ratios).
    """
    if isinstance(spec, str):
        spec = parse_mean_spec(spec)
    try:
        builder = _BUILDERS[type(spec)]
    except KeyError:
        raise SpecError(f"not a mean spec: {spec!r}") from None
    return Mean(spec, iv, builder(spec, iv, tol), tol)


def eval_mean(m: Mean, x: float, y: float) -> float:
    """``m(x, y)`` with argument checks against the mean's interval.

    The endpoints themselves are accepted: inversion only ever brackets on
    ``[min(x,y), max(x,y)]``, so a generator that is finite at an endpoint
    (``log`` at 4 on ``(0.5, 4)``) evaluates there, while one that is not
    raises :class:`DomainError`.
    """
    x, y = float(x), float(y)
    for v in (x, y):
        if not m.interval.lo <= v <= m.interval.hi:
            raise DomainError(f"argument outside {m.interval}", v)
    return m(x, y)


def conjugate_generator(phi: Expr | str, psi: Expr | str) -> Expr:
    """Generator of ``Conjugate(QuasiArithmetic(phi), psi)``, i.e. ``phi o psi``."""
    from .genexpr import substitute
    return substitute(as_expr(phi), as_expr(psi))


def matkowski_sum(spec: Matkowski) -> Expr:
    """The generator ``f + g`` under which a Matkowski mean is iteratively quasi-arithmetic."""
    return BinOp("+", spec.f, spec.g)


# --------------------------------------------------------------------------
# spec mini-language

_SPEC_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<str>"[^"]*"|'[^']*')
  | (?P<num>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_]\w*)
  | (?P<punct>[(),=])
""", re.VERBOSE)

_BARE = {"min": MinMean, "max": MaxMean, "proj1": Proj1, "proj2": Proj2}
# constructor -> (spec class, positional mean slots, keyword params and their kind)
_CTORS = {
    "qa": (QuasiArithmetic, 0, {"phi": "expr"}),
    "weighted": (WeightedQA, 0, {"phi": "expr", "t": "num"}),
    "matkowski": (Matkowski, 0, {"f": "expr", "g": "expr"}),
    "bajraktarevic": (Bajraktarevic, 0, {"f": "expr", "g": "expr"}),
    "cauchy": (Cauchy, 0, {"f": "expr", "g": "expr"}),
    "examplek": (ExampleK, 0, {"phi": "expr", "t": "num"}),
    "fit": (Fitted, 2, {}),
    "conj": (Conjugate, 1, {"phi": "expr"}),
    "sym": (Symmetrized, 1, {}),
}
_POSITIONAL_NAMES = {Fitted: ("m1", "m2"), Conjugate: ("m",), Symmetrized: ("m",)}


class _SpecParser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _SPEC_TOKEN.match(text, pos)
            if m is None:
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            if m.lastgroup != "ws":
                self.tokens.append((m.lastgroup, m.group(), pos))
            pos = m.end()
        self.tokens.append(("end", "", len(text)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, value: str):
        kind, text, pos = self.peek()
        if kind != "punct" or text != value:
            raise ParseError(f"expected {value!r}", pos, {value})
        self.i += 1

    def spec(self):
        kind, name, pos = self.peek()
        if kind != "name":
            raise ParseError("expected a mean constructor", pos, set(_CTORS) | set(_BARE))
        self.i += 1
        if name in _BARE:
            if self.peek()[1] == "(":
                self.i += 1
                self.take(")")
            return _BARE[name]()
        if name not in _CTORS:
            raise ParseError(f"unknown constructor {name!r}", pos, set(_CTORS) | set(_BARE))
        cls, n_pos, params = _CTORS[name]
        self.take("(")
        positional, keywords = [], {}
        if self.peek()[1] != ")":
            while True:
                self.argument(positional, keywords, params)
                if self.peek()[1] == ",":
                    self.i += 1
                    continue
                break
        self.take(")")
        if len(positional) != n_pos:
            raise ParseError(f"{name} takes {n_pos} mean argument(s), got {len(positional)}", pos)
        missing = set(params) - set(keywords)
        if missing:
            raise ParseError(f"{name} is missing parameter(s) {', '.join(sorted(missing))}", pos)
        kwargs = dict(zip(_POSITIONAL_NAMES.get(cls, ()), positional))
        kwargs.update(keywords)
        try:
            return cls(**kwargs)
        except (SpecError, ParseError) as exc:
            raise ParseError(f"bad parameter for {name}: {exc}", pos) from exc

    def argument(self, positional, keywords, params):
        kind, text, pos = self.peek()
        nxt = self.tokens[self.i + 1]
        if kind == "name" and nxt[1] == "=":
            if text not in params:
                raise ParseError(f"unknown parameter {text!r}", pos, set(params))
            self.i += 2
            vkind, value, vpos = self.peek()
            self.i += 1
            if params[text] == "expr":
                if vkind != "str":
                    raise ParseError(f"parameter {text!r} needs a quoted expression", vpos)
                try:
                    keywords[text] = as_expr(value[1:-1])
                except ParseError as exc:
                    raise ParseError(f"in expression for {text!r}: {exc}", vpos + 1 + exc.offset,
                                     exc.expected) from exc
            else:
                if vkind != "num":
                    raise ParseError(f"parameter {text!r} needs a number", vpos)
                keywords[text] = float(value)
            return
        positional.append(self.spec())


def parse_mean_spec(text: str) -> MeanSpec:
    """Parse the constructor syntax, e.g. ``fit(qa(phi="x"), qa(phi="log(x)"))``."""
    parser = _SpecParser(text)
    spec = parser.spec()
    kind, tok, pos = parser.peek()
    if kind != "end":
        raise ParseError(f"unexpected {tok!r} after mean spec", pos, {"end of input"})
    return spec
