"""A tiny expression language for unary generator functions.

Grammar (``^`` is right-associative, unary minus binds tighter than ``^``)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ('^' factor)?
    atom   := number | 'x' | fn '(' expr ')' | '(' expr ')' | '-' atom
    fn     := 'log' | 'exp' | 'sqrt' | 'abs'

Numbers are decimal literals with an optional exponent (``2``, ``0.5``,
``1e-3``).  Note that ``-x^2`` reads as ``(-x)^2``; write ``-(x^2)`` for the
other meaning.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Union

from .errors import DomainError, MonotonicityError, ParseError
from .numerics import DEFAULT_SAMPLES, Interval, ScalarFn, check_monotone

FUNCTIONS = ("log", "exp", "sqrt", "abs")


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Expr"


Expr = Union[Num, Var, Neg, BinOp, Call]
X = Var()


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_]\w*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


_ATOM_START = frozenset({"number", "x", "(", "-"} | set(FUNCTIONS))


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, pos = self.peek()
        if text != value or kind == "end":
            raise ParseError(f"expected {value!r}", pos, {value})
        self.advance()

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        base = self.atom()
        if self.peek()[1] == "^":
            self.advance()
            return BinOp("^", base, self.factor())
        return base

    def atom(self) -> Expr:
        kind, text, pos = self.peek()
        if kind == "num":
            self.advance()
            value = float(text)
            if not math.isfinite(value):
                raise ParseError(f"numeric literal {text!r} overflows", pos)
            return Num(value)
        if kind == "name":
            if text == "x":
                self.advance()
                return X
            if text in FUNCTIONS:
                self.advance()
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            raise ParseError(f"unknown name {text!r}", pos, _ATOM_START)
        if text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if text == "-" and kind == "op":
            self.advance()
            return Neg(self.atom())
        what = "end of input" if kind == "end" else repr(text)
        raise ParseError(f"unexpected {what}", pos, _ATOM_START)


def parse_expr(text: str) -> Expr:
    """Parse ``text`` into an expression tree."""
    parser = _Parser(text)
    node = parser.expr()
    kind, tok, pos = parser.peek()
    if kind != "end":
        raise ParseError(f"unexpected {tok!r}", pos, {"+", "-", "*", "/", "^", "end of input"})
    return node


def to_str(node: Expr) -> str:
    """Render ``node`` so that :func:`parse_expr` rebuilds the same tree."""
    if isinstance(node, Num):
        if node.value < 0 or math.copysign(1.0, node.value) < 0:
            return f"-{-node.value!r}"
        return repr(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Neg):
        return "-" + _atom_str(node.arg)
    if isinstance(node, Call):
        return f"{node.fn}({to_str(node.arg)})"
    return f"({to_str(node.left)} {node.op} {to_str(node.right)})"


def _atom_str(node: Expr) -> str:
    s = to_str(node)
    if isinstance(node, Num) and s.startswith("-"):
        return f"({s})"
    return s


# --------------------------------------------------------------------------
# evaluation


def _check(value: float, what: str, x: float) -> float:
    if not math.isfinite(value):
        raise DomainError(f"{what} is not finite", x)
    return value


def _power(a: float, b: float, literal: bool, x: float) -> float:
    if literal and b == int(b):
        if a == 0.0 and b < 0:
            raise DomainError("zero raised to a negative power", x)
        try:
            return a ** int(b)
        except OverflowError:
            raise DomainError("power overflows", x) from None
    if a < 0 or (a == 0.0 and b <= 0):
        raise DomainError(f"power base {a!r} outside domain", x)
    try:
        return a ** b
    except OverflowError:
        raise DomainError("power overflows", x) from None


def is_constant(node: Expr) -> bool:
    """True if ``node`` does not mention ``x``."""
    if isinstance(node, Num):
        return True
    if isinstance(node, Var):
        return False
    if isinstance(node, (Neg, Call)):
        return is_constant(node.arg)
    return is_constant(node.left) and is_constant(node.right)


def compile_expr(node: Expr) -> Callable[[float], float]:
    """Turn ``node`` into a fast closure ``x -> value``.

    Every intermediate result is checked; invalid operations raise
    :class:`DomainError`.
    """
    if isinstance(node, Num):
        v = node.value
        return lambda x: v
    if isinstance(node, Var):
        return lambda x: x
    if isinstance(node, Neg):
        a = compile_expr(node.arg)
        return lambda x: -a(x)
    if isinstance(node, Call):
        a = compile_expr(node.arg)
        if node.fn == "log":
            def f(x):
                v = a(x)
                if v <= 0:
                    raise DomainError(f"log of non-positive {v!r}", x)
                return math.log(v)
        elif node.fn == "exp":
            def f(x):
                v = a(x)
                if v > 709.78:
                    raise DomainError("exp overflows", x)
                return math.exp(v)
        elif node.fn == "sqrt":
            def f(x):
                v = a(x)
                if v < 0:
                    raise DomainError(f"sqrt of negative {v!r}", x)
                return math.sqrt(v)
        else:
            def f(x):
                return abs(a(x))
        return f

    left, right = compile_expr(node.left), compile_expr(node.right)
    op = node.op
    if op == "+":
        return lambda x: _check(left(x) + right(x), "sum", x)
    if op == "-":
        return lambda x: _check(left(x) - right(x), "difference", x)
    if op == "*":
        return lambda x: _check(left(x) * right(x), "product", x)
    if op == "/":
        def div(x):
            d = right(x)
            if d == 0:
                raise DomainError("division by zero", x)
            return _check(left(x) / d, "quotient", x)
        return div
    literal = is_constant(node.right)
    return lambda x: _check(_power(left(x), right(x), literal, x), "power", x)


def eval_expr(node: Expr, x: float) -> float:
    """Evaluate ``node`` at ``x``."""
    return compile_expr(node)(float(x))


# --------------------------------------------------------------------------
# differentiation; the smart constructors fold the trivial 0/1 cases only


def _add(a, b):
    if a == Num(0.0):
        return b
    if b == Num(0.0):
        return a
    return BinOp("+", a, b)


def _sub(a, b):
    if b == Num(0.0):
        return a
    if a == Num(0.0):
        return Neg(b)
    return BinOp("-", a, b)


def _mul(a, b):
    if a == Num(0.0) or b == Num(0.0):
        return Num(0.0)
    if a == Num(1.0):
        return b
    if b == Num(1.0):
        return a
    return BinOp("*", a, b)


def _div(a, b):
    if a == Num(0.0):
        return Num(0.0)
    if b == Num(1.0):
        return a
    return BinOp("/", a, b)


def differentiate(node: Expr) -> Expr:
    """Symbolic derivative with respect to ``x``.

    A power with a non-constant exponent is rewritten as
    ``exp(b*log(a))`` first, which restricts its domain to ``a > 0``.
    """
    if isinstance(node, Num):
        return Num(0.0)
    if isinstance(node, Var):
        return Num(1.0)
    if isinstance(node, Neg):
        d = differentiate(node.arg)
        return Num(0.0) if d == Num(0.0) else Neg(d)
    if isinstance(node, Call):
        a = node.arg
        da = differentiate(a)
        if node.fn == "log":
            return _div(da, a)
        if node.fn == "exp":
            return _mul(node, da)
        if node.fn == "sqrt":
            return _div(da, BinOp("*", Num(2.0), node))
        # abs'(a) = a/|a|, undefined at a = 0
        return _mul(_div(a, node), da)

    a, b = node.left, node.right
    da, db = differentiate(a), differentiate(b)
    if node.op == "+":
        return _add(da, db)
    if node.op == "-":
        return _sub(da, db)
    if node.op == "*":
        return _add(_mul(da, b), _mul(a, db))
    if node.op == "/":
        return _div(_sub(_mul(da, b), _mul(a, db)), BinOp("^", b, Num(2.0)))
    if isinstance(b, Num):
        c = b.value
        if c == 0.0:
            return Num(0.0)
        power = Num(1.0) if c == 1.0 else BinOp("^", a, Num(c - 1.0))
        return _mul(_mul(Num(c), power), da)
    if is_constant(b):
        # kept symbolic: the exponent may itself be undefined, e.g. log(0)
        return _mul(_mul(b, BinOp("^", a, BinOp("-", b, Num(1.0)))), da)
    return differentiate(Call("exp", BinOp("*", b, Call("log", a))))


def substitute(node: Expr, inner: Expr) -> Expr:
    """The composition ``node(inner(x))``."""
    if isinstance(node, Num):
        return node
    if isinstance(node, Var):
        return inner
    if isinstance(node, Neg):
        return Neg(substitute(node.arg, inner))
    if isinstance(node, Call):
        return Call(node.fn, substitute(node.arg, inner))
    return BinOp(node.op, substitute(node.left, inner), substitute(node.right, inner))


# --------------------------------------------------------------------------
# validated generators


@dataclass(frozen=True)
class GenFn(ScalarFn):
    """A generator that passed the monotonicity gate on ``domain``."""

    ast: Expr = X

    @cached_property
    def derivative(self) -> Expr:
        return differentiate(self.ast)

    @property
    def is_identity(self) -> bool:
        return self.ast == X

    def __str__(self) -> str:
        return to_str(self.ast)


def as_expr(value: Expr | str) -> Expr:
    return parse_expr(value) if isinstance(value, str) else value


def validate_generator(expr: Expr | str, iv: Interval, n: int = DEFAULT_SAMPLES,
                       name: str | None = None) -> GenFn:
    """Check that ``expr`` is finite and strictly monotone on ``iv``.

    Raises :class:`MonotonicityError` with the violating pair, or
    :class:`DomainError` if evaluation fails somewhere on the working interval.
    """
    ast = as_expr(expr)
    fn = compile_expr(ast)
    label = name or to_str(ast)
    result = check_monotone(fn, iv, n)
    if not result.ok:
        raise MonotonicityError(f"generator {label} is not strictly monotone on {iv}",
                                result.witness)
    return GenFn(fn, iv, result.direction, label, ast)
