"""Pointwise defects of the functional equations and their grid closures.

Each ``*_defect`` function returns the absolute gap between the two sides of
an equation at one point.  :func:`check_property` evaluates a defect over a
lattice of the working interval and reduces it to a :class:`DefectReport`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import MeanLabError
from .genexpr import Expr, GenFn, to_str
from .means import Matkowski, Mean, QuasiArithmetic, make_mean
from .numerics import Interval

PROPERTIES = ("balancing", "symmetry", "bisymmetry", "iqa", "mean-axiom", "strictness")
DEFAULT_VERDICT_TOL = 1e-7
BISYMMETRY_CAP = 9


def balancing_defect(m: Mean, x: float, y: float) -> float:
    """``|m(m(x,u), m(u,y)) - u|`` with ``u = m(x,y)``."""
    u = m(x, y)
    return abs(m(m(x, u), m(u, y)) - u)


def symmetry_defect(m: Mean, x: float, y: float) -> float:
    return abs(m(x, y) - m(y, x))


def bisymmetry_defect(m: Mean, x: float, y: float, u: float, v: float) -> float:
    """``|m(m(x,y), m(u,v)) - m(m(x,u), m(y,v))|``."""
    return abs(m(m(x, y), m(u, v)) - m(m(x, u), m(y, v)))


def _phi_expr(phi) -> Expr:
    if isinstance(phi, GenFn):
        return phi.ast
    if isinstance(phi, Mean):
        return phi.spec.phi
    return phi


def quasi_arithmetic(phi, iv: Interval, tol: float | None = None) -> Mean:
    """The quasi-arithmetic mean generated by ``phi`` (expression, text or GenFn)."""
    if isinstance(phi, Mean):
        return phi
    spec = QuasiArithmetic(_phi_expr(phi))
    return make_mean(spec, iv) if tol is None else make_mean(spec, iv, tol)


def iqa_defect(m: Mean, phi, x: float, y: float) -> float:
    """``|A_phi(m(x,u), m(u,y)) - u|`` with ``u = m(x,y)``.

    ``phi`` may be an expression, expression text, a validated generator,
    or an already compiled quasi-arithmetic :class:`Mean`.
    """
    a = quasi_arithmetic(phi, m.interval, m.tol)
    u = m(x, y)
    return abs(a(m(x, u), m(u, y)) - u)


def mean_axiom_defect(m: Mean, x: float, y: float) -> float:
    """Distance of ``m(x,y)`` outside ``[min(x,y), max(x,y)]`` (0 if inside)."""
    v = m(x, y)
    return max(0.0, min(x, y) - v, v - max(x, y))


@dataclass(frozen=True)
class DefectReport:
    property: str
    mean: str
    interval: Interval
    grid: tuple[int, ...]
    max_defect: float
    argmax: tuple[float, ...]
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_defect <= self.tol

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def to_text(self) -> str:
        """Flat ``key=value`` block, one field per line."""
        fields = [
            ("property", self.property),
            ("mean", self.mean),
            ("interval", f"{self.interval.lo!r} {self.interval.hi!r}"),
            ("inset", repr(self.interval.inset)),
            ("grid", "x".join(str(n) for n in self.grid)),
            ("max_defect", f"{self.max_defect:.17g}"),
            ("argmax", " ".join(f"{v:.17g}" for v in self.argmax)),
            ("tol", f"{self.tol:.17g}"),
            ("verdict", self.verdict),
        ]
        return "\n".join(f"{k}={v}" for k, v in fields) + "\n"

    CSV_HEADER = "property,mean,lo,hi,inset,grid,max_defect,argmax,tol,verdict"

    def to_csv_row(self) -> str:
        mean = '"' + self.mean.replace('"', '""') + '"'
        return ",".join([
            self.property, mean, f"{self.interval.lo:.17g}", f"{self.interval.hi:.17g}",
            f"{self.interval.inset:.17g}", "x".join(str(n) for n in self.grid),
            f"{self.max_defect:.17g}", " ".join(f"{v:.17g}" for v in self.argmax),
            f"{self.tol:.17g}", self.verdict,
        ])


def _strictness_points(m: Mean, xs):
    """Indicator defect: 1 where a forward step in either argument fails to increase m."""
    n = len(xs)
    values = [[m(x, y) for y in xs] for x in xs]
    for i in range(n):
        for j in range(n):
            flat = (i + 1 < n and not values[i + 1][j] > values[i][j]) or \
                   (j + 1 < n and not values[i][j + 1] > values[i][j])
            yield (xs[i], xs[j]), (1.0 if flat else 0.0)


def pointwise_defects(m: Mean, prop: str, grid_n: int, phi=None, bisym_cap: int = BISYMMETRY_CAP):
    """Yield ``(point, defect)`` over the lattice in row-major order."""
    if prop not in PROPERTIES:
        raise ValueError(f"unknown property {prop!r}; choose from {', '.join(PROPERTIES)}")
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    if (prop == "iqa") != (phi is not None):
        raise ValueError("a generator phi is required for iqa and only for iqa")
    xs = [float(v) for v in m.interval.grid(grid_n)]

    if prop == "bisymmetry":
        qs = [float(v) for v in m.interval.grid(min(grid_n, bisym_cap))]
        for q in itertools.product(qs, repeat=4):
            yield q, _attach(bisymmetry_defect, m, q)
        return
    if prop == "strictness":
        yield from _strictness_points(m, xs)
        return

    if prop == "iqa":
        a = quasi_arithmetic(phi, m.interval, m.tol)
        func = lambda mm, x, y: iqa_defect(mm, a, x, y)  # noqa: E731
    else:
        func = {"balancing": balancing_defect, "symmetry": symmetry_defect,
                "mean-axiom": mean_axiom_defect}[prop]
    for x in xs:
        for y in xs:
            yield (x, y), _attach(func, m, (x, y))


def _attach(func, m, point):
    try:
        return func(m, *point)
    except MeanLabError as exc:
        exc.args = (f"{exc} [grid point {point!r}]",)
        exc.grid_point = point
        raise


def check_property(m: Mean, prop: str, grid_n: int = 33, tol: float = DEFAULT_VERDICT_TOL,
                   phi=None, bisym_cap: int = BISYMMETRY_CAP) -> DefectReport:
    """Grid maximum of a defect.

    Bisymmetry uses a ``min(grid_n, bisym_cap)``-point axis in all four
    arguments.  Ties in the maximum go to the first point in row-major order.
    """
    best, where = -1.0, None
    for point, d in pointwise_defects(m, prop, grid_n, phi, bisym_cap):
        if d != d:
            raise MeanLabError(f"NaN defect at grid point {point!r}")
        if d > best:
            best, where = d, point
    n = min(grid_n, bisym_cap) if prop == "bisymmetry" else grid_n
    dims = 4 if prop == "bisymmetry" else 2
    return DefectReport(prop, str(m), m.interval, (n,) * dims, best, where, tol)


@dataclass(frozen=True)
class MatkowskiVerdict:
    """Both sides of the Matkowski symmetry criterion on one grid."""

    constancy_defect: float
    symmetry_defect: float
    tol: float
    sym_tol: float

    @property
    def difference_constant(self) -> bool:
        return self.constancy_defect <= self.tol

    @property
    def symmetric(self) -> bool:
        return self.symmetry_defect <= self.sym_tol

    @property
    def consistent(self) -> bool:
        return self.difference_constant == self.symmetric


def matkowski_criterion(f, g, iv: Interval, grid_n: int = 33, tol: float = 1e-9,
                        sym_tol: float | None = None) -> MatkowskiVerdict:
    """Compare constancy of ``f - g`` with symmetry of the Matkowski mean.

    The constancy defect is ``max |(f-g)(x) - (f-g)(y)|`` over the grid, i.e.
    the spread of ``f - g``; the symmetry defect is the grid maximum of
    ``|M(x,y) - M(y,x)|``.
    """
    from .genexpr import compile_expr
    spec = Matkowski(f, g)
    m = make_mean(spec, iv)
    ff, gf = compile_expr(spec.f), compile_expr(spec.g)
    xs = [float(v) for v in iv.grid(grid_n)]
    diffs = np.array([ff(x) - gf(x) for x in xs])
    constancy = float(diffs.max() - diffs.min())
    sym = check_property(m, "symmetry", grid_n, tol if sym_tol is None else sym_tol)
    return MatkowskiVerdict(constancy, sym.max_defect, tol, tol if sym_tol is None else sym_tol)


def describe_phi(phi) -> str:
    return to_str(_phi_expr(phi)) if not isinstance(phi, str) else phi
