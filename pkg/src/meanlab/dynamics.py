"""Section maps of a mean and the fixed-point machinery built on them.

For a strictly monotone mean ``M`` and a point ``v`` of its interval::

    L_v(s) = M(M(s, v), v)        R_v(s) = M(s, M(s, v))
    psi_v  = L_v o R_v^{-1}       on J_v = R_v(I)

``psi_v`` fixes ``v`` and its orbits converge monotonically to ``v``.  The
set ``D(u)`` of all ``v`` with ``u`` in ``J_v`` is an interval around ``u``;
``v -> psi_v(u)`` is continuous there.  These facts drive
:func:`decompose`, which writes ``(x, y)`` as ``(R_v0(u0), L_v0(u0))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoBracketError, RangeError
from .means import Mean
from .numerics import DEFAULT_TOL, Interval, solve_bracketed
from .properties import quasi_arithmetic

NOISE_FLOOR = 1e-13


def left_section(m: Mean, v: float, s: float) -> float:
    """``L_v(s) = m(m(s, v), v)``."""
    return m(m(s, v), v)


def right_section(m: Mean, v: float, s: float) -> float:
    """``R_v(s) = m(s, m(s, v))``."""
    return m(s, m(s, v))


def j_range(m: Mean, v: float) -> tuple[float, float]:
    """``R_v`` over the working interval: the sampled ``J_v``."""
    iv = m.interval
    return right_section(m, v, iv.work_lo), right_section(m, v, iv.work_hi)


def in_j(m: Mean, v: float, t: float) -> bool:
    a, b = j_range(m, v)
    return a <= t <= b


def right_section_inverse(m: Mean, v: float, t: float, tol: float = DEFAULT_TOL) -> float:
    """Solve ``R_v(s) = t``; :class:`RangeError` if ``t`` is not in ``J_v``."""
    if t == v:
        return v
    iv = m.interval
    # R_v(v) = v exactly, and R_v is increasing, so the pre-image sits on t's side of v
    end = iv.work_lo if t < v else iv.work_hi
    r_end = right_section(m, v, end)
    if (t < v and r_end > t) or (t > v and r_end < t):
        raise RangeError(f"{t!r} is outside J_v for v={v!r}", j_range(m, v))
    g = lambda s: right_section(m, v, s) - t  # noqa: E731
    if t < v:
        return solve_bracketed(g, (end, v), tol, r_end - t, v - t)
    return solve_bracketed(g, (v, end), tol, v - t, r_end - t)


def section_psi(m: Mean, v: float, t: float, tol: float = DEFAULT_TOL) -> float:
    """``psi_v(t) = L_v(R_v^{-1}(t))``.  Raises :class:`RangeError` off ``J_v``."""
    if t == v:
        return v
    return left_section(m, v, right_section_inverse(m, v, t, tol))


def check_rl(m: Mean, v: float, n: int = 32) -> bool:
    """Sample ``R_v < L_v`` left of ``v`` and ``R_v > L_v`` right of ``v``."""
    iv = m.interval
    left = np.linspace(iv.work_lo, v, n + 1)[:-1] if v > iv.work_lo else []
    right = np.linspace(v, iv.work_hi, n + 1)[1:] if v < iv.work_hi else []
    for s in left:
        s = float(s)
        if not right_section(m, v, s) < left_section(m, v, s):
            return False
    for s in right:
        s = float(s)
        if not right_section(m, v, s) > left_section(m, v, s):
            return False
    return True


@dataclass
class Orbit:
    v: float
    start: float
    iterates: list[float]
    converged: bool
    monotone_dir: str
    stop_reason: str
    rl_holds: bool
    tol: float

    @property
    def n_iter(self) -> int:
        return len(self.iterates) - 1

    @property
    def limit(self) -> float:
        return self.iterates[-1]

    CSV_HEADER = "index,iterate,distance"

    def csv_rows(self) -> list[str]:
        return [f"{k},{s:.17g},{abs(s - self.v):.17g}" for k, s in enumerate(self.iterates)]


def run_orbit(m: Mean, v: float, xi: float, max_iter: int = 10_000, tol: float = 1e-10,
              solve_tol: float = DEFAULT_TOL) -> Orbit:
    """Iterate ``psi_v`` from ``xi`` until within ``tol`` of ``v``.

    The record notes the direction of approach ("increasing" from below,
    "decreasing" from above, "none" for a start at ``v``, or "violation"
    when a step moves backwards by more than the noise floor or jumps across
    ``v``), why iteration stopped, and whether ``R_v``/``L_v`` satisfied the
    ordering hypothesis on a sample.
    """
    if not in_j(m, v, xi):
        raise RangeError(f"start {xi!r} is not in J_v for v={v!r}", j_range(m, v))
    rl = check_rl(m, v)
    iterates = [xi]
    if xi == v or abs(xi - v) <= tol:
        return Orbit(v, xi, iterates, True, "none", "tol-reached", rl, tol)
    sign = 1.0 if xi < v else -1.0
    direction = "increasing" if sign > 0 else "decreasing"
    reason = "max-iter"
    t = xi
    for _ in range(max_iter):
        try:
            nxt = section_psi(m, v, t, solve_tol)
        except RangeError:
            reason = "domain-exit"
            break
        step = sign * (nxt - t)
        if step < -NOISE_FLOOR or sign * (v - nxt) < -NOISE_FLOOR:
            direction = "violation"
        iterates.append(nxt)
        t = nxt
        if abs(t - v) <= tol:
            reason = "tol-reached"
            break
    converged = reason == "tol-reached"
    return Orbit(v, xi, iterates, converged, direction, reason, rl, tol)


def _bisect_edge(pred, inside: float, outside: float, iters: int = 60) -> float:
    """Last point satisfying ``pred`` between ``inside`` (True) and ``outside`` (False)."""
    for _ in range(iters):
        mid = 0.5 * (inside + outside)
        if mid == inside or mid == outside:
            break
        if pred(mid):
            inside = mid
        else:
            outside = mid
    return inside


def estimate_domain_D(m: Mean, u: float, resolution: int = 1001, refine: bool = True) -> Interval:
    """The interval ``D(u) = {v : u in J_v}``, estimated on a grid of ``v``.

    Returns the maximal run of grid points passing the membership test that
    contains the grid point nearest ``u``; with ``refine`` each edge that
    falls strictly inside the working interval is sharpened by bisection on
    the membership predicate.
    """
    iv = m.interval
    vs = iv.grid(resolution)
    member = [in_j(m, float(v), u) for v in vs]
    k = int(np.argmin(np.abs(vs - u)))
    if not member[k]:
        # u itself is always in D(u); start the run there
        member[k] = True
    i = k
    while i > 0 and member[i - 1]:
        i -= 1
    j = k
    while j < len(vs) - 1 and member[j + 1]:
        j += 1
    lo, hi = float(vs[i]), float(vs[j])
    if refine:
        pred = lambda v: in_j(m, v, u)  # noqa: E731
        if i > 0:
            lo = _bisect_edge(pred, min(lo, u), float(vs[i - 1]))
        if j < len(vs) - 1:
            hi = _bisect_edge(pred, max(hi, u), float(vs[j + 1]))
    if not lo < hi:
        raise RangeError(f"D({u!r}) collapsed to a point at resolution {resolution}")
    return Interval(lo, hi, iv.inset)


def probe_psi_continuity(m: Mean, u: float, n: int = 101, domain: Interval | None = None) -> float:
    """Largest jump of ``v -> psi_v(u)`` between ``n`` equally spaced ``v`` in ``D(u)``.

    Samples whose evaluation leaves ``J_v`` (rounding at the edge of
    ``D(u)``) are dropped.
    """
    if n < 2:
        raise ValueError("need at least two samples")
    dom = domain or estimate_domain_D(m, u)
    values = []
    for v in np.linspace(dom.work_lo, dom.work_hi, n):
        try:
            values.append(section_psi(m, float(v), u))
        except RangeError:
            continue
    if len(values) < 2:
        raise RangeError(f"psi_v({u!r}) could not be evaluated at two points of D(u)")
    return float(np.max(np.abs(np.diff(values))))


@dataclass
class Decomposition:
    x: float
    y: float
    u0: float
    v0: float
    residual_x: float
    residual_y: float
    mean_check: float

    CSV_HEADER = "x,y,u0,v0,residual_x,residual_y,mean_check"

    def csv_row(self) -> str:
        return ",".join(f"{v:.17g}" for v in (self.x, self.y, self.u0, self.v0, self.residual_x,
                                               self.residual_y, self.mean_check))


def _domain_edge(m: Mean, u: float, upward: bool) -> float:
    """Sup (``upward``) or inf of ``D(u)``, by bisection on membership."""
    iv = m.interval
    end = iv.work_hi if upward else iv.work_lo
    pred = lambda v: in_j(m, v, u)  # noqa: E731
    if pred(end):
        return end
    return _bisect_edge(pred, u, end)


def _find_v0(m: Mean, x: float, y: float, upward: bool, tol: float) -> float | None:
    edge = _domain_edge(m, x, upward)
    span = edge - x
    if span == 0.0:
        return None

    def h(v):
        return section_psi(m, v, x, tol) - y

    # psi_x(x) = x, so h starts at x - y; march out geometrically, then uniformly
    prev_v, prev_h = x, x - y
    candidates = [x + span * 2.0 ** -k for k in range(30, -1, -1)]
    candidates += [float(v) for v in np.linspace(x, edge, 65)[1:]]
    for v in candidates:
        try:
            hv = h(v)
        except RangeError:
            continue
        if hv == 0.0:
            return v
        if (hv > 0) != (prev_h > 0):
            a, b = sorted((prev_v, v))
            ha, hb = (prev_h, hv) if prev_v < v else (hv, prev_h)
            return solve_bracketed(h, (a, b), tol, ha, hb)
        prev_v, prev_h = v, hv
    return None


def decompose(m: Mean, x: float, y: float, tol: float = DEFAULT_TOL) -> Decomposition:
    """Find ``v0`` with ``psi_v0(x) = y`` and ``u0 = R_v0^{-1}(x)``.

    Then ``x = R_v0(u0)``, ``y = L_v0(u0)`` and, if ``m`` is balanced,
    ``m(u0, v0) = m(x, y)``; ``mean_check`` measures that last equality.
    The search for ``v0`` runs away from ``x`` towards ``y``'s side first
    and then the other way; :class:`NoBracketError` if neither side works.
    """
    if x == y:
        return Decomposition(x, y, x, x, 0.0, 0.0, 0.0)
    v0 = None
    for upward in ((True, False) if x < y else (False, True)):
        v0 = _find_v0(m, x, y, upward, tol)
        if v0 is not None:
            break
    if v0 is None:
        raise NoBracketError(f"no v0 with psi_v0({x!r}) = {y!r} inside D({x!r})")
    u0 = right_section_inverse(m, v0, x, tol)
    return Decomposition(
        x, y, u0, v0,
        abs(right_section(m, v0, u0) - x),
        abs(left_section(m, v0, u0) - y),
        abs(m(u0, v0) - m(x, y)),
    )


def local_qa_scan(m: Mean, phi, p: float, tol: float = 1e-7, max_steps: int = 40,
                  grid_n: int = 9, growth: float = 1.5, initial: float = 1e-3) -> float:
    """Largest half-width ``r`` with ``m = A_phi`` on ``[p-r, p+r]^2`` (clipped).

    Radii grow geometrically from ``initial * width``; the scan stops at the
    first rectangle whose grid shows ``|m - A_phi| > tol``.  A rectangle
    that already covers the working interval ends the scan and reports
    ``max(p - work_lo, work_hi - p)``.  Returns 0 if the smallest fails.
    """
    iv = m.interval
    a = quasi_arithmetic(phi, iv, m.tol)
    cover = max(p - iv.work_lo, iv.work_hi - p)
    r = initial * iv.width
    best = 0.0
    for _ in range(max_steps):
        r = min(r, cover)
        pts = np.linspace(max(p - r, iv.work_lo), min(p + r, iv.work_hi), grid_n)
        worst = max(abs(m(float(s), float(t)) - a(float(s), float(t))) for s in pts for t in pts)
        if not worst <= tol:
            break
        best = r
        if r >= cover:
            break
        r *= growth
    return best


def reaches_bound(m: Mean, p: float, radius: float) -> bool:
    """Did :func:`local_qa_scan` stop because it covered the whole interval?"""
    iv = m.interval
    return radius >= max(p - iv.work_lo, iv.work_hi - p)
