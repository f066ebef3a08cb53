from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from meanlab.dynamics import (
    check_rl, decompose, estimate_domain_D, in_j, j_range, left_section, local_qa_scan,
    probe_psi_continuity, reaches_bound, right_section, right_section_inverse, run_orbit,
    section_psi,
)
from meanlab.errors import NoBracketError, RangeError
from meanlab.means import ARITHMETIC, ExampleK, Matkowski, QuasiArithmetic, make_mean
from meanlab.numerics import Interval
from meanlab.properties import check_property, matkowski_criterion

from oracles import k_exact

WIDE = Interval(-3.0, 3.0)
UNIT = Interval(0.0, 1.0)


@pytest.fixture(scope="module")
def arith_wide():
    return make_mean(ARITHMETIC, WIDE)


@pytest.fixture(scope="module")
def arith_unit():
    return make_mean(ARITHMETIC, UNIT)


@pytest.fixture(scope="module")
def matkowski():
    return make_mean(Matkowski("x", "exp(x)"), Interval(0, 2))


def test_sections_of_arithmetic_mean(arith_wide):
    # L_v(s) = (s+3v)/4 and R_v(s) = (3s+v)/4
    assert left_section(arith_wide, 0.4, 1.2) == pytest.approx((1.2 + 1.2) / 4)
    assert right_section(arith_wide, 0.4, 1.2) == pytest.approx((3.6 + 0.4) / 4)
    lo, hi = j_range(arith_wide, 0.0)
    assert lo == pytest.approx(-2.25, abs=1e-5) and hi == pytest.approx(2.25, abs=1e-5)


def test_psi_closed_form(arith_wide):
    assert section_psi(arith_wide, 0.0, 1.0) == pytest.approx(1 / 3, abs=1e-12)
    for v, t in [(0.5, 1.5), (-1.0, 0.2), (1.0, -0.5)]:
        assert section_psi(arith_wide, v, t) == pytest.approx((t + 2 * v) / 3, abs=1e-11)


def test_psi_fixed_point(arith_wide, matkowski):
    assert section_psi(arith_wide, 0.7, 0.7) == 0.7
    assert section_psi(matkowski, 1.3, 1.3) == 1.3


def test_psi_outside_j_raises(arith_wide):
    with pytest.raises(RangeError) as info:
        section_psi(arith_wide, 0.0, 2.9)
    assert info.value.admissible[1] == pytest.approx(2.25, abs=1e-5)


def test_right_section_inverse_round_trip(matkowski):
    for v, t in [(1.0, 0.8), (1.0, 1.3), (0.4, 0.3)]:
        s = right_section_inverse(matkowski, v, t)
        assert right_section(matkowski, v, s) == pytest.approx(t, abs=1e-11)


def test_rl_condition(arith_unit, matkowski):
    assert check_rl(arith_unit, 0.5)
    assert check_rl(matkowski, 1.0)


# orbits

def test_arithmetic_orbit_is_geometric(arith_wide):
    orbit = run_orbit(arith_wide, 0.0, 1.0)
    assert orbit.converged and orbit.stop_reason == "tol-reached"
    assert orbit.monotone_dir == "decreasing"
    for k, s in enumerate(orbit.iterates[:10]):
        assert s == pytest.approx(3.0 ** -k, abs=1e-12)
    assert abs(orbit.limit) <= 1e-10


def test_orbit_started_at_fixed_point(arith_wide):
    orbit = run_orbit(arith_wide, 0.4, 0.4)
    assert orbit.converged and orbit.n_iter == 0


def test_matkowski_orbit_increases_to_v(matkowski):
    orbit = run_orbit(matkowski, 1.5, 0.9, max_iter=200, tol=1e-10)
    assert orbit.converged and orbit.monotone_dir == "increasing"
    assert orbit.n_iter <= 200
    assert all(b > a for a, b in zip(orbit.iterates, orbit.iterates[1:]))
    finer = run_orbit(matkowski, 1.5, 0.9, max_iter=400, tol=1e-11)
    assert abs(orbit.limit - finer.limit) <= 1e-10
    assert abs(finer.limit - 1.5) <= 1e-11


def test_orbit_start_must_lie_in_j(matkowski):
    # J_v for v = 1.5 is roughly [0.88, 1.66], so 0.5 is not a valid start
    lo, hi = j_range(matkowski, 1.5)
    assert lo > 0.5
    with pytest.raises(RangeError):
        run_orbit(matkowski, 1.5, 0.5)


def test_orbit_iteration_cap(arith_wide):
    orbit = run_orbit(arith_wide, 0.0, 1.0, max_iter=3)
    assert not orbit.converged and orbit.stop_reason == "max-iter"
    assert orbit.n_iter == 3


def test_orbit_csv(arith_wide):
    rows = run_orbit(arith_wide, 0.0, 1.0).csv_rows()
    assert rows[0] == "0,1,1"
    assert rows[1].startswith("1,0.3333333333333")


# D(u)

@pytest.mark.parametrize("u", [0.1, 0.5, 0.9])
def test_domain_matches_closed_form(arith_unit, u):
    d = estimate_domain_D(arith_unit, u, 1001)
    step = (UNIT.work_hi - UNIT.work_lo) / 1000
    assert abs(d.lo - max(UNIT.work_lo, 4 * u - 3)) <= 2 * step
    assert abs(d.hi - min(UNIT.work_hi, 4 * u)) <= 2 * step


@settings(max_examples=40, deadline=None)
@given(st.floats(0.02, 0.98))
def test_domain_interior_contains_u(u):
    m = make_mean(QuasiArithmetic("exp(x)"), UNIT)
    d = estimate_domain_D(m, u, 201)
    assert d.lo < u < d.hi


# continuity of v -> psi_v(u)

def test_psi_continuity_arithmetic(arith_unit):
    dom = estimate_domain_D(arith_unit, 0.5)
    jump = probe_psi_continuity(arith_unit, 0.5, 101, dom)
    step = (dom.work_hi - dom.work_lo) / 100
    assert jump == pytest.approx(2 / 3 * step, rel=1e-6)


def test_psi_continuity_refines():
    m = make_mean(QuasiArithmetic("log(x)"), Interval(0.5, 4))
    coarse = probe_psi_continuity(m, 1.5, 101)
    fine = probe_psi_continuity(m, 1.5, 202)
    assert 0 < fine < coarse < 0.1


def test_psi_continuity_two_samples(arith_unit):
    dom = estimate_domain_D(arith_unit, 0.5)
    jump = probe_psi_continuity(arith_unit, 0.5, 2, dom)
    ends = [section_psi(arith_unit, v, 0.5) for v in (dom.work_lo, dom.work_hi)]
    assert jump == abs(ends[1] - ends[0])


# decomposition

def test_decompose_arithmetic():
    m = make_mean(ARITHMETIC, Interval(-1, 2))
    d = decompose(m, 0.25, 0.75)
    # 3u + v = 1 and u + 3v = 3
    assert d.u0 == pytest.approx(0.0, abs=1e-10) and d.v0 == pytest.approx(1.0, abs=1e-10)
    assert d.mean_check <= 1e-15


def test_decompose_diagonal(matkowski):
    d = decompose(matkowski, 0.8, 0.8)
    assert (d.u0, d.v0, d.residual_x, d.residual_y, d.mean_check) == (0.8, 0.8, 0, 0, 0)


@pytest.mark.parametrize("phi,iv,pairs", [
    ("log(x)", (0.5, 4), [(1.0, 1.4), (2.2, 1.9), (3.0, 3.3)]),
    ("exp(x)", (0, 2), [(0.5, 0.7), (1.2, 0.9)]),
    ("1/x", (0.5, 4), [(1.0, 1.2)]),
])
def test_decompose_balanced_means(phi, iv, pairs):
    m = make_mean(QuasiArithmetic(phi), Interval(*iv))
    for x, y in pairs:
        d = decompose(m, x, y)
        assert d.residual_x < 1e-9 and d.residual_y < 1e-9
        assert d.mean_check < 1e-7


def test_decompose_example_k_breaks_mean_equality():
    m = make_mean(ExampleK("x", 0.25), Interval(-1, 2))
    d = decompose(m, 0.25, 0.75)
    u0, v0 = Fraction(-1, 2), Fraction(5, 6)
    # exact check of the decomposition and of the gap it exposes
    assert k_exact(u0, k_exact(u0, v0)) == Fraction(1, 4)
    assert k_exact(k_exact(u0, v0), v0) == Fraction(3, 4)
    assert d.u0 == pytest.approx(float(u0), abs=1e-9)
    assert d.v0 == pytest.approx(float(v0), abs=1e-9)
    gap = abs(k_exact(u0, v0) - k_exact(Fraction(1, 4), Fraction(3, 4)))
    assert gap == Fraction(1, 8)
    assert d.mean_check == pytest.approx(0.125, abs=1e-9)


def test_decompose_example_k_on_unit_interval_has_no_solution():
    # psi_v(0.25) stays below about 0.417 for v in D(0.25), so 0.75 is out of reach
    m = make_mean(ExampleK("x", 0.25), UNIT)
    with pytest.raises(NoBracketError):
        decompose(m, 0.25, 0.75)


# local quasi-arithmetic scan

def test_local_scan_arithmetic_reaches_bound(arith_unit):
    r = local_qa_scan(arith_unit, "x", 0.5)
    assert reaches_bound(arith_unit, 0.5, r)


def test_local_scan_example_k_is_zero():
    m = make_mean(ExampleK("x", 0.25), UNIT)
    assert local_qa_scan(m, "x", 0.5, tol=1e-6) == 0.0


def test_local_scan_matkowski_is_zero(matkowski):
    assert local_qa_scan(matkowski, "x+exp(x)", 1.0, tol=1e-6) == 0.0


# three indicators for Matkowski means: balanced, f-g constant, locally QA everywhere

PAIRS = [("x", "x+5", True), ("2*x", "2*x", True), ("log(x)", "log(x)+2", True),
         ("x", "exp(x)", False), ("x^3", "x^3+x", False), ("log(x)", "2*log(x)", False)]


@pytest.mark.parametrize("f,g,expected", PAIRS)
def test_three_indicators_agree(f, g, expected):
    iv = Interval(0.5, 2)
    m = make_mean(Matkowski(f, g), iv)
    balanced = check_property(m, "balancing", 17, 1e-7).passed
    constant = matkowski_criterion(f, g, iv, 17).difference_constant
    r = local_qa_scan(m, f"{f} + {g}", 1.2, tol=1e-7)
    local = reaches_bound(m, 1.2, r)
    assert balanced == constant == local == expected


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 1.0))
def test_psi_fixed_point_is_exact(a):
    m = make_mean(Matkowski("x", "exp(x)"), Interval(0, 2))
    v = m.interval.work_lo + a * (m.interval.work_hi - m.interval.work_lo)
    assert section_psi(m, v, v) == v
    assert in_j(m, v, v)
