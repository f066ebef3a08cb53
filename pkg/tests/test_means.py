import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from meanlab.errors import DomainError, InvalidMeanError, ParseError, SpecError
from meanlab.genexpr import X, compile_expr
from meanlab.means import (
    ARITHMETIC, Bajraktarevic, Cauchy, Conjugate, ExampleK, Fitted, Matkowski, MaxMean, MinMean,
    Proj1, Proj2, QuasiArithmetic, Symmetrized, WeightedQA, conjugate_generator, eval_mean,
    make_mean, matkowski_sum, parse_mean_spec,
)
from meanlab.numerics import Interval
from meanlab.rng import Lcg64

from oracles import k_exact, matkowski_x_exp

UNIT = Interval(0.0, 1.0)
POS = Interval(0.5, 2.0)


def test_qa_log_is_geometric():
    m = make_mean(QuasiArithmetic("log(x)"), Interval(0.5, 4))
    assert eval_mean(m, 1, 4) == pytest.approx(2.0, abs=1e-12)


def test_matkowski_x_exp_matches_bisection_oracle():
    m = make_mean(Matkowski("x", "exp(x)"), Interval(0, 2))
    # the root of t + e^t = e
    assert abs(eval_mean(m, 0, 1) - 0.7015020635668446) < 1e-12
    for x, y in [(0.2, 1.7), (1.9, 0.1), (0.5, 1.5)]:
        assert abs(m(x, y) - matkowski_x_exp(x, y)) < 1e-12


def test_example_k_branches():
    m = make_mean(ExampleK("x", 0.25), UNIT)
    assert eval_mean(m, 0, 1) == 0.75
    # weight t sits on the smaller argument either way, so K is symmetric
    assert eval_mean(m, 1, 0) == 0.75
    for x, y in [(0.1, 0.7), (0.9, 0.3), (0.25, 0.75)]:
        assert m(x, y) == pytest.approx(float(k_exact(Fraction(x), Fraction(y))), abs=1e-15)


def test_matkowski_equal_generators_is_arithmetic():
    m = make_mean(Matkowski("x", "x"), UNIT)
    a = make_mean(ARITHMETIC, UNIT)
    for x, y in [(0.1, 0.9), (0.7, 0.2), (0.5, 0.5)]:
        assert m(x, y) == pytest.approx(a(x, y), abs=1e-12)


def test_matkowski_rejects_opposite_directions():
    with pytest.raises(InvalidMeanError):
        make_mean(Matkowski("x", "x^2"), Interval(-1, 0))


def test_bajraktarevic_rejects_constant_ratio():
    with pytest.raises(InvalidMeanError):
        make_mean(Bajraktarevic("x", "x"), POS)


def test_qa_rejects_non_monotone_generator():
    with pytest.raises(InvalidMeanError):
        make_mean(QuasiArithmetic("x^2"), Interval(-1, 1))


def test_eval_mean_rejects_outside_points():
    m = make_mean(ARITHMETIC, UNIT)
    with pytest.raises(DomainError):
        eval_mean(m, -0.1, 0.5)
    # closed endpoints are accepted when the generator is finite there
    assert eval_mean(m, 0.0, 1.0) == 0.5


def test_make_mean_is_cached():
    assert make_mean(ARITHMETIC, UNIT) is make_mean(QuasiArithmetic("x"), UNIT)


def test_fitted_uses_first_mean_on_or_above_diagonal():
    m = make_mean(Fitted(ARITHMETIC, QuasiArithmetic("log(x)")), Interval(0.5, 4))
    assert m(1, 4) == 2.5
    assert m(4, 1) == pytest.approx(2.0, abs=1e-12)


def test_weighted_qa_closed_form():
    m = make_mean(WeightedQA("x", 0.25), UNIT)
    assert m(0.2, 0.6) == pytest.approx(0.25 * 0.2 + 0.75 * 0.6, abs=1e-15)
    g = make_mean(WeightedQA("log(x)", 0.25), POS)
    assert g(0.5, 2.0) == pytest.approx(0.5 ** 0.25 * 2.0 ** 0.75, abs=1e-12)


def test_bajraktarevic_against_direct_solve():
    # f = x^2, g = x gives the ratio x, so the mean is (x^2+y^2)/(x+y)
    m = make_mean(Bajraktarevic("x^2", "x"), POS)
    for x, y in [(0.6, 1.8), (1.5, 0.7)]:
        assert m(x, y) == pytest.approx((x * x + y * y) / (x + y), abs=1e-12)


def test_decreasing_generator_accepted():
    h = make_mean(QuasiArithmetic("1/x"), POS)
    assert h(1.0, 2.0) == pytest.approx(4.0 / 3.0, abs=1e-12)


def test_coordinate_and_extremal_means():
    assert make_mean(Proj1(), UNIT)(0.2, 0.8) == 0.2
    assert make_mean(Proj2(), UNIT)(0.2, 0.8) == 0.8
    assert make_mean(MinMean(), UNIT)(0.8, 0.2) == 0.2
    assert make_mean(MaxMean(), UNIT)(0.8, 0.2) == 0.8


def test_weight_out_of_range():
    with pytest.raises(SpecError):
        WeightedQA("x", 1.5)
    with pytest.raises(SpecError):
        ExampleK("x", 0.0)


# spec mini-language

def test_parse_simple_qa():
    assert parse_mean_spec('qa(phi="x")') == QuasiArithmetic(X)


def test_parse_fitted():
    spec = parse_mean_spec('fit(qa(phi="x"), qa(phi="log(x)"))')
    assert spec == Fitted(QuasiArithmetic("x"), QuasiArithmetic("log(x)"))


def test_parse_bad_weight_is_parameter_error():
    with pytest.raises(ParseError) as info:
        parse_mean_spec('weighted(phi="x", t=1.5)')
    assert "t must lie in (0, 1)" in str(info.value)


@pytest.mark.parametrize("text", [
    'qa(phi="x"', 'qa(psi="x")', 'nosuch(phi="x")', 'qa(phi="x +")', 'min(', 'qa(phi=x)',
    'weighted(phi="x")', 'fit(qa(phi="x"))',
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_mean_spec(text)


SPECS = [
    QuasiArithmetic("x"), QuasiArithmetic("log(x)"), QuasiArithmetic("exp(x)"),
    QuasiArithmetic("1/x"), WeightedQA("x^3", 0.3), Matkowski("x", "exp(x)"),
    Matkowski("log(x)", "2*log(x)"), Bajraktarevic("x^2", "x"), Cauchy("x^2", "x"),
    Cauchy("exp(2*x)", "exp(x)"), Proj1(), Proj2(), MinMean(), MaxMean(),
    Fitted(ARITHMETIC, QuasiArithmetic("log(x)")), Conjugate(ARITHMETIC, "exp(x)"),
    Symmetrized(Matkowski("x", "exp(x)")), ExampleK("x", 0.25), ExampleK("log(x)", 0.7),
]


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_spec_text_round_trip(spec):
    assert parse_mean_spec(str(spec)) == spec


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_mean_axiom_on_random_pairs(spec):
    m = make_mean(spec, POS)
    rng = Lcg64(1234)
    for _ in range(1000):
        x, y = rng.uniform(POS.work_lo, POS.work_hi), rng.uniform(POS.work_lo, POS.work_hi)
        v = m(x, y)
        assert min(x, y) - 1e-9 <= v <= max(x, y) + 1e-9


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_reflexive_short_circuit(spec):
    m = make_mean(spec, POS)
    for x in (0.6, 1.0, 1.7):
        assert m(x, x) == x


@pytest.mark.parametrize("spec", [QuasiArithmetic("log(x)"), QuasiArithmetic("1/x"),
                                  WeightedQA("x^3", 0.3), Matkowski("x", "exp(x)"),
                                  Matkowski("-x", "-x^3")], ids=str)
def test_strictly_increasing_in_each_argument(spec):
    m = make_mean(spec, POS)
    xs = [float(v) for v in POS.grid(40)]
    for fixed in (0.7, 1.3, 1.9):
        row = [m(fixed, s) for s in xs]
        col = [m(s, fixed) for s in xs]
        assert all(b > a for a, b in zip(row, row[1:]))
        assert all(b > a for a, b in zip(col, col[1:]))


def _grid_symmetry(m, n=33):
    xs = [float(v) for v in m.interval.grid(n)]
    return max(abs(m(x, y) - m(y, x)) for x in xs for y in xs)


@pytest.mark.parametrize("f,g", [("x", "x+5"), ("log(x)", "log(x)+2"), ("x^3", "x^3-1")])
def test_matkowski_shifted_generators_are_symmetric(f, g):
    assert _grid_symmetry(make_mean(Matkowski(f, g), POS)) < 1e-9


def test_matkowski_x_exp_is_asymmetric():
    assert _grid_symmetry(make_mean(Matkowski("x", "exp(x)"), Interval(0, 2))) > 1e-3


def test_matkowski_sum():
    assert compile_expr(matkowski_sum(Matkowski("x", "exp(x)")))(1.0) == pytest.approx(1 + math.e)


@pytest.mark.parametrize("phi,psi", [("x", "exp(x)"), ("log(x)", "x^2"), ("exp(x)", "log(x)"),
                                     ("x^3", "sqrt(x)")])
def test_conjugation_identity(phi, psi):
    conj = make_mean(Conjugate(QuasiArithmetic(phi), psi), POS)
    direct = make_mean(QuasiArithmetic(conjugate_generator(phi, psi)), POS)
    xs = [float(v) for v in POS.grid(17)]
    assert max(abs(conj(x, y) - direct(x, y)) for x in xs for y in xs) < 1e-9


@pytest.mark.parametrize("phi", ["x", "log(x)", "exp(x)", "x^3", "sqrt(x)"])
def test_cauchy_of_square_and_generator_is_quasi_arithmetic(phi):
    c = make_mean(Cauchy(f"({phi})^2", phi), POS)
    q = make_mean(QuasiArithmetic(phi), POS)
    xs = [float(v) for v in POS.grid(17)]
    assert max(abs(c(x, y) - q(x, y)) for x in xs for y in xs) < 1e-8


@settings(max_examples=300, deadline=None)
@given(st.floats(0.0, 1.0), st.floats(0.0, 1.0),
       st.sampled_from([Matkowski("x", "exp(x)"), ExampleK("x", 0.25), Proj1(),
                        WeightedQA("log(x)", 0.2)]))
def test_symmetrized_is_bitwise_symmetric(a, b, inner):
    m = make_mean(Symmetrized(inner), POS)
    x = POS.work_lo + a * (POS.work_hi - POS.work_lo)
    y = POS.work_lo + b * (POS.work_hi - POS.work_lo)
    assert m(x, y) == m(y, x)


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(SPECS), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_mean_axiom_property(spec, a, b):
    m = make_mean(spec, POS)
    x = POS.work_lo + a * (POS.work_hi - POS.work_lo)
    y = POS.work_lo + b * (POS.work_hi - POS.work_lo)
    v = m(x, y)
    assert min(x, y) - 1e-9 <= v <= max(x, y) + 1e-9


def test_mean_values_are_finite_floats():
    m = make_mean(Matkowski("x", "exp(x)"), Interval(0, 2))
    assert isinstance(m(0.3, 1.1), float)
    assert np.isfinite(m(0.3, 1.1))
