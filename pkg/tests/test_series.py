import json
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from pontrjagin.series import (
    IntegralityError,
    LaurentSeries,
    PowerSeries,
    PrecisionError,
    coefficient,
    compose,
    derivative,
    divide,
    frobenius_congruence_violations,
    frobenius_twist,
    from_json,
    pow_int,
    qth_root,
    rational_power,
    residue,
    residue_change_of_variable,
    revert,
    to_json,
    verify_valuation_bound,
)
from pontrjagin.valuation import INFINITY, nu2

from strategies import power_series, reversible_series, small_fractions, unit_series

F = Fraction
x = PowerSeries.variable


def test_coefficient_accessor():
    assert coefficient(PowerSeries([1, 0, 3]), 2) == 3
    assert coefficient(LaurentSeries([1, 0, 5], -1), -1) == 1
    assert coefficient(LaurentSeries([1, 0, 5], -1), -4) == 0
    with pytest.raises(PrecisionError):
        coefficient(PowerSeries([1, 1], 5), 7)


def test_basic_ring_examples():
    assert (PowerSeries([1, 1], 4) * PowerSeries([1, -1], 4)) == PowerSeries([1, 0, -1], 4)
    f = PowerSeries([1, 2, 3])
    assert f + PowerSeries([0], 2) == f
    prod = LaurentSeries([1], -1, 3) * LaurentSeries([1], 1, 5)
    assert prod.lowest_exponent == 0 and prod.coefficient(0) == 1


def test_precision_is_min():
    assert (PowerSeries([1, 1], 3) + PowerSeries([1], 7)).precision == 3
    assert (PowerSeries([1, 1], 3) * PowerSeries([1], 7)).precision == 3


def test_divide_examples():
    q = divide(x(5), x(5))
    assert q.coefficient(0) == 1 and q.lowest_exponent == 0
    geo = divide(PowerSeries([1], 6), PowerSeries([1, -1], 6))
    assert list(geo.coefficients) == [1] * 7
    f, g = x(6), PowerSeries([0, 0, 1, 1], 6)
    q = divide(f, g)
    assert q.lowest_exponent == -1
    assert [q.coefficient(i) for i in range(-1, 3)] == [1, -1, 1, -1]
    # multiply back
    back = q * g
    assert all(back.coefficient(i) == f.coefficient(i) for i in range(back.precision + 1))


def test_divide_by_truncated_zero():
    with pytest.raises(ZeroDivisionError):
        divide(PowerSeries([1]), PowerSeries([0, 0], 1))


def test_derivative_examples():
    assert derivative(PowerSeries([0, 0, 1], 4)) == PowerSeries([0, 2], 3)
    assert derivative(PowerSeries([5], 3)) == PowerSeries([0], 2)
    assert derivative(PowerSeries([0, 2, 1])) == PowerSeries([2, 2])
    assert derivative(PowerSeries([7], 0)).precision == -1


def test_residue_examples():
    assert residue(LaurentSeries([1], -1, 3)) == 1
    assert residue(PowerSeries([4, 5, 6])) == 0
    assert residue(LaurentSeries([1, 3, 7], -2)) == 3


def test_compose_examples():
    sq = PowerSeries([0, 0, 1], 6)
    G = PowerSeries([0, 1, 1], 6)
    assert compose(sq, G) == PowerSeries([0, 0, 1, 2, 1], 6)
    inv = compose(LaurentSeries([1], -1, 5), PowerSeries([0, 2, 1], 6))
    assert inv.coefficient(-1) == F(1, 2) and inv.coefficient(0) == F(-1, 4)
    back = inv * PowerSeries([0, 2, 1], 6)
    assert back.coefficient(0) == 1 and all(back.coefficient(i) == 0 for i in range(1, back.precision + 1))
    const = compose(PowerSeries([1, 1], 3), PowerSeries([0], 4))
    assert const == PowerSeries([1], 4)


def test_compose_errors():
    with pytest.raises(ValueError):
        compose(PowerSeries([1, 1]), PowerSeries([1, 1]))
    with pytest.raises(ValueError):
        compose(LaurentSeries([1], -1, 3), PowerSeries([0, 0, 1], 5))


def test_residue_change_of_variable_examples():
    assert residue_change_of_variable(LaurentSeries([1], -1, 5), PowerSeries([0, 2, 1], 6)) == (1, 1)
    assert residue_change_of_variable(LaurentSeries([1, 3], -2, 4), PowerSeries([0, 1, 0, -1], 6)) == (3, 3)
    for n in (-4, -3, -2, 0, 1, 2):
        F = LaurentSeries([1], n, max(n, 0) + 2)
        assert residue_change_of_variable(F, PowerSeries([0, 3, -1, 2, 5, 1], 8)) == (0, 0)
    with pytest.raises(ValueError):
        residue_change_of_variable(LaurentSeries([1], -1, 2), PowerSeries([0, 0, 1], 5))


def test_revert_examples():
    assert revert(x(5)) == x(5)
    assert revert(PowerSeries([0, 1, 1], 6)) == PowerSeries([0, 1, -1, 2, -5, 14, -42], 6)
    cube = pow_int(PowerSeries([1, 1], 7), 3) - 1
    G = revert(cube, p=2)
    assert pow_int(G + 1, 3) == PowerSeries([1, 1], 7)
    assert all(nu2(c) >= 0 for c in G.coefficients)


def test_revert_errors():
    with pytest.raises(ValueError):
        revert(PowerSeries([1, 1, 0]))
    with pytest.raises(ValueError):
        revert(PowerSeries([0, 0, 1]))
    with pytest.raises(IntegralityError):
        revert(PowerSeries([0, 2, 1]), p=2)
    with pytest.raises(IntegralityError):
        revert(PowerSeries([0, 1, F(1, 2)]), p=2)


def test_qth_root_examples():
    f = PowerSeries([1, 3, F(1, 3), 0, 5], 4)
    assert qth_root(f, 1, 2) == f
    r = qth_root(PowerSeries([1, 1], 5), 3, 2)
    assert r.coefficients[:3] == (1, F(1, 3), F(-1, 9))
    assert pow_int(r, 3) == PowerSeries([1, 1], 5)
    with pytest.raises(ValueError):
        qth_root(pow_int(PowerSeries([1, 1], 5), 2), 2, 2)
    with pytest.raises(ValueError):
        qth_root(PowerSeries([2, 1], 3), 3, 2)
    with pytest.raises(IntegralityError):
        qth_root(PowerSeries([1, F(1, 2)], 3), 3, 2)


def test_rational_power_examples():
    f = PowerSeries([1, 2, 3], 5)
    assert rational_power(f, 0, 1, 2) == PowerSeries([1], 5)
    sq = pow_int(PowerSeries([1, 1], 6), 2)
    with pytest.raises(ValueError):
        rational_power(sq, 1, 2, 2)
    assert rational_power(sq, 1, 2, 3) == PowerSeries([1, 1], 6)
    g = PowerSeries([1, 1], 6)
    assert rational_power(g, -1, 3) * rational_power(g, 1, 3) == PowerSeries([1], 6)


def test_pow_int_examples():
    f = PowerSeries([1, 2, 3], 5)
    assert pow_int(f, 0) == PowerSeries([1], 5)
    assert pow_int(PowerSeries([1, 1], 6), 4) == PowerSeries([1, 4, 6, 4, 1], 6)
    p8 = pow_int(PowerSeries([1, 1, 1], 20), 8)
    odd_exponents = [i for i, c in enumerate(p8.coefficients) if c.numerator % 2]
    assert odd_exponents == [0, 8, 16]


def test_verify_valuation_bound_examples():
    assert verify_valuation_bound(PowerSeries([1, 1], 6), 4) == []
    assert nu2(pow_int(PowerSeries([1, 1], 6), 4).coefficient(2)) == 1
    assert verify_valuation_bound(PowerSeries([1, F(1, 3), 5], 5), 1) == []
    with pytest.raises(IntegralityError):
        verify_valuation_bound(PowerSeries([1, F(1, 2)]), 2)


def test_frobenius_twist():
    f = PowerSeries([1, 2, 3], 6)
    assert frobenius_twist(f, 2, 1) == PowerSeries([1, 0, 4, 0, 9], 6)


@pytest.mark.parametrize("m, n", [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (0, 3)])
def test_frobenius_congruence(m, n):
    f = PowerSeries([3, -1, 2, 5, 1, -2, 7], 6)
    assert frobenius_congruence_violations(f, 2, m, n) == []
    assert frobenius_congruence_violations(f, 3, m, n) == []


def test_json_roundtrip():
    f = PowerSeries([1, F(-3, 2), 0])
    assert to_json(f) == ["1/1", "-3/2", "0/1"]
    assert from_json(json.loads(json.dumps(to_json(f)))) == f
    L = LaurentSeries([F(1, 2), 0, 3], -2, 1)
    assert from_json(to_json(L)) == L


def test_laurent_trimming_does_not_change_accessors():
    L = LaurentSeries([0, 0, 1, 2], -3, 2)
    assert L.lowest_exponent == -1
    assert [L.coefficient(i) for i in range(-5, 3)] == [0, 0, 0, 0, 1, 2, 0, 0]
    assert L == LaurentSeries([1, 2], -1, 2)


# -- properties -----------------------------------------------------------

@given(power_series(4), power_series(4), power_series(4))
def test_ring_laws(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f and f + g == g + f


@given(power_series(5), power_series(5), reversible_series(5))
def test_compose_is_homomorphism(f, h, G):
    assert compose(f * h, G) == compose(f, G) * compose(h, G)
    assert compose(f + h, G) == compose(f, G) + compose(h, G)


@settings(max_examples=60)
@given(reversible_series())
def test_revert_then_compose(F):
    G = revert(F)
    y = PowerSeries.variable(F.precision)
    assert compose(F, G) == y and compose(G, F) == y


@settings(max_examples=60)
@given(st.integers(-4, -1), st.data())
def test_residue_invariance_property(low, data):
    n = -low + data.draw(st.integers(0, 3))
    G = data.draw(reversible_series(n))
    F = LaurentSeries(data.draw(st.lists(small_fractions, min_size=-low + 2, max_size=-low + 2)), low)
    lhs, rhs = residue_change_of_variable(F, G)
    assert lhs == rhs


@settings(max_examples=60)
@given(unit_series(), st.sampled_from([1, 3, 5, 7]))
def test_qth_root_reconstruction_and_integrality(f, q):
    phi = qth_root(f, q, 2)
    assert pow_int(phi, q) == f
    assert all(nu2(c) >= 0 for c in phi.coefficients)


@given(unit_series(), st.sampled_from([3, 5]))
def test_qth_root_uniqueness(psi, q):
    # a series with constant term 1 is recovered from its q-th power
    assert qth_root(pow_int(psi, q), q, 2) == psi


@settings(max_examples=40)
@given(unit_series(5), st.integers(-4, 4), st.sampled_from([1, 3, 5]))
def test_rational_power_orders_agree(f, m, q):
    r = rational_power(f, m, q, 2)
    assert all(nu2(c) >= 0 for c in r.coefficients)
    assert pow_int(r, q) == f ** m


@given(power_series(8, coeffs=st.integers(-6, 6).map(Fraction)), st.integers(1, 64))
def test_valuation_bound_property(f, l):
    assert verify_valuation_bound(f, l) == []
