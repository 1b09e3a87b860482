from fractions import Fraction

from hypothesis import assume, given
from hypothesis import strategies as st
import pytest

from arcsine.powerseries import (
    TruncSeries,
    first_mismatch,
    ts_add,
    ts_coeff,
    ts_constant,
    ts_derive,
    ts_from_coeffs,
    ts_integrate,
    ts_inv,
    ts_mul,
    ts_scale,
    ts_scale_arg,
    ts_shift,
    ts_sqrt,
    ts_sub,
)
from arcsine.signals import NotDivisibleError, SeriesError

coefficients = st.fractions(min_value=-8, max_value=8, max_denominator=9)


def series(order: int):
    return st.lists(coefficients, min_size=order, max_size=order).map(ts_from_coeffs)


orders = st.integers(min_value=1, max_value=8)


@st.composite
def series_triples(draw):
    order = draw(orders)
    return draw(series(order)), draw(series(order)), draw(series(order))


@st.composite
def unit_series(draw):
    s = draw(series(draw(orders)))
    return ts_from_coeffs((Fraction(1),) + s.coeffs[1:])


@given(series_triples())
def test_ring_laws(triple):
    a, b, c = triple
    zero = ts_constant(0, a.order)
    one = ts_constant(1, a.order)

    assert ts_add(a, b) == ts_add(b, a)
    assert ts_add(ts_add(a, b), c) == ts_add(a, ts_add(b, c))
    assert ts_add(a, zero) == a
    assert ts_sub(a, a) == zero
    assert ts_mul(a, b) == ts_mul(b, a)
    assert ts_mul(ts_mul(a, b), c) == ts_mul(a, ts_mul(b, c))
    assert ts_mul(a, ts_add(b, c)) == ts_add(ts_mul(a, b), ts_mul(a, c))
    assert ts_mul(a, one) == a


@given(series_triples())
def test_operators_match_functions(triple):
    a, b, _ = triple

    assert a + b == ts_add(a, b)
    assert a - b == ts_sub(a, b)
    assert a * b == ts_mul(a, b)
    assert 3 * a == ts_scale(a, 3) == a * 3
    assert -a == ts_scale(a, -1)


@given(series(6), series(3))
def test_binary_operations_take_smaller_order(a, b):
    assert ts_add(a, b).order == 3
    assert ts_mul(a, b).order == 3
    assert ts_mul(a, b) == ts_mul(a.truncate(3), b)


@given(series(8))
def test_inverse_round_trip(s):
    assume(s[0] != 0)

    assert ts_mul(s, ts_inv(s)) == ts_constant(1, s.order)
    assert ts_inv(ts_inv(s)) == s


@given(unit_series())
def test_sqrt_round_trip(s):
    root = ts_sqrt(s)

    assert root[0] == 1
    assert ts_mul(root, root) == s
    assert ts_sqrt(ts_mul(s, s)) == s


@given(series_triples())
def test_leibniz_rule(triple):
    a, b, _ = triple
    assume(a.order >= 2)

    lhs = ts_derive(ts_mul(a, b))
    rhs = ts_add(ts_mul(ts_derive(a), b), ts_mul(a, ts_derive(b)))
    assert lhs == rhs


@given(series(7))
def test_derive_integrate_round_trip(s):
    assert ts_derive(ts_integrate(s)) == s
    assert ts_integrate(ts_derive(s)) == ts_from_coeffs((0,) + s.coeffs[1:])


@given(series(6), st.integers(min_value=0, max_value=5))
def test_shift_round_trip(s, k):
    shifted = ts_shift(s, k)

    assert shifted.order == s.order + k
    assert ts_shift(shifted, -k) == s


@given(series(6), coefficients)
def test_scale_arg(s, c):
    scaled = ts_scale_arg(s, c)

    assert all(scaled[j] == s[j] * c ** j for j in range(s.order))
    if c != 0:
        assert ts_scale_arg(scaled, 1 / c) == s


def test_coefficient_access_beyond_order_is_an_error():
    s = ts_from_coeffs([1, 2, 3])

    assert ts_coeff(s, 2) == 3
    with pytest.raises(SeriesError):
        ts_coeff(s, 3)
    with pytest.raises(SeriesError):
        s[-1]


def test_empty_series_is_rejected():
    with pytest.raises(SeriesError):
        ts_from_coeffs([])


def test_negative_shift_checks_divisibility():
    s = ts_from_coeffs([0, 0, 5, 7])

    assert ts_shift(s, -2) == ts_from_coeffs([5, 7])
    with pytest.raises(NotDivisibleError):
        ts_shift(s, -3)
    with pytest.raises(SeriesError):
        ts_shift(s, -4)


def test_inverse_and_sqrt_preconditions():
    with pytest.raises(SeriesError):
        ts_inv(ts_from_coeffs([0, 1]))
    with pytest.raises(SeriesError):
        ts_sqrt(ts_from_coeffs([4, 1]))
    with pytest.raises(SeriesError):
        ts_derive(ts_constant(3, 1))


@pytest.mark.parametrize("order", [0, -3])
def test_constant_needs_positive_order(order):
    with pytest.raises(SeriesError):
        ts_constant(1, order)


def test_geometric_series_inverse():
    one_minus_x = ts_from_coeffs([1, -1, 0, 0, 0])

    assert ts_inv(one_minus_x) == ts_from_coeffs([1, 1, 1, 1, 1])


def test_sqrt_of_one_plus_x():
    root = ts_sqrt(ts_from_coeffs([1, 1, 0, 0]))

    assert root == ts_from_coeffs([1, Fraction(1, 2), Fraction(-1, 8), Fraction(1, 16)])


def test_first_mismatch():
    a = ts_from_coeffs([1, 2, 3, 4])
    b = ts_from_coeffs([1, 2, 5])

    assert first_mismatch(a, b) == (2, Fraction(3), Fraction(5))
    assert first_mismatch(a, a.truncate(2)) is None


def test_series_text():
    s = TruncSeries((Fraction(1), Fraction(0), Fraction(1, 2)))

    assert str(s) == "1 + 1/2*x^2 (mod x^3)"
    assert str(ts_constant(0, 2)) == "0 (mod x^2)"
