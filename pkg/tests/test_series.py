from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import count_partitions, fibonacci
from rrseries.errors import (
    ArityMismatch,
    BadLowestTerm,
    NonIntegerExponent,
    NonzeroInnerConstant,
    ZeroConstantTerm,
)
from rrseries.multiseries import MultiSeries, multi_add, multi_mul, multi_substitute
from rrseries.qfunctions import NAMED_PRODUCTS
from rrseries.series import (
    Factor,
    ProductSpec,
    Series,
    compose,
    exact,
    extract_product_exponents,
    invert,
    log,
    exp,
    mul,
    product_from_exponents,
    reversion,
    substitute_power,
)

ORDER = 12
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)
coeff_lists = st.lists(st.integers(-9, 9), min_size=ORDER + 1, max_size=ORDER + 1)


def series(cs, order=ORDER):
    return Series(cs, order)


# -- exactness and truncation ---------------------------------------------


def test_exact_normalises_and_rejects_floats():
    assert exact(Fraction(4, 2)) == 2 and type(exact(Fraction(4, 2))) is int
    assert exact(Fraction(1, 3)) == Fraction(1, 3)
    with pytest.raises(TypeError):
        exact(0.5)


def test_common_prefix_comparison():
    a = Series([1, 2, 3], 2)
    b = Series([1, 2, 3, 99], 3)
    assert a == b
    assert (a + b).order == 2
    assert Series([1, 2], 1).first_mismatch(Series([1, 3], 1)) == 1


def test_getitem_beyond_order_raises():
    with pytest.raises(IndexError):
        Series([1, 1], 1)[2]


# -- examples ---------------------------------------------------------------


def test_add_examples():
    assert Series([1, 1]) + Series([1, -1]) == 2
    a = Series([3, 1, 4], 2)
    assert a + Series([0], 2) == a
    geo = Series([1] * 6, 5)
    assert (geo + (-geo)).is_zero()


def test_mul_examples():
    p = Series([1, -1], 3) * Series([1, 1, 1, 1], 3)
    assert p.order == 3 and p == 1
    assert Series([1, 1]) * Series([1, 1]) == Series([1, 2, 1], 1)
    assert Series([1, 1], 2) ** 2 == Series([1, 2, 1])
    Q = NAMED_PRODUCTS["Q"].expand(10)
    assert Q * invert(Q) == Series([1], 10)


def test_invert_examples():
    assert list(invert(Series([1, -1], 8)).coeffs) == [1] * 9
    assert invert(Series([1], 5)) == 1
    assert list(invert(NAMED_PRODUCTS["Q"].expand(6)).coeffs) == count_partitions(6)
    with pytest.raises(ZeroConstantTerm):
        invert(Series([0, 1], 3))


def test_invert_rational_unit():
    s = invert(Series([2, 1], 4))
    assert s.coeffs == (Fraction(1, 2), Fraction(-1, 4), Fraction(1, 8), Fraction(-1, 16), Fraction(1, 32))


def test_substitute_power_examples():
    a = Series([1, 2, 3], 2)
    assert substitute_power(a, 1) == a
    assert substitute_power(Series([1, -1], 3), 3) == Series([1, 0, 0, -1], 3)
    assert substitute_power(Series([1] * 5, 4), 2) == Series([1, 0, 1, 0, 1], 4)


def test_compose_examples():
    x = Series.x(6)
    a = Series([1, 2, 3, 4, 5, 6, 7], 6)
    assert compose(a, x) == a
    assert compose(Series([1, 1], 6), Series([0, 0, 1], 6)) == Series([1, 0, 1], 6)
    f = compose(invert(Series([1, -1], 10)), Series([0, 1, 1], 10))
    assert list(f.coeffs) == fibonacci(10)
    with pytest.raises(NonzeroInnerConstant):
        compose(a, Series([1, 1], 6))


def test_reversion_examples():
    assert reversion(Series([0, -1], 6)) == Series([0, -1], 6)
    g = reversion(Series([0, 1, 1], 5))
    assert g == Series([0, 1, -1, 2, -5, 14], 5)
    with pytest.raises(BadLowestTerm):
        reversion(Series([0, 0, 1], 5))


def test_extract_product_exponents_examples():
    assert extract_product_exponents(Series([1, -5, 10, -10, 5, -1], 5)) == [5, 0, 0, 0, 0]
    assert extract_product_exponents(Series([1], 6)) == [0] * 6
    with pytest.raises(NonIntegerExponent):
        extract_product_exponents(Series([1, Fraction(1, 2)], 3))


def test_product_spec_negative_exponent():
    spec = ProductSpec([Factor(1, 1, 1, -1)])
    assert list(spec.expand(8).coeffs) == count_partitions(8)


def test_log_exp_inverse():
    a = Series([1, 3, -2, 5, 1, 0, 7], 6)
    assert exp(log(a)) == a


# -- properties -------------------------------------------------------------


@given(coeff_lists, coeff_lists, coeff_lists)
def test_ring_laws(a, b, c):
    a, b, c = series(a), series(b), series(c)
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)


@given(st.lists(rationals, min_size=ORDER, max_size=ORDER), rationals.filter(bool))
def test_invert_law(tail, c0):
    a = Series([c0] + tail, ORDER)
    assert mul(a, invert(a)) == 1


@given(st.lists(st.integers(-4, 4), min_size=9, max_size=9), st.sampled_from([1, -1, 2, Fraction(1, 3)]))
def test_reversion_round_trip(tail, lin):
    f = Series([0, lin] + tail, 10)
    g = reversion(f)
    x = Series.x(10)
    assert compose(f, g) == x
    assert compose(g, f) == x


@given(st.lists(st.integers(-3, 3), min_size=10, max_size=10))
def test_extract_is_left_inverse(exps):
    assert extract_product_exponents(product_from_exponents(exps)) == exps


@given(coeff_lists, st.integers(1, 4), st.integers(1, 4))
def test_substitute_power_composes(cs, j, k):
    a = series(cs)
    assert substitute_power(substitute_power(a, j), k) == substitute_power(a, j * k)


# -- multivariate -----------------------------------------------------------


def ms(terms, arity=2, cap=6):
    return MultiSeries(terms, arity=arity, degree_cap=cap)


def test_multi_mul_example():
    p = ms({(1, 1): 1, (0, 0): 1})
    m = ms({(1, 1): -1, (0, 0): 1})
    assert multi_mul(p, m) == ms({(0, 0): 1, (2, 2): -1})


def test_multi_arity_mismatch():
    with pytest.raises(ArityMismatch):
        multi_mul(ms({(0, 0): 1}), MultiSeries({(0, 0, 0): 1}, arity=3, degree_cap=6))


def test_multi_substitute_geometric():
    # 1/(1-x) with x -> x + y
    f = ms({(i, 0): 1 for i in range(7)})
    s = multi_substitute(f, {0: ms({(1, 0): 1, (0, 1): 1})})
    from math import comb

    assert s == ms({(i, j): comb(i + j, i) for i in range(7) for j in range(7 - i)})


multi_terms = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(-3, 3), max_size=8
)


@given(multi_terms, multi_terms)
def test_multi_commutes_and_is_canonical(a, b):
    x, y = ms(a), ms(b)
    assert multi_mul(x, y) == multi_mul(y, x)
    assert multi_add(x, y) == multi_add(y, x)
    assert all(c != 0 for c in multi_mul(x, y).terms.values())
    assert all(c != 0 for c in multi_add(x, -x).terms.values())
    assert multi_add(x, -x).terms == {}
