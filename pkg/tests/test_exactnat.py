from hypothesis import given, settings, strategies as st
import pytest

from dendrolab.exactnat import (ExactNat, MaterializationError, decimal_digits, exactnat_cmp,
                                floor_log2_bounds)

CAP = 3  # tiny cap: almost everything stays symbolic


def tree(depth):
    """(ExactNat, exact int) pairs built from random expression trees."""
    leaf = st.integers(0, 2000).map(lambda n: (ExactNat.lit(n, cap=CAP), n))
    if depth == 0:
        return leaf

    sub = tree(depth - 1)

    def pow2(p):
        x, v = p
        v = v % 700
        return ExactNat.pow2(v, cap=CAP), 1 << v

    return st.one_of(
        leaf,
        sub.map(pow2),
        st.tuples(sub, sub).map(lambda t: (ExactNat.sum(t[0][0], t[1][0], CAP), t[0][1] + t[1][1])),
        st.tuples(sub, sub).map(lambda t: (ExactNat.prod(t[0][0], t[1][0], CAP), t[0][1] * t[1][1])),
    )


@settings(max_examples=400, deadline=None)
@given(tree(3), tree(3))
def test_compare_matches_int_oracle(a, b):
    (x, u), (y, v) = a, b
    assert exactnat_cmp(x, y) == (u > v) - (u < v)


@settings(max_examples=200, deadline=None)
@given(tree(3))
def test_log2_bounds_enclose(a):
    x, v = a
    if v == 0:
        with pytest.raises(ValueError):
            floor_log2_bounds(x)
        return
    lo, hi = floor_log2_bounds(x)
    assert lo <= v.bit_length() - 1 <= hi


def test_equal_forms_of_one_power():
    a = ExactNat.prod(2, ExactNat.pow2(100, cap=CAP), CAP)
    b = ExactNat.pow2(101, cap=CAP)
    c = ExactNat.sum(ExactNat.pow2(100, cap=CAP), ExactNat.pow2(100, cap=CAP), CAP)
    assert a == b == c
    assert a + 1 > b


def test_literal_fold_and_value():
    x = ExactNat.sum(ExactNat.pow2(10), 5)
    assert x.is_literal and x.value == 1029
    big = ExactNat.pow2(10_000, cap=100)
    assert not big.is_literal
    with pytest.raises(MaterializationError):
        big.value


def test_symbolic_tower_order():
    m = ExactNat.lit(4194452, "M2", cap=10)
    n3 = ExactNat.prod(ExactNat.sum(ExactNat.pow2(m, cap=10), 1, 10), m, 10)
    assert exactnat_cmp(n3, ExactNat.pow2(m, cap=10)) > 0
    assert exactnat_cmp(n3, ExactNat.pow2(m + 23, cap=10)) < 0


def test_expr_uses_labels():
    m = ExactNat.pow2(5000, cap=10).named("M3")
    n = ExactNat.prod(ExactNat.sum(ExactNat.pow2(m, cap=10), 1, 10), m, 10)
    assert n.expr() == "(2^M3+1)*M3"


def test_decimal_digits():
    for n in (0, 1, 9, 10, 99, 100, 10**50 - 1, 10**50):
        assert decimal_digits(n) == len(str(n))
