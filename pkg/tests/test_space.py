from fractions import Fraction

from hypothesis import given, settings, strategies as st
import pytest

from dendrolab.space import (O, Cylinder, Point, PointSyntaxError, Stream, U, budget, classify,
                             distance, distance_bounds, distance_to_o, format_point, height_threshold,
                             hub, parse_point, truncate)


def test_budget_examples():
    assert budget(()) == 1
    assert budget((0,)) == Fraction(1, 4)
    assert budget((3, 1)) == Fraction(1, 256)


def test_distance_examples():
    assert distance(O, hub(0)) == Fraction(1, 4)
    x = parse_point("0.0:cycle(1)")
    assert distance(x, x) == 0


def test_zeros_tail_closed_form():
    # budgets along [0,0,0,...]: 4^-1 + 4^-2 + ... = 1/3
    lo, hi = distance_bounds(O, parse_point("0:zeros"), 200)
    assert lo <= Fraction(1, 3) <= hi
    assert hi - lo <= Fraction(1, 2 ** 200)


symbols = st.lists(st.integers(0, 6), min_size=1, max_size=6)
tails = st.one_of(st.none(), st.just(Stream("zeros")),
                  st.lists(st.integers(0, 3), min_size=1, max_size=3).map(lambda c: Stream("cycle", tuple(c))),
                  st.integers(0, 2 ** 64 - 1).map(lambda u: Stream("seed", (u,))))
points = st.one_of(st.just(O), st.builds(lambda s, t: Point(tuple(s), t), symbols, tails))


@settings(max_examples=300, deadline=None)
@given(points)
def test_distance_to_o_below_branch_bound(p):
    if p.is_origin:
        assert distance_to_o(p) == 0
    else:
        assert distance_bounds(O, p, 80)[1] <= Fraction(1, 2 ** (p.prefix[0] + 1))


@settings(max_examples=300, deadline=None)
@given(points, points, points)
def test_metric_axioms(x, y, z):
    eps = Fraction(1, 2 ** 60)
    dxy, dyx = distance(x, y), distance(y, x)
    assert dxy == dyx
    assert (dxy == 0) == (x == y) or dxy < eps
    assert distance(x, z) <= dxy + distance(y, z) + 3 * eps


@settings(max_examples=200, deadline=None)
@given(points)
def test_literal_round_trip(p):
    assert parse_point(format_point(p)) == p


def test_parse_examples():
    assert parse_point("o") is O
    assert parse_point("0.4") == Point((0, 4))
    x = parse_point("0.0:cycle(1)")
    assert [x.symbol(k) for k in range(5)] == [0, 0, 1, 1, 1]
    assert parse_point("0.0:zeros@3").tail.pos == 3


def test_parse_errors_carry_position():
    with pytest.raises(PointSyntaxError) as e:
        parse_point("0.x")
    assert e.value.pos == 2
    for bad in ("", "0:nope", "0:cycle()", "0:zeros(1)", ".1"):
        with pytest.raises(PointSyntaxError):
            parse_point(bad)


def test_huge_symbols_round_trip():
    p = Point((10 ** 5000, 3))
    assert parse_point(format_point(p)) == p


def test_classify_examples():
    m = classify(O)
    assert m.is_o and m.in_U is None and all(m.in_E(j) for j in range(5))
    m = classify(parse_point("5.2"))
    assert (m.copy, m.in_U, m.is_hub) == (5, 5, True)
    m = classify(parse_point("0.0:zeros"))
    assert (m.copy, m.is_end) == (0, True)
    assert parse_point("0.0:zeros") in U(0) and parse_point("0.0:zeros") in Cylinder((0, 0, 0))


def test_truncate_counts():
    assert len(truncate(1, 6)) == 7
    assert len(truncate(0, 9)) == 1
    assert len(truncate(2, 3)) == 13
    assert len(truncate(4, 6)) == 1 + 6 + 36 + 216 + 1296


def test_branch_diameter_shrinks():
    # every hub of C_[j] on a truncation lies within 2^-(j+1) of o
    for node in truncate(3, 5)[1:]:
        assert distance_to_o(Point(node.prefix)) <= Fraction(1, 2 ** (node.prefix[0] + 1))


def test_height_threshold():
    assert height_threshold(Fraction(1, 32)) == 4
    assert height_threshold(Fraction(1, 2)) == 0
    assert height_threshold(Fraction(1, 33)) == 5
    with pytest.raises(ValueError):
        height_threshold(Fraction(0))


def test_seed_stream_is_deterministic():
    a = Stream("seed", (7,))
    assert [a.symbol(k) for k in range(20)] == [Stream("seed", (7,)).symbol(k) for k in range(20)]
    assert a.advance(5).symbol(0) == a.symbol(5)
    assert {a.symbol(k) for k in range(200)} == {0, 1, 2, 3}
