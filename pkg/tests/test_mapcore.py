import random

from hypothesis import given, settings, strategies as st
import pytest

from dendrolab.mapcore import (DendriteMap, OrbitState, fixed_points, leap_oracle, sample_starts,
                               verify_admissibility, verify_claim1, verify_containment,
                               verify_disjoint_window, verify_fixation)
from dendrolab.space import O, Point, Stream, hub, parse_point
from dendrolab.scales import ZSet


class PlusOne(DendriteMap):
    """Mutant: every jump lands one level too high."""

    def jump(self, r, s):
        h, r2 = super().jump(r, s)
        return h + 1, r2


def addr(p, k=10):
    return [p.symbol(i) for i in range(k)]


def val(r):
    return [0, 4, 8, 12, 16][r]


def test_step_examples(fmap):
    assert fmap.step(O) == O
    assert fmap.step(hub(5, 9, 2)) == hub(4, 9, 2)
    assert addr(fmap.step(parse_point("0.0.0:zeros"))) == [3, 1] + [0] * 8
    assert fmap.step(parse_point("0.0:zeros")) == Point((3, 1), Stream("zeros", (), 1))
    assert addr(fmap.step(parse_point("0.4.0:zeros"))) == [1048592, 5] + [0] * 8
    assert fmap.step(parse_point("0.0.2:cycle(1)")) == Point((val(3) - 1, 3), Stream("cycle", (1,)))
    assert fmap.step(hub(0, 7)) == O
    assert fmap.step(hub(0)) == O


def test_orbit_examples(fmap):
    assert [s.height for s in fmap.orbit(parse_point("0.0:zeros"), 4)] == [0, 3, 2, 1, 0]
    assert [s.point for s in fmap.orbit(hub(3), 4)] == [hub(3), hub(2), hub(1), hub(0), O]
    assert all(s.at_origin for s in fmap.orbit(O, 5))


def test_leap_examples(fmap):
    def leap(r, s):
        p = Point((0, r), Stream("cycle", (s,)))
        nxt = fmap.leap(OrbitState(0, p))
        return nxt.time, nxt.rank

    assert leap(0, 0) == (4, 1)
    assert leap(4, 0) == (1048593, 5)
    assert leap(0, 4) == (1048609, 5)


def test_visit_time_examples(fmap):
    x = parse_point("0.0:zeros")
    assert fmap.visit_times(x, 10 ** 6) == [0, 4, 8, 12, 16]
    assert fmap.visit_times(x, 1048610) == [0, 4, 8, 12, 16, 1048609]
    assert fmap.visit_times(hub(0, 0), 10 ** 9) == [0]
    with pytest.raises(ValueError):
        fmap.visit_times(hub(2, 0), 10)


def test_claim1():
    assert verify_claim1(3, 6).passed
    assert verify_claim1(1, 2).passed


def test_claim1_catches_symbol_dropping_mutant(fmap):
    def mutant(p):
        if p.is_origin or p.prefix[0] == 0:
            return fmap.step(p)
        return Point((p.prefix[0] - 1,) + p.prefix[2:], p.tail)

    rep = verify_claim1(3, 4, mutant)
    assert not rep.passed


def test_containment_examples(fmap):
    rep = verify_containment(parse_point("0.0:zeros"), 10 ** 4, samples=20)
    assert rep.passed
    # at n=6 the orbit sits at height 2 and 6 + 2 - 1 = 7 lies in [3, 16]
    tr = fmap.trace(parse_point("0.0:zeros"), 10)
    assert tr.height_at(6) == 2 and ZSet(fmap.table).contains(7) == (True, 1)
    assert verify_containment(O, 10 ** 6).passed


def test_containment_catches_plus_one_mutant(table):
    rep = verify_containment(parse_point("0.0:zeros"), 10 ** 4, PlusOne(table))
    assert not rep.passed
    assert rep.counterexample == {"start": "0.0:zeros", "n": "16", "j": "4", "n+j-1": "19"}


def test_containment_random_e0_starts():
    for p in sample_starts(200, 5, "E0"):
        assert verify_containment(p, 1_100_000).passed


def test_window_k1():
    x = parse_point("0.0:zeros")
    rep = verify_disjoint_window(1, [x] + sample_starts(30, 7), 1_100_000)
    assert rep.passed
    assert rep.details["largest_below"] == "16"
    assert rep.details["smallest_above"] == "1048593"


def test_window_needs_long_horizon():
    with pytest.raises(ValueError):
        verify_disjoint_window(1, [parse_point("0.0:zeros")], 1000)


def test_leap_matches_stepping():
    for p in sample_starts(10, 3):
        assert leap_oracle(p, 20_000).passed


def test_fixed_points():
    assert fixed_points(3, 6) == [O]
    assert fixed_points(1, 2) == [O]


def test_fixation_examples(fmap):
    for p, t in ((hub(0, 7), 1), (hub(5), 6), (hub(0, 0, 0), 5), (O, 0)):
        assert fmap.fixation_time(p) == t == fmap.predicted_fixation_time(p)
    assert verify_fixation(3, 5).passed
    with pytest.raises(ValueError):
        fmap.fixation_time(parse_point("0.0:zeros"))


def test_admissibility_verifier(symbolic_table):
    from dendrolab.lattice import VisitLattice
    rep = verify_admissibility(VisitLattice(symbolic_table), 24, 500, seed=2)
    assert rep.passed
    assert set(rep.details["witness_scales"]) == {"1", "2", "3"}


prefixes = st.lists(st.integers(0, 30), min_size=1, max_size=5)


@settings(max_examples=300, deadline=None)
@given(prefixes, st.one_of(st.none(), st.integers(0, 3)))
def test_step_lowers_copy_index(prefix, cyc):
    from dendrolab.mapcore import default_map
    fmap = default_map()
    p = Point(tuple(prefix), None if cyc is None else Stream("cycle", (cyc,)))
    q = fmap.step(p)
    assert q == fmap.step(p)  # deterministic
    if prefix[0] >= 1:
        assert q.prefix[0] == prefix[0] - 1 and q.prefix[1:] == p.prefix[1:]
    elif q != O:
        # a jump: height in Z, the first height being N_1 = 3 at least
        assert q.prefix[0] >= 3 and fmap.zset.contains(q.prefix[0])[0]


def test_random_jump_heights_in_z(fmap):
    rng = random.Random(0)
    for _ in range(500):
        r = rng.randrange(25)
        s = rng.randrange(4)
        h, _ = fmap.jump(r, s)
        assert h >= 3 and fmap.zset.contains(h)[0]
