import random

from hypothesis import given, settings, strategies as st
import pytest

from dendrolab.lattice import VisitLattice
from dendrolab.mapcore import default_map
from dendrolab.scales import ZSet

from test_scales import recurrence

ROWS = recurrence(2)
C = [c for _, c, _, _, _ in ROWS]
INTERVALS = [(N, M) for N, _, M, _, _ in ROWS]


def brute_val(r):
    """Independent mixed-radix evaluation for ranks below 25 (two levels, radix 5)."""
    a1, a2 = r % 5, r // 5
    assert a2 < 5
    return a1 * C[0] + a2 * C[1]


def in_z(m):
    return any(N <= m <= M for N, M in INTERVALS)


@pytest.fixture(scope="module")
def lat(table):
    return VisitLattice(table)


def test_digit_examples(lat):
    assert lat.digits(0) == ()
    assert lat.digits(4) == (4,)
    assert lat.digits(7) == (2, 1)
    assert lat.rank((2, 1)) == 7


def test_val_examples(lat):
    assert [lat.val(r) for r in (0, 4, 5, 6)] == [0, 16, 1048609, 1048613]


def test_gap_examples(lat):
    assert lat.gap(0, 1) == 4
    assert lat.gap(4, 5) == 1048593
    assert lat.gap(0, 5) == 1048609
    with pytest.raises(ValueError):
        lat.gap(3, 3)


def test_admissible_examples(lat):
    assert lat.admissible(0, 1) == 1
    assert lat.admissible(4, 5) == 2
    assert lat.admissible(0, 24) == 2
    assert lat.gap(0, 24) - 1 == 4194451   # M_2 - 1: the upper boundary


def test_ranks_below(lat):
    assert lat.ranks_below(16) == 5
    assert lat.ranks_below(0) == 1
    assert lat.ranks_below(1048592) == 5
    assert lat.ranks_below(1048609) == 6


def test_val_matches_brute_force(lat):
    assert [lat.val(r) for r in range(25)] == [brute_val(r) for r in range(25)]


def test_every_pair_below_25_lands_in_z(lat):
    z = ZSet(lat.table)
    for r2 in range(25):
        for r in range(r2):
            g = brute_val(r2) - brute_val(r) - 1
            assert in_z(g)
            K = lat.admissible(r, r2)
            assert z.contains(g) == (True, K)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 5 ** 4 - 2), st.integers(1, 50))
def test_val_strictly_increasing(r, step):
    lat = default_map().lattice
    assert lat.val_exact(r) < lat.val_exact(r + step)


def test_symbolic_and_literal_admissibility_agree(table, symbolic_table):
    lit, sym = VisitLattice(table), VisitLattice(symbolic_table)
    rng = random.Random(11)
    for _ in range(300):
        r2 = rng.randrange(25, 125)
        r = rng.randrange(r2)
        assert lit.admissible(r, r2) == sym.admissible(r, r2)
    assert not symbolic_table.row(3).materialized


def test_digit_beyond_cap_rejected(lat):
    with pytest.raises(ValueError):
        lat.rank((5,))
