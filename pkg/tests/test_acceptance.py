"""The ten acceptance criteria, each timed against its budget.

Every criterion prints one PASS/FAIL line; conftest repeats them in the
terminal summary so they show up without -s.
"""

import functools
import json
import math
import os
import time
from fractions import Fraction

from dendrolab import probe
from dendrolab.cli import main
from dendrolab.lattice import VisitLattice
from dendrolab.mapcore import (DendriteMap, fixed_points, leap_oracle, relative_returns, sample_starts,
                               verify_admissibility, verify_containment, verify_disjoint_window,
                               verify_fixation)
from dendrolab.scales import build_scale_table
from dendrolab.space import O, distance_bounds, parse_point

from test_scales import recurrence

RESULTS = {}


def criterion(number, title, budget):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            t0 = time.perf_counter()
            ok = False
            try:
                fn(*args, **kwargs)
                elapsed = time.perf_counter() - t0
                assert elapsed < budget, "took %.2fs, budget %ss" % (elapsed, budget)
                ok = True
            finally:
                elapsed = time.perf_counter() - t0
                line = "criterion %2d %-4s %-28s %7.2fs (budget %ss)" % (
                    number, "PASS" if ok else "FAIL", title, elapsed, budget)
                RESULTS[number] = line
                print(line)
        return wrapper
    return deco


@criterion(1, "scale-table exactness", 1)
def test_c01_scale_table():
    t = build_scale_table(2)
    want = [(3, 4, 16, 4, 16), (1048592, 1048609, 4194452, 4, 4194452)]
    assert recurrence(2) == want
    assert [(r.N.value, r.c.value, r.M.value, r.L, r.D.value) for r in t.rows()[1:]] == want


@criterion(2, "admissible rank gaps", 10)
def test_c02_admissibility():
    table = build_scale_table(3, digit_cap=1000)   # scale 3 symbolic
    assert not table.row(3).materialized
    rep = verify_admissibility(VisitLattice(table), max_rank=24, pairs=10_000, seed=2024)
    assert rep.passed, rep.counterexample
    assert rep.checked == 300 + 10_000
    assert int(rep.details["witness_scales"]["3"]) > 0


@criterion(3, "window reproduction K=1", 10)
def test_c03_window():
    fmap = DendriteMap()
    starts = sample_starts(100, 7)
    rep = verify_disjoint_window(1, starts, 1_100_000, fmap)
    assert rep.passed, rep.counterexample
    gaps = set()
    for p in starts:
        gaps.update(relative_returns(fmap.visit_times(p, 1_100_000)))
    assert 16 in gaps and 17 not in gaps        # gap-1 = 15 occurs, gap-1 = 16 never
    assert not any(17 <= g <= 1048592 for g in gaps)


@criterion(4, "containment", 30)
def test_c04_containment():
    fmap = DendriteMap()
    starts = sample_starts(1000, 4, "E0")
    bad = [r.counterexample for r in (verify_containment(p, 1_100_000, fmap) for p in starts) if not r.passed]
    assert bad == []


@criterion(5, "return density", 1)
def test_c05_density():
    fmap = DendriteMap()
    M1, N2 = fmap.table.row(1).M.value, fmap.table.row(2).N.value
    r = probe.density_profile(parse_point("0.0:zeros"), [M1, N2], fmap)
    assert r.counts[1] == 5
    assert r.ratios[1] <= Fraction(5, 10 ** 6)
    assert r.running_min[1] < r.running_min[0]


@criterion(6, "measure concentration", 60)
def test_c06_measure():
    fmap = DendriteMap()
    for x in sample_starts(10, 6):
        m = probe.birkhoff(x, "distance_to_o", 2 * 10 ** 6, fmap=fmap)
        assert m.value + m.error_bound <= Fraction(1, 1000)
        assert probe.near_o_density(x, Fraction(1, 32), 2 * 10 ** 6, fmap) >= 1 - Fraction(1, 10 ** 4)


@criterion(7, "entropy indicator", 120)
def test_c07_entropy():
    fmap = DendriteMap()
    sample = probe.standard_sample()
    ns = [64, 256, 1024, 8192]
    rep = probe.word_complexity(sample, [16] + ns, 3, 1 << 17, fmap)
    h = [math.log(w) / n for n, w in zip(ns, rep.counts[1:])]
    assert all(a >= b for a, b in zip(h, h[1:]))
    assert h[-1] <= 0.01
    naive = probe.word_complexity_naive(sample, [16], 3, 1 << 17, fmap)
    assert naive.counts[0] == rep.counts[0]


@criterion(8, "chaos-pair diagnostics", 60)
def test_c08_pair():
    fmap = DendriteMap()
    x, y = parse_point("0.0:zeros"), parse_point("0.0:cycle(1)")
    delta = Fraction(1, 16)
    r = probe.pair_report(x, y, Fraction(1, 32), delta, 2 * 10 ** 6, fmap)
    assert len(r.separation_events) >= 2
    tx, ty = fmap.trace(x, 2 * 10 ** 6), fmap.trace(y, 2 * 10 ** 6)
    for n in r.separation_events:
        assert distance_bounds(tx.point_at(n), ty.point_at(n), 128)[0] > delta
    assert r.joint_near_fraction >= 1 - Fraction(1, 10 ** 3)


@criterion(9, "structural", 60)
def test_c09_structural():
    fmap = DendriteMap()
    assert fixed_points(4, 4, fmap) == [O]
    assert verify_fixation(3, 6, fmap).passed
    for p in sample_starts(100, 9):
        assert leap_oracle(p, 10 ** 5, fmap).passed


SUITE = [
    ["zset"],
    ["verify", "window", "--starts", "20"],
    ["verify", "containment", "--starts", "50"],
    ["stats", "density", "--checkpoints", "M1,N2"],
    ["stats", "pair"],
    ["stats", "complexity", "--oracle", "--n", "16,64,256"],
    ["stats", "hitting"],
    ["stats", "trace"],
    ["render", "--depth", "4", "--branches", "6", "--overlay-orbit", "0.0:zeros"],
]


@criterion(10, "determinism", 120)
def test_c10_determinism(tmp_path, capsys):
    def once(d):
        cfg = tmp_path / ("cfg-%s.json" % d)
        cfg.write_text(json.dumps({"seed": "11", "out": str(tmp_path / d)}))
        stdout = []
        for argv in SUITE:
            assert main(["--config", str(cfg)] + argv) == 0
            stdout.append(capsys.readouterr().out.replace(str(tmp_path / d), "<run>"))
        files = {f: (tmp_path / d / f).read_bytes() for f in sorted(os.listdir(tmp_path / d))}
        return files, stdout

    a, b = once("a"), once("b")
    assert len(a[0]) >= 15
    assert a == b
