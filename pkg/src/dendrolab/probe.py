"""Orbit statistics: return densities, Birkhoff averages, near-o occupation,
itinerary complexity, pair diagnostics and hitting-set profiles.

All ratios are exact Fractions.  Quantities involving the metric on end points
are computed to a stated precision and carry an error bound.
"""

from __future__ import annotations

import bisect
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .mapcore import DendriteMap, Trace, default_map
from .space import (O, Cylinder, Point, distance_bounds, format_point, height_threshold,
                    tail_factor)

Interval = Tuple[int, int]   # inclusive


def _map(fmap):
    return fmap or default_map()


def _decide_le(x: Point, y: Point, bound: Fraction, precision: int = 64) -> bool:
    """distance(x, y) <= bound, refining precision until the enclosure decides."""
    while True:
        lo, hi = distance_bounds(x, y, precision)
        if hi <= bound:
            return True
        if lo > bound:
            return False
        if precision >= 4096:
            return lo <= bound
        precision *= 4


# return density ------------------------------------------------------------------

@dataclass
class DensityReport:
    start: str
    checkpoints: List[int]
    counts: List[int]
    ratios: List[Fraction]
    running_min: List[Fraction]


def density_profile(x: Point, checkpoints: Sequence[int], fmap: Optional[DendriteMap] = None) -> DensityReport:
    """|N(x, U_0) & {0..n-1}| / n at each checkpoint n."""
    fmap = _map(fmap)
    cps = [int(c) for c in checkpoints]
    if any(c < 1 for c in cps):
        raise ValueError("checkpoints must be positive")
    visits = fmap.visit_times(x, max(cps))
    counts = [bisect.bisect_left(visits, n) for n in cps]
    ratios = [Fraction(c, n) for c, n in zip(counts, cps)]
    running, cur = [], None
    for q in ratios:
        cur = q if cur is None else min(cur, q)
        running.append(cur)
    return DensityReport(format_point(x), cps, counts, ratios, running)


# Birkhoff averages ---------------------------------------------------------------

@dataclass
class EmpiricalMeasure:
    observable: str
    horizon: int
    value: Fraction
    reference: Fraction
    error_bound: Fraction = Fraction(0)
    shift_bound: Optional[Fraction] = None


def _segments(tr: Trace, horizon: int):
    """(excursion, first, last) clipped to times 0..horizon-1."""
    for e in tr.excursions:
        first, last = e.start, min(e.visit, horizon - 1)
        if first <= last:
            yield e, first, last


def _origin_count(tr: Trace, horizon: int) -> int:
    if tr.origin_from is None or tr.origin_from >= horizon:
        return 0
    return horizon - tr.origin_from


_EXACT_HEIGHT = 4096


def _pow2_neg(k: int) -> Fraction:
    return Fraction(1, 1 << k) if k <= _EXACT_HEIGHT else Fraction(0)


def birkhoff(x: Point, observable: str, horizon: int, j: Optional[int] = None,
             fmap: Optional[DendriteMap] = None, precision: int = 64) -> EmpiricalMeasure:
    """Time average over n in [0, horizon) of distance_to_o, indicator_U0 or indicator_Uj."""
    fmap = _map(fmap)
    if horizon < 1:
        raise ValueError("horizon must be positive")
    tr = fmap.trace(x, horizon - 1)
    if observable == "indicator_U0":
        j = 0
    if observable in ("indicator_U0", "indicator_Uj"):
        if j is None or j < 0:
            raise ValueError("indicator_Uj needs j >= 0")
        hits = sum(1 for e, first, last in _segments(tr, horizon)
                   if e.top >= j and first <= e.visit - j <= last)
        value = Fraction(hits, horizon)
        shift = None
        if j > 0:
            # U_j lies inside the j-th preimage of U_0
            later = fmap.trace(x, horizon + j - 1)
            u0 = sum(1 for v in later.visits() if v < horizon + j)
            shift = Fraction(u0, horizon)
        return EmpiricalMeasure("indicator_U%d" % j if observable == "indicator_Uj" else observable,
                                horizon, value, Fraction(0), Fraction(0), shift)
    if observable != "distance_to_o":
        raise ValueError("unknown observable %r" % observable)
    total = Fraction(0)
    err = Fraction(0)
    for e, first, last in _segments(tr, horizon):
        hi_h = e.top - (first - e.start)
        lo_h = e.top - (last - e.start)
        if lo_h + 1 > _EXACT_HEIGHT:
            err += _pow2_neg(min(lo_h + 1, _EXACT_HEIGHT)) * 2
            continue
        s = tail_factor(e.point, precision)
        # sum over heights lo_h..hi_h of 2**-(h+2) * S
        total += s * (_pow2_neg(lo_h + 1) - _pow2_neg(hi_h + 2))
        err += Fraction(1, 1 << precision) * 2 + (Fraction(1, 1 << _EXACT_HEIGHT) if hi_h + 2 > _EXACT_HEIGHT else 0)
    # report on the 2**-precision grid; the rounding joins the error bound
    grid = 1 << precision
    exact = total / horizon
    value = Fraction(math.floor(exact * grid), grid)
    bound = Fraction(math.ceil((err / horizon + exact - value) * grid), grid)
    return EmpiricalMeasure("distance_to_o", horizon, value, Fraction(0), bound)


# near-o occupation -------------------------------------------------------------------

def _near_count(tr: Trace, eps: Fraction, horizon: int) -> Tuple[int, List[int]]:
    """Count of n < horizon with distance(f^n x, o) <= eps, and the times that are not."""
    j0 = height_threshold(eps)
    near = _origin_count(tr, horizon)
    far = []
    for e, first, last in _segments(tr, horizon):
        hi_h = e.top - (first - e.start)
        lo_h = e.top - (last - e.start)
        if hi_h >= j0:
            near += hi_h - max(j0, lo_h) + 1
        for h in range(lo_h, min(hi_h, j0 - 1) + 1):
            n = e.start + (e.top - h)
            if Fraction(1, 1 << (h + 2)) <= eps and _decide_le(e.point.with_height(h), O, eps):
                near += 1
            else:
                far.append(n)
    return near, sorted(far)


def near_o_density(x: Point, eps: Fraction, horizon: int, fmap: Optional[DendriteMap] = None) -> Fraction:
    """Fraction of n < horizon with f^n(x) within eps of o."""
    fmap = _map(fmap)
    tr = fmap.trace(x, horizon - 1)
    near, _ = _near_count(tr, Fraction(eps), horizon)
    return Fraction(near, horizon)


# pairs -------------------------------------------------------------------------------

@dataclass
class PairReport:
    x: str
    y: str
    eps: Fraction
    delta: Fraction
    horizon: int
    joint_near_o: int            # both within eps of o
    close_count: int             # distance(f^n x, f^n y) <= eps
    longest_close_run: int
    separation_events: List[int]  # distance > delta

    @property
    def joint_near_fraction(self) -> Fraction:
        return Fraction(self.joint_near_o, self.horizon)

    @property
    def close_fraction(self) -> Fraction:
        return Fraction(self.close_count, self.horizon)


def _low_times(tr: Trace, j: int, horizon: int) -> List[int]:
    out = []
    for e, first, last in _segments(tr, horizon):
        out.extend(range(max(first, e.visit - j + 1), last + 1))
    return out


def pair_report(x: Point, y: Point, eps: Fraction, delta: Fraction, horizon: int,
                fmap: Optional[DendriteMap] = None) -> PairReport:
    """Mutual closeness and separation of two orbits over times 0..horizon-1.

    Outside the times where either orbit sits below a height threshold, both
    points are within min(eps, delta)/2 of o, hence eps-close and not
    delta-separated; only the remaining few times are measured exactly.
    """
    fmap = _map(fmap)
    eps, delta = Fraction(eps), Fraction(delta)
    tx, ty = fmap.trace(x, horizon - 1), fmap.trace(y, horizon - 1)
    j = max(height_threshold(min(eps, delta) / 2), height_threshold(eps))
    candidates = sorted(set(_low_times(tx, j, horizon)) | set(_low_times(ty, j, horizon)))
    not_close, events = [], []
    joint_miss = 0
    for n in candidates:
        px, py = tx.point_at(n), ty.point_at(n)
        if not _decide_le(px, py, eps):
            not_close.append(n)
        if not _decide_le(px, py, delta):
            events.append(n)
        if not (_decide_le(px, O, eps) and _decide_le(py, O, eps)):
            joint_miss += 1
    longest, prev = 0, -1
    for n in not_close + [horizon]:
        longest = max(longest, n - prev - 1)
        prev = n
    return PairReport(format_point(x), format_point(y), eps, delta, horizon,
                      horizon - joint_miss, horizon - len(not_close), longest, events)


# itinerary complexity -------------------------------------------------------------------

@dataclass
class ComplexityReport:
    J: int
    horizon: int
    orbits: int
    n_values: List[int]
    counts: List[int]

    def h_est(self, i: int) -> float:
        return math.log(self.counts[i]) / self.n_values[i]


def coarse_symbol(height: Optional[int], J: int) -> int:
    """min(height, J); o (height None) reads as J, like the high descent it sits inside."""
    return J if height is None else min(height, J)


def low_symbols(tr: Trace, J: int, horizon: int) -> List[Tuple[int, int]]:
    """(time, symbol) for the times below horizon whose coarse symbol is < J."""
    out = []
    for e, first, last in _segments(tr, horizon):
        for h in range(min(J - 1, e.top), -1, -1):
            n = e.visit - h
            if first <= n <= last:
                out.append((n, h))
    return out


def _union_length(intervals: List[Interval]) -> int:
    intervals.sort()
    total, cur_lo, cur_hi = 0, None, None
    for lo, hi in intervals:
        if cur_hi is None or lo > cur_hi + 1:
            if cur_hi is not None:
                total += cur_hi - cur_lo + 1
            cur_lo, cur_hi = lo, hi
        else:
            cur_hi = max(cur_hi, hi)
    if cur_hi is not None:
        total += cur_hi - cur_lo + 1
    return total


def count_words(lows: Sequence[Sequence[Tuple[int, int]]], n: int, horizon: int) -> int:
    """Distinct length-n words over all windows inside 0..horizon-1 of each orbit.

    A word is fixed by the pattern of its low symbols relative to the first one
    plus that first one's offset in the window; between entry/exit events of
    low symbols the pattern is constant and the offset moves by one per shift.
    """
    last_start = horizon - n
    if last_start < 0:
        return 0
    patterns: Dict[tuple, List[Interval]] = defaultdict(list)
    blank = False
    for orbit_lows in lows:
        times = [t for t, _ in orbit_lows]
        syms = [s for _, s in orbit_lows]
        bps = {0, last_start + 1}
        for t in times:
            bps.add(t - n + 1)
            bps.add(t + 1)
        bps = sorted(b for b in bps if 0 <= b <= last_start + 1)
        for b0, b1 in zip(bps, bps[1:]):
            i = bisect.bisect_left(times, b0)
            k = bisect.bisect_left(times, b0 + n)
            if i == k:
                blank = True
                continue
            first = times[i]
            key = tuple((times[m] - first, syms[m]) for m in range(i, k))
            patterns[key].append((first - b1 + 1, first - b0))
    return int(blank) + sum(_union_length(v) for v in patterns.values())


def word_complexity(starts: Sequence[Point], n_values: Sequence[int], J: int = 3,
                    horizon: int = 1 << 17, fmap: Optional[DendriteMap] = None) -> ComplexityReport:
    if J < 1:
        raise ValueError("J must be >= 1")
    fmap = _map(fmap)
    lows = [low_symbols(fmap.trace(p, horizon - 1), J, horizon) for p in starts]
    counts = [count_words(lows, n, horizon) for n in n_values]
    return ComplexityReport(J, horizon, len(starts), list(n_values), counts)


def word_complexity_naive(starts: Sequence[Point], n_values: Sequence[int], J: int = 3,
                          horizon: int = 1 << 17, fmap: Optional[DendriteMap] = None) -> ComplexityReport:
    """Oracle: step every orbit and collect every window explicitly."""
    fmap = _map(fmap)
    words = {n: set() for n in n_values}
    for p in starts:
        seq = []
        for s in fmap.orbit(p, horizon - 1):
            h = None if s.at_origin else s.height
            if h is not None and h - (horizon - 1 - s.time) >= J:
                # rule (ii) only decrements from here on; avoid stepping huge heights
                seq.extend([J] * (horizon - s.time))
                break
            seq.append(coarse_symbol(h, J))
        seq = tuple(seq)
        for n in n_values:
            bucket = words[n]
            for t in range(horizon - n + 1):
                bucket.add(seq[t:t + n])
    return ComplexityReport(J, horizon, len(starts), list(n_values), [len(words[n]) for n in n_values])


def standard_sample(max_rank: int = 24) -> List[Point]:
    """Orbits from ranks 0..max_rank with all-zero tails."""
    from .space import Stream
    return [Point((0, r), Stream("zeros")) for r in range(max_rank + 1)]


# hitting sets --------------------------------------------------------------------------

@dataclass(frozen=True)
class Region:
    """Whole space, a cylinder C_prefix, or the closed eps-ball around o."""

    kind: str
    prefix: Tuple[int, ...] = ()
    eps: Optional[Fraction] = None

    def contains(self, p: Point) -> bool:
        if self.kind == "whole":
            return True
        if self.kind == "cylinder":
            return not p.is_origin and p in Cylinder(self.prefix)
        return _decide_le(p, O, self.eps)

    def hits(self, tr: Trace, horizon: int) -> List[Interval]:
        """Times 1..horizon at which the orbit is inside the region."""
        if self.kind == "whole":
            return [(1, horizon)]
        out = []
        if self.kind == "cylinder":
            a = self.prefix[0]
            for e, first, last in _segments(tr, horizon + 1):
                n = e.visit - a
                if max(first, 1) <= n <= last and self.contains(e.point_at(n)):
                    out.append((n, n))
            return out
        j0 = height_threshold(self.eps)
        for e, first, last in _segments(tr, horizon + 1):
            hi_n = min(last, e.visit - j0)
            if max(first, 1) <= hi_n:
                out.append((max(first, 1), hi_n))
            for n in range(max(first, 1, e.visit - j0 + 1), last + 1):
                if self.contains(e.point_at(n)):
                    out.append((n, n))
        if tr.origin_from is not None and tr.origin_from <= horizon:
            out.append((max(tr.origin_from, 1), horizon))
        return out


def whole() -> Region:
    return Region("whole")


def cylinder(*prefix: int) -> Region:
    return Region("cylinder", tuple(prefix))


def ball(eps: Fraction) -> Region:
    return Region("ball", eps=Fraction(eps))


def merge_intervals(intervals: Iterable[Interval]) -> List[Interval]:
    out: List[Interval] = []
    for lo, hi in sorted(intervals):
        if out and lo <= out[-1][1] + 1:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


@dataclass
class HittingReport:
    horizon: int
    starts: int
    runs: List[Interval]
    diagnostic: bool = True   # a sample of N(U, V), never a thickness claim

    @property
    def hit_count(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.runs)

    @property
    def longest_run(self) -> Optional[Interval]:
        return max(self.runs, key=lambda r: (r[1] - r[0], -r[0]), default=None)

    @property
    def largest_miss(self) -> Optional[Interval]:
        """Longest stretch of consecutive non-hits strictly between two hits."""
        best = None
        for (_, a), (b, _) in zip(self.runs, self.runs[1:]):
            if best is None or b - a - 1 > best[1] - best[0] + 1:
                best = (a + 1, b - 1)
        return best

    def hits(self, limit: int = 50) -> List[int]:
        out = []
        for lo, hi in self.runs:
            for n in range(lo, hi + 1):
                if len(out) >= limit:
                    return out
                out.append(n)
        return out


def hitting_profile(U: Region, V: Region, horizon: int, starts: Sequence[Point],
                    fmap: Optional[DendriteMap] = None) -> HittingReport:
    """Sampled N(U, V) = {n >= 1 : f^n(x) in U for some sampled x in V}."""
    fmap = _map(fmap)
    runs = []
    for x in starts:
        if not V.contains(x):
            raise ValueError("start %s is not in V" % format_point(x))
        runs.extend(U.hits(fmap.trace(x, horizon), horizon))
    return HittingReport(horizon, len(starts), merge_intervals(runs))
