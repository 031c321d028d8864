"""The self-map f_Z on the symbolic dendrite.

Rules, for an address read as [first symbol] + rest:

    (i)   o -> o
    (ii)  [j] + w -> [j-1] + w                        for j >= 1
    (iii) hubs [0] and [0, r] -> o
    (iv)  [0, r, s] + w -> [h, r'] + w,  r' = r + s + 1,  h = val(r') - val(r) - 1

Rule (ii) shifts E_j onto E_{j-1}.  Rule (iv) jumps from the base copy to a
height chosen by the visit lattice, so successive returns to U_0 happen at
times val(r_k) - val(r_0).

Orbits are handled as a sequence of excursions: a descent from some height
h down to 0 takes h steps and ends in U_0, and one more step either jumps or
falls into o.  Everything long-horizon is computed per excursion.
"""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple

from .lattice import VisitLattice
from .scales import ScaleTable, ZSet, build_scale_table
from .space import O, Point, Stream, format_point, truncate


@dataclass(frozen=True)
class OrbitState:
    time: int
    point: Point

    @property
    def height(self) -> int:
        return self.point.height

    @property
    def rank(self) -> Optional[int]:
        return self.point.symbol(1)

    @property
    def at_origin(self) -> bool:
        return self.point.is_origin

    @property
    def in_U0(self) -> bool:
        return not self.point.is_origin and self.point.height == 0


@dataclass(frozen=True)
class Excursion:
    """Times start..start+top, heights top..0, all with the same rest of address."""

    start: int
    point: Point

    @property
    def top(self) -> int:
        return self.point.height

    @property
    def visit(self) -> int:
        return self.start + self.point.height

    def height_at(self, n: int) -> int:
        return self.point.height - (n - self.start)

    def point_at(self, n: int) -> Point:
        return self.point.with_height(self.height_at(n))


@dataclass
class Trace:
    """Excursions of an orbit starting at or before `horizon`."""

    excursions: List[Excursion]
    origin_from: Optional[int]   # first time the orbit sits at o, if not beyond horizon
    horizon: int
    _starts: List[int] = field(default_factory=list, repr=False)

    def __post_init__(self):
        self._starts = [e.start for e in self.excursions]

    def visits(self) -> List[int]:
        return [e.visit for e in self.excursions if e.visit <= self.horizon]

    def excursion_at(self, n: int) -> Optional[Excursion]:
        i = bisect.bisect_right(self._starts, n) - 1
        if i < 0:
            return None
        e = self.excursions[i]
        return e if n <= e.visit else None

    def point_at(self, n: int) -> Point:
        if self.origin_from is not None and n >= self.origin_from:
            return O
        e = self.excursion_at(n)
        if e is None:
            raise ValueError("time %d is not covered by this trace" % n)
        return e.point_at(n)

    def height_at(self, n: int) -> Optional[int]:
        """Height at time n, or None at o."""
        if self.origin_from is not None and n >= self.origin_from:
            return None
        return self.excursion_at(n).height_at(n)


class DendriteMap:
    def __init__(self, table: Optional[ScaleTable] = None):
        self.table = table if table is not None else build_scale_table(3)
        self.lattice = VisitLattice(self.table)
        self.zset = ZSet(self.table)

    def jump(self, r: int, s: int) -> Tuple[int, int]:
        """(h, r') for rule (iv)."""
        r2 = r + s + 1
        return self.lattice.val(r2) - self.lattice.val(r) - 1, r2

    def step(self, p: Point) -> Point:
        if p.is_origin:
            return O
        j = p.prefix[0]
        if j >= 1:
            return p.with_height(j - 1)
        r = p.symbol(1)
        if r is None:
            return O
        s = p.symbol(2)
        if s is None:
            return O
        h, r2 = self.jump(r, s)
        if len(p.prefix) >= 3:
            return Point((h, r2) + p.prefix[3:], p.tail)
        return Point((h, r2), p.tail.advance(3 - len(p.prefix)))

    def orbit(self, p: Point, n: int) -> Iterator[OrbitState]:
        """States at times 0..n by plain stepping."""
        yield OrbitState(0, p)
        for t in range(1, n + 1):
            p = self.step(p)
            yield OrbitState(t, p)

    def descend(self, s: OrbitState) -> OrbitState:
        """Jump to the end of the current descent (height 0), or stay at o."""
        if s.at_origin:
            return s
        return OrbitState(s.time + s.height, s.point.with_height(0))

    def leap(self, s: OrbitState) -> OrbitState:
        """From a visit to U_0 to the next visit (or to o, one step later)."""
        if not s.in_U0:
            raise ValueError("leap starts at a visit to U_0")
        nxt = self.step(s.point)
        if nxt.is_origin:
            return OrbitState(s.time + 1, O)
        return OrbitState(s.time + 1 + nxt.height, nxt.with_height(0))

    def trace(self, p: Point, horizon: int) -> Trace:
        excursions = []
        if p.is_origin:
            return Trace(excursions, 0, horizon)
        t = 0
        origin_from = None
        while t <= horizon:
            e = Excursion(t, p)
            excursions.append(e)
            if e.visit >= horizon:
                break
            p = self.step(p.with_height(0))
            t = e.visit + 1
            if p.is_origin:
                origin_from = t
                break
        return Trace(excursions, origin_from, horizon)

    def visit_times(self, p: Point, horizon: int) -> List[int]:
        if p.is_origin or p.height != 0:
            raise ValueError("visit_times needs a start in U_0, got %s" % format_point(p))
        return self.trace(p, horizon).visits()

    # checks ------------------------------------------------------------------

    def fixation_time(self, p: Point) -> int:
        """Least n with f^n(p) = o, for o or a hub."""
        if p.is_end:
            raise ValueError("end points never reach o")
        s = OrbitState(0, p)
        while not s.at_origin:
            s = self.descend(s)
            s = self.leap(s)
        return s.time

    def predicted_fixation_time(self, p: Point) -> int:
        """Closed form: descent, then val(final rank) - val(first rank), then one step into o."""
        if p.is_end:
            raise ValueError("end points never reach o")
        if p.is_origin:
            return 0
        a = p.prefix
        if len(a) == 1:
            return a[0] + 1
        r_final = a[1] + sum(s + 1 for s in a[2:])
        return a[0] + self.lattice.val(r_final) - self.lattice.val(a[1]) + 1


_DEFAULT: Optional[DendriteMap] = None


def default_map() -> DendriteMap:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = DendriteMap()
    return _DEFAULT


# verifiers -----------------------------------------------------------------------

@dataclass
class Report:
    name: str
    passed: bool
    checked: int = 0
    counterexample: Optional[dict] = None
    details: dict = field(default_factory=dict)

    def as_json(self) -> dict:
        return {"check": self.name, "passed": self.passed, "checked": str(self.checked),
                "counterexample": self.counterexample, "details": self.details}


def verify_claim1(depth: int, branch_cap: int, step: Optional[Callable[[Point], Point]] = None) -> Report:
    """On the truncation, step maps the node set of E_j exactly onto that of E_{j-1}."""
    step = step or default_map().step
    nodes = [Point(n.prefix) for n in truncate(depth, branch_cap)]
    by_copy = {j: {O} for j in range(branch_cap)}
    for p in nodes:
        if not p.is_origin:
            by_copy[p.prefix[0]].add(p)
    checked = 0
    for j in range(1, branch_cap):
        image = {step(p) for p in by_copy[j]}
        checked += len(by_copy[j])
        if image != by_copy[j - 1]:
            missing = sorted(format_point(p) for p in by_copy[j - 1] - image)
            extra = sorted(format_point(p) for p in image - by_copy[j - 1])
            return Report("claim1", False, checked, {"j": j, "missing": missing[:10], "extra": extra[:10]})
    return Report("claim1", True, checked, details={"depth": depth, "branches": branch_cap})


def verify_containment(p: Point, horizon: int, fmap: Optional[DendriteMap] = None,
                       samples: int = 0) -> Report:
    """Every non-o state f^n(p) in E_j with 1 <= n <= horizon has n + j - 1 in Z.

    Along an excursion n + j is constant, so each excursion is checked at its
    first and last time inside the horizon.
    """
    fmap = fmap or default_map()
    if not p.is_origin and p.height != 0:
        raise ValueError("containment starts in E_0")
    tr = fmap.trace(p, horizon)
    triples = []
    checked = 0
    for e in tr.excursions:
        first, last = max(e.start, 1), min(e.visit, horizon)
        if first > last:
            continue
        for n in sorted({first, last}):
            j = e.height_at(n)
            checked += 1
            if not fmap.zset.contains(n + j - 1)[0]:
                return Report("containment", False, checked,
                              {"start": format_point(p), "n": str(n), "j": str(j),
                               "n+j-1": str(n + j - 1)})
            if len(triples) < samples:
                triples.append([str(n), str(j), str(n + j - 1)])
    details = {"start": format_point(p), "horizon": str(horizon)}
    if samples:
        details["samples"] = triples
    return Report("containment", True, checked, details=details)


def relative_returns(visits: Sequence[int]) -> List[int]:
    return [b - a for i, a in enumerate(visits) for b in visits[i + 1:]]


def verify_disjoint_window(K: int, starts: Iterable[Point], horizon: int,
                           fmap: Optional[DendriteMap] = None) -> Report:
    """No relative return time to U_0 lies in [M_K + 1, N_{K+1}]."""
    fmap = fmap or default_map()
    lo_x, hi_x = fmap.zset.gap_window(K)
    lo, hi = lo_x.value, hi_x.value
    if horizon < hi:
        raise ValueError("horizon must reach N_{K+1} = %d" % hi)
    below, above = 0, None
    checked = 0
    for p in starts:
        for g in relative_returns(fmap.visit_times(p, horizon)):
            checked += 1
            if lo <= g <= hi:
                return Report("window", False, checked,
                              {"start": format_point(p), "return_time": str(g), "window": [str(lo), str(hi)]})
            if g < lo:
                below = max(below, g)
            elif above is None or g < above:
                above = g
    details = {"scale": str(K), "window": [str(lo), str(hi)], "largest_below": str(below),
               "smallest_above": None if above is None else str(above)}
    return Report("window", True, checked, details=details)


def fixed_points(depth: int, branch_cap: int, fmap: Optional[DendriteMap] = None) -> List[Point]:
    fmap = fmap or default_map()
    pts = [Point(n.prefix) for n in truncate(depth, branch_cap)]
    return [p for p in pts if fmap.step(p) == p]


def random_start(rng: random.Random, region: str = "U0", max_rank: int = 24) -> Point:
    """Seeded start: U0 gives end points [0, r] + seed(u); E0 mixes in hubs and o."""
    r = rng.randrange(max_rank + 1)
    if region == "E0":
        kind = rng.randrange(10)
        if kind == 0:
            return O
        if kind <= 3:
            return Point((0, r) + tuple(rng.randrange(4) for _ in range(rng.randrange(6))))
    elif region != "U0":
        raise ValueError("region must be U0 or E0")
    return Point((0, r), Stream("seed", (rng.getrandbits(64),)))


def sample_starts(count: int, seed: int, region: str = "U0", max_rank: int = 24) -> List[Point]:
    rng = random.Random(seed)
    return [random_start(rng, region, max_rank) for _ in range(count)]


def leap_oracle(p: Point, horizon: int, fmap: Optional[DendriteMap] = None) -> Report:
    """visit_times via excursions agree with plain stepping up to horizon."""
    fmap = fmap or default_map()
    fast = fmap.visit_times(p, horizon)
    slow = []
    for s in fmap.orbit(p, horizon):
        if s.in_U0:
            slow.append(s.time)
        elif not s.at_origin and s.height > horizon - s.time:
            break  # rule (ii) cannot bring this height down to 0 in time
    if fast != slow:
        return Report("leap-oracle", False, len(slow),
                      {"start": format_point(p), "leap": [str(t) for t in fast[:20]],
                       "step": [str(t) for t in slow[:20]]})
    return Report("leap-oracle", True, len(slow), details={"start": format_point(p)})


def verify_fixation(depth: int, branch_cap: int, fmap: Optional[DendriteMap] = None) -> Report:
    """Every hub of the truncation reaches o in exactly its predicted time."""
    fmap = fmap or default_map()
    checked = 0
    for node in truncate(depth, branch_cap):
        p = Point(node.prefix)
        got, want = fmap.fixation_time(p), fmap.predicted_fixation_time(p)
        checked += 1
        if got != want:
            return Report("fixation", False, checked,
                          {"start": format_point(p), "time": str(got), "predicted": str(want)})
    return Report("fixation", True, checked, details={"depth": str(depth), "branches": str(branch_cap)})


def verify_admissibility(lattice: VisitLattice, max_rank: int = 24, pairs: int = 0, seed: int = 0,
                         levels: int = 3) -> Report:
    """Exhaustive over r < r' <= max_rank, then seeded random pairs whose larger
    rank has a non-zero digit at level `levels`."""
    witnesses: dict = {}
    checked = 0

    def check(r, r2):
        nonlocal checked
        checked += 1
        try:
            K = lattice.admissible(r, r2)
        except ArithmeticError:
            return Report("admissible", False, checked, {"r": str(r), "r'": str(r2)})
        witnesses[K] = witnesses.get(K, 0) + 1
        return None

    for r2 in range(1, max_rank + 1):
        for r in range(r2):
            bad = check(r, r2)
            if bad:
                return bad
    lo = 1
    for K in range(1, levels):
        lo *= lattice._level(K)[0]
    hi = lo * lattice._level(levels)[0]
    rng = random.Random(seed)
    for _ in range(pairs):
        r2 = rng.randrange(lo, hi)
        r = rng.randrange(r2)
        bad = check(r, r2)
        if bad:
            return bad
    return Report("admissible", True, checked,
                  details={"witness_scales": {str(k): str(v) for k, v in sorted(witnesses.items())}})
