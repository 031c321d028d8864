"""Symbolic dendrite: the gluing point o, hubs and end points.

A point is addressed by a sequence of naturals.  The empty address is o;
a finite address is a hub (ramification point); an infinite address, given
as a finite prefix followed by a deterministic stream, is an end point.
The copy E_j is o together with every address starting with j, and
U_j = E_j minus o.

The metric is the path metric of the tree of hubs, with the edge from hub w
to hub w.j weighing budget(w.j), where budget(a_1..a_k) = prod 2**-(a_i + 2).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple

import gmpy2

Dyadic = Fraction

SEED_ALPHABET = 4
_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


@dataclass(frozen=True)
class Stream:
    """Deterministic tail generator with a cursor; random access, so clones are free."""

    kind: str
    params: Tuple[int, ...] = ()
    pos: int = 0

    def __post_init__(self):
        if self.kind not in ("zeros", "cycle", "seed"):
            raise ValueError("unknown stream kind %r" % self.kind)
        if self.kind == "cycle" and not self.params:
            raise ValueError("cycle() needs at least one symbol")
        if self.kind == "seed" and (len(self.params) != 1 or not 0 <= self.params[0] <= _MASK64):
            raise ValueError("seed() takes one unsigned 64-bit integer")
        if any(p < 0 for p in self.params) or self.pos < 0:
            raise ValueError("stream parameters must be natural numbers")

    def symbol(self, k: int = 0) -> int:
        i = self.pos + k
        if self.kind == "zeros":
            return 0
        if self.kind == "cycle":
            return self.params[i % len(self.params)]
        return _splitmix64((self.params[0] + i * 0xD1B54A32D192ED03) & _MASK64) % SEED_ALPHABET

    def advance(self, k: int) -> "Stream":
        return Stream(self.kind, self.params, self.pos + k) if k else self

    def literal(self) -> str:
        if self.kind == "zeros":
            s = "zeros"
        else:
            s = "%s(%s)" % (self.kind, ",".join(str(p) for p in self.params))
        return s + ("@%d" % self.pos if self.pos else "")


@dataclass(frozen=True)
class Point:
    """prefix () is o; tail None marks a hub, a Stream marks an end point."""

    prefix: Tuple[int, ...] = ()
    tail: Optional[Stream] = None

    def __post_init__(self):
        if not self.prefix and self.tail is not None:
            raise ValueError("an end point needs a non-empty prefix")

    @property
    def is_origin(self) -> bool:
        return not self.prefix

    @property
    def is_hub(self) -> bool:
        return bool(self.prefix) and self.tail is None

    @property
    def is_end(self) -> bool:
        return self.tail is not None

    @property
    def height(self) -> int:
        """First address symbol (0 for o)."""
        return self.prefix[0] if self.prefix else 0

    def symbol(self, k: int) -> Optional[int]:
        """k-th address symbol, or None past the end of a hub address."""
        if k < len(self.prefix):
            return self.prefix[k]
        if self.tail is None:
            return None
        return self.tail.symbol(k - len(self.prefix))

    def symbols(self, start: int = 0) -> Iterator[int]:
        k = start
        while True:
            a = self.symbol(k)
            if a is None:
                return
            yield a
            k += 1

    def with_height(self, h: int) -> "Point":
        return Point((h,) + self.prefix[1:], self.tail)

    def __str__(self) -> str:
        return format_point(self)


O = Point()


def hub(*symbols: int) -> Point:
    return Point(tuple(symbols))


# metric ---------------------------------------------------------------------

def budget(prefix) -> Dyadic:
    return Fraction(1, 1 << sum(a + 2 for a in prefix))


def _depth_sum(p: Point, start: int, exp0: int, cut: int) -> Tuple[Fraction, bool]:
    """Sum of budgets of the address prefixes of p longer than `start`.

    exp0 is -log2 budget(p[:start]).  Terms with exponent above `cut` are
    dropped; their total is at most 2**-cut * 2/3.  Returns (sum, truncated).
    """
    total = Fraction(0)
    e = exp0
    k = start
    while True:
        a = p.symbol(k)
        if a is None:
            return total, False
        e += a + 2
        if e > cut:
            return total, True
        total += Fraction(1, 1 << e)
        k += 1


def _distance(x: Point, y: Point, cut: int) -> Tuple[Fraction, bool]:
    if x == y:
        return Fraction(0), False
    k, e = 0, 0
    while True:
        a, b = x.symbol(k), y.symbol(k)
        if a is None or b is None or a != b:
            break
        e += a + 2
        if e > cut:
            # both continue inside a branch of budget below 2**-cut
            return Fraction(0), True
        k += 1
    dx, tx = _depth_sum(x, k, e, cut)
    dy, ty = _depth_sum(y, k, e, cut)
    return dx + dy, tx or ty


def distance(x: Point, y: Point, precision: int = 64) -> Dyadic:
    """Tree path distance; never above the true value and within 2**-precision of it.

    Exact whenever no address term falls below 2**-(precision+2).
    """
    return _distance(x, y, precision + 2)[0]


def distance_to_o(p: Point, precision: int = 64) -> Dyadic:
    return _depth_sum(p, 0, 0, precision + 2)[0]


def distance_bounds(x: Point, y: Point, precision: int = 64) -> Tuple[Dyadic, Dyadic]:
    d, truncated = _distance(x, y, precision + 2)
    return d, d + Fraction(1, 1 << precision) if truncated else d


def tail_factor(p: Point, precision: int = 64) -> Dyadic:
    """S with distance(o, p) = 2**-(height+2) * S, truncated like distance()."""
    return 1 + _depth_sum(p, 1, 0, precision + 2)[0]


def height_threshold(eps: Fraction) -> int:
    """Smallest j with 2**-(j+1) <= eps: every point of height >= j is eps-close to o."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    j = 0
    while Fraction(1, 1 << (j + 1)) > eps:
        j += 1
    return j


# decomposition ----------------------------------------------------------------

@dataclass(frozen=True)
class Membership:
    copy: Optional[int]   # the j with p in E_j; None means every E_j (p = o)
    in_U: Optional[int]
    is_o: bool
    is_hub: bool
    is_end: bool

    def in_E(self, j: int) -> bool:
        return self.copy is None or self.copy == j


def classify(p: Point) -> Membership:
    if p.is_origin:
        return Membership(None, None, True, False, False)
    j = p.prefix[0]
    return Membership(j, j, False, p.is_hub, p.is_end)


@dataclass(frozen=True)
class Cylinder:
    prefix: Tuple[int, ...]

    def __post_init__(self):
        if not self.prefix:
            raise ValueError("cylinder prefix must be non-empty")

    def __contains__(self, p: Point) -> bool:
        return all(p.symbol(k) == a for k, a in enumerate(self.prefix))


def U(j: int) -> Cylinder:
    return Cylinder((j,))


# truncations -------------------------------------------------------------------

@dataclass(frozen=True)
class TreeNode:
    prefix: Tuple[int, ...]
    budget: Dyadic
    x: float = 0.0
    y: float = 0.0


def truncate(depth: int, branch_cap: int) -> List[TreeNode]:
    """o plus every hub of length <= depth with all symbols < branch_cap, laid out radially.

    Each hub gets an angular sector of its parent's sector proportional to its
    budget and sits at radius equal to its distance from o.
    """
    if depth < 0 or branch_cap < 1:
        raise ValueError("depth must be >= 0 and branch_cap >= 1")
    out = [TreeNode((), Fraction(1))]
    frontier = [((), 0.0, 2 * math.pi, 0.0)]
    weights = [2.0 ** -(j + 2) for j in range(branch_cap)]
    total_w = sum(weights)
    for _ in range(depth):
        nxt = []
        for prefix, a0, a1, r in frontier:
            lo = a0
            parent_budget = budget(prefix)
            for j in range(branch_cap):
                hi = lo + (a1 - a0) * weights[j] / total_w
                child = prefix + (j,)
                b = parent_budget * Fraction(1, 1 << (j + 2))
                radius = r + float(b)
                mid = 0.5 * (lo + hi)
                out.append(TreeNode(child, b, radius * math.cos(mid), radius * math.sin(mid)))
                nxt.append((child, lo, hi, radius))
                lo = hi
        frontier = nxt
    return out


# literals ---------------------------------------------------------------------

class PointSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__("%s at position %d in %r" % (message, pos, text))
        self.pos = pos


_TAIL_RE = re.compile(r"(zeros|cycle|seed)(?:\(([0-9,\s]*)\))?(?:@([0-9]+))?$")


def parse_point(text: str) -> Point:
    """Parse 'o', '0.4' (hub) or '0.0:cycle(1)' (end point); tails may carry '@cursor'."""
    s = text.strip()
    if s == "o":
        return O
    if not s:
        raise PointSyntaxError("empty point literal", text, 0)
    head, sep, tail_text = s.partition(":")
    prefix = []
    pos = 0
    for part in head.split("."):
        if not part.isdigit():
            raise PointSyntaxError("expected a natural number", text, pos)
        prefix.append(int(gmpy2.mpz(part)))
        pos += len(part) + 1
    if not sep:
        return Point(tuple(prefix))
    tail_pos = len(head) + 1
    m = _TAIL_RE.match(tail_text)
    if not m:
        raise PointSyntaxError("bad tail", text, tail_pos)
    kind, args, cursor = m.groups()
    if kind == "zeros" and args is not None:
        raise PointSyntaxError("zeros takes no arguments", text, tail_pos)
    if kind != "zeros" and not args:
        raise PointSyntaxError("%s needs arguments" % kind, text, tail_pos)
    params = tuple(int(a) for a in args.split(",")) if args else ()
    try:
        stream = Stream(kind, params, int(cursor) if cursor else 0)
    except ValueError as exc:
        raise PointSyntaxError(str(exc), text, tail_pos) from None
    return Point(tuple(prefix), stream)


def format_point(p: Point) -> str:
    if p.is_origin:
        return "o"
    s = ".".join(gmpy2.mpz(a).digits() for a in p.prefix)
    return s + (":" + p.tail.literal() if p.tail is not None else "")
