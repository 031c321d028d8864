"""Exact naturals with a symbolic tower extension.

An :class:`ExactNat` is either a literal (a Python ``int``) or an expression
node built from ``Pow2``, ``Sum`` and ``Prod`` over other ExactNats.  Values
whose decimal expansion fits under the digit cap are always folded to
literals; everything larger stays symbolic and is only ever compared.

Comparison first tries floor-log2 enclosures (one tower level down, applied
recursively) and falls back to an exact signed power-of-two normal form when
the enclosures overlap.
"""

from __future__ import annotations

import math
from functools import cmp_to_key
from typing import Optional, Union

import gmpy2

DEFAULT_DIGIT_CAP = 2_000_000

_LOG2_10 = math.log2(10)

NatLike = Union["ExactNat", int]


class MaterializationError(ValueError):
    """Raised when a symbolic value is asked for its decimal digits."""

    def __init__(self, message: str, bounds: Optional[tuple] = None):
        super().__init__(message)
        self.bounds = bounds


def decimal_digits(n: int) -> int:
    if n == 0:
        return 1
    d = gmpy2.mpz(n).num_digits(10)
    # num_digits may overshoot by one
    if d > 1 and n < gmpy2.mpz(10) ** (d - 1):
        d -= 1
    return d


def _fits(n: int, cap: int) -> bool:
    bits = n.bit_length()
    if bits <= (cap - 1) * _LOG2_10 - 2:
        return True
    if bits > cap * _LOG2_10 + 2:
        return False
    return decimal_digits(n) <= cap


class ExactNat:
    __slots__ = ("op", "args", "label", "cap", "_value", "_poly", "_bounds")

    def __init__(self, op: str, args: tuple, cap: int, label: Optional[str] = None,
                 value: Optional[int] = None):
        self.op = op
        self.args = args
        self.cap = cap
        self.label = label
        self._value = value
        self._poly = None
        self._bounds = None

    # construction ------------------------------------------------------

    @classmethod
    def lit(cls, n: int, label: Optional[str] = None, cap: int = DEFAULT_DIGIT_CAP) -> "ExactNat":
        n = int(n)
        if n < 0:
            raise ValueError("ExactNat is a natural number, got %d" % n)
        return cls("lit", (), cap, label, n)

    @classmethod
    def coerce(cls, x: NatLike, cap: int = DEFAULT_DIGIT_CAP) -> "ExactNat":
        if isinstance(x, ExactNat):
            return x
        if isinstance(x, int) and not isinstance(x, bool):
            return cls.lit(x, cap=cap)
        raise TypeError("cannot interpret %r as ExactNat" % (x,))

    @classmethod
    def pow2(cls, e: NatLike, cap: int = DEFAULT_DIGIT_CAP) -> "ExactNat":
        e = cls.coerce(e, cap)
        if e.is_literal:
            ev = e._value
            if ev + 1 <= cap * _LOG2_10 + 2:
                v = 1 << ev
                if _fits(v, cap):
                    return cls.lit(v, cap=cap)
        return cls("pow2", (e,), cap)

    @classmethod
    def sum(cls, a: NatLike, b: NatLike, cap: Optional[int] = None) -> "ExactNat":
        cap = _pick_cap(a, b, cap)
        a, b = cls.coerce(a, cap), cls.coerce(b, cap)
        if a.is_literal and a._value == 0:
            return b
        if b.is_literal and b._value == 0:
            return a
        if a.is_literal and b.is_literal:
            v = a._value + b._value
            if _fits(v, cap):
                return cls.lit(v, cap=cap)
        return cls("sum", (a, b), cap)

    @classmethod
    def prod(cls, a: NatLike, b: NatLike, cap: Optional[int] = None) -> "ExactNat":
        cap = _pick_cap(a, b, cap)
        a, b = cls.coerce(a, cap), cls.coerce(b, cap)
        if (a.is_literal and a._value == 0) or (b.is_literal and b._value == 0):
            return cls.lit(0, cap=cap)
        if a.is_literal and a._value == 1:
            return b
        if b.is_literal and b._value == 1:
            return a
        if a.is_literal and b.is_literal:
            if a._value.bit_length() + b._value.bit_length() <= cap * _LOG2_10 + 4:
                v = a._value * b._value
                if _fits(v, cap):
                    return cls.lit(v, cap=cap)
        return cls("prod", (a, b), cap)

    def named(self, label: str) -> "ExactNat":
        out = ExactNat(self.op, self.args, self.cap, label, self._value)
        out._poly = self._poly
        out._bounds = self._bounds
        return out

    # inspection --------------------------------------------------------

    @property
    def is_literal(self) -> bool:
        return self.op == "lit"

    @property
    def value(self) -> int:
        if self.op != "lit":
            raise MaterializationError(
                "value %s exceeds the %d-digit cap" % (self.expr(), self.cap),
                self.log2_bounds_text())
        return self._value

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def to_decimal(self) -> str:
        """Decimal digits of the value, or MaterializationError with log2 bounds."""
        return gmpy2.mpz(self.value).digits()

    def log2_bounds_text(self) -> tuple:
        lo, hi = floor_log2_bounds(self)
        return (lo.expr(), hi.expr())

    def expr(self, top: bool = True) -> str:
        """Render as decimal or as an expression over labelled operands."""
        if not top and self.label is not None:
            return self.label
        if self.op == "lit":
            return self.to_decimal()
        if self.op == "pow2":
            return "2^" + _wrap(self.args[0], allow=())
        if self.op == "sum":
            return "+".join(_wrap(a, allow=("pow2", "prod")) for a in self.args)
        return "*".join(_wrap(a, allow=("pow2",)) for a in self.args)

    def __repr__(self) -> str:
        if self.op == "lit" and self._value.bit_length() < 256:
            return "ExactNat(%d)" % self._value
        if self.label:
            return "ExactNat<%s>" % self.label
        return "ExactNat<%s>" % self.op

    # arithmetic and order -----------------------------------------------

    def __add__(self, other: NatLike) -> "ExactNat":
        return ExactNat.sum(self, other)

    __radd__ = __add__

    def __mul__(self, other: NatLike) -> "ExactNat":
        return ExactNat.prod(self, other)

    __rmul__ = __mul__

    def _cmp(self, other) -> int:
        if not isinstance(other, (ExactNat, int)) or isinstance(other, bool):
            return NotImplemented
        return exactnat_cmp(self, other)

    def __eq__(self, other) -> bool:
        c = self._cmp(other)
        return c if c is NotImplemented else c == 0

    def __lt__(self, other) -> bool:
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other) -> bool:
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other) -> bool:
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other) -> bool:
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __hash__(self) -> int:
        # symbolic values are astronomically larger than any literal
        return hash(self._value) if self.op == "lit" else hash("ExactNat-symbolic")


def _pick_cap(a, b, cap):
    if cap is not None:
        return cap
    for x in (a, b):
        if isinstance(x, ExactNat):
            return x.cap
    return DEFAULT_DIGIT_CAP


def _wrap(x: ExactNat, allow) -> str:
    if x.label is not None or x.op == "lit" or x.op in allow:
        return x.expr(top=False)
    return "(" + x.expr(top=False) + ")"


# floor-log2 enclosures ----------------------------------------------------

def floor_log2_bounds(x: NatLike) -> tuple:
    """Return ExactNats (lo, hi) with lo <= floor(log2 x) <= hi, for x >= 1."""
    x = ExactNat.coerce(x)
    if x._bounds is not None:
        return x._bounds
    if x.op == "lit":
        if x._value == 0:
            raise ValueError("log2 of zero")
        b = ExactNat.lit(x._value.bit_length() - 1, cap=x.cap)
        out = (b, b)
    elif x.op == "pow2":
        out = (x.args[0], x.args[0])
    elif x.op == "prod":
        (la, ha), (lb, hb) = (floor_log2_bounds(a) for a in x.args)
        out = (la + lb, ha + hb + 1)
    else:
        (la, ha), (lb, hb) = (floor_log2_bounds(a) for a in x.args)
        lo = la if exactnat_cmp(la, lb) >= 0 else lb
        hi = ha if exactnat_cmp(ha, hb) >= 0 else hb
        out = (lo, hi + 1)
    x._bounds = out
    return out


def exactnat_cmp(a: NatLike, b: NatLike) -> int:
    """Three-way comparison (-1, 0, 1) that agrees with numeric order."""
    if isinstance(a, int) and isinstance(b, int):
        return (a > b) - (a < b)
    a, b = ExactNat.coerce(a), ExactNat.coerce(b)
    if a is b:
        return 0
    if a.is_literal and b.is_literal:
        return (a._value > b._value) - (a._value < b._value)
    if a.is_literal and a._value == 0:
        return -1
    if b.is_literal and b._value == 0:
        return 1
    la, ha = floor_log2_bounds(a)
    lb, hb = floor_log2_bounds(b)
    if exactnat_cmp(ha, lb) < 0:
        return -1
    if exactnat_cmp(hb, la) < 0:
        return 1
    # bounds undecided: exact refinement
    return _psign(_psub(_to_poly(a), _to_poly(b)))


# exact signed normal form ---------------------------------------------------
#
# A poly is a tuple of (exponent, coefficient) terms with value
# sum(coefficient * 2**value(exponent)); exponents are polys themselves and the
# empty tuple is zero.

_ZERO: tuple = ()


def _plit(n: int) -> tuple:
    return ((_ZERO, n),) if n else _ZERO


def _to_poly(x: ExactNat) -> tuple:
    if x._poly is None:
        if x.op == "lit":
            p = _plit(x._value)
        elif x.op == "pow2":
            p = ((_to_poly(x.args[0]), 1),)
        elif x.op == "sum":
            p = _to_poly(x.args[0]) + _to_poly(x.args[1])
        else:
            p = _pmul(_to_poly(x.args[0]), _to_poly(x.args[1]))
        x._poly = p
    return x._poly


def _pmul(p: tuple, q: tuple) -> tuple:
    return tuple((e1 + e2, c1 * c2) for e1, c1 in p for e2, c2 in q)


def _psub(p: tuple, q: tuple) -> tuple:
    return p + tuple((e, -c) for e, c in q)


def _pcmp_exp(s, t) -> int:
    return _psign(_psub(s[0], t[0]))


def _preduce(p: tuple) -> list:
    """Reduce to terms with strictly decreasing exponents, each dominating the rest."""
    merged_like: dict = {}
    for e, c in p:
        merged_like[e] = merged_like.get(e, 0) + c
    terms = [(e, c) for e, c in merged_like.items() if c]
    if len(terms) <= 1:
        return terms
    terms.sort(key=cmp_to_key(_pcmp_exp), reverse=True)
    i = 0
    while i < len(terms) - 1:
        e1, c1 = terms[i]
        e2, c2 = terms[i + 1]
        tail = terms[i + 1:]
        # |sum of the tail coefficients| < 2**threshold
        threshold = max(abs(c).bit_length() for _, c in tail) + len(tail).bit_length() + 1
        gap = _psub(e1, e2)
        if _psign(_psub(gap, _plit(threshold))) >= 0:
            i += 1
            continue
        merged = (c1 << _pint(gap)) + c2
        terms[i:i + 2] = [(e2, merged)] if merged else []
        i = 0
    return terms


def _psign(p: tuple) -> int:
    if not p:
        return 0
    if all(not e for e, _ in p):
        s = sum(c for _, c in p)
        return (s > 0) - (s < 0)
    terms = _preduce(p)
    if not terms:
        return 0
    return 1 if terms[0][1] > 0 else -1


def _pint(p: tuple) -> int:
    return sum(c << _pint(e) if e else c for e, c in _preduce(p))
