"""Mixed-radix visit lattice.

A rank r is read in mixed radix with digit bound L_K at level K (level 1
least significant).  Its schedule value is val(r) = sum_K a_K * c_K.  Because
c_K exceeds the largest value D_{K-1} of all lower levels, val is strictly
increasing, and for r < r' whose top differing digit is at level T,

    N_T <= val(r') - val(r) - 1 <= M_T - 1,

so every pairwise difference minus one lies in Z.
"""

from __future__ import annotations

from typing import List, Tuple, Union

from .exactnat import ExactNat, exactnat_cmp
from .scales import ScaleTable, UnmaterializedScaleError, ZSet

Value = Union[int, ExactNat]


class VisitLattice:
    def __init__(self, table: ScaleTable):
        self.table = table
        self.zset = ZSet(table)
        self._radix: List[int] = []   # radix of level K at index K-1
        self._unit: List[Value] = []  # c_K at index K-1
        self._val_cache: dict = {}

    def _level(self, K: int) -> Tuple[int, Value]:
        while len(self._radix) < K:
            row = self.table.row(len(self._radix) + 1)
            self._radix.append(row.L + 1)
            self._unit.append(row.c.value if row.c.is_literal else row.c)
        return self._radix[K - 1], self._unit[K - 1]

    def digits(self, r: int) -> Tuple[int, ...]:
        """Mixed-radix digits (a_1, a_2, ...) of r, without trailing zeros."""
        if r < 0:
            raise ValueError("rank must be a natural number")
        out = []
        K = 1
        while r:
            radix, _ = self._level(K)
            r, a = divmod(r, radix)
            out.append(a)
            K += 1
        return tuple(out)

    def rank(self, digits) -> int:
        r = 0
        for K in range(len(digits), 0, -1):
            radix, _ = self._level(K)
            a = digits[K - 1]
            if not 0 <= a < radix:
                raise ValueError("digit %d out of range at level %d" % (a, K))
            r = r * radix + a
        return r

    def val(self, r: int) -> int:
        """Schedule value of rank r as an int; needs every touched level materialized."""
        cached = self._val_cache.get(r)
        if cached is not None:
            return cached
        total = 0
        for K, a in enumerate(self.digits(r), start=1):
            if a:
                _, c = self._level(K)
                if isinstance(c, ExactNat):
                    raise UnmaterializedScaleError(K, "val of rank %d" % r)
                total += a * c
        if len(self._val_cache) < 4096:
            self._val_cache[r] = total
        return total

    def val_exact(self, r: int) -> Value:
        """Like val, but returns a symbolic ExactNat when a touched level is symbolic."""
        try:
            return self.val(r)
        except UnmaterializedScaleError:
            pass
        total: Value = 0
        for K, a in enumerate(self.digits(r), start=1):
            if a:
                _, c = self._level(K)
                if isinstance(total, int) and isinstance(c, int):
                    total += a * c
                else:
                    total = ExactNat.sum(total, ExactNat.prod(a, c))
        return total

    def gap(self, r: int, r2: int) -> int:
        if not r < r2:
            raise ValueError("gap needs r < r', got %d, %d" % (r, r2))
        return self.val(r2) - self.val(r)

    def top_level(self, r: int, r2: int) -> int:
        d1, d2 = self.digits(r), self.digits(r2)
        n = max(len(d1), len(d2))
        d1 += (0,) * (n - len(d1))
        d2 += (0,) * (n - len(d2))
        for K in range(n, 0, -1):
            if d1[K - 1] != d2[K - 1]:
                return K
        raise ValueError("ranks are equal")

    def admissible(self, r: int, r2: int) -> int:
        """Witness scale K with N_K <= gap(r, r') - 1 <= M_K - 1.

        The inequality is certified with additions only, so it also works when
        the values are symbolic.
        """
        if not r < r2:
            raise ValueError("admissible needs r < r', got %d, %d" % (r, r2))
        K = self.top_level(r, r2)
        row = self.table.row(K)
        lo, hi = self.val_exact(r), self.val_exact(r2)
        # N_K + val(r) + 1 <= val(r')  and  val(r') <= M_K + val(r)
        if isinstance(lo, int) and isinstance(hi, int) and row.N.is_literal and row.M.is_literal:
            g = hi - lo - 1
            ok = row.N.value <= g <= row.M.value - 1
        else:
            ok = (exactnat_cmp(ExactNat.sum(ExactNat.sum(row.N, lo), 1), hi) <= 0
                  and exactnat_cmp(hi, ExactNat.sum(row.M, lo)) <= 0)
        if not ok:
            raise ArithmeticError("admissibility fails for ranks %d < %d" % (r, r2))
        return K

    def ranks_below(self, tmax: int) -> int:
        """Number of ranks r with val(r) <= tmax."""
        if tmax < 0:
            return 0
        K = 0
        while True:
            _, c = self._level(K + 1)
            if isinstance(c, ExactNat):
                if exactnat_cmp(c, tmax) <= 0:
                    raise UnmaterializedScaleError(K + 1, "ranks below %d" % tmax)
                break
            if c > tmax:
                break
            K += 1
        rem, digits = tmax, [0] * K
        for level in range(K, 0, -1):
            radix, c = self._level(level)
            a = min(radix - 1, rem // c)
            digits[level - 1] = a
            rem -= a * c
        return self.rank(digits) + 1


def digits_of_rank(r: int, table: ScaleTable) -> Tuple[int, ...]:
    return VisitLattice(table).digits(r)


def val(r: int, table: ScaleTable) -> int:
    return VisitLattice(table).val(r)


def gap(r: int, r2: int, table: ScaleTable) -> int:
    return VisitLattice(table).gap(r, r2)


def admissible(r: int, r2: int, table: ScaleTable) -> int:
    return VisitLattice(table).admissible(r, r2)


def ranks_below(tmax: int, table: ScaleTable) -> int:
    return VisitLattice(table).ranks_below(tmax)
