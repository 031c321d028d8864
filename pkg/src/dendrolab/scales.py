"""Scale endpoints and the gap set Z.

Row K of the table holds the interval endpoints N_K, M_K together with the
visit-lattice quantities c_K (unit step), L_K (digit cap) and D_K (largest
value reachable with digits at levels <= K):

    N_0 = 0, M_0 = 1, D_0 = 0
    N_{K+1} = (2**M_K + 1) * M_K
    c_K = N_K + 1 + D_{K-1}
    M_K = beta * c_K + D_{K-1}
    L_K = floor((M_K - D_{K-1}) / c_K)
    D_K = D_{K-1} + L_K * c_K

Z is the union of the closed integer intervals [N_K, M_K] for K >= 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .exactnat import DEFAULT_DIGIT_CAP, ExactNat, NatLike, exactnat_cmp


class UnmaterializedScaleError(ValueError):
    """An operation needed literal values at a scale that is only symbolic."""

    def __init__(self, scale: int, what: str = ""):
        msg = "scale %d is not materialized" % scale
        if what:
            msg += " (%s)" % what
        super().__init__(msg)
        self.scale = scale


@dataclass(frozen=True)
class ScaleRow:
    K: int
    N: ExactNat
    M: ExactNat
    c: Optional[ExactNat]
    L: Optional[int]
    D: ExactNat

    @property
    def materialized(self) -> bool:
        return all(v is None or v.is_literal for v in (self.N, self.M, self.c, self.D))

    def as_json(self) -> dict:
        def enc(v):
            return None if v is None else v.expr()

        return {"K": str(self.K), "N": enc(self.N), "M": enc(self.M), "c": enc(self.c),
                "L": None if self.L is None else str(self.L), "D": enc(self.D)}


class ScaleTable:
    """Rows K = 0..K_max; further rows are derived lazily on request."""

    def __init__(self, K_max: int = 3, beta: int = 4, digit_cap: int = DEFAULT_DIGIT_CAP):
        if K_max < 0:
            raise ValueError("K_max must be >= 0")
        if beta < 2:
            raise ValueError("beta must be >= 2, got %d" % beta)
        self.K_max = K_max
        self.beta = beta
        self.digit_cap = digit_cap
        zero = ExactNat.lit(0, cap=digit_cap)
        self._rows: List[ScaleRow] = [ScaleRow(
            0, zero.named("N0"), ExactNat.lit(1, "M0", cap=digit_cap), None, None, zero.named("D0"))]
        self._literal: List[Tuple[int, int]] = []
        for _ in range(K_max):
            self._extend()

    def _extend(self) -> ScaleRow:
        prev = self._rows[-1]
        K = prev.K + 1
        cap = self.digit_cap
        N = ExactNat.prod(ExactNat.sum(ExactNat.pow2(prev.M, cap), 1, cap), prev.M, cap).named("N%d" % K)
        c = ExactNat.sum(ExactNat.sum(N, 1, cap), prev.D, cap).named("c%d" % K)
        M = ExactNat.sum(ExactNat.prod(self.beta, c, cap), prev.D, cap).named("M%d" % K)
        L = _digit_cap(M, prev.D, c, self.beta)
        D = ExactNat.sum(prev.D, ExactNat.prod(L, c, cap), cap).named("D%d" % K)
        row = ScaleRow(K, N, M, c, L, D)
        self._rows.append(row)
        if row.materialized and len(self._literal) == K - 1:
            self._literal.append((N.value, M.value))
        return row

    def row(self, K: int) -> ScaleRow:
        while len(self._rows) <= K:
            self._extend()
        return self._rows[K]

    def rows(self) -> List[ScaleRow]:
        return self._rows[: self.K_max + 1]

    def literal_intervals(self) -> List[Tuple[int, int]]:
        """(N_K, M_K) as ints for the leading run of materialized scales K >= 1."""
        return list(self._literal)

    def first_unmaterialized(self) -> int:
        K = 1
        while self.row(K).materialized:
            K += 1
        return K

    def to_json(self) -> str:
        return json.dumps([r.as_json() for r in self.rows()], indent=1) + "\n"


def _digit_cap(M: ExactNat, D_prev: ExactNat, c: ExactNat, beta: int) -> int:
    if M.is_literal and D_prev.is_literal and c.is_literal:
        return (M.value - D_prev.value) // c.value
    # symbolic rows: the policy gives beta; certify L*c + D <= M < (L+1)*c + D
    L = beta
    if not (exactnat_cmp(ExactNat.sum(ExactNat.prod(L, c), D_prev), M) <= 0
            and exactnat_cmp(ExactNat.sum(ExactNat.prod(L + 1, c), D_prev), M) > 0):
        raise ArithmeticError("digit cap certification failed")
    return L


def build_scale_table(K_max: int, beta: int = 4, digit_cap: int = DEFAULT_DIGIT_CAP) -> ScaleTable:
    return ScaleTable(K_max, beta, digit_cap)


class ZSet:
    """Z = union over K >= 1 of [N_K, M_K]."""

    def __init__(self, table: ScaleTable):
        self.table = table

    def contains(self, m: NatLike) -> Tuple[bool, Optional[int]]:
        if isinstance(m, int):
            if m < 0:
                return False, None
            for K, (N, M) in enumerate(self.table.literal_intervals(), start=1):
                if m < N:
                    return False, None
                if m <= M:
                    return True, K
        K = 1
        while True:
            row = self.table.row(K)
            if exactnat_cmp(m, row.N) < 0:
                return False, None
            if exactnat_cmp(m, row.M) <= 0:
                return True, K
            K += 1

    def __contains__(self, m: NatLike) -> bool:
        return self.contains(m)[0]

    def enumerate(self, i: int) -> int:
        """The i-th smallest element of Z (0-indexed)."""
        if i < 0:
            raise IndexError(i)
        K = 1
        while True:
            row = self.table.row(K)
            if not row.materialized:
                raise UnmaterializedScaleError(K, "enumeration index %d" % i)
            size = row.M.value - row.N.value + 1
            if i < size:
                return row.N.value + i
            i -= size
            K += 1

    def gap_window(self, K: int) -> Tuple[ExactNat, ExactNat]:
        """(M_K + 1, (2**M_K + 1) * M_K): relative return times forbidden at scale K."""
        lo = ExactNat.sum(self.table.row(K).M, 1)
        return lo, self.table.row(K + 1).N

    def block_length(self, K: int) -> ExactNat:
        """M_K - N_K + 1 (symbolic rows use the policy identity)."""
        row = self.table.row(K)
        if row.materialized:
            return ExactNat.lit(row.M.value - row.N.value + 1)
        prev = self.table.row(K - 1)
        # N_K = c_K - 1 - D_{K-1}, so M_K - N_K + 1 = (beta - 1) c_K + 2 D_{K-1} + 2
        return ExactNat.prod(self.table.beta - 1, row.c) + ExactNat.sum(ExactNat.prod(2, prev.D), 2)


def z_contains(z: ZSet, m: NatLike) -> Tuple[bool, Optional[int]]:
    return z.contains(m)


def z_enumerate(z: ZSet, i: int) -> int:
    return z.enumerate(i)


def gap_window(z: ZSet, K: int) -> Tuple[ExactNat, ExactNat]:
    return z.gap_window(K)
