"""Machine-readable output: every number becomes a decimal string or {num, den}."""

from __future__ import annotations

import csv
import io
import json
import os
from fractions import Fraction
from typing import Any, Iterable, Sequence

import gmpy2

from .exactnat import ExactNat


def dec(n: int) -> str:
    # gmpy2 also handles ints past the interpreter's str() digit limit
    return gmpy2.mpz(n).digits()


def rat(q: Fraction) -> dict:
    return {"num": dec(q.numerator), "den": dec(q.denominator)}


def plain(obj: Any) -> Any:
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return dec(obj)
    if isinstance(obj, Fraction):
        return rat(obj)
    if isinstance(obj, ExactNat):
        return obj.to_decimal() if obj.is_literal else obj.expr()
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    raise TypeError("no exact JSON form for %r" % type(obj).__name__)


def dumps(obj: Any) -> str:
    return json.dumps(plain(obj), indent=1) + "\n"


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([cell_text(c) for c in row])
    return buf.getvalue()


def cell_text(c: Any) -> str:
    if isinstance(c, bool):
        return "1" if c else "0"
    if isinstance(c, int):
        return dec(c)
    if isinstance(c, Fraction):
        return dec(c.numerator) if c.denominator == 1 else "%s/%s" % (dec(c.numerator), dec(c.denominator))
    return "" if c is None else str(c)


def write_text(path: str, text: str) -> str:
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path
