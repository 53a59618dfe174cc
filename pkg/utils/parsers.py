"""
Parsers Module
Parsing string input CLI: rasional "p/q", ideal "a,b,d" / ring / different,
matriks "a,b;c,d" dan elemen "x+y*sqrtD"
"""

import re
from fractions import Fraction
from typing import List, Tuple

from config import FieldConfig
from core.errors import ParseError, raise_error
from core.quadfield import FieldContext, QuadLattice, QuadNum, different, ring
from core.rademacher import IntMatrix2

_RATIONAL = re.compile(r"\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")
_QUADNUM = re.compile(
    r"\s*([+-]?\d+(?:/\d+)?)\s*([+-])\s*(\d+(?:/\d+)?)\s*\*\s*sqrtD\s*$"
)


def _fields(text: str, sep: str) -> List[Tuple[str, int]]:
    """Split on sep keeping the start offset of every field"""
    out, start = [], 0
    for part in text.split(sep):
        out.append((part, start))
        start += len(part) + len(sep)
    return out


def parse_rational(text: str, position: int = 0, source: str = None) -> Fraction:
    """'p' or 'p/q' -> Fraction; position is the offset of text inside source"""
    source = text if source is None else source
    match = _RATIONAL.match(text)
    if not match:
        offset = len(text) - len(text.lstrip())
        raise ParseError(source, position + offset, f"bukan bilangan rasional: {text.strip()!r}")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise ParseError(source, position + text.index('/'), "penyebut nol")
    return Fraction(int(num), int(den) if den is not None else 1)


def parse_ideal(text: str, ctx: FieldContext) -> QuadLattice:
    """
    "ring", "different" or a triple "a,b,d" for Z(a*sqrt(D) + b) + Z*d
    Returns: canonical QuadLattice (integrality is checked downstream)
    """
    keyword = text.strip().lower()
    if keyword == FieldConfig.IDEAL_KEYWORDS[0]:
        return ring(ctx)
    if keyword == FieldConfig.IDEAL_KEYWORDS[1]:
        return different(ctx)

    parts = _fields(text, ',')
    if len(parts) != 3:
        position = sum(len(p) + 1 for p, _ in parts[:3]) - 1 if len(parts) > 3 else len(text)
        raise ParseError(text, position, "butuh tiga entri a,b,d atau 'ring' / 'different'")
    a, b, d = (parse_rational(part, start, text) for part, start in parts)
    if a == 0 or d == 0:
        raise_error('NOT_A_LATTICE', text, "a dan d harus tak nol")
    return QuadLattice.from_triple(a, b, d, ctx.D)


def parse_matrix(text: str) -> IntMatrix2:
    """'a,b;c,d' -> IntMatrix2"""
    rows = _fields(text, ';')
    if len(rows) != 2:
        raise ParseError(text, len(text) if len(rows) < 2 else len(rows[0][0]) + len(rows[1][0]) + 1,
                         "butuh dua baris dipisah ';'")
    entries = []
    for row, row_start in rows:
        cols = _fields(row, ',')
        if len(cols) != 2:
            raise ParseError(text, row_start + len(row), "butuh dua entri per baris")
        entries.extend(parse_rational(col, row_start + start, text) for col, start in cols)
    if any(e.denominator != 1 for e in entries):
        raise_error('NOT_INTEGRAL_MATRIX', text)
    return IntMatrix2(*(e.numerator for e in entries))


def parse_quadnum(text: str, D: int) -> QuadNum:
    """'x+y*sqrtD' (as printed by QuadNum) or a plain rational"""
    match = _QUADNUM.match(text)
    if match:
        x = parse_rational(match.group(1), match.start(1), text)
        y = parse_rational(match.group(3), match.start(3), text)
        return QuadNum(x, -y if match.group(2) == '-' else y, D)
    return QuadNum(parse_rational(text), 0, D)
