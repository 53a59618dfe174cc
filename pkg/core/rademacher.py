"""
Rademacher Module
Jumlah Dedekind eksak, simbol Rademacher Psi, klasifikasi hiperbolik dan
semi-lingkaran geodesik yang difiksasi oleh matriks
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import floor, gcd
from typing import Dict, Tuple, Union

import mpmath
import numpy as np

from config import FieldConfig
from core.errors import raise_error, ArithmeticFailure

logger = logging.getLogger(__name__)

# numpy int64 stays exact for the direct sum below this modulus
_NUMPY_DIRECT_LIMIT = 2**20


def _as_int(value, label: str) -> int:
    if isinstance(value, bool):
        raise_error('NOT_INTEGRAL_MATRIX', label)
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    raise_error('NOT_INTEGRAL_MATRIX', label)


@dataclass(frozen=True)
class IntMatrix2:
    """[[a, b], [c, d]] with integer entries"""
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        label = f"[[{self.a},{self.b}],[{self.c},{self.d}]]"
        for name in ('a', 'b', 'c', 'd'):
            object.__setattr__(self, name, _as_int(getattr(self, name), label))

    @property
    def entries(self) -> Tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def trace(self) -> int:
        return self.a + self.d

    def __neg__(self) -> 'IntMatrix2':
        return IntMatrix2(-self.a, -self.b, -self.c, -self.d)

    def __matmul__(self, other: 'IntMatrix2') -> 'IntMatrix2':
        return IntMatrix2(self.a * other.a + self.b * other.c,
                          self.a * other.b + self.b * other.d,
                          self.c * other.a + self.d * other.c,
                          self.c * other.b + self.d * other.d)

    def inverse(self) -> 'IntMatrix2':
        """Inverse of a determinant +-1 matrix"""
        det = self.det()
        if det not in (1, -1):
            raise_error('NOT_UNIMODULAR', det)
        return IntMatrix2(det * self.d, -det * self.b, -det * self.c, det * self.a)

    def act(self, z):
        """Moebius action on a (complex) point"""
        return (self.a * z + self.b) / (self.c * z + self.d)

    def __str__(self) -> str:
        return f"{self.a},{self.b};{self.c},{self.d}"


@dataclass(frozen=True)
class GeodesicCircle:
    center: Fraction
    radius_sq: Fraction

    def radius(self):
        return mpmath.sqrt(mpmath.mpf(self.radius_sq.numerator) / self.radius_sq.denominator)


def _require_sl2(gamma: IntMatrix2):
    if gamma.det() != 1:
        raise_error('NOT_UNIMODULAR', f"det={gamma.det()} untuk {gamma}")


# ==================== DEDEKIND SUMS ====================
def sawtooth(x: Union[int, Fraction]) -> Fraction:
    """((x)) = x - floor(x) - 1/2 off the integers, 0 on them"""
    x = Fraction(x)
    if x.denominator == 1:
        return Fraction(0)
    return x - floor(x) - Fraction(1, 2)


def dedekind_sum_direct(h: int, k: int) -> Fraction:
    """
    The defining sum over mu mod k.
    ((mu/k)) = (2mu - k)/(2k), so the whole sum is an integer over 4k^2.
    """
    if k < 1:
        raise_error('NOT_A_LATTICE', k, "k harus >= 1")
    h %= k
    if k == 1 or h == 0:
        return Fraction(0)
    if k <= _NUMPY_DIRECT_LIMIT:
        mu = np.arange(1, k, dtype=np.int64)
        r = (mu * h) % k
        terms = (2 * mu - k) * np.where(r == 0, 0, 2 * r - k)
        total = int(terms.sum())
    else:
        total = 0
        for mu in range(1, k):
            r = mu * h % k
            if r:
                total += (2 * mu - k) * (2 * r - k)
    return Fraction(total, 4 * k * k)


def dedekind_sum_fast(h: int, k: int) -> Fraction:
    """Reciprocity: s(h,k) + s(k,h) = -1/4 + (h/k + k/h + 1/(hk))/12"""
    if k < 1:
        raise_error('NOT_A_LATTICE', k, "k harus >= 1")
    g = gcd(h, k)
    h, k = h // g, k // g
    h %= k
    result = Fraction(0)
    sign = 1
    while h != 0:
        result += sign * (Fraction(-1, 4) + Fraction(h * h + k * k + 1, 12 * h * k))
        sign = -sign
        h, k = k % h, h
    return result


def dedekind_sum(h: int, k: int, method: str = 'direct') -> Fraction:
    if method == 'direct':
        return dedekind_sum_direct(h, k)
    if method == 'fast':
        return dedekind_sum_fast(h, k)
    if method == 'auto':
        if k <= FieldConfig.DEDEKIND_DIRECT_LIMIT:
            return dedekind_sum_direct(h, k)
        return dedekind_sum_fast(h, k)
    raise ValueError(f"Unknown Dedekind sum method: {method}")


# ==================== RADEMACHER SYMBOL ====================
def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def psi_terms(gamma: IntMatrix2, method: str = 'auto') -> Dict[str, Fraction]:
    """The individual terms of Psi, all exact"""
    _require_sl2(gamma)
    a, b, c, d = gamma.entries
    if c == 0:
        return {'total': Fraction(b, d)}
    s = dedekind_sum(a, abs(c), method)
    trace_term = Fraction(a + d, c)
    dedekind_term = 12 * _sgn(c) * s
    sign_term = 3 * _sgn(c * (a + d))
    return {
        'trace_term': trace_term,
        'dedekind_sum': s,
        'dedekind_term': dedekind_term,
        'sign_term': Fraction(sign_term),
        'total': trace_term - dedekind_term - sign_term,
    }


def psi(gamma: IntMatrix2, method: str = 'auto') -> int:
    """Rademacher symbol; integer valued on SL2(Z)"""
    value = psi_terms(gamma, method)['total']
    if value.denominator != 1:
        raise ArithmeticFailure('INTERNAL', str(gamma), f"Psi = {value} bukan integer")
    logger.debug(f"Psi({gamma}) = {value}")
    return value.numerator


def is_hyperbolic(gamma: IntMatrix2) -> bool:
    return abs(gamma.trace()) > 2


def fixed_points(gamma: IntMatrix2):
    """Real fixed points w-, w+ of a hyperbolic element with c != 0"""
    a, b, c, d = gamma.entries
    root = mpmath.sqrt((a + d) ** 2 - 4)
    return ((a - d) - root) / (2 * c), ((a - d) + root) / (2 * c)


def geodesic(gamma: IntMatrix2) -> GeodesicCircle:
    """The semicircle |2cz - (a - d)|^2 = (a + d)^2 - 4"""
    _require_sl2(gamma)
    if not is_hyperbolic(gamma):
        raise_error('NOT_HYPERBOLIC', str(gamma))
    a, b, c, d = gamma.entries
    if c == 0:
        raise_error('PARABOLIC_AXIS', str(gamma))
    return GeodesicCircle(Fraction(a - d, 2 * c), Fraction((a + d) ** 2 - 4, 4 * c * c))
