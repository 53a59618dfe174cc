"""
Quadratic Field Module
Aritmetika eksak di lapangan kuadrat real F = Q(sqrt D): elemen, lattice HNF,
ideal, unit fundamental dan unit epsilon_kappa
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, List, Optional, Tuple, Union

import mpmath
from sympy import factorint

from config import FieldConfig
from core.errors import raise_error, ArithmeticFailure

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def fmt_rational(value: Fraction) -> str:
    """Exact rational as a "p/q" string (denominator always written)"""
    value = _frac(value)
    return f"{value.numerator}/{value.denominator}"


# ==================== ELEMENTS ====================
@dataclass(frozen=True)
class QuadNum:
    """x + y*sqrt(D) with exact rational coordinates"""
    x: Fraction
    y: Fraction
    D: int

    def __post_init__(self):
        object.__setattr__(self, 'x', _frac(self.x))
        object.__setattr__(self, 'y', _frac(self.y))

    def _coerce(self, other) -> 'QuadNum':
        if isinstance(other, QuadNum):
            if other.D != self.D:
                raise_error('CONTEXT_MISMATCH', f"D={self.D} vs D={other.D}")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadNum(other, 0, self.D)
        return NotImplemented

    def __add__(self, other) -> 'QuadNum':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadNum(self.x + other.x, self.y + other.y, self.D)

    __radd__ = __add__

    def __sub__(self, other) -> 'QuadNum':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadNum(self.x - other.x, self.y - other.y, self.D)

    def __rsub__(self, other) -> 'QuadNum':
        return (-self) + other

    def __neg__(self) -> 'QuadNum':
        return QuadNum(-self.x, -self.y, self.D)

    def __mul__(self, other) -> 'QuadNum':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadNum(self.x * other.x + self.D * self.y * other.y,
                       self.x * other.y + self.y * other.x, self.D)

    __rmul__ = __mul__

    def __truediv__(self, other) -> 'QuadNum':
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, exponent: int) -> 'QuadNum':
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = QuadNum(1, 0, self.D)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __bool__(self) -> bool:
        return self.x != 0 or self.y != 0

    def conj(self) -> 'QuadNum':
        return QuadNum(self.x, -self.y, self.D)

    def norm(self) -> Fraction:
        return self.x * self.x - self.D * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def inverse(self) -> 'QuadNum':
        n = self.norm()
        if n == 0:
            raise_error('ZERO_SCALAR', str(self))
        return QuadNum(self.x / n, -self.y / n, self.D)

    def sign(self) -> int:
        """Exact sign of x + y*sqrt(D) under the real embedding sqrt(D) > 0"""
        sx = (self.x > 0) - (self.x < 0)
        sy = (self.y > 0) - (self.y < 0)
        if sy == 0 or sx == sy:
            return sx if sx else sy
        if sx == 0:
            return sy
        # opposite signs: the larger square wins
        return sx if self.x * self.x > self.D * self.y * self.y else sy

    def is_totally_positive(self) -> bool:
        return self.x > 0 and self.x * self.x > self.D * self.y * self.y

    def to_mpf(self, sqrt_d=None):
        if sqrt_d is None:
            sqrt_d = mpmath.sqrt(self.D)
        return (mpmath.mpf(self.x.numerator) / self.x.denominator
                + mpmath.mpf(self.y.numerator) / self.y.denominator * sqrt_d)

    def __float__(self) -> float:
        return float(self.to_mpf())

    def __str__(self) -> str:
        y = self.y
        sign = '-' if y < 0 else '+'
        return f"{fmt_rational(self.x)}{sign}{fmt_rational(abs(y))}*sqrtD"


# ==================== LATTICES ====================
@dataclass(frozen=True)
class QuadLattice:
    """The lattice Z(a*sqrt(D) + b) + Z*d in canonical form a, d > 0, 0 <= b < d"""
    a: Fraction
    b: Fraction
    d: Fraction
    D: int

    def __post_init__(self):
        for name in ('a', 'b', 'd'):
            object.__setattr__(self, name, _frac(getattr(self, name)))
        if self.a <= 0 or self.d <= 0 or not (0 <= self.b < self.d):
            raise_error('NOT_A_LATTICE', f"({self.a}, {self.b}, {self.d})",
                        "butuh a > 0, d > 0, 0 <= b < d")

    @classmethod
    def from_triple(cls, a, b, d, D: int) -> 'QuadLattice':
        """Build from any triple with a, d != 0; b is reduced modulo d"""
        a, b, d = _frac(a), _frac(b), _frac(d)
        if a == 0 or d == 0:
            raise_error('NOT_A_LATTICE', f"({a}, {b}, {d})")
        return lattice_from_generators([QuadNum(b, a, D), QuadNum(d, 0, D)])

    @property
    def triple(self) -> Tuple[Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.d)

    @property
    def basis(self) -> Tuple[QuadNum, QuadNum]:
        return (QuadNum(self.b, self.a, self.D), QuadNum(self.d, 0, self.D))

    def coordinates(self, value: QuadNum) -> Tuple[Fraction, Fraction]:
        """Coordinates (m, n) with value = m*(a*sqrt(D)+b) + n*d"""
        m = value.y / self.a
        n = (value.x - m * self.b) / self.d
        return m, n

    def ideal_norm(self) -> Fraction:
        return 2 * self.a * self.d

    def __str__(self) -> str:
        return ",".join(fmt_rational(v) for v in self.triple)


def py_xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """x*a + y*b == g"""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def lattice_from_generators(gens: Iterable[QuadNum]) -> QuadLattice:
    """
    HNF reduction of a generating set
    Returns: canonical QuadLattice, or RANK_DEFICIENT
    """
    gens = list(gens)
    if not gens:
        raise_error('RANK_DEFICIENT', "[]")
    D = gens[0].D
    for g in gens:
        if g.D != D:
            raise_error('CONTEXT_MISMATCH', f"D={D} vs D={g.D}")

    den = 1
    for g in gens:
        for c in (g.x, g.y):
            den = den * c.denominator // gcd(den, c.denominator)

    # integer vectors (Y, X) on the basis {sqrt(D)/den, 1/den}
    vectors = [(int(g.y * den), int(g.x * den)) for g in gens]

    pivot: Optional[Tuple[int, int]] = None
    rational_part = 0
    for Y, X in vectors:
        if Y == 0:
            rational_part = gcd(rational_part, X)
            continue
        if pivot is None:
            pivot = (Y, X)
            continue
        pY, pX = pivot
        u, v, g = py_xgcd(pY, Y)
        pivot = (g, u * pX + v * X)
        rational_part = gcd(rational_part, (pY // g) * X - (Y // g) * pX)

    if pivot is None or rational_part == 0:
        raise_error('RANK_DEFICIENT', ", ".join(str(g) for g in gens))

    pY, pX = pivot
    if pY < 0:
        pY, pX = -pY, -pX
    d_int = abs(rational_part)
    return QuadLattice(Fraction(pY, den), Fraction(pX % d_int, den), Fraction(d_int, den), D)


def member(lattice: QuadLattice, value: QuadNum) -> bool:
    if value.D != lattice.D:
        raise_error('CONTEXT_MISMATCH', f"D={lattice.D} vs D={value.D}")
    m, n = lattice.coordinates(value)
    return m.denominator == 1 and n.denominator == 1


def lattice_sum(first: QuadLattice, second: QuadLattice) -> QuadLattice:
    return lattice_from_generators(first.basis + second.basis)


def lattice_dual(lattice: QuadLattice) -> QuadLattice:
    """Dual under the dot product of (x, y) coordinates"""
    a, b, d = lattice.triple
    return lattice_from_generators([
        QuadNum(0, 1 / a, lattice.D),
        QuadNum(1 / d, -b / (a * d), lattice.D),
    ])


def lattice_intersect(first: QuadLattice, second: QuadLattice) -> QuadLattice:
    """(A n B)* = A* + B*, so the intersection is a dual of a sum"""
    if first.D != second.D:
        raise_error('CONTEXT_MISMATCH', f"D={first.D} vs D={second.D}")
    if first == second:
        return first
    return lattice_dual(lattice_sum(lattice_dual(first), lattice_dual(second)))


def lattice_scale(lattice: QuadLattice, scalar: Union[QuadNum, Rational]) -> QuadLattice:
    if not isinstance(scalar, QuadNum):
        scalar = QuadNum(scalar, 0, lattice.D)
    if not scalar:
        raise_error('ZERO_SCALAR', str(scalar))
    e1, e2 = lattice.basis
    return lattice_from_generators([scalar * e1, scalar * e2])


def lattice_mul(first: QuadLattice, second: QuadLattice) -> QuadLattice:
    """Module generated by pairwise products of basis vectors"""
    return lattice_from_generators([x * y for x in first.basis for y in second.basis])


def lattice_conjugate(lattice: QuadLattice) -> QuadLattice:
    return lattice_from_generators([e.conj() for e in lattice.basis])


# ==================== CONTEXT ====================
def is_squarefree(n: int) -> bool:
    return all(exp == 1 for exp in factorint(n).values())


def is_fundamental_discriminant(D: int) -> bool:
    if not isinstance(D, int) or D <= 1:
        return False
    if D % 4 == 1:
        return is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def fundamental_discriminants(dmax: int) -> List[int]:
    return [D for D in range(2, dmax + 1) if is_fundamental_discriminant(D)]


@dataclass(frozen=True)
class FieldContext:
    D: int
    sqrtD_approx: mpmath.mpf = field(repr=False)
    ring_hnf: QuadLattice = field(repr=False)

    @property
    def omega(self) -> QuadNum:
        """Generator of O_F over Z: sqrt(D)/2 or (1 + sqrt(D))/2"""
        return self.ring_hnf.basis[0]

    def num(self, x, y=0) -> QuadNum:
        return QuadNum(x, y, self.D)


def make_context(D: int) -> FieldContext:
    if not is_fundamental_discriminant(D):
        raise_error('NOT_FUNDAMENTAL', D)
    with mpmath.workdps(FieldConfig.MP_DPS):
        sqrt_d = mpmath.sqrt(D)
    b = Fraction(0) if D % 2 == 0 else Fraction(1, 2)
    ring = QuadLattice(Fraction(1, 2), b, Fraction(1), D)
    logger.debug(f"Context D={D}, ring HNF {ring}")
    return FieldContext(D, sqrt_d, ring)


def ring(ctx: FieldContext) -> QuadLattice:
    return ctx.ring_hnf


def different(ctx: FieldContext) -> QuadLattice:
    return lattice_scale(ctx.ring_hnf, ctx.num(0, 1))


def lattice_inverse_of_principal(ctx: FieldContext, generator: QuadNum) -> QuadLattice:
    """(mu)^-1 = mu^-1 * O_F"""
    if not generator:
        raise_error('ZERO_SCALAR', str(generator))
    return lattice_scale(ctx.ring_hnf, generator.inverse())


def is_ideal(ctx: FieldContext, lattice: QuadLattice) -> bool:
    """O_F-module test: closed under multiplication by omega"""
    return all(member(lattice, ctx.omega * e) for e in lattice.basis)


def is_integral_ideal(ctx: FieldContext, lattice: QuadLattice) -> bool:
    return is_ideal(ctx, lattice) and all(member(ctx.ring_hnf, e) for e in lattice.basis)


def ideal_norm_via_conjugate(ctx: FieldContext, lattice: QuadLattice) -> Fraction:
    """Nm(a) from a * a' = Nm(a) O_F"""
    product = lattice_mul(lattice, lattice_conjugate(lattice))
    n = product.d / ctx.ring_hnf.d
    if product != lattice_scale(ctx.ring_hnf, n):
        raise ArithmeticFailure('INTERNAL', str(lattice), "a*a' bukan ideal rasional")
    return n


def ideal_inverse(ctx: FieldContext, lattice: QuadLattice) -> QuadLattice:
    """a^-1 = a' / Nm(a) for fractional ideals of the maximal order"""
    if not is_ideal(ctx, lattice):
        raise_error('NOT_INTEGRAL_IDEAL', str(lattice), "bukan O_F-modul")
    return lattice_scale(lattice_conjugate(lattice), 1 / lattice.ideal_norm())


# ==================== UNITS ====================
@dataclass(frozen=True)
class UnitRecord:
    value: QuadNum
    norm_sign: int
    totally_positive: bool
    power_index: int

    def __post_init__(self):
        if self.value.norm() not in (1, -1):
            raise ArithmeticFailure('INTERNAL', str(self.value), "norm bukan +-1")

    @property
    def alpha(self) -> Fraction:
        return self.value.x

    @property
    def beta(self) -> Fraction:
        return self.value.y


def _continued_fraction_terms(D: int, P: int, Q: int):
    """Partial quotients of (P + sqrt(D))/Q, Q | D - P^2, Q > 0"""
    s = isqrt(D)
    while True:
        if Q <= 0:
            raise ArithmeticFailure('INTERNAL', D, "Q non-positif di ekspansi pecahan berlanjut")
        a = (P + s) // Q
        yield a
        P = a * Q - P
        Q = (D - P * P) // Q


def fundamental_unit(ctx: FieldContext) -> UnitRecord:
    """
    Smallest unit > 1 of O_F.
    Units x + y*omega have x/y close to -omega', so they show up among
    the convergents of -omega' = (sqrt(D) - (D mod 2))/2.
    """
    D = ctx.D
    P0 = -(D % 2)
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    limit = 4 * D + 16
    for step, a in enumerate(_continued_fraction_terms(D, P0, 2)):
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        candidate = h + k * ctx.omega
        n = candidate.norm()
        if n in (1, -1):
            logger.debug(f"Fundamental unit D={D} at convergent {step}: {candidate}")
            return UnitRecord(candidate, int(n), n == 1, 1)
        if step > limit:
            break
    raise ArithmeticFailure('INTERNAL', D, "unit fundamental tidak ditemukan")


def totally_positive_generator(ctx: FieldContext) -> UnitRecord:
    unit = fundamental_unit(ctx)
    if unit.norm_sign == 1:
        return unit
    return UnitRecord(unit.value * unit.value, 1, True, 2)


def epsilon_kappa(ctx: FieldContext, ideal: QuadLattice, kappa: int,
                  cap: Optional[int] = None) -> UnitRecord:
    """
    Smallest totally positive unit e > 1 with e - 1 in kappa*d
    Scans powers of the totally positive generator of the unit group.
    """
    if not is_integral_ideal(ctx, ideal):
        raise_error('NOT_INTEGRAL_IDEAL', str(ideal))
    if kappa < 1:
        raise_error('NOT_A_LATTICE', kappa, "kappa harus positif")
    if cap is None:
        cap = FieldConfig.EPSILON_SEARCH_CAP

    base = totally_positive_generator(ctx)
    target = lattice_scale(ctx.ring_hnf, ctx.num(0, kappa))
    power = base.value
    for exponent in range(1, cap + 1):
        if member(target, power - 1):
            logger.info(f"✓ epsilon_kappa D={ctx.D} kappa={kappa} found at power {exponent}: {power}")
            return UnitRecord(power, 1, True, exponent * base.power_index)
        power = power * base.value
    raise ArithmeticFailure('SEARCH_CAP', cap)
