"""
Hecke Theta Module
Lattice L = (a, Nm/N), dual lattice, grup diskriminan, dan ekspansi q eksak
dari theta series Hecke (vector-valued, weight one)
"""

import logging
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor, sqrt
from typing import Dict, List, Sequence, Tuple

from config import ThetaConfig
from core.errors import raise_error, ArithmeticFailure
from core.quadfield import (
    FieldContext, QuadLattice, QuadNum, UnitRecord,
    epsilon_kappa, fmt_rational, is_integral_ideal, lattice_inverse_of_principal, lattice_mul,
)

logger = logging.getLogger(__name__)

CosetKey = Tuple[int, int]
Term = Tuple[Fraction, int]


@dataclass(frozen=True)
class HeckeLattice:
    ctx: FieldContext
    ideal: QuadLattice
    kappa: int
    N: Fraction
    dual: QuadLattice
    epsilon: UnitRecord = field(repr=False)

    def Q(self, value: QuadNum) -> Fraction:
        return value.norm() / self.N

    def pairing(self, first: QuadNum, second: QuadNum) -> Fraction:
        return (first * second.conj()).trace() / self.N


def _check_lattice_invariants(HL: HeckeLattice):
    ideal_basis = HL.ideal.basis
    for e in ideal_basis:
        if HL.Q(e).denominator != 1:
            raise ArithmeticFailure('INTERNAL', str(HL.ideal), "Q tidak integer pada ideal")
    for e in ideal_basis:
        for f in HL.dual.basis:
            if HL.pairing(e, f).denominator != 1:
                raise ArithmeticFailure('INTERNAL', str(HL.dual), "pairing tidak integral")


def make_hecke_lattice(ctx: FieldContext, ideal: QuadLattice, kappa: int) -> HeckeLattice:
    """
    L = (a, Nm/N) with N = Nm(a)/kappa, dual (kappa*d)^-1 a
    """
    if not is_integral_ideal(ctx, ideal):
        raise_error('NOT_INTEGRAL_IDEAL', str(ideal))
    if not isinstance(kappa, int) or kappa < 1:
        raise_error('NOT_A_LATTICE', kappa, "kappa harus integer positif")

    N = ideal.ideal_norm() / kappa
    dual = lattice_mul(lattice_inverse_of_principal(ctx, ctx.num(0, kappa)), ideal)
    epsilon = epsilon_kappa(ctx, ideal, kappa)
    HL = HeckeLattice(ctx, ideal, kappa, N, dual, epsilon)
    _check_lattice_invariants(HL)
    logger.debug(f"Hecke lattice D={ctx.D} ideal={ideal} kappa={kappa}: N={N}, dual={dual}")
    return HL


# ==================== DISCRIMINANT GROUP ====================
@dataclass(frozen=True)
class DiscriminantGroup:
    """L^v / L via the HNF coordinates of L^v: L = <(p, t), (0, s)>"""
    p: int
    t: int
    s: int
    keys: Tuple[CosetKey, ...]
    representatives: Tuple[QuadNum, ...]
    negation: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.keys)


def _integer(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise ArithmeticFailure('INTERNAL', what, f"{value} bukan integer")
    return value.numerator


def _relative_hnf(HL: HeckeLattice) -> Tuple[int, int, int]:
    dual, ideal = HL.dual, HL.ideal
    p = _integer(ideal.a / dual.a, "a_L / a_dual")
    t = _integer((ideal.b - p * dual.b) / dual.d, "t")
    s = _integer(ideal.d / dual.d, "d_L / d_dual")
    return p, t, s


def _reduce(m: int, n: int, p: int, t: int, s: int) -> CosetKey:
    i = m % p
    q = (m - i) // p
    return i, (n - q * t) % s


def coset_of(HL: HeckeLattice, value: QuadNum) -> CosetKey:
    """Reduction map L^v -> L^v/L"""
    m, n = HL.dual.coordinates(value)
    if m.denominator != 1 or n.denominator != 1:
        raise_error('NOT_A_LATTICE', str(value), "bukan elemen dual lattice")
    p, t, s = _relative_hnf(HL)
    return _reduce(m.numerator, n.numerator, p, t, s)


def discriminant_group(HL: HeckeLattice) -> DiscriminantGroup:
    p, t, s = _relative_hnf(HL)
    expected = HL.kappa * HL.kappa * HL.ctx.D
    if p * s != expected:
        raise ArithmeticFailure('INTERNAL', p * s, f"|L^v/L| harus {expected}")
    e1, e2 = HL.dual.basis
    keys = tuple((i, j) for i in range(p) for j in range(s))
    reps = tuple(i * e1 + j * e2 for i, j in keys)
    index = {key: pos for pos, key in enumerate(keys)}
    negation = tuple(index[_reduce(-i, -j, p, t, s)] for i, j in keys)
    return DiscriminantGroup(p, t, s, keys, reps, negation)


def quadratic_value(HL: HeckeLattice, value: QuadNum) -> Fraction:
    """Q(mu) mod 1"""
    q = HL.Q(value)
    return q - floor(q)


# ==================== ORBIT ENUMERATION ====================
def _in_symmetric_window(value: QuadNum, eps: QuadNum) -> bool:
    """1/eps <= value/value' < eps"""
    conj = value.conj()
    return (eps * value - conj).sign() >= 0 and (eps * conj - value).sign() > 0


def _scan_rows(HL: HeckeLattice, X: Fraction, rows: Sequence[int],
               radius: float, box_scale: float) -> List[QuadNum]:
    D = HL.ctx.D
    a, b, d = HL.dual.triple
    XN = X * HL.N
    XN_f = float(XN)
    eps = HL.epsilon.value
    sqrt_d = sqrt(D)
    found = []
    for m in rows:
        y = m * a
        y_f = float(y)
        x_lo = sqrt_d * abs(y_f)
        x_hi = min(sqrt(D * y_f * y_f + XN_f), radius)
        if x_hi < x_lo:
            continue
        x_hi = x_lo + (x_hi - x_lo) * box_scale
        n_lo = floor((x_lo - float(m * b)) / float(d)) - 1
        n_hi = ceil((x_hi - float(m * b)) / float(d)) + 1
        for n in range(n_lo, n_hi + 1):
            value = QuadNum(m * b + n * d, y, D)
            if not value.is_totally_positive():
                continue
            if HL.Q(value) > X:
                continue
            if not _in_symmetric_window(value, eps):
                continue
            if value.y < 0:
                value = eps * value
            found.append(value)
    return found


def orbit_representatives(HL: HeckeLattice, X, box_scale: float = None,
                          workers: int = 1) -> List[QuadNum]:
    """
    One representative per eps_kappa-orbit of totally positive lambda in L^v
    with Nm(lambda)/N <= X, normalised to 0 <= log(lambda/lambda')/2 < log(eps)
    """
    X = Fraction(X)
    if X <= 0:
        return []
    if box_scale is None:
        box_scale = ThetaConfig.BOX_SCALE

    D = HL.ctx.D
    a = HL.dual.a
    eps_f = float(HL.epsilon.value)
    # lambda, lambda' <= sqrt(X N eps) inside the symmetric window
    radius = sqrt(float(X * HL.N) * eps_f) * box_scale
    y_max = radius / (2 * sqrt(D))
    m_max = int(ceil(y_max / float(a))) + 1
    rows = list(range(-m_max, m_max + 1))

    if workers > 1 and len(rows) > workers:
        size = ceil(len(rows) / workers)
        chunks = [rows[k:k + size] for k in range(0, len(rows), size)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(lambda chunk: _scan_rows(HL, X, chunk, radius, box_scale), chunks)
            found = [v for part in parts for v in part]
    else:
        found = _scan_rows(HL, X, rows, radius, box_scale)

    found.sort(key=lambda v: (v.norm(), v.y, v.x))
    logger.debug(f"{len(found)} orbit representatives up to X={X}")
    return found


# ==================== THETA SERIES ====================
@dataclass(frozen=True)
class ThetaSeries:
    D: int
    cosets: Tuple[QuadNum, ...]
    terms: Tuple[Tuple[Term, ...], ...]
    precision: Fraction

    def component(self, index: int) -> Tuple[Term, ...]:
        return self.terms[index]

    def nonzero_cosets(self) -> List[int]:
        return [i for i, t in enumerate(self.terms) if t]

    def is_zero(self) -> bool:
        return not self.nonzero_cosets()

    def to_dict(self) -> Dict:
        return {
            'D': self.D,
            'cosets': [
                {'rep': str(rep), 'terms': [[fmt_rational(e), c] for e, c in terms]}
                for rep, terms in zip(self.cosets, self.terms)
            ],
            'precision': fmt_rational(self.precision),
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'ThetaSeries':
        from utils.parsers import parse_quadnum
        D = int(data['D'])
        cosets = tuple(parse_quadnum(c['rep'], D) for c in data['cosets'])
        terms = tuple(tuple((Fraction(e), int(c)) for e, c in entry['terms'])
                      for entry in data['cosets'])
        return cls(D, cosets, terms, Fraction(data['precision']))


def theta_expansion(HL: HeckeLattice, X, box_scale: float = None,
                    workers: int = 1) -> ThetaSeries:
    """+1 at [lambda], -1 at [-lambda] for each totally positive orbit"""
    X = Fraction(X)
    group = discriminant_group(HL)
    index = {key: pos for pos, key in enumerate(group.keys)}
    coeffs: List[Dict[Fraction, int]] = [defaultdict(int) for _ in group.keys]

    for value in orbit_representatives(HL, X, box_scale, workers):
        exponent = HL.Q(value)
        coeffs[index[coset_of(HL, value)]][exponent] += 1
        coeffs[index[coset_of(HL, -value)]][exponent] -= 1

    terms = tuple(
        tuple((e, c) for e, c in sorted(component.items()) if c != 0)
        for component in coeffs
    )
    series = ThetaSeries(HL.ctx.D, group.representatives, terms, X)
    logger.info(f"✓ Theta expansion D={HL.ctx.D} kappa={HL.kappa}: "
                f"{len(series.nonzero_cosets())}/{len(group)} nonzero cosets up to X={X}")
    return series


def relabel_by_multiplier(source: HeckeLattice, target: HeckeLattice,
                          multiplier: QuadNum) -> List[int]:
    """Index map L^v/L -> (mu L)^v/(mu L), mu totally positive"""
    src = discriminant_group(source)
    dst = discriminant_group(target)
    index = {key: pos for pos, key in enumerate(dst.keys)}
    return [index[coset_of(target, multiplier * rep)] for rep in src.representatives]


# ==================== ETA SQUARED ====================
def eta_squared_coeffs(X) -> List[Term]:
    """q^(1/12) * prod (1 - q^n)^2 up to exponent X"""
    X = Fraction(X)
    offset = Fraction(1, 12)
    if X < offset:
        return []
    top = floor(X - offset)
    coeffs = [0] * (top + 1)
    coeffs[0] = 1
    for n in range(1, top + 1):
        for _ in range(2):
            for j in range(top, n - 1, -1):
                coeffs[j] -= coeffs[j - n]
    return [(offset + k, c) for k, c in enumerate(coeffs) if c != 0]
