"""
Norm Engine Module
Matriks g_L, g_kappa, gamma_{D,kappa}, konjugat gamma_0 dan gamma_1, dan
evaluasi rumus tertutup norm Petersson:
    ||theta_L||^2 = -(Psi(gamma_0) + Psi(gamma_1))/12 * log(eps_kappa)
"""

import logging
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

import mpmath

from config import FieldConfig
from core.errors import raise_error, ArithmeticFailure
from core.hecke_theta import HeckeLattice, make_hecke_lattice
from core.quadfield import (
    FieldContext, QuadLattice, QuadNum, UnitRecord,
    fmt_rational, ideal_norm_via_conjugate, lattice_intersect, lattice_scale,
)
from core.rademacher import IntMatrix2, psi

logger = logging.getLogger(__name__)


# ==================== RATIONAL MATRICES ====================
@dataclass(frozen=True)
class RatMatrix2:
    """[[a, b], [c, d]] over Q"""
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for name in ('a', 'b', 'c', 'd'):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def from_int(cls, gamma: IntMatrix2) -> 'RatMatrix2':
        return cls(*gamma.entries)

    @property
    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def trace(self) -> Fraction:
        return self.a + self.d

    def __matmul__(self, other: 'RatMatrix2') -> 'RatMatrix2':
        return RatMatrix2(self.a * other.a + self.b * other.c,
                          self.a * other.b + self.b * other.d,
                          self.c * other.a + self.d * other.c,
                          self.c * other.b + self.d * other.d)

    def inverse(self) -> 'RatMatrix2':
        det = self.det()
        if det == 0:
            raise_error('SINGULAR', str(self))
        return RatMatrix2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.entries)

    def is_upper_triangular(self) -> bool:
        return self.c == 0

    def to_int(self) -> IntMatrix2:
        if not self.is_integral():
            raise_error('NOT_INTEGRAL_MATRIX', str(self))
        return IntMatrix2(*(v.numerator for v in self.entries))

    def act(self, z):
        a, b, c, d = (mpmath.mpf(v.numerator) / v.denominator for v in self.entries)
        return (a * z + b) / (c * z + d)

    def to_list(self) -> List[List[str]]:
        return [[fmt_rational(self.a), fmt_rational(self.b)],
                [fmt_rational(self.c), fmt_rational(self.d)]]

    @classmethod
    def from_list(cls, rows) -> 'RatMatrix2':
        (a, b), (c, d) = rows
        return cls(Fraction(a), Fraction(b), Fraction(c), Fraction(d))

    def __str__(self) -> str:
        return ";".join(",".join(row) for row in self.to_list())


# ==================== MATRICES OF THE THEOREM ====================
def gamma_Dkappa(ctx: FieldContext, epsilon: UnitRecord) -> RatMatrix2:
    """[[alpha, D*beta], [beta, alpha]] for eps = alpha + beta*sqrt(D)"""
    if not epsilon.totally_positive or epsilon.value.norm() != 1:
        raise ArithmeticFailure('INTERNAL', str(epsilon.value), "eps_kappa harus totally positive norm 1")
    alpha, beta = epsilon.alpha, epsilon.beta
    return RatMatrix2(alpha, ctx.D * beta, beta, alpha)


def g_L(HL: HeckeLattice) -> RatMatrix2:
    """
    Upper-triangular [[a, b], [0, d]] from the HNF of a n 2L^v
    2*det(g_L) must equal Nm(a n 2L^v); the norm is recomputed from a*a'.
    """
    meet = lattice_intersect(HL.ideal, lattice_scale(HL.dual, 2))
    a, b, d = meet.triple
    matrix = RatMatrix2(a, b, 0, d)
    norm = ideal_norm_via_conjugate(HL.ctx, meet)
    if 2 * matrix.det() != norm:
        raise ArithmeticFailure('INTERNAL', str(meet), f"2*det(g_L) = {2 * matrix.det()} != Nm = {norm}")
    return matrix


def g_kappa(ctx: FieldContext, kappa: int) -> RatMatrix2:
    if kappa < 1:
        raise_error('NOT_A_LATTICE', kappa, "kappa harus positif")
    Dk = ctx.D * kappa
    if Dk % 2 == 0:
        return RatMatrix2(Fraction(2, Dk), 0, 0, 1)
    return RatMatrix2(Fraction(1, Dk), 1, 0, 2)


def _conjugate_closed_form(g: RatMatrix2, alpha: Fraction, beta: Fraction, D: int) -> RatMatrix2:
    a, b, d = g.a, g.b, g.d
    return RatMatrix2((a * alpha + b * beta) / a,
                      (a * a * D - b * b) / (d * a) * beta,
                      d * beta / a,
                      (a * alpha - b * beta) / a)


def conjugate(g: RatMatrix2, gamma: RatMatrix2, D: Optional[int] = None) -> RatMatrix2:
    """
    g * gamma * g^-1
    With D given, g upper-triangular and gamma of the form [[al, D*be], [be, al]],
    the explicit formula is evaluated too and must agree.
    """
    result = g @ gamma @ g.inverse()
    if D is not None and g.is_upper_triangular() and gamma.a == gamma.d and gamma.b == D * gamma.c:
        closed = _conjugate_closed_form(g, gamma.a, gamma.c, D)
        if closed != result:
            raise ArithmeticFailure('INTERNAL', str(g), f"konjugasi tidak konsisten: {result} vs {closed}")
    return result


# ==================== REPORT ====================
@dataclass(frozen=True)
class NormReport:
    D: int
    ideal: QuadLattice
    kappa: int
    epsilon: UnitRecord
    gl: RatMatrix2
    gkappa: RatMatrix2
    gamma_dk: RatMatrix2
    gamma0: IntMatrix2
    gamma1: IntMatrix2
    psi0: int
    psi1: int
    coefficient: Fraction
    norm_value: float
    norm_error: float
    vanishes: bool
    gamma_dk_integral: bool

    @property
    def label(self) -> str:
        return f"D={self.D} ideal={self.ideal} kappa={self.kappa}"

    def to_dict(self) -> Dict:
        def int_rows(m: IntMatrix2):
            return [[m.a, m.b], [m.c, m.d]]

        eps = self.epsilon
        return {
            'D': self.D,
            'ideal': [fmt_rational(v) for v in self.ideal.triple],
            'kappa': self.kappa,
            'epsilon': {
                'alpha': fmt_rational(eps.alpha),
                'beta': fmt_rational(eps.beta),
                'norm_sign': eps.norm_sign,
                'totally_positive': eps.totally_positive,
                'power_index': eps.power_index,
            },
            'g_l': self.gl.to_list(),
            'g_kappa': self.gkappa.to_list(),
            'gamma_dk': self.gamma_dk.to_list(),
            'gamma_dk_integral': self.gamma_dk_integral,
            'gamma0': int_rows(self.gamma0),
            'gamma1': int_rows(self.gamma1),
            'psi0': self.psi0,
            'psi1': self.psi1,
            'coefficient': fmt_rational(self.coefficient),
            'norm_value': self.norm_value,
            'norm_error': self.norm_error,
            'vanishes': self.vanishes,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'NormReport':
        D = int(data['D'])
        a, b, d = (Fraction(v) for v in data['ideal'])
        e = data['epsilon']
        epsilon = UnitRecord(QuadNum(Fraction(e['alpha']), Fraction(e['beta']), D),
                             int(e['norm_sign']), bool(e['totally_positive']), int(e['power_index']))
        (g0a, g0b), (g0c, g0d) = data['gamma0']
        (g1a, g1b), (g1c, g1d) = data['gamma1']
        return cls(
            D=D,
            ideal=QuadLattice(a, b, d, D),
            kappa=int(data['kappa']),
            epsilon=epsilon,
            gl=RatMatrix2.from_list(data['g_l']),
            gkappa=RatMatrix2.from_list(data['g_kappa']),
            gamma_dk=RatMatrix2.from_list(data['gamma_dk']),
            gamma0=IntMatrix2(g0a, g0b, g0c, g0d),
            gamma1=IntMatrix2(g1a, g1b, g1c, g1d),
            psi0=int(data['psi0']),
            psi1=int(data['psi1']),
            coefficient=Fraction(data['coefficient']),
            norm_value=float(data['norm_value']),
            norm_error=float(data['norm_error']),
            vanishes=bool(data['vanishes']),
            gamma_dk_integral=bool(data['gamma_dk_integral']),
        )


def _in_gamma(matrix: RatMatrix2, label: str) -> IntMatrix2:
    if not matrix.is_integral() or matrix.det() != 1:
        raise ArithmeticFailure('INTEGRALITY_VIOLATION', f"{label} = {matrix}")
    return matrix.to_int()


@contextmanager
def _interval_dps(dps: int):
    iv = mpmath.iv
    saved = iv.dps
    iv.dps = dps
    try:
        yield iv
    finally:
        iv.dps = saved


def log_epsilon(epsilon: UnitRecord, dps: Optional[int] = None):
    """log(eps) as an mpmath interval [lo, hi]"""
    if dps is None:
        dps = FieldConfig.MP_DPS
    with _interval_dps(dps) as iv:
        alpha = iv.mpf(epsilon.alpha.numerator) / epsilon.alpha.denominator
        beta = iv.mpf(epsilon.beta.numerator) / epsilon.beta.denominator
        return iv.log(alpha + beta * iv.sqrt(epsilon.value.D))


def closed_form_norm(ctx: FieldContext, ideal: QuadLattice, kappa: int) -> NormReport:
    """
    Evaluate the closed formula for (D, a, kappa)
    Returns: NormReport with exact coefficient and interval-checked normValue
    """
    HL = make_hecke_lattice(ctx, ideal, kappa)
    epsilon = HL.epsilon
    gamma = gamma_Dkappa(ctx, epsilon)
    gl = g_L(HL)
    gk = g_kappa(ctx, kappa)

    gamma0 = _in_gamma(conjugate(gk, gamma, ctx.D), "gamma0")
    gamma1 = _in_gamma(conjugate(gl, gamma, ctx.D), "gamma1")
    if gamma0.trace() != gamma.trace() or gamma1.trace() != gamma.trace():
        raise ArithmeticFailure('INTERNAL', str(gamma), "trace tidak invarian terhadap konjugasi")

    psi0, psi1 = psi(gamma0), psi(gamma1)
    coefficient = Fraction(-(psi0 + psi1), 12)
    if coefficient < 0:
        logger.warning(f"⚠️  Negative coefficient {coefficient} for D={ctx.D} ideal={ideal} kappa={kappa}")

    interval = log_epsilon(epsilon)
    with _interval_dps(FieldConfig.MP_DPS) as iv:
        value = interval * iv.mpf(coefficient.numerator) / coefficient.denominator
        norm_value = float(value.mid)
        norm_error = float(value.delta) / 2

    report = NormReport(
        D=ctx.D, ideal=ideal, kappa=kappa, epsilon=epsilon,
        gl=gl, gkappa=gk, gamma_dk=gamma,
        gamma0=gamma0, gamma1=gamma1, psi0=psi0, psi1=psi1,
        coefficient=coefficient, norm_value=norm_value, norm_error=norm_error,
        vanishes=coefficient == 0, gamma_dk_integral=gamma.is_integral(),
    )
    logger.info(f"✓ Closed form {report.label}: psi0={psi0} psi1={psi1} coefficient={coefficient}")
    return report


# ==================== GEODESIC CHECK ====================
def z_of_t(D: int, t):
    """sqrt(D) * (-sinh t + i) / cosh t, a point on |z| = sqrt(D)"""
    t = mpmath.mpf(t)
    return mpmath.sqrt(D) * mpmath.mpc(-mpmath.sinh(t), 1) / mpmath.cosh(t)


def translate_check(ctx: FieldContext, epsilon: UnitRecord, dps: Optional[int] = None) -> float:
    """|gamma_{D,kappa} z(log eps) - z(-log eps)|"""
    if dps is None:
        dps = FieldConfig.MP_DPS
    # the Moebius action cancels about eps^2 in relative size
    dps += 2 * len(str(epsilon.alpha.numerator))
    with mpmath.workdps(dps):
        t = mpmath.log(epsilon.value.to_mpf())
        moved = gamma_Dkappa(ctx, epsilon).act(z_of_t(ctx.D, t))
        return float(abs(moved - z_of_t(ctx.D, -t)))
