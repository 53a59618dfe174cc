"""
Oracles Module
Verifikasi numerik: E2* dan integral siklus (Psi via teorema Meyer), serta
kuadratur langsung norm Petersson pada domain fundamental standar
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from numpy.polynomial.legendre import leggauss

from config import OracleConfig, PerformanceConfig, SUCCESS_MESSAGES
from core.errors import raise_error
from core.hecke_theta import ThetaSeries, eta_squared_coeffs
from core.norm_engine import NormReport
from core.rademacher import IntMatrix2, geodesic

logger = logging.getLogger(__name__)

Term = Tuple[Fraction, int]

# Im(tau) >= sqrt(3)/2 on the standard fundamental domain
_V_FLOOR = np.sqrt(3.0) / 2
_REDUCTION_STEPS = 100000
_PANEL_LENGTH = 0.5


@dataclass(frozen=True)
class QuadratureConfig:
    gauss_nodes: int = OracleConfig.GAUSS_NODES
    series_terms: int = OracleConfig.SERIES_TERMS
    v_max: float = OracleConfig.V_MAX
    v_split: float = OracleConfig.V_SPLIT
    u_nodes: int = OracleConfig.U_NODES
    v_nodes: int = OracleConfig.V_NODES
    tolerance: float = OracleConfig.PETERSSON_TOLERANCE
    cycle_tolerance: float = OracleConfig.CYCLE_TOLERANCE
    mp_dps: int = OracleConfig.MP_DPS
    chunks: int = PerformanceConfig.QUADRATURE_CHUNKS
    workers: int = 1

    def __post_init__(self):
        for name in ('gauss_nodes', 'series_terms', 'u_nodes', 'v_nodes', 'mp_dps', 'chunks', 'workers'):
            if getattr(self, name) < 1:
                raise_error('INVALID_CONFIG', f"{name}={getattr(self, name)}")
        if not (0 < self.tolerance < 1) or not (0 < self.cycle_tolerance < 1):
            raise_error('INVALID_CONFIG', f"tolerance={self.tolerance}, cycle_tolerance={self.cycle_tolerance}")
        if not (_V_FLOOR < self.v_split < self.v_max):
            raise_error('INVALID_CONFIG', f"v_split={self.v_split}, v_max={self.v_max}")

    @classmethod
    def from_defaults(cls, **overrides) -> 'QuadratureConfig':
        """Current OracleConfig values (user settings applied) plus overrides"""
        values = dict(
            gauss_nodes=OracleConfig.GAUSS_NODES,
            series_terms=OracleConfig.SERIES_TERMS,
            v_max=OracleConfig.V_MAX,
            v_split=OracleConfig.V_SPLIT,
            u_nodes=OracleConfig.U_NODES,
            v_nodes=OracleConfig.V_NODES,
            tolerance=OracleConfig.PETERSSON_TOLERANCE,
            cycle_tolerance=OracleConfig.CYCLE_TOLERANCE,
            mp_dps=OracleConfig.MP_DPS,
            chunks=PerformanceConfig.QUADRATURE_CHUNKS,
        )
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


# ==================== E2* ====================
def reduce_to_fundamental_domain(z) -> Tuple[mpmath.mpc, IntMatrix2]:
    """w = g z with w in the standard fundamental domain"""
    z = mpmath.mpc(z)
    g = IntMatrix2(1, 0, 0, 1)
    # points on |z| = 1 must not bounce between S and T
    slack = mpmath.mpf(10) ** (5 - mpmath.mp.dps)
    for _ in range(_REDUCTION_STEPS):
        n = -int(mpmath.floor(z.real + mpmath.mpf(1) / 2))
        if n:
            z = z + n
            g = IntMatrix2(1, n, 0, 1) @ g
        if abs(z) < 1 - slack:
            z = -1 / z
            g = IntMatrix2(0, -1, 1, 0) @ g
        else:
            return z, g
    raise_error('NOT_UPPER_HALF_PLANE', z, "reduksi tidak konvergen")


def _e2_star_series(w, terms: int):
    q = mpmath.exp(2j * mpmath.pi * w)
    total = mpmath.mpc(0)
    qn = mpmath.mpc(1)
    for n in range(1, terms + 1):
        qn *= q
        total += n * qn / (1 - qn)
    return -3 / (mpmath.pi * w.imag) + 1 - 24 * total


def e2_star(z, cfg: Optional[QuadratureConfig] = None):
    """
    E2*(z) = -3/(pi y) + 1 - 24 sum n q^n/(1 - q^n)
    Evaluated at w = g z in the fundamental domain, then E2*(z) = E2*(w)/(cz + d)^2.
    """
    cfg = cfg or QuadratureConfig.from_defaults()
    with mpmath.workdps(cfg.mp_dps):
        z = mpmath.mpc(z)
        if z.imag <= 0:
            raise_error('NOT_UPPER_HALF_PLANE', z)
        w, g = reduce_to_fundamental_domain(z)
        return _e2_star_series(w, cfg.series_terms) / (g.c * z + g.d) ** 2


# ==================== CYCLE INTEGRALS ====================
def _arc_point(center, radius, s):
    """Arclength parametrisation of the semicircle; s = 0 is the top"""
    return center + radius * mpmath.mpc(-mpmath.tanh(s), mpmath.sech(s))


def _arc_velocity(radius, s):
    return radius * mpmath.mpc(-mpmath.sech(s) ** 2, -mpmath.sech(s) * mpmath.tanh(s))


def cycle_integral(gamma: IntMatrix2, cfg: Optional[QuadratureConfig] = None,
                   base_s: float = 0.0) -> float:
    """
    Integral of E2*(z) dz along C_gamma from z0 = z(base_s) to gamma z0
    Returns: real part; close to Psi(gamma) by Meyer's theorem
    """
    cfg = cfg or QuadratureConfig.from_defaults()
    circle = geodesic(gamma)
    nodes, weights = leggauss(cfg.gauss_nodes)

    with mpmath.workdps(cfg.mp_dps):
        center = mpmath.mpf(circle.center.numerator) / circle.center.denominator
        radius = circle.radius()
        s0 = mpmath.mpf(base_s)
        end = gamma.act(_arc_point(center, radius, s0))
        s1 = mpmath.atanh(-(end.real - center) / radius)

        panels = max(1, int(mpmath.ceil(abs(s1 - s0) / _PANEL_LENGTH)))
        step = (s1 - s0) / panels
        total = mpmath.mpc(0)
        for k in range(panels):
            lo = s0 + k * step
            for x, wgt in zip(nodes, weights):
                s = lo + step * (mpmath.mpf(float(x)) + 1) / 2
                z = _arc_point(center, radius, s)
                total += mpmath.mpf(float(wgt)) * e2_star(z, cfg) * _arc_velocity(radius, s)
        total *= step / 2

    logger.debug(f"cycle_integral({gamma}) = {total} over s in [{s0}, {s1}] ({panels} panels)")
    return float(total.real)


# ==================== PETERSSON NORM ====================
@dataclass(frozen=True)
class PeterssonEstimate:
    value: float
    quadrature_error: float
    tail_bound: float
    truncation_bound: float

    @property
    def error(self) -> float:
        return self.quadrature_error + self.tail_bound + self.truncation_bound


def _component_arrays(components: Sequence[Sequence[Term]]) -> List[Tuple[np.ndarray, np.ndarray]]:
    arrays = []
    for terms in components:
        if not terms:
            continue
        exps = np.array([float(e) for e, _ in terms])
        coeffs = np.array([float(c) for _, c in terms])
        arrays.append((exps, coeffs))
    return arrays


def _abs_square_sum(arrays, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """sum_mu |theta_mu(u + iv)|^2 on matching arrays u, v"""
    total = np.zeros(np.broadcast(u, v).shape)
    for exps, coeffs in arrays:
        phase = np.exp(2j * np.pi * np.multiply.outer(u, exps))
        decay = np.exp(-2 * np.pi * np.multiply.outer(v, exps))
        values = (phase * decay) @ coeffs
        total += np.abs(values) ** 2
    return total


def _lower_piece(arrays, u: np.ndarray, u_w: np.ndarray, t: np.ndarray, t_w: np.ndarray,
                 v_split: float) -> float:
    """u in chunk, sqrt(1 - u^2) <= v <= v_split"""
    lo = np.sqrt(1 - u ** 2)
    half = (v_split - lo) / 2
    V = lo[:, None] + half[:, None] * (t[None, :] + 1)
    U = np.broadcast_to(u[:, None], V.shape)
    integrand = _abs_square_sum(arrays, U, V) / V
    return float(np.sum(u_w[:, None] * half[:, None] * t_w[None, :] * integrand))


def _upper_piece(arrays, u: np.ndarray, u_w: np.ndarray, t: np.ndarray, t_w: np.ndarray,
                 v_split: float, v_max: float) -> float:
    half = (v_max - v_split) / 2
    v = v_split + half * (t + 1)
    U, V = np.meshgrid(u, v, indexing='ij')
    integrand = _abs_square_sum(arrays, U, V) / V
    return float(half * np.sum(u_w[:, None] * t_w[None, :] * integrand))


def _quadrature(arrays, cfg: QuadratureConfig, u_nodes: int, v_nodes: int) -> float:
    x, xw = leggauss(u_nodes)
    u, u_w = x / 2, xw / 2
    t, t_w = leggauss(v_nodes)

    chunks = [c for c in np.array_split(np.arange(u_nodes), min(cfg.chunks, u_nodes)) if len(c)]

    def run(idx):
        return (_lower_piece(arrays, u[idx], u_w[idx], t, t_w, cfg.v_split)
                + _upper_piece(arrays, u[idx], u_w[idx], t, t_w, cfg.v_split, cfg.v_max))

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            partials = list(pool.map(run, chunks))
    else:
        partials = [run(idx) for idx in chunks]
    # fixed reduction order
    return float(sum(partials))


def _tail_bound(arrays, v_max: float) -> float:
    """v > v_max: |theta_mu| <= S_mu exp(-2 pi e_min v)"""
    bound = 0.0
    for exps, coeffs in arrays:
        e_min = float(exps.min())
        S = float(np.abs(coeffs).sum())
        c = 4 * np.pi * e_min
        bound += S * S * np.exp(-c * v_max) / (c * v_max)
    return bound


def _truncation_bound(arrays, precision: Fraction, v_max: float) -> float:
    """Terms beyond q^X, with a coefficient envelope growing linearly in the exponent"""
    X = float(precision)
    q0 = np.exp(-2 * np.pi * _V_FLOOR)
    biggest = max([float(np.abs(c).max()) for _, c in arrays] + [1.0])
    envelope = biggest * (X + 2)
    missing = envelope * q0 ** X / (1 - q0) ** 2
    area = np.log(v_max / _V_FLOOR)
    bound = 0.0
    for exps, coeffs in arrays:
        S = float(np.abs(coeffs).sum()) * q0 ** float(exps.min())
        bound += (2 * S * missing + missing ** 2) * area
    if not arrays:
        bound = missing ** 2 * area
    return float(bound)


def petersson_components(components: Sequence[Sequence[Term]], precision,
                         cfg: Optional[QuadratureConfig] = None) -> PeterssonEstimate:
    """Integral of v * sum |theta_mu|^2 over the fundamental domain, measure du dv / v^2"""
    cfg = cfg or QuadratureConfig.from_defaults()
    precision = Fraction(precision)
    arrays = _component_arrays(components)

    truncation = _truncation_bound(arrays, precision, cfg.v_max)
    if not arrays:
        return PeterssonEstimate(0.0, 0.0, 0.0, truncation)
    if truncation > cfg.tolerance:
        raise_error('PRECISION_TOO_LOW', f"X={precision}",
                    f"batas truncation {truncation:.3e} > toleransi {cfg.tolerance}")

    value = _quadrature(arrays, cfg, cfg.u_nodes, cfg.v_nodes)
    coarse = _quadrature(arrays, cfg, max(1, cfg.u_nodes // 2), max(1, cfg.v_nodes // 2))
    estimate = PeterssonEstimate(value, abs(value - coarse), _tail_bound(arrays, cfg.v_max), truncation)
    logger.debug(f"Petersson quadrature: {estimate}")
    return estimate


def petersson_estimate(series: ThetaSeries, cfg: Optional[QuadratureConfig] = None) -> PeterssonEstimate:
    return petersson_components(series.terms, series.precision, cfg)


def petersson_numeric(series: ThetaSeries, cfg: Optional[QuadratureConfig] = None) -> float:
    return petersson_estimate(series, cfg).value


def petersson_from_eta_squared(copies: int = 4, precision=6,
                               cfg: Optional[QuadratureConfig] = None) -> PeterssonEstimate:
    """copies of +-eta^2 as components; equals copies * ||eta^2||^2"""
    eta = eta_squared_coeffs(precision)
    negated = [(e, -c) for e, c in eta]
    components = [eta if k % 2 == 0 else negated for k in range(copies)]
    return petersson_components(components, precision, cfg)


# ==================== VERDICT ====================
@dataclass
class Verdict:
    label: str
    mode: str
    passed: bool
    closed_form: float
    closed_form_error: float
    psi0: int
    psi1: int
    cycle0: Optional[float] = None
    cycle1: Optional[float] = None
    numeric: Optional[float] = None
    numeric_error: Optional[float] = None
    tolerance: float = OracleConfig.PETERSSON_TOLERANCE
    cycle_tolerance: float = OracleConfig.CYCLE_TOLERANCE
    failures: List[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_dict(self) -> Dict:
        data = asdict(self)
        data['status'] = self.status
        return data


def verify(report: NormReport, series: Optional[ThetaSeries] = None,
           cfg: Optional[QuadratureConfig] = None, mode: str = None) -> Verdict:
    """
    Compare the closed form against the cycle oracle and/or the
    Petersson quadrature
    """
    cfg = cfg or QuadratureConfig.from_defaults()
    mode = mode or OracleConfig.DEFAULT_VERIFY_MODE
    if mode not in OracleConfig.VERIFY_MODES:
        raise_error('INVALID_CONFIG', f"mode={mode}")

    verdict = Verdict(
        label=report.label, mode=mode, passed=True,
        closed_form=report.norm_value, closed_form_error=report.norm_error,
        psi0=report.psi0, psi1=report.psi1,
        tolerance=cfg.tolerance, cycle_tolerance=cfg.cycle_tolerance,
    )

    if mode in ('cycle', 'both'):
        verdict.cycle0 = cycle_integral(report.gamma0, cfg)
        verdict.cycle1 = (verdict.cycle0 if report.gamma1 == report.gamma0
                          else cycle_integral(report.gamma1, cfg))
        for name, value, target in (('gamma0', verdict.cycle0, report.psi0),
                                    ('gamma1', verdict.cycle1, report.psi1)):
            if abs(value - target) >= cfg.cycle_tolerance:
                verdict.failures.append(f"cycle {name}: {value:.10f} vs Psi = {target}")

    if mode in ('numeric', 'both'):
        if series is None:
            raise_error('INVALID_CONFIG', "mode numeric butuh ThetaSeries")
        estimate = petersson_estimate(series, cfg)
        verdict.numeric = estimate.value
        verdict.numeric_error = estimate.error
        if abs(estimate.value - report.norm_value) >= cfg.tolerance:
            verdict.failures.append(
                f"petersson: {estimate.value:.10f} vs closed form {report.norm_value:.10f}")

    verdict.passed = not verdict.failures
    if verdict.passed:
        logger.info(SUCCESS_MESSAGES['verify_pass'].format(label=report.label))
    else:
        logger.warning(f"❌ Verifikasi FAIL untuk {report.label}: {'; '.join(verdict.failures)}")
    return verdict
