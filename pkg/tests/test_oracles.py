"""Tests for E2*, Meyer cycle integrals and the Petersson quadrature"""

from dataclasses import replace
from math import gcd

import mpmath
import pytest
from hypothesis import given, settings, assume, strategies as st

from core.errors import InputError, OracleError
from core.hecke_theta import make_hecke_lattice, theta_expansion
from core.norm_engine import closed_form_norm
from core.oracles import (
    QuadratureConfig, cycle_integral, e2_star, petersson_components, petersson_estimate,
    petersson_from_eta_squared, petersson_numeric, reduce_to_fundamental_domain, verify,
)
from core.quadfield import different, make_context, py_xgcd, ring
from core.rademacher import IntMatrix2, psi

FLAGSHIP_NORM = float(mpmath.mpf(2) / 3 * mpmath.log(2 + mpmath.sqrt(3)))

MEYER_MATRICES = [
    IntMatrix2(7, 4, 12, 7),
    IntMatrix2(7, 12, 4, 7),
    IntMatrix2(2, 3, 1, 2),
    IntMatrix2(5, 3, 3, 2),
    IntMatrix2(11, -3, 15, -4),
    IntMatrix2(4, 1, 3, 1),
]


def _instance(D, name, kappa=1):
    ctx = make_context(D)
    ideal = ring(ctx) if name == 'ring' else different(ctx)
    return ctx, ideal, kappa


@pytest.fixture(scope="module")
def flagship_series():
    ctx, ideal, kappa = _instance(12, 'different')
    return theta_expansion(make_hecke_lattice(ctx, ideal, kappa), 6)


class TestE2Star:
    def test_elliptic_points_vanish(self):
        assert abs(e2_star(1j)) < 1e-12
        assert abs(e2_star(mpmath.exp(1j * mpmath.pi / 3))) < 1e-12

    def test_large_imaginary_part(self):
        expected = 1 - 3 / (mpmath.pi * 50)
        assert abs(e2_star(50j) - expected) < 1e-12

    @pytest.mark.parametrize("y", [1.5, 2, 3])
    def test_matches_divisor_sum_expansion(self, y):
        """1 - 24 sum sigma_1(n) q^n on the imaginary axis"""
        with mpmath.workdps(40):
            q = mpmath.exp(-2 * mpmath.pi * y)
            expected = 1 - 3 / (mpmath.pi * y)
            for n in range(1, 60):
                sigma = sum(d for d in range(1, n + 1) if n % d == 0)
                expected -= 24 * sigma * q ** n
            assert abs(e2_star(mpmath.mpc(0, y)) - expected) < 1e-20

    def test_lower_half_plane_rejected(self):
        with pytest.raises(OracleError) as exc:
            e2_star(1 - 1j)
        assert exc.value.code == 'NOT_UPPER_HALF_PLANE'

    def test_reduction_lands_in_fundamental_domain(self):
        z = mpmath.mpc(0.3, 0.01)
        w, g = reduce_to_fundamental_domain(z)
        assert abs(w.real) <= 0.5 + 1e-12
        assert abs(w) >= 1 - 1e-12
        assert abs(g.act(z) - w) < 1e-10
        assert g.det() == 1

    @settings(deadline=None, max_examples=40)
    @given(
        a=st.integers(-6, 6), c=st.integers(-6, 6), n=st.integers(-4, 4),
        u=st.floats(-1, 1), v=st.floats(0.2, 2),
    )
    def test_weight_two_equivariance(self, a, c, n, u, v):
        assume(gcd(a, c) == 1)
        x, y, _ = py_xgcd(a, c)
        g = IntMatrix2(a, -y, c, x) @ IntMatrix2(1, n, 0, 1)
        with mpmath.workdps(QuadratureConfig().mp_dps):
            z = mpmath.mpc(u, v)
            lhs = e2_star(g.act(z))
            rhs = (g.c * z + g.d) ** 2 * e2_star(z)
            assert abs(lhs - rhs) < 1e-12 * max(1, abs(g.c * z + g.d) ** 2)

    def test_equivariance_at_small_height(self):
        g = IntMatrix2(1, 0, 4, 1) @ IntMatrix2(1, 4, 0, 1)
        with mpmath.workdps(QuadratureConfig().mp_dps):
            z = mpmath.mpc(1.0, 0.25)
            lhs = e2_star(g.act(z))
            rhs = (g.c * z + g.d) ** 2 * e2_star(z)
            assert abs(lhs - rhs) < 1e-12 * abs(g.c * z + g.d) ** 2


@pytest.mark.slow
class TestCycleIntegral:
    @pytest.mark.parametrize("gamma", MEYER_MATRICES, ids=str)
    def test_meyer_recovers_psi(self, gamma):
        assert abs(cycle_integral(gamma) - psi(gamma)) < 1e-4

    def test_parabolic_rejected(self):
        with pytest.raises(InputError) as exc:
            cycle_integral(IntMatrix2(1, 1, 0, 1))
        assert exc.value.code == 'NOT_HYPERBOLIC'

    def test_base_point_independence(self):
        gamma = IntMatrix2(7, 4, 12, 7)
        values = [cycle_integral(gamma, base_s=s) for s in (0.0, 0.3, -0.5)]
        assert max(values) - min(values) < 1e-8

    def test_inverse_is_negated(self):
        gamma = IntMatrix2(2, 3, 1, 2)
        assert abs(cycle_integral(gamma.inverse()) + cycle_integral(gamma)) < 1e-8

    def test_node_doubling_converged(self):
        gamma = IntMatrix2(5, 3, 3, 2)
        coarse = cycle_integral(gamma, QuadratureConfig(gauss_nodes=64))
        fine = cycle_integral(gamma, QuadratureConfig(gauss_nodes=128))
        assert abs(coarse - fine) < 1e-8


class TestQuadratureConfig:
    @pytest.mark.parametrize("overrides", [
        {'gauss_nodes': 0}, {'tolerance': 1.5}, {'v_max': 2.0}, {'workers': 0},
    ])
    def test_invalid_values(self, overrides):
        with pytest.raises(InputError) as exc:
            QuadratureConfig(**overrides)
        assert exc.value.code == 'INVALID_CONFIG'

    def test_defaults_ignore_none(self):
        cfg = QuadratureConfig.from_defaults(gauss_nodes=None, tolerance=1e-2)
        assert cfg.tolerance == 1e-2
        assert cfg.gauss_nodes == QuadratureConfig().gauss_nodes


class TestPetersson:
    def test_zero_series_is_exactly_zero(self):
        estimate = petersson_components([(), (), ()], 6)
        assert estimate.value == 0.0

    def test_low_precision_rejected(self):
        ctx, ideal, kappa = _instance(12, 'different')
        series = theta_expansion(make_hecke_lattice(ctx, ideal, kappa), 1)
        with pytest.raises(OracleError) as exc:
            petersson_numeric(series)
        assert exc.value.code == 'PRECISION_TOO_LOW'

    @pytest.mark.slow
    def test_flagship_series(self, flagship_series):
        estimate = petersson_estimate(flagship_series)
        assert abs(estimate.value - FLAGSHIP_NORM) < 5e-3
        assert estimate.error < 5e-3

    @pytest.mark.slow
    def test_eta_squared_copies(self):
        estimate = petersson_from_eta_squared(copies=4, precision=6)
        assert abs(estimate.value - FLAGSHIP_NORM) < 5e-3

    @pytest.mark.slow
    def test_error_bar_is_honest(self, flagship_series):
        coarse = petersson_estimate(flagship_series, QuadratureConfig(u_nodes=32, v_nodes=48))
        fine = petersson_estimate(flagship_series, QuadratureConfig(u_nodes=64, v_nodes=96))
        assert abs(fine.value - coarse.value) <= coarse.error

    @pytest.mark.slow
    def test_parallel_matches_serial(self, flagship_series):
        serial = petersson_numeric(flagship_series, QuadratureConfig(workers=1))
        parallel = petersson_numeric(flagship_series, QuadratureConfig(workers=4))
        assert abs(serial - parallel) < 1e-12


@pytest.mark.slow
class TestVerify:
    @pytest.mark.parametrize("D, name", [(12, 'different'), (12, 'ring'), (8, 'ring'), (5, 'ring')])
    def test_pass(self, D, name):
        ctx, ideal, kappa = _instance(D, name)
        report = closed_form_norm(ctx, ideal, kappa)
        series = theta_expansion(make_hecke_lattice(ctx, ideal, kappa), 6)
        verdict = verify(report, series, mode='both')
        assert verdict.passed, verdict.failures
        assert verdict.status == "PASS"

    def test_wrong_psi_fails(self):
        ctx, ideal, kappa = _instance(12, 'different')
        report = replace(closed_form_norm(ctx, ideal, kappa), psi0=5)
        verdict = verify(report, mode='cycle')
        assert not verdict.passed
        assert verdict.status == "FAIL"
        assert verdict.failures

    def test_numeric_needs_series(self):
        ctx, ideal, kappa = _instance(12, 'different')
        with pytest.raises(InputError):
            verify(closed_form_norm(ctx, ideal, kappa), mode='numeric')
