"""Tests for the lattice L, its discriminant group and the theta expansion"""

from fractions import Fraction

import pytest

from core.errors import InputError
from core.hecke_theta import (
    ThetaSeries, coset_of, discriminant_group, eta_squared_coeffs, make_hecke_lattice,
    orbit_representatives, quadratic_value, relabel_by_multiplier, theta_expansion,
)
from core.quadfield import (
    QuadLattice, QuadNum, different, lattice_scale, make_context, ring,
)


def _hecke(D, ideal_name, kappa):
    ctx = make_context(D)
    ideal = ring(ctx) if ideal_name == 'ring' else different(ctx)
    return make_hecke_lattice(ctx, ideal, kappa)


def _negated(terms):
    return tuple((e, -c) for e, c in terms)


def _eta_squared_by_pentagonal_numbers(X):
    """Square of q^(1/24) * sum (-1)^k q^(k(3k-1)/2)"""
    top = int(X) + 1
    eta = [0] * (top + 1)
    for k in range(-top, top + 1):
        g = k * (3 * k - 1) // 2
        if 0 <= g <= top:
            eta[g] += (-1) ** (k % 2)
    square = [sum(eta[i] * eta[n - i] for i in range(n + 1)) for n in range(top + 1)]
    offset = Fraction(1, 12)
    return [(offset + n, c) for n, c in enumerate(square) if c != 0 and offset + n <= X]


class TestHeckeLattice:
    def test_level_and_dual_for_different(self):
        HL = _hecke(12, 'different', 1)
        assert HL.N == 12
        assert HL.dual == ring(HL.ctx)

    def test_level_and_dual_for_ring(self):
        HL = _hecke(12, 'ring', 1)
        assert HL.N == 1
        assert HL.dual == lattice_scale(ring(HL.ctx), HL.ctx.num(0, Fraction(1, 12)))

    def test_dual_for_kappa_two(self):
        HL = _hecke(12, 'ring', 2)
        assert HL.dual == lattice_scale(ring(HL.ctx), HL.ctx.num(0, Fraction(1, 24)))

    def test_kappa_divides_level(self):
        HL = _hecke(5, 'ring', 2)
        assert HL.N == Fraction(1, 2)

    def test_rejects_non_integral_ideal(self, ctx12):
        with pytest.raises(InputError) as exc:
            make_hecke_lattice(ctx12, QuadLattice(Fraction(1, 4), 0, Fraction(1, 2), 12), 1)
        assert exc.value.code == 'NOT_INTEGRAL_IDEAL'

    def test_rejects_non_ideal_lattice(self, ctx12):
        with pytest.raises(InputError) as exc:
            make_hecke_lattice(ctx12, QuadLattice(1, 0, 1, 12), 1)
        assert exc.value.code == 'NOT_INTEGRAL_IDEAL'

    def test_rejects_bad_kappa(self, ctx12):
        with pytest.raises(InputError):
            make_hecke_lattice(ctx12, ring(ctx12), 0)


class TestDiscriminantGroup:
    @pytest.mark.parametrize("D, ideal, kappa, order", [
        (12, 'different', 1, 12),
        (12, 'ring', 1, 12),
        (5, 'ring', 1, 5),
        (8, 'ring', 1, 8),
        (12, 'ring', 2, 48),
        (5, 'ring', 3, 45),
    ])
    def test_order_is_gram_determinant(self, D, ideal, kappa, order):
        assert len(discriminant_group(_hecke(D, ideal, kappa))) == order

    def test_keys_are_lexicographic(self):
        group = discriminant_group(_hecke(12, 'different', 1))
        assert list(group.keys) == sorted(group.keys)
        assert group.keys[0] == (0, 0)

    def test_negation_is_involution(self):
        group = discriminant_group(_hecke(12, 'ring', 2))
        assert all(group.negation[group.negation[i]] == i for i in range(len(group)))

    def test_coset_of_ideal_element_is_zero(self):
        HL = _hecke(12, 'different', 1)
        assert coset_of(HL, HL.ctx.num(6)) == (0, 0)
        assert coset_of(HL, HL.ctx.num(0, 1)) == (0, 0)

    def test_coset_of_foreign_element(self):
        HL = _hecke(12, 'different', 1)
        with pytest.raises(InputError) as exc:
            coset_of(HL, HL.ctx.num(Fraction(1, 3)))
        assert exc.value.code == 'NOT_A_LATTICE'


class TestOrbits:
    def test_two_orbits_at_smallest_norm(self):
        """Units 1 and 2+sqrt(3) are distinct modulo eps = (2+sqrt(3))^2"""
        HL = _hecke(12, 'different', 1)
        reps = orbit_representatives(HL, Fraction(1, 12))
        assert set(reps) == {QuadNum(1, 0, 12), QuadNum(2, Fraction(1, 2), 12)}

    def test_below_minimum_is_empty(self):
        HL = _hecke(12, 'different', 1)
        assert orbit_representatives(HL, Fraction(1, 24)) == []
        assert orbit_representatives(HL, 0) == []

    def test_matches_brute_force(self):
        HL = _hecke(5, 'ring', 1)
        X = Fraction(1)
        eps_sq = HL.epsilon.value * HL.epsilon.value
        e1, e2 = HL.dual.basis
        expected = set()
        for m in range(-40, 41):
            for n in range(-40, 41):
                value = m * e1 + n * e2
                if not value.is_totally_positive() or HL.Q(value) > X:
                    continue
                if value.y >= 0 and (eps_sq * value.conj() - value).sign() > 0:
                    expected.add(value)
        assert set(orbit_representatives(HL, X)) == expected
        assert expected

    def test_box_scale_does_not_change_result(self):
        HL = _hecke(12, 'ring', 2)
        assert orbit_representatives(HL, 3) == orbit_representatives(HL, 3, box_scale=2)

    def test_threads_do_not_change_result(self):
        HL = _hecke(13, 'ring', 1)
        assert orbit_representatives(HL, 4) == orbit_representatives(HL, 4, workers=3)


class TestThetaExpansion:
    def test_four_nonzero_components(self):
        series = theta_expansion(_hecke(12, 'different', 1), 5)
        assert len(series.cosets) == 12
        assert len(series.nonzero_cosets()) == 4

    def test_components_are_eta_squared(self):
        HL = _hecke(12, 'different', 1)
        series = theta_expansion(HL, 10)
        eta = tuple(eta_squared_coeffs(10))
        for i in series.nonzero_cosets():
            component = series.component(i)
            assert component in (eta, _negated(eta))
            assert quadratic_value(HL, series.cosets[i]) == Fraction(1, 12)

    @pytest.mark.parametrize("D, ideal", [(12, 'ring'), (5, 'ring'), (8, 'ring')])
    def test_vanishing_series(self, D, ideal):
        assert theta_expansion(_hecke(D, ideal, 1), 20).is_zero()

    @pytest.mark.parametrize("D, ideal, kappa", [
        (12, 'different', 1), (12, 'ring', 2), (5, 'ring', 2), (13, 'different', 1),
    ])
    def test_antisymmetry(self, D, ideal, kappa):
        HL = _hecke(D, ideal, kappa)
        series = theta_expansion(HL, 4)
        group = discriminant_group(HL)
        for i, j in enumerate(group.negation):
            assert series.component(j) == _negated(series.component(i))

    @pytest.mark.parametrize("D, ideal, kappa", [
        (5, 'ring', 1), (5, 'ring', 2), (8, 'ring', 1), (12, 'different', 1),
        (12, 'ring', 2), (13, 'ring', 1), (24, 'different', 1),
    ])
    def test_narrow_class_invariance(self, D, ideal, kappa):
        """a and mu*a with mu totally positive give relabelled identical series"""
        source = _hecke(D, ideal, kappa)
        mu = 3 + source.ctx.omega
        assert mu.is_totally_positive()
        target = make_hecke_lattice(source.ctx, lattice_scale(source.ideal, mu), kappa)
        X = 2
        first = theta_expansion(source, X)
        second = theta_expansion(target, X)
        mapping = relabel_by_multiplier(source, target, mu)
        assert sorted(mapping) == list(range(len(mapping)))
        for i, j in enumerate(mapping):
            assert second.component(j) == first.component(i)

    def test_dict_round_trip(self):
        series = theta_expansion(_hecke(12, 'different', 1), 3)
        assert ThetaSeries.from_dict(series.to_dict()) == series


class TestEtaSquared:
    def test_leading_terms(self):
        assert eta_squared_coeffs(Fraction(25, 12)) == [
            (Fraction(1, 12), 1), (Fraction(13, 12), -2), (Fraction(25, 12), -1),
        ]

    def test_matches_pentagonal_series(self):
        assert eta_squared_coeffs(40) == _eta_squared_by_pentagonal_numbers(40)

    def test_below_offset(self):
        assert eta_squared_coeffs(Fraction(1, 20)) == []
