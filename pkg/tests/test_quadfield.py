"""Tests for exact real quadratic field arithmetic"""

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from core.errors import ArithmeticFailure, InputError
from core.quadfield import (
    QuadLattice, QuadNum, different, epsilon_kappa, fundamental_discriminants,
    fundamental_unit, ideal_inverse, ideal_norm_via_conjugate, is_fundamental_discriminant,
    is_integral_ideal, lattice_dual, lattice_from_generators, lattice_intersect,
    lattice_inverse_of_principal, lattice_mul, lattice_scale, lattice_sum, make_context,
    member, ring, totally_positive_generator,
)


class TestDiscriminants:
    def test_fundamental_list(self):
        assert fundamental_discriminants(30) == [5, 8, 12, 13, 17, 21, 24, 28, 29]

    @pytest.mark.parametrize("D", [1, 4, 9, 16, 20, 25, 32, -3, 0, 7])
    def test_rejects_non_fundamental(self, D):
        assert not is_fundamental_discriminant(D)
        with pytest.raises(InputError) as exc:
            make_context(D)
        assert exc.value.code == 'NOT_FUNDAMENTAL'

    def test_ring_triples(self, ctx12, ctx5):
        assert ring(ctx12).triple == (Fraction(1, 2), 0, 1)
        assert ring(ctx5).triple == (Fraction(1, 2), Fraction(1, 2), 1)


class TestQuadNum:
    def test_golden_ratio_arithmetic(self):
        phi = QuadNum(Fraction(1, 2), Fraction(1, 2), 5)
        assert phi * phi == phi + 1
        assert phi.norm() == -1
        assert phi * phi.inverse() == QuadNum(1, 0, 5)
        assert phi.trace() == 1

    def test_sign_is_exact(self):
        assert QuadNum(2, -1, 5).sign() == -1
        assert QuadNum(3, -1, 8).sign() == 1
        assert QuadNum(0, -1, 5).sign() == -1
        assert QuadNum(0, 0, 5).sign() == 0

    def test_totally_positive(self):
        assert QuadNum(7, 2, 12).is_totally_positive()
        assert not QuadNum(1, 1, 12).is_totally_positive()

    def test_str_format(self):
        assert str(QuadNum(Fraction(7, 2), Fraction(-3, 2), 5)) == "7/2-3/2*sqrtD"

    def test_context_mismatch(self):
        with pytest.raises(InputError) as exc:
            QuadNum(1, 1, 5) + QuadNum(1, 1, 8)
        assert exc.value.code == 'CONTEXT_MISMATCH'

    def test_zero_has_no_inverse(self):
        with pytest.raises(InputError) as exc:
            QuadNum(0, 0, 5).inverse()
        assert exc.value.code == 'ZERO_SCALAR'


class TestLattices:
    def test_different_of_even_discriminant(self, ctx12):
        assert different(ctx12).triple == (1, 0, 6)

    def test_different_of_odd_discriminant(self, ctx5):
        diff = different(ctx5)
        assert diff.ideal_norm() == 5
        assert member(diff, ctx5.num(0, 1))
        assert not member(diff, ctx5.num(1))
        assert ideal_norm_via_conjugate(ctx5, diff) == 5

    def test_from_triple_reduces_b(self):
        lattice = QuadLattice.from_triple(1, 7, 6, 12)
        assert lattice.triple == (1, 1, 6)

    def test_rank_deficient(self):
        with pytest.raises(InputError) as exc:
            lattice_from_generators([QuadNum(1, 0, 5), QuadNum(2, 0, 5)])
        assert exc.value.code == 'RANK_DEFICIENT'

    def test_non_canonical_triple_rejected(self):
        with pytest.raises(InputError) as exc:
            QuadLattice(1, 6, 6, 12)
        assert exc.value.code == 'NOT_A_LATTICE'

    def test_intersection_and_sum(self, ctx12):
        O = ring(ctx12)
        twice = lattice_scale(O, 2)
        assert lattice_intersect(O, twice) == twice
        assert lattice_sum(O, twice) == O
        assert lattice_sum(O, different(ctx12)) == O
        assert lattice_intersect(O, different(ctx12)) == different(ctx12)

    def test_dual_is_involution(self, ctx5):
        diff = different(ctx5)
        assert lattice_dual(lattice_dual(diff)) == diff

    def test_ideal_inverse(self, ctx12):
        diff = different(ctx12)
        assert lattice_mul(diff, ideal_inverse(ctx12, diff)) == ring(ctx12)

    def test_integrality(self, ctx12):
        assert is_integral_ideal(ctx12, different(ctx12))
        assert not is_integral_ideal(ctx12, lattice_scale(ring(ctx12), Fraction(1, 2)))

    def test_hnf_of_generating_set(self, ctx12):
        sqrt3 = ctx12.num(0, Fraction(1, 2))
        lattice = lattice_from_generators([ctx12.num(2), 2 * sqrt3, ctx12.num(6)])
        assert lattice.triple == (1, 0, 2)

    def test_ring_meets_twice_inverse_different(self, ctx5):
        inverse_different = lattice_inverse_of_principal(ctx5, ctx5.num(0, 1))
        meet = lattice_intersect(ring(ctx5), lattice_scale(inverse_different, 2))
        assert meet.triple == (1, 1, 2)

    def test_inverse_of_principal(self, ctx12):
        mu = 3 + ctx12.omega
        inverse = lattice_inverse_of_principal(ctx12, mu)
        assert lattice_mul(inverse, lattice_scale(ring(ctx12), mu)) == ring(ctx12)
        assert inverse == ideal_inverse(ctx12, lattice_scale(ring(ctx12), mu))
        with pytest.raises(InputError) as exc:
            lattice_inverse_of_principal(ctx12, ctx12.num(0))
        assert exc.value.code == 'ZERO_SCALAR'


@settings(deadline=None, max_examples=60)
@given(
    D=st.sampled_from([5, 8, 12, 13, 17, 21, 24, 28, 29, 33]),
    x=st.integers(-30, 30),
    y=st.integers(-30, 30),
)
def test_principal_ideal_norm(D, x, y):
    """[O : mu*O] = |Nm(mu)| by both norm routines"""
    ctx = make_context(D)
    mu = x + y * ctx.omega
    if not mu:
        return
    ideal = lattice_scale(ring(ctx), mu)
    assert ideal.ideal_norm() == abs(mu.norm())
    assert ideal_norm_via_conjugate(ctx, ideal) == abs(mu.norm())


small = st.integers(-12, 12)
denominators = st.integers(1, 6)


@st.composite
def lattices(draw, D=12):
    """Full-rank lattice from two random rational generators"""
    x1, y1, x2, y2 = draw(small), draw(small), draw(small), draw(small)
    r = draw(denominators)
    assume(x1 * y2 != r * r * x2 * y1)
    return lattice_from_generators([
        QuadNum(Fraction(x1, r), y1, D), QuadNum(x2, Fraction(y2, r), D),
    ])


class TestIntersection:
    @settings(deadline=None, max_examples=100)
    @given(A=lattices(), B=lattices())
    def test_commutative(self, A, B):
        assert lattice_intersect(A, B) == lattice_intersect(B, A)

    @settings(deadline=None, max_examples=100)
    @given(A=lattices(), B=lattices())
    def test_idempotent(self, A, B):
        meet = lattice_intersect(A, B)
        assert lattice_intersect(A, A) == A
        assert lattice_intersect(meet, A) == meet
        assert lattice_intersect(meet, meet) == meet

    @settings(deadline=None, max_examples=100)
    @given(A=lattices(), B=lattices(), m=small, n=small)
    def test_membership(self, A, B, m, n):
        """v in A n B exactly when v in A and v in B"""
        meet = lattice_intersect(A, B)
        a1, a2 = A.basis
        from_A = m * a1 + n * a2
        assert member(meet, from_A) == member(B, from_A)
        c1, c2 = meet.basis
        from_meet = m * c1 + n * c2
        assert member(A, from_meet) and member(B, from_meet)


class TestUnits:
    def test_fundamental_unit_d5(self, ctx5):
        unit = fundamental_unit(ctx5)
        assert unit.value == QuadNum(Fraction(1, 2), Fraction(1, 2), 5)
        assert unit.norm_sign == -1
        assert not unit.totally_positive

    def test_fundamental_unit_d12(self, ctx12):
        unit = fundamental_unit(ctx12)
        assert unit.value == QuadNum(2, Fraction(1, 2), 12)
        assert unit.norm_sign == 1

    @pytest.mark.parametrize("D", [5, 8, 12, 13, 21, 24, 29, 61, 76])
    def test_generator_is_totally_positive_unit(self, D):
        unit = totally_positive_generator(make_context(D))
        assert unit.value.norm() == 1
        assert unit.value.is_totally_positive()

    def test_epsilon_d12(self, ctx12):
        eps = epsilon_kappa(ctx12, ring(ctx12), 1)
        assert eps.value == QuadNum(7, 2, 12)
        assert eps.power_index == 2
        assert epsilon_kappa(ctx12, different(ctx12), 1).value == eps.value

    def test_epsilon_d5(self, ctx5):
        eps = epsilon_kappa(ctx5, ring(ctx5), 1)
        assert eps.value == QuadNum(Fraction(7, 2), Fraction(3, 2), 5)
        assert eps.power_index == 4

    def test_epsilon_d8(self, ctx8):
        eps = epsilon_kappa(ctx8, ring(ctx8), 1)
        assert eps.value == QuadNum(17, 6, 8)

    def test_epsilon_d12_kappa2(self, ctx12):
        eps = epsilon_kappa(ctx12, ring(ctx12), 2)
        assert eps.value == QuadNum(97, 28, 12)

    @pytest.mark.parametrize("kappa", [1, 2, 3])
    def test_epsilon_is_smallest_admissible_power(self, kappa):
        for D in fundamental_discriminants(200):
            ctx = make_context(D)
            unit = fundamental_unit(ctx)
            base = totally_positive_generator(ctx)
            eps = epsilon_kappa(ctx, ring(ctx), kappa)
            assert unit.value ** eps.power_index == eps.value, D
            assert eps.power_index % base.power_index == 0
            target = lattice_scale(ring(ctx), ctx.num(0, kappa))
            assert member(target, eps.value - 1)
            for j in range(1, eps.power_index // base.power_index):
                assert not member(target, base.value ** j - 1), (D, j)

    def test_search_cap(self, ctx5):
        with pytest.raises(ArithmeticFailure) as exc:
            epsilon_kappa(ctx5, ring(ctx5), 1, cap=1)
        assert exc.value.code == 'SEARCH_CAP'

    def test_non_integral_ideal(self, ctx12):
        with pytest.raises(InputError) as exc:
            epsilon_kappa(ctx12, lattice_scale(ring(ctx12), Fraction(1, 2)), 1)
        assert exc.value.code == 'NOT_INTEGRAL_IDEAL'
