"""Profile construction, evaluation, and exact moment integrals."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_radial_profile
from virial_forge.errors import DegenerateFactorError, ProfileError
from virial_forge.profiles import (
    AngularProfile,
    Piece,
    PiecewiseProfile,
    core_halo_eta,
    momentum_ball,
    monotonic_eta,
    uniform_eta,
)
from virial_forge.quadrature import integrate, profile_moment_quad

ALPHA_REF = 7.816e-4  # representative halo level for evaluation tests


class TestEval:
    def test_indicator_interior(self):
        assert uniform_eta(1.0)(0.5) == 1.0

    def test_indicator_outside(self):
        assert uniform_eta(1.0)(1.5) == 0.0

    def test_power_piece_continuous_at_anchor(self):
        eta = monotonic_eta(0.01, 1.0 / 11.0, 0.1, 3.0)
        assert eta(0.01) == pytest.approx(1.0, rel=1e-15)

    def test_monotonic_continuous_at_skin(self):
        eta = monotonic_eta(0.01, 1.0 / 11.0, 0.1, 3.0)
        left = (0.01 * 11.0) ** 3.0
        assert eta(1.0 / 11.0) == pytest.approx(left, rel=1e-14)

    def test_corehalo_halo_value(self):
        eta = core_halo_eta(0.2, 1.0, 2.0, ALPHA_REF)
        assert eta(1.5) == ALPHA_REF

    def test_right_continuity_at_breakpoints(self):
        eta = core_halo_eta(0.2, 1.0, 2.0, ALPHA_REF)
        assert eta(0.2) == 0.0
        assert eta(1.0) == ALPHA_REF
        assert eta(2.0) == 0.0

    def test_negative_argument_rejected(self):
        with pytest.raises(ValueError):
            uniform_eta(1.0)(-0.1)


class TestConstruction:
    def test_gap_rejected(self):
        with pytest.raises(ProfileError):
            PiecewiseProfile(
                (
                    Piece.constant(1.0, 0.0, 1.0),
                    Piece.constant(0.0, 1.5, math.inf),
                )
            )

    def test_must_start_at_zero(self):
        with pytest.raises(ProfileError):
            PiecewiseProfile(
                (
                    Piece.constant(1.0, 0.5, 1.0),
                    Piece.constant(0.0, 1.0, math.inf),
                )
            )

    def test_infinite_piece_must_be_zero(self):
        with pytest.raises(ProfileError):
            Piece.constant(0.5, 1.0, math.inf)

    def test_must_cover_to_infinity(self):
        with pytest.raises(ProfileError):
            PiecewiseProfile((Piece.constant(1.0, 0.0, 1.0),))

    def test_power_needs_positive_anchor(self):
        with pytest.raises(ProfileError):
            Piece.power(1.0, 2.0, 0.0, 1.0)

    def test_negative_values_rejected(self):
        with pytest.raises(ProfileError):
            Piece.constant(-0.5, 0.0, 1.0)
        with pytest.raises(ProfileError):
            Piece.ramp(-0.1, 1.0, 0.0, 1.0)

    def test_profiles_immutable(self):
        eta = uniform_eta(1.0)
        with pytest.raises(AttributeError):
            eta.domain_label = "other"


class TestMoments:
    def test_indicator_second_moment(self):
        r = 0.7
        assert uniform_eta(r).moment(2) == pytest.approx(r**3 / 3.0, rel=1e-15)

    def test_corehalo_second_moment(self):
        # Sum of the two elementary shell integrals.
        eta = core_halo_eta(0.2, 1.0, 2.0, ALPHA_REF)
        expected = 0.2**3 / 3.0 + ALPHA_REF * (2.0**3 - 1.0**3) / 3.0
        assert eta.moment(2) == pytest.approx(expected, rel=1e-14)
        assert eta.moment(2) == pytest.approx(4.4904e-3, rel=1e-4)

    def test_atmosphere_moment_hits_log_case(self):
        # Exponent 3 against weight r^2 integrates to a logarithm.
        r1, r2, r3, n = 0.01, 1.0 / 11.0, 0.1, 3.0
        eta = monotonic_eta(r1, r2, r3, n)
        expected = (
            r1**3 / 3.0
            + r1**3 * math.log(r2 / r1)
            + (r1 / r2) ** 3 * (r3**3 - r2**3) / 3.0
        )
        assert eta.moment(2) == pytest.approx(expected, rel=1e-14)
        oracle = profile_moment_quad(eta, 2)
        assert eta.moment(2) == pytest.approx(oracle.value, rel=1e-10)

    def test_log_case_only_on_exact_exponent(self):
        # A nearby non-integer exponent must use the generic antiderivative
        # and still agree with quadrature.
        eta = monotonic_eta(0.01, 1.0 / 11.0, 0.1, 3.0 + 1e-9)
        oracle = profile_moment_quad(eta, 2)
        assert eta.moment(2) == pytest.approx(oracle.value, rel=1e-9)

    @pytest.mark.parametrize("k", [0, 1, 2, 3])
    def test_moment_additivity_matches_quadrature(self, k, rng):
        for _ in range(10):
            profile = random_radial_profile(rng)
            oracle = profile_moment_quad(profile, k)
            assert profile.moment(k) == pytest.approx(oracle.value, rel=1e-10, abs=1e-14)

    def test_cumulative_moment2(self, rng):
        for _ in range(5):
            profile = random_radial_profile(rng)
            upper = profile.support_radius
            for r in rng.uniform(0.0, upper, size=4):
                oracle = integrate(
                    lambda s: profile(s) * s * s, 0.0, float(r),
                    breakpoints=profile.breakpoints,
                )
                assert profile.cumulative_moment2(float(r)) == pytest.approx(
                    oracle.value, rel=1e-10, abs=1e-13
                )

    def test_dilation_scaling_exact(self, rng):
        profile = random_radial_profile(rng)
        lam = 1.7
        scaled = profile.dilate(lam)
        for k in range(4):
            assert scaled.moment(k) == pytest.approx(
                lam ** (k + 1) * profile.moment(k), rel=1e-12
            )


class TestPowerMoments:
    def test_indicator_idempotent(self):
        r = 0.9
        eta = uniform_eta(r)
        for beta in (0.5, 1.5, 3.0):
            assert eta.power_moment(beta, 2) == eta.moment(2)

    def test_constant_piece_factor(self):
        r2, r3 = 1.0, 2.0
        eta = PiecewiseProfile.from_segments(
            [Piece.constant(0.0, 0.0, r2), Piece.constant(ALPHA_REF, r2, r3)]
        )
        expected = ALPHA_REF**1.5 * (r3**3 - r2**3) / 3.0
        assert eta.power_moment(1.5, 2) == pytest.approx(expected, rel=1e-14)

    def test_atmosphere_power_piece_vs_quadrature(self):
        # beta * exponent = 4.5 with weight r^2: non-trivial antiderivative.
        r1, r2 = 0.01, 1.0 / 11.0
        piece = Piece.power(1.0, 3.0, r1, r2)
        closed = piece.power_moment(1.5, 2)
        oracle = integrate(lambda r: (r1 / r) ** 4.5 * r**2, r1, r2,
                           abs_tol=1e-15, rel_tol=1e-13)
        assert closed == pytest.approx(oracle.value, rel=1e-12)

    def test_power_moment_log_case(self):
        # beta * exponent - k = -1 exactly: logarithmic antiderivative.
        piece = Piece.power(1.0, 2.0, 0.5, 1.5)
        closed = piece.power_moment(1.5, 2)
        assert closed == pytest.approx(0.5**3 * math.log(3.0), rel=1e-14)


class TestAngular:
    def test_full_sphere(self):
        assert AngularProfile.cutoff(1.0).moments() == (2.0, 0.0, 2.0)

    def test_reference_cutoff(self):
        m0, m1, m32 = AngularProfile.cutoff(-0.8).moments()
        assert m0 == pytest.approx(0.2, rel=1e-14)
        assert m1 == pytest.approx(-9.0 / 50.0, rel=1e-14)
        assert m32 == pytest.approx(0.2, rel=1e-14)

    def test_near_degenerate_flagged(self):
        ang = AngularProfile.cutoff(-1.0 + 1e-9)
        with pytest.warns(RuntimeWarning):
            m0, _, _ = ang.moments()
        assert m0 == pytest.approx(1e-9, rel=1e-6)

    def test_degenerate_rejected(self):
        with pytest.raises(ProfileError):
            AngularProfile.cutoff(-1.0)
        zero = AngularProfile((Piece.constant(0.0, -1.0, 1.0),))
        with pytest.raises(DegenerateFactorError):
            zero.moments()

    def test_power_pieces_rejected(self):
        with pytest.raises(ProfileError):
            AngularProfile(
                (Piece.power(1.0, 1.0, 0.5, 1.0),)  # wrong domain anyway
            )

    @given(st.floats(min_value=-1.0 + 1e-6, max_value=1.0, exclude_min=True))
    def test_factorization(self, a):
        m0, m1, _ = AngularProfile.cutoff(a).moments()
        assert m1 / m0 == pytest.approx((a - 1.0) / 2.0, rel=1e-12, abs=1e-15)


@given(
    r=st.floats(min_value=0.05, max_value=5.0),
    beta=st.floats(min_value=0.3, max_value=3.0),
    k=st.integers(min_value=0, max_value=3),
)
def test_indicator_power_moment_idempotent(r, beta, k):
    eta = uniform_eta(r)
    assert eta.power_moment(beta, k) == eta.moment(k)


def test_momentum_ball_labels():
    assert momentum_ball(2.0).domain_label == "radial-momentum"
    assert uniform_eta(2.0).domain_label == "radial-position"


def test_smallest_width():
    eta = core_halo_eta(0.2, 1.0, 2.0, ALPHA_REF)
    assert eta.smallest_width == pytest.approx(0.2)
