"""Zero-energy solves for the three ansatz families and the virial threshold.

Each family has one free parameter fixed by requiring kinetic plus potential
energy to vanish exactly:

* uniform ball: the spatial radius, R = 3 / (5 KE(P)), in closed form;
* disjoint core-halo: the halo level, the positive root of an exact
  quadratic (the energy condition is degree two in the halo level);
* monotonic core-halo: the momentum cutoff, found by bracketing + Brent
  iteration (the kinetic term is strictly increasing in it).

The angular threshold a* = 1 - 1/S (S the spatial*momentum virial factor)
marks where the virial reaches -1/2; any cutoff at or below a* certifies
the virial hypothesis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from . import functionals
from .errors import (
    BracketError,
    NoPositiveRootError,
    NoRootError,
    ProfileError,
    ThresholdUnreachableError,
)
from .profiles import (
    AngularProfile,
    SeparableAnsatz,
    core_halo_eta,
    momentum_ball,
    monotonic_eta,
    uniform_eta,
)

__all__ = [
    "UniformParams",
    "CoreHaloParams",
    "MonotonicParams",
    "RootBracket",
    "uniform_ansatz",
    "core_halo_ansatz",
    "monotonic_ansatz",
    "solve_uniform_R",
    "corehalo_energy_quadratic",
    "solve_corehalo_alpha",
    "solve_monotonic_P",
    "virial_threshold_angle",
    "solve_threshold_a",
]

PARAM_TOL = 1e-12
ENERGY_RESIDUAL_TOL = 1e-10
BRACKET_START = (1e-3, 10.0)
BRACKET_CAP = 1e6


def _check_angle(a):
    if not (-1.0 < a <= 1.0):
        raise ProfileError("angular cutoff must lie in (-1, 1]")


@dataclass(frozen=True)
class UniformParams:
    """Uniform ball of radius r with momentum cutoff p and angular cutoff a."""

    r: float
    p: float
    a: float

    def __post_init__(self):
        if self.r <= 0.0 or self.p <= 0.0:
            raise ProfileError("uniform-ball radius and momentum cutoff must be positive")
        _check_angle(self.a)


@dataclass(frozen=True)
class CoreHaloParams:
    """Disjoint core [0, r1] plus halo [r2, r3] at level alpha (> 0)."""

    r1: float
    r2: float
    r3: float
    p: float
    alpha: float
    a: float

    def __post_init__(self):
        if not (0.0 < self.r1 <= self.r2 <= self.r3):
            raise ProfileError("core-halo radii must satisfy 0 < r1 <= r2 <= r3")
        if self.p <= 0.0:
            raise ProfileError("momentum cutoff must be positive")
        if self.alpha < 0.0:
            raise ProfileError("halo level must be >= 0")
        _check_angle(self.a)


@dataclass(frozen=True)
class MonotonicParams:
    """Singly-supported profile: core to r1, (r1/r)**n atmosphere, skin to r3."""

    r1: float
    r2: float
    r3: float
    n: float
    p: float
    a: float

    def __post_init__(self):
        if not (0.0 < self.r1 <= self.r2 <= self.r3):
            raise ProfileError("radii must satisfy 0 < r1 <= r2 <= r3")
        if self.n <= 0.0:
            raise ProfileError("atmosphere exponent must be positive")
        if self.p <= 0.0:
            raise ProfileError("momentum cutoff must be positive")
        _check_angle(self.a)


@dataclass(frozen=True)
class RootBracket:
    """Interval with a sign change of a scalar residual."""

    lo: float
    hi: float
    tol: float = PARAM_TOL

    def validate(self, f):
        if not (f(self.lo) * f(self.hi) < 0.0):
            raise BracketError(f"no sign change on [{self.lo}, {self.hi}]")
        return self

    @classmethod
    def expand(cls, f, lo, hi, cap=BRACKET_CAP, tol=PARAM_TOL):
        """Double hi until f changes sign on [lo, hi]; error at the cap."""
        flo = f(lo)
        if flo == 0.0:
            return cls(lo, lo, tol)
        while hi <= cap:
            if flo * f(hi) < 0.0:
                return cls(lo, hi, tol)
            hi *= 2.0
        raise BracketError(f"no sign change up to {cap}")


def uniform_ansatz(params):
    return SeparableAnsatz(
        uniform_eta(params.r), momentum_ball(params.p), AngularProfile.cutoff(params.a)
    )


def core_halo_ansatz(params):
    return SeparableAnsatz(
        core_halo_eta(params.r1, params.r2, params.r3, params.alpha),
        momentum_ball(params.p),
        AngularProfile.cutoff(params.a),
    )


def monotonic_ansatz(params):
    return SeparableAnsatz(
        monotonic_eta(params.r1, params.r2, params.r3, params.n),
        momentum_ball(params.p),
        AngularProfile.cutoff(params.a),
    )


def solve_uniform_R(p):
    """Zero-energy radius of the uniform ball: R = 3 / (5 KE(P))."""
    return 3.0 / (5.0 * functionals.kinetic_energy_ball(p))


def corehalo_energy_quadratic(r1, r2, r3, p):
    """Coefficients (A, B, C) with zero energy iff A a^2 + B a + C = 0.

    With m2(a) the spatial second moment and N(a) the nested mass integral,
    both quadratic in the halo level a, the zero-energy condition
    KE = N / m2^2 is equivalent to g(a) = KE * m2(a)^2 - N(a) = 0.
    """
    ke = functionals.kinetic_energy_ball(p)
    m2_core = r1**3 / 3.0
    m2_halo = (r3**3 - r2**3) / 3.0
    nested_cc = r1**5 / 15.0
    nested_ch = r1**3 * (r3**2 - r2**2) / 6.0
    nested_hh = ((r3**5 - r2**5) / 5.0 - r2**3 * (r3**2 - r2**2) / 2.0) / 3.0
    a_coef = ke * m2_halo**2 - nested_hh
    b_coef = 2.0 * ke * m2_core * m2_halo - nested_ch
    c_coef = ke * m2_core**2 - nested_cc
    return a_coef, b_coef, c_coef


def solve_quadratic(a, b, c):
    """Real roots of a x^2 + b x + c, ascending, via the stable formula."""
    if a == 0.0:
        if b == 0.0:
            return ()
        return (-c / b,)
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return ()
    root = math.sqrt(disc)
    if b == 0.0:
        x = root / (2.0 * a)
        return tuple(sorted((-x, x)))
    q = -0.5 * (b + math.copysign(root, b))
    return tuple(sorted((q / a, c / q)))


def solve_corehalo_alpha(r1, r2, r3, p, full_output=False):
    """Halo level making the disjoint core-halo energy exactly zero.

    Returns the positive root of the energy quadratic; when both roots are
    positive the smaller one (the tiny-halo branch) is returned.  Raises
    NoPositiveRootError, carrying both roots for diagnosis, when the
    configuration cannot reach zero energy with a positive halo.

    With ``full_output`` the returned value is ``(alpha, roots)``.
    """
    if not (0.0 < r1 <= r2 <= r3):
        raise ProfileError("core-halo radii must satisfy 0 < r1 <= r2 <= r3")
    if p <= 0.0:
        raise ProfileError("momentum cutoff must be positive")
    a_coef, b_coef, c_coef = corehalo_energy_quadratic(r1, r2, r3, p)
    if r2 == r3:
        # Zero-width halo: the residual no longer depends on the halo level.
        scale = max(abs(a_coef), abs(b_coef), 1.0)
        if abs(c_coef) <= 1e-12 * scale:
            return (0.0, (0.0,)) if full_output else 0.0
        raise NoPositiveRootError(
            "degenerate halo (r2 == r3) and the core alone does not balance",
            roots=(),
        )
    roots = solve_quadratic(a_coef, b_coef, c_coef)
    positive = [x for x in roots if x > 0.0]
    if not positive:
        raise NoPositiveRootError(
            "zero-energy condition has no positive halo level "
            f"(roots {roots}) for r1={r1}, r2={r2}, r3={r3}, p={p}",
            roots=roots,
        )
    alpha = min(positive)
    return (alpha, roots) if full_output else alpha


def solve_monotonic_P(r1, r2, r3, n, residual_tol=ENERGY_RESIDUAL_TOL):
    """Momentum cutoff balancing the monotonic profile's potential energy.

    The potential energy is independent of the cutoff while the kinetic
    term increases strictly from its rest-mass floor of 1, so a root exists
    iff the potential energy lies below -1; it is bracketed and refined with
    Brent iteration.
    """
    eta = monotonic_eta(r1, r2, r3, n)
    pot = functionals.potential_energy_profile(eta)
    if pot >= -1.0:
        raise NoRootError(
            f"potential energy {pot:.6g} cannot balance the rest-mass floor "
            "(needs potential < -1)"
        )

    def residual(p):
        return functionals.kinetic_energy_ball(p) + pot

    bracket = RootBracket.expand(residual, *BRACKET_START)
    if bracket.lo == bracket.hi:
        return bracket.lo
    p_star = brentq(residual, bracket.lo, bracket.hi, xtol=PARAM_TOL)
    if abs(residual(p_star)) > residual_tol:
        raise NoRootError(f"energy residual {residual(p_star):.3e} above tolerance")
    return p_star


def virial_threshold_angle(eta, phi):
    """Largest angular cutoff a* with virial(a*) = -1/2 for these profiles.

    The virial factorizes as S * (a - 1) / 2 for sharp cutoffs, so
    a* = 1 - 1/S; every a <= a* keeps the virial at or below -1/2.  When
    S <= 1/2 no cutoff in (-1, 1) reaches the threshold.
    """
    factor = functionals.spatial_momentum_factor(eta, phi)
    if factor <= 0.5:
        raise ThresholdUnreachableError(
            f"spatial*momentum virial factor {factor:.6g} <= 1/2: "
            "no angular cutoff reaches virial -1/2",
            factor=factor,
        )
    return 1.0 - 1.0 / factor


def solve_threshold_a(ansatz):
    """Threshold angle for an already-built ansatz (angular part ignored)."""
    return virial_threshold_angle(ansatz.spatial, ansatz.momentum)


def solve_uniform(p, a):
    """Solved uniform-ball parameters (zero-energy radius)."""
    return UniformParams(r=solve_uniform_R(p), p=p, a=a)


def solve_corehalo(r1, r2, r3, p, a):
    """Solved core-halo parameters (zero-energy halo level)."""
    alpha = solve_corehalo_alpha(r1, r2, r3, p)
    return CoreHaloParams(r1=r1, r2=r2, r3=r3, p=p, alpha=alpha, a=a)


def solve_monotonic(r1, r2, r3, n, a):
    """Solved monotonic-family parameters (zero-energy momentum cutoff)."""
    p = solve_monotonic_P(r1, r2, r3, n)
    return MonotonicParams(r1=r1, r2=r2, r3=r3, n=n, p=p, a=a)
