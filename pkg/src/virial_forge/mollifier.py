"""Replace step discontinuities with C^1 ramps and restore zero energy.

Every jump of a piecewise profile is replaced by a cubic smoothstep ramp of
half-width delta.  Jumps with both sides positive get a symmetric ramp over
[b - delta, b + delta] (midpoint value at the old breakpoint); jumps touching
zero get a one-sided ramp on the positive side, so non-negativity and the
support are preserved exactly.  Plateau values away from the ramps are
unchanged, and the smoothstep's zero end slopes make every seam C^1.

Smoothing perturbs the energy balance, so each family's free parameter is
re-solved against quadrature-evaluated functionals (ramps make the nested
potential-energy integral closed-form-unwieldy).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from scipy.optimize import brentq

from . import functionals, quadrature
from .errors import NoPositiveRootError, NoRootError, ProfileError, RampOverlapError
from .profiles import (
    CONSTANT,
    RAMP,
    AngularProfile,
    Piece,
    PiecewiseProfile,
    SeparableAnsatz,
    core_halo_eta,
    momentum_ball,
    monotonic_eta,
    uniform_eta,
)
from . import solvers
from .solvers import (
    CoreHaloParams,
    MonotonicParams,
    RootBracket,
    UniformParams,
    solve_quadratic,
)

__all__ = [
    "MollifySpec",
    "ALL_TARGETS",
    "default_delta",
    "mollify_profile",
    "mollify_angular",
    "mollify",
    "rebalance",
    "seam_smoothness",
    "functional_drift",
]

ALL_TARGETS = frozenset({"spatial", "momentum", "angular"})

# Values closer than this (relative) across a breakpoint count as continuous.
_JUMP_REL_TOL = 1e-12


@dataclass(frozen=True)
class MollifySpec:
    """Transition half-width and which profile factors to smooth.

    ``delta`` is in the units of the mollified variable and must stay below
    half the smallest piece width so ramps cannot collide.  ``targets`` is a
    subset of {"spatial", "momentum", "angular"}; the string "all" selects
    every factor.
    """

    delta: float
    targets: frozenset = ALL_TARGETS

    def __post_init__(self):
        if self.delta < 0.0 or not math.isfinite(self.delta):
            raise ProfileError("mollification half-width must be finite and >= 0")
        if isinstance(self.targets, str):
            targets = ALL_TARGETS if self.targets == "all" else frozenset({self.targets})
            object.__setattr__(self, "targets", targets)
        else:
            object.__setattr__(self, "targets", frozenset(self.targets))
        unknown = self.targets - ALL_TARGETS
        if unknown:
            raise ProfileError(f"unknown mollification targets {sorted(unknown)}")


def default_delta(ansatz, targets=ALL_TARGETS, fraction=1e-3):
    """fraction * (smallest piece width among the targeted factors)."""
    widths = []
    if "spatial" in targets:
        widths.append(ansatz.spatial.smallest_width)
    if "momentum" in targets:
        widths.append(ansatz.momentum.smallest_width)
    if "angular" in targets:
        widths.append(ansatz.angular.smallest_width)
    if not widths:
        raise ProfileError("no mollification targets selected")
    return fraction * min(widths)


def _is_jump(left, right):
    gap = abs(left - right)
    return gap > _JUMP_REL_TOL * max(1.0, abs(left), abs(right))


def _mollify_pieces(pieces, delta):
    """Insert smoothstep ramps at every jump of an ordered piece tuple."""
    if delta == 0.0:
        return tuple(pieces)
    if any(p.kind == RAMP for p in pieces):
        raise ProfileError("profile already carries ramps; mollify step profiles only")

    # One event per discontinuous interior boundary.
    events = []  # (boundary_index, ramp_lo, ramp_hi, left_value, right_value)
    for i in range(len(pieces) - 1):
        b = pieces[i].hi
        vl = pieces[i].right_value()
        vr = pieces[i + 1].left_value()
        if not _is_jump(vl, vr):
            continue
        if vl > 0.0 and vr > 0.0:
            lo, hi = b - delta, b + delta
        elif vl > 0.0:
            lo, hi = b - delta, b  # downward to zero: ramp inside the support
        else:
            lo, hi = b, b + delta  # upward from zero: ramp inside the support
        events.append((i, lo, hi, vl, vr))

    # A ramp must stay inside the two pieces adjacent to its breakpoint.
    for i, lo, hi, _, _ in events:
        if lo < pieces[i].lo:
            raise RampOverlapError(
                f"ramp at breakpoint {pieces[i].hi} would cross the piece edge "
                f"{pieces[i].lo}",
                pair=(pieces[i].lo, pieces[i].hi),
            )
        if hi > pieces[i + 1].hi:
            raise RampOverlapError(
                f"ramp at breakpoint {pieces[i].hi} would cross the piece edge "
                f"{pieces[i + 1].hi}",
                pair=(pieces[i].hi, pieces[i + 1].hi),
            )
    for (i, _, hi_a, _, _), (j, lo_b, _, _, _) in zip(events, events[1:]):
        if hi_a > lo_b:
            raise RampOverlapError(
                f"ramps at breakpoints {pieces[i].hi} and {pieces[j].hi} overlap",
                pair=(pieces[i].hi, pieces[j].hi),
            )

    cut_left = [0.0] * len(pieces)   # intrusion into each piece from its left edge
    cut_right = [0.0] * len(pieces)  # intrusion from its right edge
    ramp_after = {}
    for i, lo, hi, vl, vr in events:
        cut_right[i] = pieces[i].hi - lo
        cut_left[i + 1] = hi - pieces[i + 1].lo
        ramp_after[i] = Piece.ramp(vl, vr, lo, hi)

    out = []
    for i, p in enumerate(pieces):
        lo = p.lo + cut_left[i]
        hi = p.hi if math.isinf(p.hi) else p.hi - cut_right[i]
        if hi > lo:
            if p.kind == CONSTANT:
                out.append(Piece.constant(p.value, lo, hi))
            else:
                # Re-anchor so the power law stays the same function.
                value = p.value * (p.lo / lo) ** p.exponent if lo != p.lo else p.value
                out.append(Piece.power(value, p.exponent, lo, hi))
        if i in ramp_after:
            out.append(ramp_after[i])
    return tuple(out)


def mollify_profile(profile, delta):
    """C^1 version of a radial step profile (plateaus unchanged)."""
    return PiecewiseProfile(_mollify_pieces(profile.pieces, delta), profile.domain_label)


def mollify_angular(angular, delta):
    """C^1 version of an angular profile; the domain endpoints need no ramp."""
    return AngularProfile(_mollify_pieces(angular.pieces, delta))


def mollify(ansatz, spec):
    """Mollify the selected factors of an ansatz."""
    spatial = ansatz.spatial
    momentum = ansatz.momentum
    angular = ansatz.angular
    if "spatial" in spec.targets:
        spatial = mollify_profile(spatial, spec.delta)
    if "momentum" in spec.targets:
        momentum = mollify_profile(momentum, spec.delta)
    if "angular" in spec.targets:
        angular = mollify_angular(angular, spec.delta)
    return SeparableAnsatz(spatial, momentum, angular)


def _mollified_momentum(p, spec):
    phi = momentum_ball(p)
    if "momentum" in spec.targets:
        phi = mollify_profile(phi, spec.delta)
    return phi


def _mollified_angular(a, spec):
    ang = AngularProfile.cutoff(a)
    if "angular" in spec.targets:
        ang = mollify_angular(ang, spec.delta)
    return ang


def _kinetic_of(phi):
    if not phi.has_ramp:
        # Sharp momentum ball: closed form.
        return functionals.kinetic_energy_ball(phi.support_radius)
    num = quadrature.profile_moment_quad(
        phi, 2, weight=lambda q: math.sqrt(1.0 + q * q)
    ).value
    return num / phi.moment(2)


def _potential_of(eta):
    return functionals.potential_energy_profile(eta)


def rebalance(params, spec, energy_tol=1e-10):
    """Re-solve the family's free parameter on the mollified profiles.

    Returns ``(new_params, mollified_ansatz)`` where the free parameter
    (radius for the uniform ball, halo level for the disjoint core-halo,
    momentum cutoff for the monotonic family) has been re-solved so the
    mollified datum's total energy vanishes to ``energy_tol``.

    With ``spec.delta == 0`` this reproduces the step solve exactly.
    """
    if spec.delta == 0.0:
        return _step_solve(params)
    if isinstance(params, UniformParams):
        return _rebalance_uniform(params, spec, energy_tol)
    if isinstance(params, CoreHaloParams):
        return _rebalance_corehalo(params, spec, energy_tol)
    if isinstance(params, MonotonicParams):
        return _rebalance_monotonic(params, spec, energy_tol)
    raise TypeError(f"unsupported family parameters {type(params).__name__}")


def _step_solve(params):
    if isinstance(params, UniformParams):
        new = replace(params, r=solvers.solve_uniform_R(params.p))
        return new, solvers.uniform_ansatz(new)
    if isinstance(params, CoreHaloParams):
        new = replace(
            params,
            alpha=solvers.solve_corehalo_alpha(params.r1, params.r2, params.r3, params.p),
        )
        return new, solvers.core_halo_ansatz(new)
    if isinstance(params, MonotonicParams):
        new = replace(
            params,
            p=solvers.solve_monotonic_P(params.r1, params.r2, params.r3, params.n),
        )
        return new, solvers.monotonic_ansatz(new)
    raise TypeError(f"unsupported family parameters {type(params).__name__}")


def _spatial_of_uniform(r, spec):
    eta = uniform_eta(r)
    if "spatial" in spec.targets:
        eta = mollify_profile(eta, spec.delta)
    return eta


def _rebalance_uniform(params, spec, energy_tol):
    kin = _kinetic_of(_mollified_momentum(params.p, spec))

    def residual(r):
        return kin + _potential_of(_spatial_of_uniform(r, spec))

    r0 = 3.0 / (5.0 * kin)
    bracket = RootBracket.expand(residual, 0.25 * r0, 4.0 * r0)
    r_star = bracket.lo if bracket.lo == bracket.hi else brentq(
        residual, bracket.lo, bracket.hi, xtol=1e-14
    )
    if abs(residual(r_star)) > energy_tol:
        raise NoRootError(f"rebalanced energy residual {residual(r_star):.3e}")
    new_params = replace(params, r=r_star)
    ansatz = SeparableAnsatz(
        _spatial_of_uniform(r_star, spec),
        _mollified_momentum(params.p, spec),
        _mollified_angular(params.a, spec),
    )
    return new_params, ansatz


def _rebalance_corehalo(params, spec, energy_tol):
    kin = _kinetic_of(_mollified_momentum(params.p, spec))

    def spatial_of(alpha):
        eta = core_halo_eta(params.r1, params.r2, params.r3, alpha)
        if "spatial" in spec.targets:
            eta = mollify_profile(eta, spec.delta)
        return eta

    def balance(alpha):
        # g(alpha) = KE * m2(alpha)^2 - N(alpha); exactly quadratic in alpha
        # because the halo ramps scale linearly with the halo level.
        eta = spatial_of(alpha)
        m2 = eta.moment(2)
        nested = quadrature.nested_mass_integral(eta)
        return kin * m2 * m2 - nested

    scale = params.alpha if params.alpha > 0.0 else 1e-3
    g0 = balance(0.0)
    g1 = balance(scale)
    g2 = balance(2.0 * scale)
    a_coef = (g2 - 2.0 * g1 + g0) / (2.0 * scale * scale)
    b_coef = (g1 - g0) / scale - a_coef * scale
    roots = solve_quadratic(a_coef, b_coef, g0)
    positive = [x for x in roots if x > 0.0]
    if not positive:
        raise NoPositiveRootError(
            f"mollified zero-energy condition lost its positive root (roots {roots})",
            roots=roots,
        )
    alpha = min(positive)

    def residual(x):
        eta = spatial_of(x)
        return kin + _potential_of(eta)

    if abs(residual(alpha)) > energy_tol:
        try:
            alpha = brentq(residual, 0.5 * alpha, 2.0 * alpha,
                           xtol=max(1e-18, 1e-12 * alpha), maxiter=200)
        except ValueError as exc:
            raise NoRootError(f"could not polish the mollified halo level: {exc}")
        if abs(residual(alpha)) > energy_tol:
            raise NoRootError(f"rebalanced energy residual {residual(alpha):.3e}")
    new_params = replace(params, alpha=alpha)
    ansatz = SeparableAnsatz(
        spatial_of(alpha),
        _mollified_momentum(params.p, spec),
        _mollified_angular(params.a, spec),
    )
    return new_params, ansatz


def _rebalance_monotonic(params, spec, energy_tol):
    eta = monotonic_eta(params.r1, params.r2, params.r3, params.n)
    if "spatial" in spec.targets:
        eta = mollify_profile(eta, spec.delta)
    pot = _potential_of(eta)
    if pot >= -1.0:
        raise NoRootError(
            f"mollified potential energy {pot:.6g} cannot balance the rest-mass floor"
        )

    def residual(p):
        return _kinetic_of(_mollified_momentum(p, spec)) + pot

    bracket = RootBracket.expand(residual, 1e-3, 10.0)
    p_star = bracket.lo if bracket.lo == bracket.hi else brentq(
        residual, bracket.lo, bracket.hi, xtol=1e-12
    )
    if abs(residual(p_star)) > energy_tol:
        raise NoRootError(f"rebalanced energy residual {residual(p_star):.3e}")
    new_params = replace(params, p=p_star)
    ansatz = SeparableAnsatz(
        eta, _mollified_momentum(p_star, spec), _mollified_angular(params.a, spec)
    )
    return new_params, ansatz


def seam_smoothness(profile, h=1e-6):
    """Worst one-sided derivative mismatch across ramp seams.

    Each ramp is examined in its own normalized coordinates (unit ramp
    width, values scaled by the larger endpoint magnitude): at both seams
    the left and right difference quotients with step ``h`` are compared.
    A C^1 seam gives a discrepancy of order h; a kinked (merely continuous)
    seam gives an order-one discrepancy regardless of h.
    """
    worst = 0.0
    for p in profile.pieces:
        if p.kind != RAMP:
            continue
        width = p.hi - p.lo
        vscale = max(abs(p.left), abs(p.right))
        if vscale == 0.0:
            continue

        def g(t):
            return profile._value(p.lo + t * width) / vscale

        for seam in (0.0, 1.0):
            d_minus = (g(seam) - g(seam - h)) / h
            d_plus = (g(seam + h) - g(seam)) / h
            worst = max(worst, abs(d_plus - d_minus))
    return worst


_DRIFT_KEYS = ("mass", "kinetic", "potential", "total_energy", "virial", "l32_norm")


def functional_drift(step_ansatz, mollified_ansatz):
    """Per-functional |mollified - step| table (values and drifts)."""
    step = functionals.evaluate(step_ansatz)
    moll = functionals.evaluate(mollified_ansatz)
    out = {}
    for key in _DRIFT_KEYS:
        s, m = getattr(step, key), getattr(moll, key)
        out[key] = {"step": s, "mollified": m, "drift": abs(m - s)}
    return out
