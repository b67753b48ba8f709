"""Adaptive integration used as an independent oracle for every closed form.

Backed by QUADPACK's adaptive Gauss-Kronrod rules (``scipy.integrate.quad``),
which accept interior breakpoints so subdivision never straddles a supplied
discontinuity.  Improper upper limits are never integrated: compact support
is enforced upstream, so all integrals here run over finite intervals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad as _quad

from .errors import QuadratureBudgetError

__all__ = [
    "QuadResult",
    "integrate",
    "profile_moment_quad",
    "angular_moment_quad",
    "nested_mass_quad",
    "nested_mass_integral",
]

DEFAULT_ABS_TOL = 1e-12
DEFAULT_REL_TOL = 1e-10
DEFAULT_BUDGET = 10**6

# Subdivision limits are escalated lazily; allocating the full budget's
# workspace up front would dominate the cost of easy integrals.
_LIMIT_LADDER = (200, 5000)


@dataclass(frozen=True)
class QuadResult:
    """Value, error estimate, and subdivision count of one integration."""

    value: float
    abs_error_estimate: float
    subdivisions: int


def integrate(f, lo, hi, breakpoints=(), abs_tol=DEFAULT_ABS_TOL,
              rel_tol=DEFAULT_REL_TOL, budget=DEFAULT_BUDGET):
    """Adaptively integrate f over [lo, hi] honoring interior breakpoints.

    Parameters
    ----------
    f : callable
        Scalar integrand, finite on [lo, hi] away from the breakpoints.
    lo, hi : float
        Finite integration limits with lo <= hi.
    breakpoints : sequence of float
        Points the subdivision must not straddle; entries outside (lo, hi)
        are ignored.
    abs_tol, rel_tol : float
        Requested absolute/relative accuracy (both must be positive).
    budget : int
        Cap on the number of subintervals before giving up.

    Returns
    -------
    QuadResult

    Raises
    ------
    QuadratureBudgetError
        If the requested accuracy is not reached within the budget.
    """
    if abs_tol <= 0.0 or rel_tol <= 0.0:
        raise ValueError("tolerances must be positive")
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("integration limits must be finite")
    if lo > hi:
        raise ValueError("need lo <= hi")
    if lo == hi:
        return QuadResult(0.0, 0.0, 0)

    pts = sorted({float(b) for b in breakpoints if lo < b < hi})
    message = None
    for limit in (*_LIMIT_LADDER, budget):
        limit = min(limit, budget)
        out = _quad(f, lo, hi, points=pts or None, epsabs=abs_tol,
                    epsrel=rel_tol, limit=limit, full_output=1)
        if len(out) == 3:
            value, err, info = out
            return QuadResult(value, err, int(info["last"]))
        message = out[3]
        if limit >= budget:
            break
    raise QuadratureBudgetError(
        f"integration failed within budget {budget}: {message}"
    )


def profile_moment_quad(profile, k, beta=1.0, weight=None,
                        abs_tol=DEFAULT_ABS_TOL, rel_tol=DEFAULT_REL_TOL):
    """Numeric int weight(r) * g(r)**beta * r^k dr over the profile's support."""
    upper = profile.support_radius
    if upper == 0.0:
        return QuadResult(0.0, 0.0, 0)
    if weight is None:
        f = lambda r: profile(r) ** beta * r**k  # noqa: E731
    else:
        f = lambda r: weight(r) * profile(r) ** beta * r**k  # noqa: E731
    return integrate(f, 0.0, upper, breakpoints=profile.breakpoints,
                     abs_tol=abs_tol, rel_tol=rel_tol)


def angular_moment_quad(angular, k=0, beta=1.0,
                        abs_tol=DEFAULT_ABS_TOL, rel_tol=DEFAULT_REL_TOL):
    """Numeric int L(x)**beta * x^k dx over [-1, 1]."""
    f = lambda x: angular(x) ** beta * x**k  # noqa: E731
    return integrate(f, -1.0, 1.0, breakpoints=angular.breakpoints,
                     abs_tol=abs_tol, rel_tol=rel_tol)


def nested_mass_quad(eta, abs_tol=DEFAULT_ABS_TOL, rel_tol=DEFAULT_REL_TOL):
    """Double radial integral int g(q) q (int_0^q g(s) s^2 ds) dq as QuadResult.

    The inner cumulative mass is evaluated through the exact piecewise
    antiderivative; only the outer integral is adaptive.
    """
    upper = eta.support_radius
    if upper == 0.0:
        return QuadResult(0.0, 0.0, 0)

    def outer(q):
        return eta(q) * q * eta.cumulative_moment2(q)

    return integrate(outer, 0.0, upper, breakpoints=eta.breakpoints,
                     abs_tol=abs_tol, rel_tol=rel_tol)


def nested_mass_integral(eta, abs_tol=DEFAULT_ABS_TOL, rel_tol=DEFAULT_REL_TOL):
    """Value of the nested mass integral (see nested_mass_quad)."""
    return nested_mass_quad(eta, abs_tol=abs_tol, rel_tol=rel_tol).value
