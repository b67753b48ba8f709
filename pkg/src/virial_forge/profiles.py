"""Piecewise radial and angular profiles with exact moment integrals.

The phase-space densities built by this package factor into three
one-dimensional profiles: a radial spatial factor, a radial momentum factor,
and an angular factor in the cosine of the position-momentum angle.  Each is
a non-negative piecewise function assembled from constant plateaus, power-law
decays anchored at the left endpoint of their interval, and C^1 cubic
smoothstep ramps.  Every moment integral needed by the mass, energy, norm and
virial functionals has a closed form piece by piece; the only integrals that
fall back to numerics are fractional powers of ramp pieces.

All profile objects are immutable after construction and safe to share
between threads.  Derived quantities (moments) are memoized per instance.
"""

from __future__ import annotations

import bisect
import math
import warnings
from dataclasses import dataclass

from .errors import DegenerateFactorError, DivergentMomentError, ProfileError

__all__ = [
    "Piece",
    "PiecewiseProfile",
    "AngularProfile",
    "SeparableAnsatz",
    "uniform_eta",
    "momentum_ball",
    "core_halo_eta",
    "monotonic_eta",
]

CONSTANT = "constant"
POWER = "power"
RAMP = "ramp"

# Warn (but accept) when an angular profile integrates to less than this.
NEAR_DEGENERATE_ANGULAR = 1e-8


def smoothstep(t):
    """C^1 cubic smoothstep: 0 -> 1 on [0, 1] with zero slope at both ends."""
    if t <= 0.0:
        return 0.0
    if t >= 1.0:
        return 1.0
    return t * t * (3.0 - 2.0 * t)


def power_integral(exponent, lo, hi):
    """Exact integral of r**exponent over [lo, hi].

    The logarithmic case is detected by exact comparison with -1, not by
    numerical proximity.  Small integer exponents use factored forms of the
    difference of powers, which stay accurate when hi is close to lo (thin
    shells) or when lo and hi nearly cancel (angular intervals straddling
    zero); other exponents on positive intervals go through expm1/log.
    """
    if exponent == -1.0:
        return math.log(hi / lo)
    if exponent == 0.0:
        return hi - lo
    if exponent == 1.0:
        return 0.5 * (hi - lo) * (hi + lo)
    if exponent == 2.0:
        return (hi - lo) * (hi * hi + hi * lo + lo * lo) / 3.0
    if exponent == 3.0:
        return 0.25 * (hi - lo) * (hi + lo) * (hi * hi + lo * lo)
    if exponent == 4.0:
        return (hi - lo) * (
            hi**4 + hi**3 * lo + hi**2 * lo**2 + hi * lo**3 + lo**4
        ) / 5.0
    e1 = exponent + 1.0
    if lo == 0.0:
        return hi**e1 / e1
    if lo > 0.0:
        return lo**e1 * math.expm1(e1 * math.log(hi / lo)) / e1
    return (hi**e1 - lo**e1) / e1


@dataclass(frozen=True)
class Piece:
    """One segment of a piecewise profile on the interval [lo, hi).

    ``kind`` selects the functional form:

    * ``constant`` -- the value ``value`` everywhere on the segment;
    * ``power``    -- ``value * (lo / r)**exponent``, anchored at the left
      endpoint (so the piece takes the value ``value`` at ``lo``);
    * ``ramp``     -- C^1 cubic smoothstep from ``left`` at ``lo`` to
      ``right`` at ``hi``.

    Values are non-negative on the whole interval by construction.  Only a
    constant zero piece may extend to +inf (the compact-support tail).
    """

    kind: str
    lo: float
    hi: float
    value: float = 0.0
    exponent: float = 0.0
    left: float = 0.0
    right: float = 0.0

    def __post_init__(self):
        if self.kind not in (CONSTANT, POWER, RAMP):
            raise ProfileError(f"unknown piece kind {self.kind!r}")
        if not (self.lo < self.hi):
            raise ProfileError(f"empty piece interval [{self.lo}, {self.hi})")
        if not math.isfinite(self.lo):
            raise ProfileError("piece lower endpoint must be finite")
        if math.isinf(self.hi) and not (self.kind == CONSTANT and self.value == 0.0):
            raise ProfileError("only an identically-zero constant piece may reach +inf")
        if self.kind == CONSTANT:
            if self.value < 0.0 or not math.isfinite(self.value):
                raise ProfileError("constant piece value must be finite and >= 0")
        elif self.kind == POWER:
            if self.lo <= 0.0:
                raise ProfileError("power-law piece requires lo > 0")
            if self.value < 0.0 or not math.isfinite(self.value):
                raise ProfileError("power-law prefactor must be finite and >= 0")
            if not math.isfinite(self.exponent):
                raise ProfileError("power-law exponent must be finite")
        else:
            if min(self.left, self.right) < 0.0:
                raise ProfileError("ramp endpoint values must be >= 0")
            if not (math.isfinite(self.left) and math.isfinite(self.right)):
                raise ProfileError("ramp endpoint values must be finite")

    @staticmethod
    def constant(value, lo, hi):
        return Piece(CONSTANT, float(lo), float(hi), value=float(value))

    @staticmethod
    def power(value, exponent, lo, hi):
        return Piece(POWER, float(lo), float(hi), value=float(value), exponent=float(exponent))

    @staticmethod
    def ramp(left, right, lo, hi):
        return Piece(RAMP, float(lo), float(hi), left=float(left), right=float(right))

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def is_zero(self):
        if self.kind == CONSTANT or self.kind == POWER:
            return self.value == 0.0
        return self.left == 0.0 and self.right == 0.0

    def value_at(self, r):
        """Value of the piece at a point of [lo, hi] (closure included)."""
        if self.kind == CONSTANT:
            return self.value
        if self.kind == POWER:
            return self.value * (self.lo / r) ** self.exponent
        t = (r - self.lo) / (self.hi - self.lo)
        return self.left + (self.right - self.left) * smoothstep(t)

    def left_value(self):
        """Limit of the piece value at lo (from inside)."""
        return self.left if self.kind == RAMP else self.value

    def right_value(self):
        """Limit of the piece value at hi (from inside)."""
        if self.kind == CONSTANT:
            return self.value
        if self.kind == POWER:
            return self.value * (self.lo / self.hi) ** self.exponent
        return self.right

    def _ramp_value_coeffs(self):
        # Ramp value as a polynomial in u = r - lo:
        #   left + d*(3u^2/w^2 - 2u^3/w^3)
        w = self.hi - self.lo
        d = self.right - self.left
        return (self.left, 0.0, 3.0 * d / w**2, -2.0 * d / w**3)

    def _ramp_partial_moment(self, k, r):
        # Exact int_lo^r value(s) * s^k ds for a ramp piece (polynomial).
        coeffs = self._ramp_value_coeffs()
        u = r - self.lo
        total = 0.0
        for j, aj in enumerate(coeffs):
            if aj == 0.0:
                continue
            for m in range(k + 1):
                deg = j + m + 1
                total += aj * math.comb(k, m) * self.lo ** (k - m) * u**deg / deg
        return total

    def partial_moment(self, k, r):
        """Exact int_lo^r value(s) * s^k ds, for lo <= r <= hi."""
        if self.kind == CONSTANT:
            if self.value == 0.0:
                return 0.0
            return self.value * power_integral(float(k), self.lo, r)
        if self.kind == POWER:
            if self.value == 0.0 or r == self.lo:
                return 0.0
            pref = self.value * self.lo**self.exponent
            return pref * power_integral(k - self.exponent, self.lo, r)
        return self._ramp_partial_moment(k, r)

    def moment(self, k):
        """Exact int value(r) * r^k dr over the whole piece."""
        if self.is_zero:
            return 0.0
        if math.isinf(self.hi):
            return 0.0
        return self.partial_moment(k, self.hi)

    def power_moment(self, beta, k):
        """int value(r)**beta * r^k dr over the piece.

        Closed form for constant and power-law pieces; fractional powers of a
        ramp are not polynomial, so ramps integrate numerically (tight fixed
        tolerance, deterministic).
        """
        if self.is_zero:
            return 0.0
        if self.kind == CONSTANT:
            return self.value**beta * power_integral(float(k), self.lo, self.hi)
        if self.kind == POWER:
            pref = self.value**beta * self.lo ** (beta * self.exponent)
            return pref * power_integral(k - beta * self.exponent, self.lo, self.hi)
        from scipy.integrate import quad

        val, _ = quad(
            lambda r: self.value_at(r) ** beta * r**k,
            self.lo,
            self.hi,
            epsabs=1e-15,
            epsrel=1e-13,
            limit=200,
        )
        return val


def _check_coverage(pieces, start, end):
    if not pieces:
        raise ProfileError("profile needs at least one piece")
    if pieces[0].lo != start:
        raise ProfileError(f"pieces must start at {start}, got {pieces[0].lo}")
    for a, b in zip(pieces, pieces[1:]):
        if a.hi != b.lo:
            raise ProfileError(f"gap or overlap between pieces at {a.hi} vs {b.lo}")
    if pieces[-1].hi != end:
        raise ProfileError(f"pieces must end at {end}, got {pieces[-1].hi}")


class _PieceSet:
    """Shared evaluation/moment machinery over an ordered piece tuple."""

    pieces: tuple

    def _starts(self):
        cache = self._cache
        if "starts" not in cache:
            cache["starts"] = [p.lo for p in self.pieces]
        return cache["starts"]

    def _piece_at(self, r):
        idx = bisect.bisect_right(self._starts(), r) - 1
        return self.pieces[idx]

    def _value(self, r):
        if r == self.pieces[-1].hi:
            return self.pieces[-1].right_value()
        return self._piece_at(r).value_at(r)

    @property
    def breakpoints(self):
        """Interior piece boundaries (finite)."""
        return tuple(p.lo for p in self.pieces[1:])

    @property
    def has_ramp(self):
        return any(p.kind == RAMP for p in self.pieces)

    def moment(self, k):
        """Exact int g(r) r^k dr over the whole domain, memoized."""
        if k < 0:
            raise ValueError("moment order must be >= 0")
        cache = self._cache
        key = ("moment", k)
        if key not in cache:
            total = math.fsum(p.moment(k) for p in self.pieces)
            if not math.isfinite(total):
                raise DivergentMomentError(f"moment of order {k} diverges")
            cache[key] = total
        return cache[key]

    def power_moment(self, beta, k):
        """Exact/deterministic int g(r)**beta r^k dr, memoized."""
        if beta <= 0.0:
            raise ValueError("power must be > 0")
        cache = self._cache
        key = ("power_moment", beta, k)
        if key not in cache:
            total = math.fsum(p.power_moment(beta, k) for p in self.pieces)
            if not math.isfinite(total):
                raise DivergentMomentError(f"power moment ({beta}, {k}) diverges")
            cache[key] = total
        return cache[key]


@dataclass(frozen=True)
class PiecewiseProfile(_PieceSet):
    """Non-negative piecewise function on [0, inf).

    Pieces cover [0, inf) without gap or overlap; the final piece is the
    identically-zero tail, so every constructible profile has compact
    support and all moments up to order 3 are finite.

    ``domain_label`` records which radial variable the profile lives on
    ("radial-position" or "radial-momentum").
    """

    pieces: tuple
    domain_label: str = "radial-position"

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        object.__setattr__(self, "_cache", {})
        _check_coverage(self.pieces, 0.0, math.inf)
        if self.domain_label not in ("radial-position", "radial-momentum"):
            raise ProfileError(f"unknown domain label {self.domain_label!r}")

    @classmethod
    def from_segments(cls, segments, domain_label="radial-position"):
        """Build a profile from finite segments, appending the zero tail."""
        segments = [s for s in segments if not s.is_zero or math.isfinite(s.hi)]
        if not segments:
            return cls((Piece.constant(0.0, 0.0, math.inf),), domain_label)
        tail_lo = segments[-1].hi
        if math.isfinite(tail_lo):
            segments = segments + [Piece.constant(0.0, tail_lo, math.inf)]
        return cls(tuple(segments), domain_label)

    def __call__(self, r):
        """Evaluate at r >= 0; right-continuous at breakpoints."""
        if r < 0.0:
            raise ValueError("radial argument must be >= 0")
        return self._value(r)

    @property
    def support_radius(self):
        """Largest radius below which the profile can be nonzero."""
        for p in reversed(self.pieces):
            if not p.is_zero:
                return p.hi
        return 0.0

    @property
    def smallest_width(self):
        """Smallest finite piece width (mollification feature size)."""
        widths = [p.width for p in self.pieces if math.isfinite(p.hi)]
        if not widths:
            raise ProfileError("profile has no finite piece")
        return min(widths)

    def cumulative_moment2(self, r):
        """Exact cumulative int_0^r g(s) s^2 ds (the enclosed-mass integral)."""
        if r < 0.0:
            raise ValueError("radial argument must be >= 0")
        cache = self._cache
        if "prefix2" not in cache:
            acc, prefix = 0.0, []
            for p in self.pieces:
                prefix.append(acc)
                acc += p.moment(2)
            cache["prefix2"] = prefix
        idx = bisect.bisect_right(self._starts(), r) - 1
        piece = self.pieces[idx]
        base = cache["prefix2"][idx]
        if r <= piece.lo:
            return base
        return base + piece.partial_moment(2, min(r, piece.hi))

    def dilate(self, lam):
        """Profile r -> g(r / lam): support scales by lam, values unchanged."""
        if lam <= 0.0 or not math.isfinite(lam):
            raise ValueError("dilation factor must be positive and finite")
        out = []
        for p in self.pieces:
            lo, hi = lam * p.lo, p.hi if math.isinf(p.hi) else lam * p.hi
            if p.kind == CONSTANT:
                out.append(Piece.constant(p.value, lo, hi))
            elif p.kind == POWER:
                out.append(Piece.power(p.value, p.exponent, lo, hi))
            else:
                out.append(Piece.ramp(p.left, p.right, lo, hi))
        return PiecewiseProfile(tuple(out), self.domain_label)


@dataclass(frozen=True)
class AngularProfile(_PieceSet):
    """Non-negative piecewise function of x = cos(angle) on [-1, 1].

    The canonical case is the sharp cutoff ``chi_[-1, a]`` selecting momenta
    whose angle with the position vector has cosine at most ``a`` (inward
    for a < 0).  Mollified cutoffs carry ramp pieces; power-law pieces are
    not meaningful on this domain and are rejected.
    """

    pieces: tuple

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        object.__setattr__(self, "_cache", {})
        _check_coverage(self.pieces, -1.0, 1.0)
        if any(p.kind == POWER for p in self.pieces):
            raise ProfileError("angular profiles take constant or ramp pieces only")

    @classmethod
    def cutoff(cls, a):
        """Sharp cutoff chi_[-1, a] for a in (-1, 1]."""
        a = float(a)
        if not (-1.0 < a <= 1.0):
            raise ProfileError("cutoff parameter must lie in (-1, 1]")
        if a == 1.0:
            return cls((Piece.constant(1.0, -1.0, 1.0),))
        return cls((Piece.constant(1.0, -1.0, a), Piece.constant(0.0, a, 1.0)))

    def __call__(self, x):
        if not (-1.0 <= x <= 1.0):
            raise ValueError("angular argument must lie in [-1, 1]")
        return self._value(x)

    @property
    def smallest_width(self):
        return min(p.width for p in self.pieces)

    def moments(self):
        """(m0, m1, m32) = (int L dx, int x L dx, int L^{3/2} dx), exact.

        Raises DegenerateFactorError when m0 = 0 (normalization undefined);
        warns when m0 is positive but tiny.
        """
        m0 = self.moment(0)
        if m0 <= 0.0:
            raise DegenerateFactorError("angular profile integrates to zero")
        if m0 < NEAR_DEGENERATE_ANGULAR:
            warnings.warn(
                f"angular profile nearly degenerate (integral {m0:.3e})",
                RuntimeWarning,
                stacklevel=2,
            )
        return m0, self.moment(1), self.power_moment(1.5, 0)


@dataclass(frozen=True)
class SeparableAnsatz:
    """Phase-space density C * spatial(|q|) * momentum(|p|) * angular(cos).

    The normalization constant is derived so the total mass is 1 and cached
    on first use.  Instances are immutable value objects.
    """

    spatial: PiecewiseProfile
    momentum: PiecewiseProfile
    angular: AngularProfile

    def __post_init__(self):
        object.__setattr__(self, "_cache", {})

    @property
    def norm_constant(self):
        """C with 1/C = 8 pi^2 * ||spatial r^2|| * ||momentum p^2|| * int L."""
        cache = self._cache
        if "C" not in cache:
            m2q = self.spatial.moment(2)
            m2p = self.momentum.moment(2)
            m0 = self.angular.moments()[0]
            for name, val in (("spatial", m2q), ("momentum", m2p), ("angular", m0)):
                if val <= 0.0 or not math.isfinite(val):
                    raise DegenerateFactorError(f"{name} factor integral is {val}")
            cache["C"] = 1.0 / (8.0 * math.pi**2 * m2q * m2p * m0)
        return cache["C"]

    @property
    def has_ramp(self):
        return self.spatial.has_ramp or self.momentum.has_ramp or self.angular.has_ramp

    def density(self, p_mag, q_mag, cos_angle):
        """Pointwise phase-space density f(p, q) for given magnitudes/angle."""
        return (
            self.norm_constant
            * self.spatial(q_mag)
            * self.momentum(p_mag)
            * self.angular(cos_angle)
        )


def uniform_eta(radius):
    """Indicator of the ball of the given radius (uniform spatial profile)."""
    if radius <= 0.0:
        raise ProfileError("ball radius must be positive")
    return PiecewiseProfile.from_segments([Piece.constant(1.0, 0.0, radius)])


def momentum_ball(p_max):
    """Indicator of the momentum ball |p| <= p_max."""
    if p_max <= 0.0:
        raise ProfileError("momentum cutoff must be positive")
    return PiecewiseProfile.from_segments(
        [Piece.constant(1.0, 0.0, p_max)], domain_label="radial-momentum"
    )


def core_halo_eta(r1, r2, r3, halo_value):
    """Unit core on [0, r1] plus a constant halo on [r2, r3] (disjoint shells)."""
    if not (0.0 < r1 <= r2 <= r3):
        raise ProfileError("core-halo radii must satisfy 0 < r1 <= r2 <= r3")
    if halo_value < 0.0:
        raise ProfileError("halo value must be >= 0")
    segments = [Piece.constant(1.0, 0.0, r1)]
    if r2 > r1:
        segments.append(Piece.constant(0.0, r1, r2))
    if r3 > r2:
        segments.append(Piece.constant(halo_value, r2, r3))
    return PiecewiseProfile.from_segments(segments)


def monotonic_eta(r1, r2, r3, n):
    """Unit core, power-law (r1/r)**n atmosphere on [r1, r2], constant skin to r3.

    Continuous and non-increasing on its support by construction.
    """
    if not (0.0 < r1 <= r2 <= r3):
        raise ProfileError("radii must satisfy 0 < r1 <= r2 <= r3")
    if n <= 0.0:
        raise ProfileError("atmosphere exponent must be positive")
    segments = [Piece.constant(1.0, 0.0, r1)]
    if r2 > r1:
        segments.append(Piece.power(1.0, n, r1, r2))
    if r3 > r2:
        segments.append(Piece.constant((r1 / r2) ** n, r2, r3))
    return PiecewiseProfile.from_segments(segments)
