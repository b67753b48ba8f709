"""Parameter sweeps: the uniform-ball virial floor and large-P scaling fits.

Two facts get reproduced numerically here.  First, the zero-energy uniform
ball has virial 27 P (a - 1) / (160 KE(P)), which stays strictly above
-9/20 for every choice of parameters and only approaches that floor as
P -> inf, a -> -1.  Second, the core-halo family with radii (P^-2, P, P^2)
keeps a positive zero-energy halo level that decays like P^-23/2 while its
virial grows like -(1 - a) P^3, so zero-energy data reach arbitrarily
negative virial.

Scans run the closed-form pipeline for speed; one grid point per scan
(chosen by a fixed-seed RNG so output stays deterministic) is cross-checked
against the adaptive-quadrature oracle.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import functionals
from .errors import GridExhaustedError, NoPositiveRootError, VirialForgeError
from .solvers import (
    CoreHaloParams,
    UniformParams,
    core_halo_ansatz,
    solve_corehalo_alpha,
    solve_uniform_R,
    uniform_ansatz,
)

__all__ = [
    "ScanGrid",
    "FitResult",
    "FloorScanResult",
    "ScalingScanResult",
    "default_floor_grid",
    "default_scaling_pvalues",
    "uniform_ball_floor",
    "asymptotic_scaling",
    "virial_unbounded_below",
    "loglog_fit",
    "CSV_COLUMNS",
    "format_float",
    "rows_to_csv",
]

THREADS_ENV = "VIRIAL_FORGE_THREADS"

CSV_COLUMNS = ("family", "P", "a", "alpha", "R", "KE", "PE", "E", "V", "l32_norm")

_CROSSCHECK_SEED = 20260809
_CROSSCHECK_RTOL = 1e-8


@dataclass(frozen=True)
class ScanGrid:
    """Cartesian grid of momentum cutoffs and angular cutoffs."""

    P_values: tuple
    a_values: tuple
    family: str = "uniform"

    def __post_init__(self):
        object.__setattr__(self, "P_values", tuple(float(p) for p in self.P_values))
        object.__setattr__(self, "a_values", tuple(float(a) for a in self.a_values))
        if not self.P_values or not self.a_values:
            raise VirialForgeError("scan grid must be non-empty")
        if any(p <= 0.0 for p in self.P_values):
            raise VirialForgeError("momentum grid values must be positive")
        if any(not (-1.0 < a <= 1.0) for a in self.a_values):
            raise VirialForgeError("angular grid values must lie in (-1, 1]")


@dataclass(frozen=True)
class FitResult:
    """Log-log least-squares power-law fit y ~ exp(intercept) * x**slope."""

    slope: float
    intercept: float
    max_residual: float
    range_used: tuple
    n_points: int


@dataclass(frozen=True)
class FloorScanResult:
    min_virial: float
    argmin_P: float
    argmin_a: float
    rows: tuple


@dataclass(frozen=True)
class ScalingScanResult:
    alpha_fit: FitResult
    virial_fit: FitResult
    rows: tuple
    failures: tuple  # P values whose zero-energy solve had no positive root


def _thread_count():
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise VirialForgeError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    return max(1, n)


def _ordered_map(fn, items):
    """Map preserving item order; parallel when VIRIAL_FORGE_THREADS > 1."""
    n = _thread_count()
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def default_floor_grid(n_p=200, n_a=40):
    """P log-spaced over [1e-2, 1e4], a linear over [-1 + 1e-6, 0.9]."""
    return ScanGrid(
        P_values=tuple(np.geomspace(1e-2, 1e4, n_p)),
        a_values=tuple(np.linspace(-1.0 + 1e-6, 0.9, n_a)),
        family="uniform",
    )


def default_scaling_pvalues(n=9):
    """Log-spaced momentum cutoffs over [1e2, 1e4] for the scaling fits."""
    return tuple(np.geomspace(1e2, 1e4, n))


def _uniform_row(P, a):
    params = UniformParams(r=solve_uniform_R(P), p=P, a=a)
    ansatz = uniform_ansatz(params)
    report = functionals.evaluate(ansatz)
    return {
        "family": "uniform",
        "P": P,
        "a": a,
        "alpha": None,
        "R": params.r,
        "KE": report.kinetic,
        "PE": report.potential,
        "E": report.total_energy,
        "V": report.virial,
        "l32_norm": report.l32_norm,
    }


def _crosscheck_row(row, ansatz):
    """Closed-form row vs the quadrature oracle at one grid point."""
    oracle = functionals.evaluate(ansatz, method="quadrature")
    for key, ours in (("KE", row["KE"]), ("PE", row["PE"]), ("V", row["V"]),
                      ("l32_norm", row["l32_norm"])):
        ref = getattr(oracle, {"KE": "kinetic", "PE": "potential", "V": "virial",
                               "l32_norm": "l32_norm"}[key])
        scale = max(abs(ref), 1e-30)
        if abs(ours - ref) / scale > _CROSSCHECK_RTOL:
            raise VirialForgeError(
                f"closed-form/quadrature mismatch in {key}: {ours} vs {ref}"
            )


def uniform_ball_floor(grid=None):
    """Minimum uniform-ball virial over a grid (stays above -9/20).

    Every grid point is a zero-energy ball, so the scan shows the family
    cannot reach virial <= -1/2: the infimum -9/20 is approached only as
    P -> inf with a -> -1.
    """
    if grid is None:
        grid = default_floor_grid()

    def per_p(P):
        return [_uniform_row(P, a) for a in grid.a_values]

    blocks = _ordered_map(per_p, grid.P_values)
    rows = [row for block in blocks for row in block]

    best = min(rows, key=lambda r: r["V"])
    rng = np.random.default_rng(_CROSSCHECK_SEED)
    probe = rows[int(rng.integers(len(rows)))]
    _crosscheck_row(probe, uniform_ansatz(
        UniformParams(r=probe["R"], p=probe["P"], a=probe["a"])
    ))
    return FloorScanResult(
        min_virial=best["V"], argmin_P=best["P"], argmin_a=best["a"], rows=tuple(rows)
    )


def _corehalo_scaling_row(P, a):
    r1, r2, r3 = P**-2, P, P**2
    alpha = solve_corehalo_alpha(r1, r2, r3, P)
    params = CoreHaloParams(r1=r1, r2=r2, r3=r3, p=P, alpha=alpha, a=a)
    ansatz = core_halo_ansatz(params)
    report = functionals.evaluate(ansatz)
    return {
        "family": "core-halo",
        "P": P,
        "a": a,
        "alpha": alpha,
        "R": r3,
        "KE": report.kinetic,
        "PE": report.potential,
        "E": report.total_energy,
        "V": report.virial,
        "l32_norm": report.l32_norm,
    }, ansatz


def loglog_fit(xs, ys):
    """Least-squares line through (log x, log y); max residual in log y."""
    if len(xs) < 5:
        raise VirialForgeError(f"need at least 5 points for a fit, got {len(xs)}")
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = np.max(np.abs(ly - (slope * lx + intercept)))
    return FitResult(
        slope=float(slope),
        intercept=float(intercept),
        max_residual=float(resid),
        range_used=(float(min(xs)), float(max(xs))),
        n_points=len(xs),
    )


def asymptotic_scaling(P_values=None, a=-0.9):
    """Fit the halo-level decay and virial growth exponents at large P.

    Solves the zero-energy halo level for radii (P^-2, P, P^2) at each P,
    then fits log alpha and log(-V) against log P.  Expected slopes:
    -23/2 for the halo level and +3 for -V.
    """
    if P_values is None:
        P_values = default_scaling_pvalues()
    if not (-1.0 < a < 1.0):
        raise VirialForgeError("scaling scan needs a in (-1, 1)")

    def per_p(P):
        try:
            return _corehalo_scaling_row(P, a)
        except NoPositiveRootError:
            return None

    results = _ordered_map(per_p, P_values)
    rows, ansaetze, failures = [], [], []
    for P, res in zip(P_values, results):
        if res is None:
            failures.append(P)
        else:
            rows.append(res[0])
            ansaetze.append(res[1])
    if len(rows) < 5:
        raise VirialForgeError(
            f"only {len(rows)} grid points solved; cannot fit (failures: {failures})"
        )

    ps = [r["P"] for r in rows]
    alpha_fit = loglog_fit(ps, [r["alpha"] for r in rows])
    virial_fit = loglog_fit(ps, [-r["V"] for r in rows])

    rng = np.random.default_rng(_CROSSCHECK_SEED + 1)
    idx = int(rng.integers(len(rows)))
    _crosscheck_row(rows[idx], ansaetze[idx])
    return ScalingScanResult(
        alpha_fit=alpha_fit,
        virial_fit=virial_fit,
        rows=tuple(rows),
        failures=tuple(failures),
    )


def virial_unbounded_below(threshold, a=-0.9, P_values=None):
    """Smallest grid P whose scaling-family virial drops below ``threshold``.

    The cubic growth of -V guarantees a witness for any negative threshold;
    raises GridExhaustedError if the supplied grid ends too early.
    """
    if threshold >= 0.0:
        raise VirialForgeError("threshold must be negative")
    if P_values is None:
        P_values = tuple(np.geomspace(1.5, 1e4, 40))
    for P in P_values:
        try:
            row, _ = _corehalo_scaling_row(P, a)
        except NoPositiveRootError:
            continue
        if row["V"] < threshold:
            return P, row["V"]
    raise GridExhaustedError(
        f"no grid point reached virial < {threshold}; enlarge the grid"
    )


def format_float(x):
    """17-significant-digit decimal (round-trip exact for doubles)."""
    return f"{x:.17g}"


def rows_to_csv(rows, stream):
    """Write scan rows with the fixed column set; None renders empty."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        out = []
        for col in CSV_COLUMNS:
            val = row.get(col)
            if val is None:
                out.append("")
            elif isinstance(val, str):
                out.append(val)
            else:
                out.append(format_float(val))
        writer.writerow(out)
