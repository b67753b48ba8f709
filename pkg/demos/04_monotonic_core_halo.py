"""No gap needed: a monotone, singly-supported datum also certifies.

The disjoint halo raises the question whether the gap is essential.  It is
not: a profile that is constant on a small core, falls off as (R1/r)^3
through an atmosphere, and keeps a thin constant skin out to R3 is
monotonically decreasing on a single support -- yet it still concentrates
enough mass centrally while holding enough far-out material.  The momentum
cutoff is the free parameter here; the zero-energy condition pins it near
19.69 for the reference radii.
"""

import numpy as np

from virial_forge import (
    MonotonicParams,
    check_criteria,
    monotonic_ansatz,
    potential_energy_profile,
    solve_monotonic_P,
    solve_threshold_a,
)
from virial_forge.profiles import monotonic_eta

print(__doc__)

R1, R2, R3, N = 0.01, 1.0 / 11.0, 0.1, 3.0
eta = monotonic_eta(R1, R2, R3, N)
print("Spatial profile (non-increasing, single support):")
for r in (0.0, R1, 0.03, R2, 0.095, R3):
    print(f"  eta({r:7.4f}) = {eta(r):.6e}")
values = [eta(float(r)) for r in np.linspace(0, 0.11, 400)]
print(f"  monotone non-increasing on a dense grid: "
      f"{all(b <= a + 1e-15 for a, b in zip(values, values[1:]))}")

pot = potential_energy_profile(eta)
print(f"\nPotential energy of this shape: {pot:+.6f} (must lie below -1)")

p_star = solve_monotonic_P(R1, R2, R3, N)
print(f"Zero-energy momentum cutoff: P = {p_star:.6f}")

ansatz = monotonic_ansatz(
    MonotonicParams(r1=R1, r2=R2, r3=R3, n=N, p=p_star, a=-0.95)
)
a_star = solve_threshold_a(ansatz)
cert = check_criteria(ansatz)
print(f"Threshold angle a* = {a_star:.6f} (roughly -9/10); using a = -0.95:")
print(f"  energy residual {cert.energy_residual:.2e}")
print(f"  virial          {cert.report.virial:+.7f}")
print(f"  L^(3/2) norm    {cert.report.l32_norm:.7f} vs critical {cert.critical_norm:.7f}")
print(f"  verdict: {'pass' if cert.passed else 'fail'}")
