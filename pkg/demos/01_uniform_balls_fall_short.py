"""Why the simplest ansatz cannot work: uniform balls have a virial floor.

A ball of matter of radius R with momenta filling a ball of radius P and
directed into a cone (cosine cutoff a) can always be tuned to zero total
energy: R = 3 / (5 KE(P)).  But the same balance pins the virial at

    V(P, a) = 27 P (a - 1) / (160 KE(P))  >  -9/20   for every P, a,

so the blow-up threshold V <= -1/2 is out of reach for this family.
This script sweeps the parameter plane and watches the floor emerge.
"""

import numpy as np

from virial_forge import (
    UniformParams,
    check_criteria,
    kinetic_energy_ball,
    solve_uniform_R,
    uniform_ansatz,
    uniform_ball_floor,
    virial,
)
from virial_forge.scans import ScanGrid

print(__doc__)

print("Zero-energy radius shrinks as the momenta heat up:")
for p in (0.1, 1.0, 10.0, 100.0):
    r = solve_uniform_R(p)
    print(f"  P = {p:8.1f}  ->  R = {r:.6f}   (KE = {kinetic_energy_ball(p):.4f})")

print("\nEven the most inward-pointing cone cannot reach -1/2:")
for p in (1.0, 100.0, 1e4):
    r = solve_uniform_R(p)
    v = virial(uniform_ansatz(UniformParams(r=r, p=p, a=-0.999999)))
    print(f"  P = {p:10.1f}  ->  V = {v:+.8f}")

grid = ScanGrid(
    P_values=tuple(np.geomspace(1e-2, 1e4, 120)),
    a_values=tuple(np.linspace(-1.0 + 1e-6, 0.9, 25)),
)
result = uniform_ball_floor(grid)
print(f"\nGrid minimum over {len(result.rows)} zero-energy balls:")
print(f"  min V = {result.min_virial:.8f} at P = {result.argmin_P:g}, "
      f"a = {result.argmin_a:g}")
print(f"  floor -9/20 = {-9/20:.8f} respected: {result.min_virial > -9/20}")

cert = check_criteria(
    uniform_ansatz(UniformParams(r=solve_uniform_R(1e4), p=1e4, a=-0.999999))
)
print("\nCertificate for the most extreme corner of the grid:")
print(f"  energy residual {cert.energy_residual:.2e}, "
      f"virial {cert.report.virial:+.6f}, verdict "
      f"{'pass' if cert.passed else 'fail'} (virial hypothesis unmet)")
