"""A certified blow-up datum: dense core plus a thin far halo.

Uniform balls fail because zero energy forces all the mass close to the
origin, which kills the virial.  The cure is structural: keep a dense core
(deep potential energy) and add a tenuous shell far out (large |q|, so a
big virial contribution per unit mass).  The halo level is fixed by the
zero-energy condition -- it is the positive root of an exact quadratic --
and any angular cutoff at or below the threshold angle certifies all three
blow-up hypotheses: zero energy, virial <= -1/2, L^{3/2} norm above
(3/8)(15/16)^{1/3}.
"""

from virial_forge import (
    CoreHaloParams,
    check_criteria,
    core_halo_ansatz,
    evaluate,
    solve_corehalo_alpha,
    solve_threshold_a,
)

print(__doc__)

R1, R2, R3, P = 0.2, 1.0, 2.0, 1.0
alpha, roots = solve_corehalo_alpha(R1, R2, R3, P, full_output=True)
print(f"Core [0, {R1}], halo [{R2}, {R3}], momentum ball P = {P}:")
print(f"  zero-energy quadratic roots: {roots}")
print(f"  halo level alpha = {alpha:.10e}  (small but positive)")

params = CoreHaloParams(r1=R1, r2=R2, r3=R3, p=P, alpha=alpha, a=-0.8)
ansatz = core_halo_ansatz(params)
report = evaluate(ansatz)
print(f"\nFunctionals at angular cutoff a = {params.a}:")
print(f"  mass            {report.mass:.15f}")
print(f"  kinetic         {report.kinetic:+.10f}")
print(f"  potential       {report.potential:+.10f}")
print(f"  total energy    {report.total_energy:+.3e}")
print(f"  virial          {report.virial:+.10f}")
print(f"  L^(3/2) norm    {report.l32_norm:.10f}")

a_star = solve_threshold_a(ansatz)
print(f"\nThreshold angle a* = {a_star:.6f}: any a <= a* gives virial <= -1/2.")

cert = check_criteria(ansatz)
print("Certificate:")
print(f"  |energy|   = {cert.energy_residual:.3e}  (tolerance {cert.energy_tol:g})")
print(f"  virial     = {cert.report.virial:+.7f}  (margin {cert.virial_margin:+.2e})")
print(f"  norm       = {cert.report.l32_norm:.7f}  vs critical {cert.critical_norm:.7f}")
print(f"  verdict: {'pass' if cert.passed else 'fail'}")
