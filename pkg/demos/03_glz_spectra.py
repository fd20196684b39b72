"""Spectra of the radial Ginsburg-Landau-Zeeman operator.

The full-space spectrum has the closed form -((4r + 4p + k) mu + 4 mu^2);
on balls the spectrum is computed by the measure-weighted Chebyshev
solver under Dirichlet/Neumann/Robin conditions, and Z-ball eigenvalues
feed the exterior-operator reduction.
"""

import numpy as np

from nilspec.glz import (
    RadialGLZOperator,
    compact_spectrum,
    explicit_eigenvalue,
    exterior_operator_eigenvalue,
    fullspace_spectrum,
    laguerre_eigenfunction,
    zball_eigenvalues,
)

op = RadialGLZOperator(k=2, n=0, m=0, mu=1.0)
print("explicit full-space eigenvalues (k = 2, mu = 1):",
      [explicit_eigenvalue(1.0, r, 0, 2) for r in range(5)])

rec = fullspace_spectrum(op, T=60.0, N=200, count=5)
print("weighted collocation reproduces them:", np.round(rec.values(), 10))

print("\nmonic Laguerre eigenfunctions (exact rationals):")
for r in range(4):
    print(f"  r = {r}:", laguerre_eigenfunction(r, 0, 2))

print("\ncompact spectra on the ball x^2 <= 4 (boundary conditions matter):")
for bc in ("dirichlet", "neumann", ("robin", 1.0, 1.0)):
    vals = compact_spectrum(op, 2.0, bc, count=3, N=150).values()
    print(f"  {bc}: {np.round(vals, 6)}")

print("\nZ-ball eigenvalues, l = 3 (half-integer Bessel -> multiples of pi):")
lam = zball_eigenvalues(3, 0, 1.0, "dirichlet", count=3)
print("  dirichlet:", np.round(lam, 8), " vs (i pi)^2:", [round((i * np.pi) ** 2, 8) for i in (1, 2, 3)])
print("  neumann:  ", np.round(zball_eigenvalues(3, 0, 1.0, "neumann", count=3), 8), " (zero mode included)")

ext_op = exterior_operator_eigenvalue(3, 0, 1, 1.0, k=4, n=0, m=0)
print("\nexterior operator reduction: mu = sqrt(lambda_1)/2 =", ext_op.mu, "= pi/2")
print("its full-space spectrum:", np.round(fullspace_spectrum(ext_op, N=150, count=3).values(), 8))
print("closed form:", [round(explicit_eigenvalue(np.pi / 2, r, 0, 4), 8) for r in range(3)])
