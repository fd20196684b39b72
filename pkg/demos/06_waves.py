"""Wave-operator decompositions on the static and expanding models.

The static Laplacian splits exactly into neutrino + Schrodinger parts;
lattice anti waves are annihilated by the (total) Schrodinger operator;
on the expanding model the massless shrinking waves are meson-harmonic
and the hat waves solve the shrinking neutrino equation.
"""

import numpy as np

from nilspec.algebra import htype_group
from nilspec.geometry import SolvableExtension
from nilspec.waves import (
    PhysicalConstants,
    ShrinkingWave,
    expanding_packet_residual,
    meson_phase_residual,
    nonrelativistic_link,
    relativistic_dispersion,
    relativistic_residual,
    second_time_derivative_profile,
    solvable_split_residual,
    static_split_residual,
    zcrystal_wave_residual,
)

cc = PhysicalConstants()  # hbar = c = m = 1
print("relativistic plane wave residual:", relativistic_residual([1.0, 0, 0], cc))
print("slow-phase factorization residuals (identity, first-order defect):",
      nonrelativistic_link([1.0, 0, 0], cc))

print("\noperator splitting identities (coefficient level, exact):")
print("  static: Delta = N + S ->", static_split_residual(cc))
print("  expanding: Delta = shrinking neutrino + Schrodinger + tractor ->",
      solvable_split_residual(cc, 4, 3))
prof = second_time_derivative_profile(cc, 4, 3)
print("  second time derivatives live in:", sorted(k for k, v in prof.items() if v != 0))

heis = htype_group(1, 1, 0)
print("\nZ-crystal anti waves (K~ = 2 e_1, r = 0):")
for kind in ("schrodinger", "total_schrodinger"):
    print(f"  {kind} residual: {zcrystal_wave_residual(heis, np.array([2.0]), 0, 0, 0, cc, kind):.1e}")

h3 = htype_group(3, 1, 0)
ext = SolvableExtension(h3, q=1.0)
c0 = PhysicalConstants(m=0.0)
K = np.array([0.7, -0.2, 0.4])
wave = ShrinkingWave(K, relativistic_dispersion(K, c0))
res = expanding_packet_residual(ext, "meson", wave, c0)
print(f"\nmassless shrinking wave is meson-harmonic: max residual {max(r for _, r in res):.1e}")

cm = PhysicalConstants(m=0.5)
print("massive case leaves the e^{2T} m^2 c^4/hbar^2 term:",
      meson_phase_residual(K, cm, T=0.0), "=", (cm.m * cm.c**2 / cm.hbar) ** 2)

omega_hat = relativistic_dispersion(K, cm) - cm.m * cm.c**2 / cm.hbar
hat = ShrinkingWave(K, omega_hat)
res = expanding_packet_residual(ext, "shrinking_neutrino", hat, cm)
print(f"hat wave solves the shrinking neutrino equation: max residual {max(r for _, r in res):.1e}")
