"""Curvature of H-type groups and the expanding solvable extension.

Checks the closed Ricci values against the frame trace of the Riemann
forms, evaluates the solvable extension's Einstein-type structure, and
shows the Hubble-law scaling of X- and Z-curves.
"""

import numpy as np

from nilspec.algebra import htype_group
from nilspec.geometry import (
    SolvableExtension,
    hubble_scaling,
    metric_components,
    ricci,
    riemann,
)

h3 = htype_group(3, 1, 0)  # k = 4, l = 3

X = np.eye(4)[0]
Z = np.eye(3)[0]
print("H^(1,0)_3 Ricci values (closed forms say -l/2 and k/4):")
print("  Ric(X, X) =", ricci(h3, (X, None), (X, None)))
print("  Ric(Z, Z) =", ricci(h3, (None, Z), (None, Z)))

R = riemann(h3, (X, None), (None, Z), (None, Z))
print("R(X, Z)Z = -J_Z J_Z X / 4 =", R[0])

g, ginv = metric_components(h3, np.array([1.0, 0.0, 0.0, 0.0]))
print("metric inverse block g^zz at |X| = 1:", ginv[4, 4])

ext = SolvableExtension(h3, q=1.0)
print("\nsolvable extension at q = 1:")
print("  Ric on X, Z, T directions:",
      ext.ricci((X, None, 0.0), (X, None, 0.0)),
      ext.ricci((None, Z, 0.0), (None, Z, 0.0)),
      ext.ricci((None, None, 1.0), (None, None, 1.0)))
print("  scalar curvature:", ext.scalar_curvature(), " (closed form -(k/4+l)(k+l+1) = -32)")
print("  trace oracle agrees:", abs(ext.ricci_trace((X, None, 0.0), (X, None, 0.0)) + 4.0) < 1e-10)
print("  t-parameter lines are geodesics: nabla_T T =", ext.connection((None, None, 1.0), (None, None, 1.0)))

print("\nHubble scaling over one expansion period tau = ln 4:")
print("  X-curve of length 1 ->", hubble_scaling(ext, "X", 1.0, np.log(4.0)))
print("  Z-curve of length 1 ->", hubble_scaling(ext, "Z", 1.0, np.log(4.0)))
