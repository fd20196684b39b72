"""Twisted Z-Fourier transforms and the operators living on them.

Builds one-pole twisted functions over lattice points, sphere bundles and
the full K-space; reduces the Laplacian on a lattice mode; constructs
boundary-condition functions on Z-ball bundles; and runs the spin-matrix
decomposition behind the roulette operators.
"""

import numpy as np

from nilspec.algebra import htype_group
from nilspec.twisted import (
    SIGMA_DK,
    RouletteState,
    TwistedFunction,
    XKPolynomial,
    boundary_functions,
    dk_eigencheck,
    delta_z_apply,
    harmonic_nm_dimension,
    m_operator_eigencheck,
    roulette_one_turn,
    spin_matrix,
    zcrystal_reduce,
)

h3 = htype_group(3, 1, 0)
Q = np.eye(4)[0]

eig, resid = dk_eigencheck(h3, Q, 2.0 * np.eye(3)[0], p=1, q=0)
print(f"D_K on Theta_Q: eigenvalue {eig} (recorded sign sigma = {SIGMA_DK:+d}), residual {resid:.1e}")

# lattice mode: the Laplacian reduces to the radial GLZ operator
mu, reduced = zcrystal_reduce(h3, np.array([1.0 / np.pi, 0.0, 0.0]))
psi = lambda X: np.exp(-mu * (X @ X) / 2.0)
X0 = np.array([0.3, -0.1, 0.2, 0.4])
print(f"Z-crystal reduction: mu = {mu}, ground-state eigenvalue "
      f"{(reduced(psi, X0) / psi(X0)).real:.6f} (closed form -(k + 4) = -8)")

# sphere-bundle transform: angular momentum and Z-Laplacian eigenvalues
tf = TwistedFunction(h3, ("sphere", 3.0), Q=Q, p=2, q=1,
                     radial=lambda x, kk: np.exp(-x * x / 2.0), sphere_order=14)
Z0 = np.array([0.2, -0.1, 0.3])
X1 = np.array([0.4, 0.1, -0.3, 0.2])
eig, resid = m_operator_eigencheck(h3, tf, X1, Z0)
print(f"\nsphere bundle R = 3, (p, q) = (2, 1): M eigenvalue {eig} (|p - q| R = 3), "
      f"residual {resid / abs(tf(X1, Z0)):.1e}")
dz = delta_z_apply(tf, X1, Z0, 3)
print(f"Delta_Z eigenvalue: {(dz / tf(X1, Z0)).real:.6f} (expected -R^2 = -9)")

# boundary functions on the Z-ball bundle
bf = boundary_functions(h3, s=0, i=1, bc="dirichlet", p=0, q=0, Q=Q, R=1.0, sphere_order=16)
print(f"\nDirichlet boundary residual at |Z| = 1: {bf.boundary_residual(X1, 'dirichlet', n_dir=6):.1e}")
print(f"interior value at |Z| = 0.37: {abs(bf(X1, np.array([0.3, 0.2, 0.1]))):.4f}")

# multiplicity bookkeeping by the rank oracle
print("\ndim of the harmonic twist spaces H^(n,m) on H^(1,0)_3:")
for (n, m) in [(1, 1), (2, 0), (2, 2), (3, 1)]:
    print(f"  (n, m) = ({n}, {m}): {harmonic_nm_dimension(h3, n, m)}")

# the commutator structure behind the roulette operators
jk = XKPolynomial.jk_form(h3, Q)
coef, resid = spin_matrix(h3, [jk * jk], s_from=2, s_to_list=[0, 1, 2, 3])
print(f"\nspin matrix on the top stratum: couplings {np.round(coef.real, 6)}, residual {resid:.1e}")

# one turn of the roulette on a two-slot toy family
state = RouletteState(["a", "b"], {"a": lambda x, kk: np.exp(-kk), "b": lambda x, kk: kk**2})
turned = roulette_one_turn(state, p=2, q=1, S=np.array([[0.0, 1.0], [1.0, 0.0]]))
print(f"roulette one turn at (x, k) = (0.5, 1.3): a -> {turned['a'](0.5, 1.3):.6f}, depth {turned.depth}")
