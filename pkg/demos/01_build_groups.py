"""Build Heisenberg-type groups from Clifford data and probe their structure.

Walks the classification table, constructs generator matrices, assembles
block endomorphism spaces, and contrasts an honest H-type group with the
two-step group induced by an su(3) representation.
"""

import numpy as np

from nilspec.algebra import (
    charger,
    complete_basis,
    frame_matrix,
    from_representation,
    htype_group,
    realify,
    su_generators,
    volumer,
)
from nilspec.clifford import build_generators, irreducible_dimension

print("irreducible block dimensions n_l for l = 1..11:")
print("  ", {l: irreducible_dimension(l) for l in range(1, 12)})

print("\nquaternion representation (l = 3): j_1 on the basis (1, i, j, k)")
print(build_generators(3).generators[0])

# H^(1,1)_3: one electron block, one positron block
h11 = htype_group(3, 1, 1)
ok, residual = h11.is_h_type(samples=100)
print(f"\nH^(1,1)_3: k = {h11.k}, l = {h11.l}, H-type residual {residual:.2e}")

# the group law in exponential coordinates
p = h11.identity()
q = h11.group_multiply(
    type(p)(np.eye(8)[0], np.zeros(3)), type(p)(np.eye(8)[1], np.zeros(3))
)
print("product of the first two X-axes lands in the center:", q.Z)

# su(3) fundamental representation realified in so(6): not H-type
su3 = from_representation(realify(su_generators(3)))
ok, residual = su3.is_h_type(samples=50)
print(f"\nsu(3) image: k = {su3.k}, l = {su3.l}, H-type = {ok} (residual {residual:.1f})")

# charger and volumer of a frame field
h10 = htype_group(3, 1, 0)
rng = np.random.default_rng(0)
M, _ = np.linalg.qr(rng.standard_normal((4, 4)))
B = M[:2]
Zu = rng.standard_normal(3)
Zu /= np.linalg.norm(Zu)
Q = complete_basis(B, orientation=+1, rng=rng)
A, det = frame_matrix(h10, B, Q, Zu)
print(f"\nframe field at a random axis: charger {charger(A):+.3f}, volumer {volumer(A):+.3f}")
print("volumer is completion-independent; determinant flags the singular set:", abs(det) > 1e-6)
