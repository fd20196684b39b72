"""Invariant frames, connection and curvature on two-step groups, and the
geometry of their solvable extensions (including the expanding metric).

All tensors are evaluated on the invariant frame, i.e. at the Lie-algebra
level; coordinate expressions come from the invariant vector fields.
Vectors of the nilpotent algebra are passed as (X, Z) pairs, vectors of the
solvable extension as (X, Z, t-component) triples.
"""

import numpy as np

__all__ = [
    "invariant_vector_fields",
    "connection",
    "riemann",
    "ricci",
    "ricci_htype",
    "scalar_curvature",
    "metric_components",
    "laplacian_apply",
    "SolvableExtension",
    "hubble_scaling",
    "curvature_report",
]


def _split(alg, U):
    X, Z = U
    X = np.zeros(alg.k) if X is None else np.asarray(X, dtype=float)
    Z = np.zeros(alg.l) if Z is None else np.asarray(Z, dtype=float)
    return X, Z


def invariant_vector_fields(alg, X):
    """Coordinate coefficients of the invariant frame at the point (X, *).

    Row i < k is the field X_i = d_i + (1/2) sum_a <J_a X, E_i> d_a, the
    last l rows are Z_a = d_a.  The matrix is unipotent, so its determinant
    is 1 at every point.
    """
    X = np.asarray(X, dtype=float)
    k, l = alg.k, alg.l
    F = np.eye(k + l)
    JX = np.einsum("aij,j->ai", alg.J_basis, X)  # (l, k): rows J_a X
    F[:k, k:] = 0.5 * JX.T
    return F


def connection(alg, U, V):
    """Levi-Civita connection of invariant fields, as an (X, Z) pair.

    nabla_X X* = [X,X*]/2, nabla_X Z = nabla_Z X = -J_Z(X)/2,
    nabla_Z Z* = 0.
    """
    Xu, Zu = _split(alg, U)
    Xv, Zv = _split(alg, V)
    xpart = -0.5 * alg.J(Zv) @ Xu - 0.5 * alg.J(Zu) @ Xv
    zpart = 0.5 * alg.bracket(Xu, Xv)
    return xpart, zpart


def riemann(alg, U, V, W):
    """R(U,V)W from the closed curvature forms, as an (X, Z) pair."""
    Xu, Zu = _split(alg, U)
    Xv, Zv = _split(alg, V)
    Xw, Zw = _split(alg, W)
    J = alg.J

    xpart = np.zeros(alg.k)
    zpart = np.zeros(alg.l)

    # R(X,Y)X* = J_{[X,Y]}(X*)/2 - J_{[Y,X*]}(X)/4 + J_{[X,X*]}(Y)/4
    xpart += 0.5 * J(alg.bracket(Xu, Xv)) @ Xw
    xpart += -0.25 * J(alg.bracket(Xv, Xw)) @ Xu
    xpart += 0.25 * J(alg.bracket(Xu, Xw)) @ Xv
    # R(X,Z)Z* = -J_Z J_{Z*} (X)/4, both slots
    xpart += -0.25 * J(Zv) @ (J(Zw) @ Xu)
    xpart += 0.25 * J(Zu) @ (J(Zw) @ Xv)
    # R(Z,Z*)X = (J_Z J_{Z*} - J_{Z*} J_Z)(X)/4
    xpart += 0.25 * (J(Zu) @ (J(Zv) @ Xw) - J(Zv) @ (J(Zu) @ Xw))

    # R(X,Y)Z = -[X, J_Z(Y)]/4 + [Y, J_Z(X)]/4
    zpart += -0.25 * alg.bracket(Xu, J(Zw) @ Xv)
    zpart += 0.25 * alg.bracket(Xv, J(Zw) @ Xu)
    # R(X,Z)Y = -[X, J_Z(Y)]/4, both slots
    zpart += -0.25 * alg.bracket(Xu, J(Zv) @ Xw)
    zpart += 0.25 * alg.bracket(Xv, J(Zu) @ Xw)
    # R(Z1,Z2)Z3 = 0
    return xpart, zpart


def _inner(alg, U, V):
    Xu, Zu = _split(alg, U)
    Xv, Zv = _split(alg, V)
    return Xu @ Xv + Zu @ Zv


def ricci(alg, U, V):
    """Ric(U,V) as the frame trace of the closed Riemann forms."""
    total = 0.0
    for i in range(alg.k):
        E = np.zeros(alg.k)
        E[i] = 1.0
        R = riemann(alg, (E, None), U, V)
        total += R[0][i]
    for a in range(alg.l):
        e = np.zeros(alg.l)
        e[a] = 1.0
        R = riemann(alg, (None, e), U, V)
        total += R[1][a]
    return total


def ricci_htype(alg, U, V):
    """Closed H-type Ricci: -(l/2)<X,X*> + (k/4)<Z,Z*>, mixed terms zero."""
    Xu, Zu = _split(alg, U)
    Xv, Zv = _split(alg, V)
    return -(alg.l / 2.0) * (Xu @ Xv) + (alg.k / 4.0) * (Zu @ Zv)


def scalar_curvature(alg):
    """Scalar curvature of an H-type group: -k l / 4."""
    return -alg.k * alg.l / 4.0


def metric_components(alg, X):
    """Left-invariant metric g and its inverse at (X, *), in blocks.

    Returns (g, ginv) as (k+l) x (k+l) arrays ordered (x-coords, z-coords):
    g_ij = delta + (1/4) sum_a <J_a X, E_i><J_a X, E_j>,
    g_ia = -<J_a X, E_i>/2, g_ab = delta; the inverse has g^ij = delta,
    g^ia = <J_a X, E_i>/2, g^ab = delta + <J_a X, J_b X>/4.
    """
    X = np.asarray(X, dtype=float)
    k, l = alg.k, alg.l
    JX = np.einsum("aij,j->ia", alg.J_basis, X)  # column a holds J_a X
    g = np.empty((k + l, k + l))
    g[:k, :k] = np.eye(k) + 0.25 * JX @ JX.T
    g[:k, k:] = -0.5 * JX
    g[k:, :k] = -0.5 * JX.T
    g[k:, k:] = np.eye(l)
    ginv = np.empty_like(g)
    ginv[:k, :k] = np.eye(k)
    ginv[:k, k:] = 0.5 * JX
    ginv[k:, :k] = 0.5 * JX.T
    ginv[k:, k:] = np.eye(l) + 0.25 * JX.T @ JX
    return g, ginv


def laplacian_apply(alg, f, X, Z, h=1e-4):
    """Group Laplacian of a scalar function f(X, Z) by central differences.

    Uses Delta = Delta_X + Delta_Z + (1/4) sum_ab <J_a X, J_b X> d2/dz_a dz_b
    + sum_a d_a D_a, valid on any two-step group; on H-type groups the
    middle term collapses to (x^2/4) Delta_Z.
    """
    X = np.asarray(X, dtype=float)
    Z = np.asarray(Z, dtype=float)
    k, l = alg.k, alg.l
    f0 = f(X, Z)
    total = 0.0

    def dx2(i):
        e = np.zeros(k)
        e[i] = h
        return (f(X + e, Z) - 2.0 * f0 + f(X - e, Z)) / h**2

    def dz2(a, b):
        ea = np.zeros(l)
        eb = np.zeros(l)
        ea[a] = h
        eb[b] = h
        if a == b:
            return (f(X, Z + ea) - 2.0 * f0 + f(X, Z - ea)) / h**2
        return (
            f(X, Z + ea + eb) - f(X, Z + ea - eb) - f(X, Z - ea + eb) + f(X, Z - ea - eb)
        ) / (4.0 * h**2)

    total += sum(dx2(i) for i in range(k))
    JX = np.einsum("aij,j->ai", alg.J_basis, X)
    G = JX @ JX.T  # <J_a X, J_b X>
    for a in range(l):
        for b in range(l):
            coeff = (1.0 if a == b else 0.0) + 0.25 * G[a, b]
            if coeff != 0.0:
                total += coeff * dz2(a, b)
    # mixed term: d_a applied to the directional derivative along J_a X
    for a in range(l):
        ez = np.zeros(l)
        ez[a] = h
        dX = h * JX[a]
        total += (
            f(X + dX, Z + ez) - f(X + dX, Z - ez) - f(X - dX, Z + ez) + f(X - dX, Z - ez)
        ) / (4.0 * h**2)
    return total


# -- solvable extension -----------------------------------------------------


class SolvableExtension:
    """Solvable extension SN on N x R_+ with scaling factor q > 0.

    The unit timelike direction is T = q t d/dt; the Lie bracket extends
    the nilpotent one by [X, T] = (q/2) X and [Z, T] = q Z, which is the
    sign convention matching the displayed covariant derivatives.  Both
    the t > 0 coordinate and T = ln(t)/q are exposed; reversed time is
    tau = -T.
    """

    def __init__(self, base, q=1.0):
        if q <= 0:
            raise ValueError("q must be positive")
        self.base = base
        self.q = float(q)

    @property
    def k(self):
        return self.base.k

    @property
    def l(self):
        return self.base.l

    def t_of_T(self, T):
        return np.exp(self.q * T)

    def T_of_t(self, t):
        return np.log(t) / self.q

    def _split(self, U):
        X, Z, a = U
        X = np.zeros(self.k) if X is None else np.asarray(X, dtype=float)
        Z = np.zeros(self.l) if Z is None else np.asarray(Z, dtype=float)
        return X, Z, float(a if a is not None else 0.0)

    def inner(self, U, V):
        Xu, Zu, au = self._split(U)
        Xv, Zv, av = self._split(V)
        return Xu @ Xv + Zu @ Zv - au * av

    def bracket(self, U, V):
        Xu, Zu, au = self._split(U)
        Xv, Zv, av = self._split(V)
        q = self.q
        # [X, T] = (q/2) X  =>  [T, X] = -(q/2) X
        xpart = -0.5 * q * au * Xv + 0.5 * q * av * Xu
        zpart = self.base.bracket(Xu, Xv) - q * au * Zv + q * av * Zu
        return xpart, zpart, 0.0

    def connection(self, U, V):
        """nabla on invariant fields of SN, as an (X, Z, T) triple."""
        Xu, Zu, au = self._split(U)
        Xv, Zv, av = self._split(V)
        q = self.q
        nx, nz = connection(self.base, (Xu, Zu), (Xv, Zv))
        xpart = nx + 0.5 * q * av * Xu
        zpart = nz + q * av * Zu
        tpart = -q * (0.5 * (Xu @ Xv) + Zu @ Zv)
        return xpart, zpart, tpart

    def riemann(self, U, V, W):
        """R(U,V)W = nabla_U nabla_V W - nabla_V nabla_U W - nabla_[U,V] W.

        Valid on invariant fields since all connection coefficients are
        constant on the frame.
        """
        a = self.connection(U, self.connection(V, W))
        b = self.connection(V, self.connection(U, W))
        c = self.connection(self.bracket(U, V), W)
        return tuple(x - y - z for x, y, z in zip(a, b, c))

    def ricci(self, U, V):
        """Ric_q(U,V): closed forms Ri_q(X) = Ri(X) - q^2(k/4 + l/2)X,
        Ri_q(Z) = Ri(Z) - q^2(k/2 + l)Z, Ri_q(T) = q^2(k/4 + l)T."""
        Xu, Zu, au = self._split(U)
        Xv, Zv, av = self._split(V)
        k, l, q = self.k, self.l, self.q
        val = 0.0
        val += (-(l / 2.0) - q**2 * (k / 4.0 + l / 2.0)) * (Xu @ Xv)
        val += ((k / 4.0) - q**2 * (k / 2.0 + l)) * (Zu @ Zv)
        val += q**2 * (k / 4.0 + l) * (-au * av)
        return val

    def ricci_trace(self, U, V):
        """Ric as the frame trace of self.riemann.

        The connection block matches the Levi-Civita connection of the
        positive definite version of g_q (the one used in the spectral
        theory), so the trace runs over the full unit frame with +1
        weights and reproduces the closed Ricci forms.
        """
        total = 0.0
        for i in range(self.k):
            E = np.zeros(self.k)
            E[i] = 1.0
            R = self.riemann((E, None, 0.0), U, V)
            total += R[0][i]
        for a in range(self.l):
            e = np.zeros(self.l)
            e[a] = 1.0
            R = self.riemann((None, e, 0.0), U, V)
            total += R[1][a]
        R = self.riemann((None, None, 1.0), U, V)
        total += R[2]
        return total

    def scalar_curvature(self):
        """Plain frame sum of diagonal Ricci values; equals
        -(k/4 + l)(k + l + 1) at q = 1 on H-type bases."""
        k, l = self.k, self.l
        ex = self.ricci((np.eye(self.k)[0], None, 0.0), (np.eye(self.k)[0], None, 0.0))
        ez = self.ricci((None, np.eye(self.l)[0], 0.0), (None, np.eye(self.l)[0], 0.0))
        et = self.ricci((None, None, 1.0), (None, None, 1.0))
        return k * ex + l * ez + et

    def einstein(self, U, V):
        """Ric_q(U,V) - scalar/2 <U,V> with the pinned scalar convention."""
        return self.ricci(U, V) - 0.5 * self.scalar_curvature() * self.inner(U, V)

    def solvable_frame(self, X, Z, t):
        """Coordinate coefficients of the unit frame (Y_i, V_a, T) at (X,Z,t)."""
        F = np.zeros((self.k + self.l + 1, self.k + self.l + 1))
        base = invariant_vector_fields(self.base, X)
        F[: self.k, : self.k + self.l] = np.sqrt(t) * base[: self.k]
        F[self.k : self.k + self.l, : self.k + self.l] = t * base[self.k :]
        F[-1, -1] = self.q * t
        return F

    def metric_components(self, X, Z, t):
        """Coordinate metric g_q and inverse on SN at (X, Z, t)."""
        F = self.solvable_frame(X, Z, t)
        M = np.linalg.inv(F)
        eta = np.diag([1.0] * (self.k + self.l) + [-1.0])
        g = M @ eta @ M.T
        ginv = F.T @ eta @ F
        return g, ginv


def curvature_report(alg, samples=20, seed=0, tol=1e-12):
    """Sampled curvature data with symmetry residuals, JSON-ready.

    Evaluates R(U,V)W and Ric on random invariant vectors, records the
    worst pair-symmetry / antisymmetry / first-Bianchi residuals and the
    closed-vs-trace Ricci agreement, and flags each against tol.
    """
    rng = np.random.default_rng(seed)
    worst = {"antisymmetry": 0.0, "pair_symmetry": 0.0, "bianchi": 0.0, "ricci_closed_vs_trace": 0.0}
    sample_tensor = None
    for i in range(samples):
        U, V, W, S = [(rng.standard_normal(alg.k), rng.standard_normal(alg.l)) for _ in range(4)]
        RUVW = riemann(alg, U, V, W)
        if sample_tensor is None:
            sample_tensor = {"x_part": RUVW[0].tolist(), "z_part": RUVW[1].tolist()}
        RVUW = riemann(alg, V, U, W)
        RWSU = riemann(alg, W, S, U)
        ip = lambda A, B: A[0] @ np.asarray(B[0]) + A[1] @ np.asarray(B[1])
        worst["antisymmetry"] = max(worst["antisymmetry"], abs(ip(RUVW, S) + ip(RVUW, S)))
        worst["pair_symmetry"] = max(worst["pair_symmetry"], abs(ip(RUVW, S) - ip(RWSU, V)))
        b = [x + y + z for x, y, z in zip(
            riemann(alg, U, V, W), riemann(alg, V, W, U), riemann(alg, W, U, V))]
        worst["bianchi"] = max(worst["bianchi"], float(np.abs(b[0]).max()), float(np.abs(b[1]).max()))
        worst["ricci_closed_vs_trace"] = max(
            worst["ricci_closed_vs_trace"], abs(ricci(alg, U, V) - ricci_htype(alg, U, V))
        )
    return {
        "k": alg.k,
        "l": alg.l,
        "ricci_unit_X": -alg.l / 2.0,
        "ricci_unit_Z": alg.k / 4.0,
        "scalar_curvature": scalar_curvature(alg),
        "sample_riemann": sample_tensor,
        "residuals": worst,
        "within_tol": {name: bool(v < tol) for name, v in worst.items()},
        "tol": tol,
    }


def hubble_scaling(ext, curve_type, length, tau):
    """Length of an X- or Z-integral curve moved by expanding time tau.

    X-curves scale by e^{q tau / 2}, Z-curves by e^{q tau}.
    """
    if length < 0:
        raise ValueError("length must be >= 0")
    q = ext.q if hasattr(ext, "q") else float(ext)
    kind = str(curve_type).upper()
    if kind == "X":
        return length * np.exp(q * tau / 2.0)
    if kind == "Z":
        return length * np.exp(q * tau)
    raise ValueError("curve_type must be 'X' or 'Z'")
