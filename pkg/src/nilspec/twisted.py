"""Twisted Z-Fourier transforms and the operators acting on them.

Theta twist polynomials, transforms over the full K-space / sphere bundles /
single lattice points, the Z-crystal reduction, boundary-condition
functions on Z-ball bundles, straight/twisted conversion with the singular
cone cutoff, and the finite-truncation roulette machinery.

D-convention: direct computation gives D_K Theta_Q = +i|K| Theta_Q; the
recorded sign is SIGMA_DK = +1, and eigenvalue checks assert magnitude and
conjugate pairing (the opposite orbiting convention is equally consistent).
With the e^{+i<Z,K>} kernel this makes the effective magnetic quantum
number of a (p, q) twist m = p - q; conjugating the kernel swaps the
roles of p and q.
"""

from itertools import combinations_with_replacement

import numpy as np

from .glz import zball_eigenvalues
from .harmonics import projection_coefficients
from .quadrature import (
    gauss_legendre,
    harmonic_space_dimension,
    sphere_area,
    sphere_rule,
    zonal_eigenfunction,
)

__all__ = [
    "SIGMA_DK",
    "theta_eval",
    "theta_projected",
    "dk_eigencheck",
    "TwistedFunction",
    "zcrystal_reduce",
    "zcrystal_reduced_apply",
    "boundary_functions",
    "m_operator_apply",
    "m_operator_eigencheck",
    "delta_z_apply",
    "adapted_complex_basis",
    "harmonic_nm_dimension",
    "twisted_to_straight",
    "straight_to_twisted",
    "evaluate_straight",
    "evaluate_twisted",
    "singular_cutoff",
    "RouletteState",
    "roulette_one_turn",
    "XKPolynomial",
    "spin_matrix",
]

SIGMA_DK = +1  # D_K Theta_Q = SIGMA_DK * i * |K| * Theta_Q


def theta_eval(alg, Q, X, K_u):
    """Theta_Q(X, K_u) = <Q, X> + i <J_{K_u} Q, X> for unit K_u."""
    Q = np.asarray(Q, dtype=float)
    X = np.asarray(X, dtype=float)
    K_u = np.asarray(K_u, dtype=float)
    if abs(K_u @ K_u - 1.0) > 1e-10:
        raise ValueError("K_u must be a unit vector")
    JQ = alg.J(K_u) @ Q
    return (Q @ X) + 1j * (JQ @ X)


def _theta_batch(alg, Q, X, nodes):
    """Theta_Q(X, node) for an array of unit nodes; X fixed."""
    JQ = np.einsum("aij,j->ai", alg.J_basis, np.asarray(Q, dtype=float))  # (l, k)
    lin = nodes @ (JQ @ np.asarray(X, dtype=float))
    return (np.asarray(Q) @ np.asarray(X)) + 1j * lin


def theta_projected(alg, Q, p, q, X, nodes):
    """Pi_X^(p+q)(Theta_Q^p conj(Theta_Q)^q)(X, node) for an array of nodes.

    Uses the closed form of the X-harmonic projection: the X-Laplacian of
    Theta^p conj(Theta)^q is 4 p q |Q|^2 Theta^{p-1} conj(Theta)^{q-1}, so
    the projection truncates after min(p, q) terms.
    """
    Q = np.asarray(Q, dtype=float)
    X = np.asarray(X, dtype=float)
    n = p + q
    th = _theta_batch(alg, Q, X, nodes)
    thb = np.conj(th)
    if n == 0:
        return np.ones(len(nodes), dtype=complex)
    cs = projection_coefficients(alg.k, n)
    q2 = float(Q @ Q)
    x2 = float(X @ X)
    out = np.zeros(len(nodes), dtype=complex)
    fall_p, fall_q = 1.0, 1.0
    for s in range(min(p, q) + 1):
        if s > 0:
            fall_p *= p - s + 1
            fall_q *= q - s + 1
        coeff = cs[s] * (4.0 * q2) ** s * fall_p * fall_q * x2**s if s > 0 else 1.0
        out += coeff * th ** (p - s) * thb ** (q - s)
    return out


def dk_eigencheck(alg, Q, K, p=1, q=0, X=None, h=1e-5, rng=None):
    """Eigenvalue of D_K applied to Theta_Q^p conj(Theta_Q)^q, with residual.

    D_K is the directional derivative along the field X -> J_K(X).  Returns
    (sigma (p-q) i |K|, max residual of the central-difference check),
    sigma = SIGMA_DK.
    """
    K = np.asarray(K, dtype=float)
    kk = np.linalg.norm(K)
    if kk == 0:
        raise ValueError("K must be nonzero")
    K_u = K / kk
    eig = SIGMA_DK * (p - q) * 1j * kk
    rng = rng or np.random.default_rng(11)
    pts = [np.asarray(X, dtype=float)] if X is not None else list(rng.standard_normal((4, alg.k)))
    JK = alg.J(K)
    worst = 0.0
    for x in pts:
        fx = theta_eval(alg, Q, x, K_u) ** p * np.conj(theta_eval(alg, Q, x, K_u)) ** q
        step = h * (JK @ x)
        fp = theta_eval(alg, Q, x + step, K_u) ** p * np.conj(theta_eval(alg, Q, x + step, K_u)) ** q
        fm = theta_eval(alg, Q, x - step, K_u) ** p * np.conj(theta_eval(alg, Q, x - step, K_u)) ** q
        deriv = (fp - fm) / (2.0 * h)
        worst = max(worst, abs(deriv - eig * fx))
    return eig, worst


# -- twisted Z-Fourier transforms --------------------------------------------


class TwistedFunction:
    """A twisted Z-Fourier transform specification, evaluable at (X, Z).

    mode: ("full",), ("sphere", R) with R a constant or callable of |X|,
    or ("lattice", Z_gamma).  The twist is the one-pole polynomial
    Theta_Q^p conj(Theta_Q)^q (multi-pole products via pole_list), with the
    optional X-harmonic projection Pi_X and K-spherical projection
    Pi_K^(s).  radial(x, kk) multiplies the integrand; angular(K_u) is an
    optional unit-sphere factor.
    """

    def __init__(
        self,
        alg,
        mode,
        Q=None,
        p=0,
        q=0,
        pole_list=None,
        radial=None,
        angular=None,
        project_x=False,
        project_k=None,
        sphere_order=16,
        radial_rule=(48, 12.0),
    ):
        self.alg = alg
        self.mode = mode
        self.Q = None if Q is None else np.asarray(Q, dtype=float)
        self.p, self.q = int(p), int(q)
        self.pole_list = pole_list
        self.radial = radial or (lambda x, kk: 1.0)
        self.angular = angular
        self.project_x = bool(project_x)
        self.project_k = project_k
        self.sphere_order = sphere_order
        self.radial_rule = radial_rule
        kind = mode[0]
        if kind not in ("full", "sphere", "lattice"):
            raise ValueError(f"unknown mode {kind!r}")

    @property
    def n(self):
        if self.pole_list is not None:
            return sum(p + q for _, p, q in self.pole_list)
        return self.p + self.q

    def with_pole(self, Q_new, alg=None):
        """Same spec with the pole (and optionally the algebra) replaced."""
        out = TwistedFunction(
            alg or self.alg,
            self.mode,
            Q=Q_new,
            p=self.p,
            q=self.q,
            pole_list=self.pole_list,
            radial=self.radial,
            angular=self.angular,
            project_x=self.project_x,
            project_k=self.project_k,
            sphere_order=self.sphere_order,
            radial_rule=self.radial_rule,
        )
        return out

    def _twist_values(self, X, nodes):
        """Twist polynomial (projected if requested) at unit nodes."""
        if self.pole_list is not None:
            if self.project_x:
                raise NotImplementedError("Pi_X for multi-pole twists: use XKPolynomial")
            out = np.ones(len(nodes), dtype=complex)
            for Qi, pi, qi in self.pole_list:
                th = _theta_batch(self.alg, Qi, X, nodes)
                out *= th**pi * np.conj(th) ** qi
            return out
        if self.Q is None:
            return np.ones(len(nodes), dtype=complex)
        if self.project_x:
            return theta_projected(self.alg, self.Q, self.p, self.q, X, nodes)
        th = _theta_batch(self.alg, self.Q, X, nodes)
        return th**self.p * np.conj(th) ** self.q

    def _angular_values(self, nodes):
        if self.angular is None:
            return np.ones(len(nodes))
        return np.asarray(self.angular(nodes))

    def __call__(self, X, Z):
        X = np.asarray(X, dtype=float)
        Z = np.asarray(Z, dtype=float)
        alg = self.alg
        x = np.linalg.norm(X)
        kind = self.mode[0]

        if kind == "lattice":
            Zg = np.asarray(self.mode[1], dtype=float)
            zg = np.linalg.norm(Zg)
            phase = np.exp(2j * np.pi * (Zg @ Z))
            if zg == 0:
                return self.radial(x, 0.0) * phase
            node = (Zg / zg)[None, :]
            tw = self._twist_values(X, node)[0]
            ang = self._angular_values(node)[0]
            return self.radial(x, zg) * ang * tw * phase

        nodes, weights = sphere_rule(alg.l, self.sphere_order)
        if kind == "sphere":
            R = self.mode[1]
            Rx = float(R(x)) if callable(R) else float(R)
            vals = self._node_integrand(X, nodes, Rx)
            phases = np.exp(1j * Rx * (nodes @ Z))
            return (weights @ (vals * phases)) / weights.sum() * self.radial(x, Rx)

        # full space: polar rule, radial Gauss-Legendre x sphere rule
        n_rad, k_max = self.radial_rule
        ks, wk = gauss_legendre(n_rad, 0.0, k_max)
        total = 0.0 + 0.0j
        base = self._node_integrand(X, nodes, None)
        for kk, wkk in zip(ks, wk):
            phases = np.exp(1j * kk * (nodes @ Z))
            total += wkk * kk ** (alg.l - 1) * self.radial(x, kk) * (weights @ (base * phases))
        return total

    def _node_integrand(self, X, nodes, Rx):
        """Twist x angular (x Pi_K projection) at the unit nodes."""
        tw = self._twist_values(X, nodes) * self._angular_values(nodes)
        if self.project_k is None:
            return tw
        s = int(self.project_k)
        cosang = np.clip(nodes @ nodes.T, -1.0, 1.0)
        kern = zonal_eigenfunction(self.alg.l, s, np.arccos(cosang))
        _, weights = sphere_rule(self.alg.l, self.sphere_order)
        scale = harmonic_space_dimension(self.alg.l, s) / sphere_area(self.alg.l)
        return scale * kern @ (weights * tw)

    def to_json_dict(self):
        """Specification (mode, exponents, domain, projection flags); the
        radial/angular callables are named only."""
        kind = self.mode[0]
        domain = {"kind": kind}
        if kind == "sphere":
            R = self.mode[1]
            domain["radius"] = "callable" if callable(R) else float(R)
        elif kind == "lattice":
            domain["lattice_point"] = np.asarray(self.mode[1]).tolist()
        return {
            "domain": domain,
            "pole": None if self.Q is None else self.Q.tolist(),
            "p": self.p,
            "q": self.q,
            "pole_list": None
            if self.pole_list is None
            else [[np.asarray(Qi).tolist(), pi, qi] for Qi, pi, qi in self.pole_list],
            "project_x": self.project_x,
            "project_k": self.project_k,
            "radial": getattr(self.radial, "__name__", "callable"),
            "angular": None if self.angular is None else getattr(self.angular, "__name__", "callable"),
        }

    def evaluation_grid_csv(self, X_points, Z_points):
        """CSV rows (X, Z, Re, Im) over the product grid of the given points."""
        lines = ["X,Z,Re,Im"]
        for X in X_points:
            for Z in Z_points:
                v = self(X, Z)
                xs = " ".join(format(float(c), ".17g") for c in np.atleast_1d(X))
                zs = " ".join(format(float(c), ".17g") for c in np.atleast_1d(Z))
                lines.append(f"{xs},{zs},{format(v.real, '.17g')},{format(v.imag, '.17g')}")
        return "\n".join(lines) + "\n"

    def boundary_residual(self, X, bc="dirichlet", n_dir=24, h=1e-4, seed=0):
        """Max |value| (Dirichlet) or |radial Z-derivative| (Z-Neumann) at
        the Z-ball boundary |Z| = sqrt(lambda)-radius over sampled directions.

        Only meaningful for sphere modes built by boundary_functions, where
        the K-sphere radius equals sqrt(lambda_i^(s)(x^2)) and the boundary
        radius R(x) is stored alongside (mode[2])."""
        R_bound = self.mode[2] if len(self.mode) > 2 else 1.0
        x = np.linalg.norm(np.asarray(X, dtype=float))
        Rb = float(R_bound(x)) if callable(R_bound) else float(R_bound)
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(n_dir):
            d = rng.standard_normal(self.alg.l)
            d /= np.linalg.norm(d)
            Zb = Rb * d
            if str(bc).lower() == "dirichlet":
                worst = max(worst, abs(self(X, Zb)))
            else:
                vp = self(X, (Rb + h) * d)
                vm = self(X, (Rb - h) * d)
                worst = max(worst, abs((vp - vm) / (2.0 * h)))
        return worst


# -- Z-crystal reduction ------------------------------------------------------


def zcrystal_reduce(alg, Z_gamma):
    """Reduction of the group Laplacian on the lattice mode e^{2 pi i <Z_g, Z>}.

    Returns (mu, apply) with mu = pi |Z_gamma| and apply(psi, X, h) the
    reduced operator Delta_X psi + 2 pi i D_{Z_gamma} psi
    - 4 mu^2 (1 + x^2/4) psi evaluated by central differences.
    """
    Z_gamma = np.asarray(Z_gamma, dtype=float)
    zg = np.linalg.norm(Z_gamma)
    mu = np.pi * zg
    JZg = alg.J(Z_gamma) if zg > 0 else np.zeros((alg.k, alg.k))

    def apply(psi, X, h=1e-4):
        return zcrystal_reduced_apply(alg, psi, X, Z_gamma, JZg, mu, h)

    return mu, apply


def zcrystal_reduced_apply(alg, psi, X, Z_gamma, JZg, mu, h=1e-4):
    X = np.asarray(X, dtype=float)
    k = alg.k
    f0 = psi(X)
    lap = 0.0
    for i in range(k):
        e = np.zeros(k)
        e[i] = h
        lap += (psi(X + e) - 2.0 * f0 + psi(X - e)) / h**2
    step = h * (JZg @ X)
    if np.linalg.norm(step) > 0:
        ddir = (psi(X + step) - psi(X - step)) / (2.0 * h)
    else:
        ddir = 0.0
    x2 = X @ X
    return lap + 2j * np.pi * ddir - 4.0 * mu**2 * (1.0 + 0.25 * x2) * f0


# -- boundary-condition functions on Z-ball bundles ---------------------------


def boundary_functions(alg, s, i, bc, p, q, Q, R=1.0, radial=None, angular=None, sphere_order=16):
    """Twisted transform satisfying the Dirichlet or Z-Neumann condition.

    Built over the K-sphere of radius sqrt(lambda_i^(s)) of the Z-ball
    B_R, with Pi_X^(n) applied to the twist and Pi_K^(s) applied to the
    K_u-dependence.  Strata excluded by the parity window project to the
    zero function.
    """
    lam = zball_eigenvalues(alg.l, s, R, bc=bc, count=i)[i - 1]
    if lam == 0.0:
        raise ValueError("the lambda = 0 Neumann stratum gives a Z-constant; pick i >= 2")
    return TwistedFunction(
        alg,
        ("sphere", np.sqrt(lam), R),
        Q=Q,
        p=p,
        q=q,
        radial=radial,
        angular=angular,
        project_x=True,
        project_k=s,
        sphere_order=sphere_order,
    )


# -- unpolarized operators applied numerically --------------------------------


def m_operator_apply(alg, F, X, Z, h=1e-4):
    """M = sum_a d/dz_a D_a applied to F(X, Z) by nested central differences."""
    X = np.asarray(X, dtype=float)
    Z = np.asarray(Z, dtype=float)
    total = 0.0 + 0.0j
    for a in range(alg.l):
        ez = np.zeros(alg.l)
        ez[a] = h
        dX = h * (alg.J_basis[a] @ X)
        total += (
            F(X + dX, Z + ez) - F(X + dX, Z - ez) - F(X - dX, Z + ez) + F(X - dX, Z - ez)
        ) / (4.0 * h**2)
    return total


def m_operator_eigencheck(alg, tf, X, Z, h=1e-3):
    """(eigenvalue, residual) of M on a sphere-bundle twisted function.

    With the recorded sign convention the eigenvalue is
    SIGMA_DK * (q - p) * R; the residual compares the nested
    finite-difference application against eigenvalue * tf(X, Z).
    """
    R = tf.mode[1]
    x = np.linalg.norm(np.asarray(X, dtype=float))
    Rx = float(R(x)) if callable(R) else float(R)
    eig = SIGMA_DK * (tf.q - tf.p) * Rx
    val = tf(X, Z)
    got = m_operator_apply(alg, tf, X, Z, h=h)
    return eig, abs(got - eig * val)


def delta_z_apply(F, X, Z, l, h=1e-2):
    """Z-Laplacian of F(X, Z) by fourth-order central differences."""
    Z = np.asarray(Z, dtype=float)
    f0 = F(X, Z)
    out = 0.0 + 0.0j
    for a in range(l):
        e = np.zeros(l)
        e[a] = h
        out += (
            -F(X, Z + 2 * e) + 16.0 * F(X, Z + e) - 30.0 * f0 + 16.0 * F(X, Z - e) - F(X, Z - 2 * e)
        ) / (12.0 * h**2)
    return out


# -- adapted complex bases and the rank oracle --------------------------------


def adapted_complex_basis(alg, Z_u):
    """Orthonormal rows B_1..B_{k/2} with (B, J_{Z_u}B) an orthonormal basis."""
    J = alg.J(np.asarray(Z_u, dtype=float) / np.linalg.norm(Z_u))
    rows = []
    taken = []
    for cand in np.eye(alg.k):
        v = cand.copy()
        for w in taken:
            v -= (v @ w) * w
        norm = np.linalg.norm(v)
        if norm < 1e-8:
            continue
        v /= norm
        rows.append(v)
        taken.extend([v, J @ v])
        if len(rows) == alg.k // 2:
            break
    return np.vstack(rows)


def _pq_monomial_exponents(kappa, p, q):
    ps = []
    for combo in combinations_with_replacement(range(kappa), p):
        e = [0] * kappa
        for i in combo:
            e[i] += 1
        ps.append(tuple(e))
    qs = []
    for combo in combinations_with_replacement(range(kappa), q):
        e = [0] * kappa
        for i in combo:
            e[i] += 1
        qs.append(tuple(e))
    return [(pe, qe) for pe in ps for qe in qs]


def harmonic_nm_dimension(alg, n, m, Z_u=None, seed=0, tol=1e-8):
    """Brute-force rank of the space of projected twist polynomials H^(n,m).

    Spans Pi_X of the monomials z^{p_i} conj(z)^{q_i} with sum p = (n+m)/2,
    sum q = (n-m)/2 in an adapted complex basis, evaluates on random X
    samples and returns the numerical rank.
    """
    if (n + m) % 2 or abs(m) > n:
        return 0
    Z_u = np.eye(alg.l)[0] if Z_u is None else np.asarray(Z_u, dtype=float)
    p, q = (n + m) // 2, (n - m) // 2
    B = adapted_complex_basis(alg, Z_u)
    kappa = alg.k // 2
    expos = _pq_monomial_exponents(kappa, p, q)
    rng = np.random.default_rng(seed)
    npts = 4 * len(expos) + 40
    pts = rng.standard_normal((npts, alg.k))
    node = (Z_u / np.linalg.norm(Z_u))[None, :]
    vals = np.zeros((len(expos), npts), dtype=complex)
    # z_j at the sample points
    zvals = np.array([[ _theta_batch(alg, B[j], x, node)[0] for j in range(kappa)] for x in pts])
    r2 = np.sum(pts**2, axis=1)
    for row, (pe, qe) in enumerate(expos):
        raw = np.ones(npts, dtype=complex)
        for j in range(kappa):
            raw *= zvals[:, j] ** pe[j] * np.conj(zvals[:, j]) ** qe[j]
        vals[row] = _project_x_values(alg.k, n, raw, pts, r2, expos, zvals, pe, qe)
    svals = np.linalg.svd(vals, compute_uv=False)
    if svals.size == 0:
        return 0
    return int(np.sum(svals > tol * svals[0]))


def _project_x_values(k, n, raw, pts, r2, expos, zvals, pe, qe):
    """Pi_X of a z-monomial via the closed Laplacian ladder on z-coordinates.

    For an adapted (orthonormal complex) basis the X-Laplacian acts on
    z-monomials as 4 sum_j p_j q_j z^{p - e_j} conj(z)^{q - e_j}; iterating
    gives the projection series with the same c_s coefficients.
    """
    cs = projection_coefficients(k, n)
    out = raw.copy()
    # iterate Delta^s via the ladder on exponent pairs
    terms = {(tuple(pe), tuple(qe)): 1.0}
    for s in range(1, n // 2 + 1):
        new = {}
        for (pcur, qcur), coeff in terms.items():
            for j in range(len(pcur)):
                if pcur[j] >= 1 and qcur[j] >= 1:
                    pnew = list(pcur)
                    qnew = list(qcur)
                    pnew[j] -= 1
                    qnew[j] -= 1
                    key = (tuple(pnew), tuple(qnew))
                    new[key] = new.get(key, 0.0) + coeff * 4.0 * pcur[j] * qcur[j]
        terms = new
        if not terms:
            break
        add = np.zeros_like(raw)
        for (pcur, qcur), coeff in terms.items():
            mono = np.ones_like(raw)
            for j in range(len(pcur)):
                mono *= zvals[:, j] ** pcur[j] * np.conj(zvals[:, j]) ** qcur[j]
            add += coeff * mono
        out = out + cs[s] * r2**s * add
    return out


# -- straight / twisted conversion --------------------------------------------


def _x_poly_mul(p1, p2):
    out = {}
    for e1, c1 in p1.items():
        for e2, c2 in p2.items():
            key = tuple(a + b for a, b in zip(e1, e2))
            out[key] = out.get(key, 0.0) + c1 * c2
    return out


def _linear_form_poly(vec):
    k = len(vec)
    out = {}
    for i, v in enumerate(vec):
        if v != 0:
            e = [0] * k
            e[i] = 1
            out[tuple(e)] = complex(v)
    return out


def _poly_power(poly, m, k):
    out = {tuple([0] * k): 1.0 + 0.0j}
    for _ in range(m):
        out = _x_poly_mul(out, poly)
    return out


def twisted_to_straight(alg, B, pq_list, K_u):
    """Monomial dict {x-exponent: coeff} of prod z_j^{p_j} conj(z_j)^{q_j}.

    z_j(X) = <B_j + i J_{K_u} B_j, X>; the result is the straight (plain
    polynomial) representation at this K_u.  Exact coordinate change.
    """
    K_u = np.asarray(K_u, dtype=float)
    J = alg.J(K_u / np.linalg.norm(K_u))
    out = {tuple([0] * alg.k): 1.0 + 0.0j}
    for (j, p, q) in pq_list:
        a = np.asarray(B[j], dtype=float) + 1j * (J @ np.asarray(B[j], dtype=float))
        zpol = _linear_form_poly(a)
        zbar = _linear_form_poly(np.conj(a))
        out = _x_poly_mul(out, _poly_power(zpol, p, alg.k))
        out = _x_poly_mul(out, _poly_power(zbar, q, alg.k))
    return out


def straight_to_twisted(alg, B, straight, K_u):
    """Twisted dict {((p_j), (q_j)): coeff} of a straight monomial dict.

    Inverts the frame relations at this K_u: the standard coordinates are
    expanded through A^{-1} into the B_R frame and the halves
    <B_j, X> = (z_j + conj z_j)/2, <J B_j, X> = (z_j - conj z_j)/(2i).
    Fails on the singularity set of B (singular frame matrix).
    """
    from .algebra import frame_matrix

    K_u = np.asarray(K_u, dtype=float)
    K_u = K_u / np.linalg.norm(K_u)
    B = np.asarray(B, dtype=float)
    half = alg.k // 2
    A, det = frame_matrix(alg, B, np.eye(alg.k), K_u)
    if abs(det) < 1e-12:
        raise ValueError("K_u lies on the singularity set of B")
    Ainv = np.linalg.inv(A)

    kappa = half
    zero = (tuple([0] * kappa), tuple([0] * kappa))

    def tw_mul(t1, t2):
        out = {}
        for (p1, q1), c1 in t1.items():
            for (p2, q2), c2 in t2.items():
                key = (
                    tuple(a + b for a, b in zip(p1, p2)),
                    tuple(a + b for a, b in zip(q1, q2)),
                )
                out[key] = out.get(key, 0.0) + c1 * c2
        return out

    # <Q_i, X> as a twisted polynomial: Q_i = sum_j Ainv[i, j] B_R[j]
    coord_tw = []
    for i in range(alg.k):
        acc = {}
        for j in range(half):
            cz = 0.5 * Ainv[i, j] + Ainv[i, half + j] / 2j
            czb = 0.5 * Ainv[i, j] - Ainv[i, half + j] / 2j
            for key, coeff in ((_unit_pq(kappa, j, True), cz), (_unit_pq(kappa, j, False), czb)):
                if coeff != 0:
                    acc[key] = acc.get(key, 0.0) + coeff
        coord_tw.append(acc)

    out = {}
    for expo, coeff in straight.items():
        term = {zero: complex(coeff)}
        for i, e in enumerate(expo):
            for _ in range(e):
                term = tw_mul(term, coord_tw[i])
        for key, c in term.items():
            out[key] = out.get(key, 0.0) + c
    return {key: c for key, c in out.items() if abs(c) > 1e-14}


def _unit_pq(kappa, j, holo):
    p = [0] * kappa
    q = [0] * kappa
    (p if holo else q)[j] = 1
    return (tuple(p), tuple(q))


def evaluate_straight(straight, X):
    X = np.asarray(X, dtype=float)
    out = 0.0 + 0.0j
    for expo, c in straight.items():
        term = c
        for i, e in enumerate(expo):
            if e:
                term = term * X[i] ** e
        out += term
    return out


def evaluate_twisted(alg, B, twisted, X, K_u):
    K_u = np.asarray(K_u, dtype=float)
    J = alg.J(K_u / np.linalg.norm(K_u))
    B = np.asarray(B, dtype=float)
    z = np.array([(B[j] @ X) + 1j * ((J @ B[j]) @ X) for j in range(len(B))])
    out = 0.0 + 0.0j
    for (pe, qe), c in twisted.items():
        term = c
        for j in range(len(B)):
            term = term * z[j] ** pe[j] * np.conj(z[j]) ** qe[j]
        out += term
    return out


def _smoothstep(u):
    """C^inf step: 0 for u <= 0, 1 for u >= 1."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    high = u >= 1
    mid = pos & ~high
    if np.any(mid):
        a = np.exp(-1.0 / u[mid])
        b = np.exp(-1.0 / (1.0 - u[mid]))
        out[mid] = a / (a + b)
    out[high] = 1.0
    return out


def singular_cutoff(alg, B, eps):
    """psi_eps(K): 0 where |det A(K_u)| <= eps/2, 1 where >= eps, smooth between.

    The sublevel sets of |det A| stand in for the metric eps-neighborhoods
    of the singularity set; constant in radial K-directions, and the family
    is monotone in eps.
    """
    from .algebra import frame_matrix

    B = np.asarray(B, dtype=float)

    def psi(K):
        K = np.asarray(K, dtype=float)
        if K.ndim == 1:
            kk = np.linalg.norm(K)
            if kk == 0:
                return 0.0
            _, det = frame_matrix(alg, B, np.eye(alg.k), K / kk)
            return float(_smoothstep((abs(det) - eps / 2.0) / (eps / 2.0)))
        return np.array([psi(row) for row in K])

    return psi


# -- roulette operators --------------------------------------------------------


class RouletteState:
    """Indexed family of K-radial functions f_alpha, with truncation depth."""

    def __init__(self, indices, functions, depth=1):
        self.indices = list(indices)
        self.functions = dict(functions)
        if set(self.indices) != set(self.functions):
            raise ValueError("functions must cover exactly the index set")
        self.depth = int(depth)
        if self.depth < 1:
            raise ValueError("depth must be >= 1")

    def __getitem__(self, alpha):
        return self.functions[alpha]


def roulette_one_turn(state, p, q, S, h=1e-5):
    """One turn of the roulette operator on a tuple of K-radial functions.

    output_alpha(x, kk) = -(p - q) i (kk f_alpha + d/dkk sum_beta
    S[alpha, beta] f_beta); S couples the compound indices.  Missing
    S entries are an error; p = q returns the zero family.
    """
    S = np.asarray(S)
    n = len(state.indices)
    if S.shape != (n, n):
        raise ValueError("S matrix shape does not match the index set")
    pref = -(p - q) * 1j

    def make(alpha_pos):
        def out(x, kk):
            findex = state.indices
            fa = state.functions[findex[alpha_pos]](x, kk)
            mix_p = sum(
                S[alpha_pos, bpos] * state.functions[findex[bpos]](x, kk + h) for bpos in range(n)
            )
            mix_m = sum(
                S[alpha_pos, bpos] * state.functions[findex[bpos]](x, kk - h) for bpos in range(n)
            )
            dmix = (mix_p - mix_m) / (2.0 * h)
            return pref * (kk * fa + dmix)

        return out

    funcs = {alpha: make(pos) for pos, alpha in enumerate(state.indices)}
    return RouletteState(state.indices, funcs, depth=state.depth + 1)


# -- joint (X, K) polynomials and the spin matrix ------------------------------


class XKPolynomial:
    """Polynomial in (X, K) jointly: {(x-expo, k-expo): coeff}."""

    def __init__(self, k, l, coeffs=None):
        self.k = int(k)
        self.l = int(l)
        self.coeffs = dict(coeffs or {})

    def copy(self):
        return XKPolynomial(self.k, self.l, dict(self.coeffs))

    @classmethod
    def x_linear(cls, k, l, vec):
        """<vec, X> as a (X-degree 1, K-degree 0) polynomial."""
        coeffs = {}
        zero_k = tuple([0] * l)
        for i, v in enumerate(np.asarray(vec)):
            if v != 0:
                xe = [0] * k
                xe[i] = 1
                coeffs[(tuple(xe), zero_k)] = complex(v)
        return cls(k, l, coeffs)

    @classmethod
    def jk_form(cls, alg, Q):
        """<J_K(Q), X>: bilinear in (X, K), K unnormalized."""
        Q = np.asarray(Q, dtype=float)
        coeffs = {}
        JQ = np.einsum("aij,j->ai", alg.J_basis, Q)
        for a in range(alg.l):
            for i in range(alg.k):
                v = JQ[a, i]
                if v != 0:
                    xe = [0] * alg.k
                    xe[i] = 1
                    ke = [0] * alg.l
                    ke[a] = 1
                    coeffs[(tuple(xe), tuple(ke))] = complex(v)
        return cls(alg.k, alg.l, coeffs)

    @classmethod
    def theta_factor(cls, alg, Q, conj=False):
        """<Q, X> + i <J_K Q, X> (K unnormalized; restrict to |K| = 1)."""
        Q = np.asarray(Q, dtype=float)
        coeffs = {}
        zero_k = tuple([0] * alg.l)
        for i, qv in enumerate(Q):
            if qv != 0:
                xe = [0] * alg.k
                xe[i] = 1
                coeffs[(tuple(xe), zero_k)] = complex(qv)
        sign = -1j if conj else 1j
        JQ = np.einsum("aij,j->ai", alg.J_basis, Q)  # row a: J_a Q
        for a in range(alg.l):
            for i in range(alg.k):
                v = JQ[a, i]
                if v != 0:
                    xe = [0] * alg.k
                    xe[i] = 1
                    ke = [0] * alg.l
                    ke[a] = 1
                    key = (tuple(xe), tuple(ke))
                    coeffs[key] = coeffs.get(key, 0.0) + sign * v
        return cls(alg.k, alg.l, coeffs)

    @classmethod
    def k_linear(cls, k, l, W):
        coeffs = {}
        for a, w in enumerate(np.asarray(W)):
            if w != 0:
                ke = [0] * l
                ke[a] = 1
                coeffs[(tuple([0] * k), tuple(ke))] = complex(w)
        return cls(k, l, coeffs)

    def __add__(self, other):
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0.0) + c
        return XKPolynomial(self.k, self.l, out)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rmul__(self, scalar):
        return XKPolynomial(self.k, self.l, {key: scalar * c for key, c in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, XKPolynomial):
            return self.__rmul__(other)
        out = {}
        for (x1, k1), c1 in self.coeffs.items():
            for (x2, k2), c2 in other.coeffs.items():
                key = (
                    tuple(a + b for a, b in zip(x1, x2)),
                    tuple(a + b for a, b in zip(k1, k2)),
                )
                out[key] = out.get(key, 0.0) + c1 * c2
        return XKPolynomial(self.k, self.l, out)

    def power(self, m):
        out = XKPolynomial(self.k, self.l, {(tuple([0] * self.k), tuple([0] * self.l)): 1.0})
        for _ in range(m):
            out = out * self
        return out

    def dx(self, i):
        out = {}
        for (xe, ke), c in self.coeffs.items():
            if xe[i]:
                new = list(xe)
                new[i] -= 1
                key = (tuple(new), ke)
                out[key] = out.get(key, 0.0) + c * xe[i]
        return XKPolynomial(self.k, self.l, out)

    def dk(self, a):
        out = {}
        for (xe, ke), c in self.coeffs.items():
            if ke[a]:
                new = list(ke)
                new[a] -= 1
                key = (xe, tuple(new))
                out[key] = out.get(key, 0.0) + c * ke[a]
        return XKPolynomial(self.k, self.l, out)

    def directional_x(self, alg, field_matrix):
        """sum_i (field_matrix X)_i d/dx_i as polynomial output."""
        out = XKPolynomial(self.k, self.l)
        for i in range(self.k):
            row = field_matrix[i]
            for j in range(self.k):
                if row[j] != 0:
                    xe = [0] * self.k
                    xe[j] = 1
                    mono = XKPolynomial(self.k, self.l, {(tuple(xe), tuple([0] * self.l)): row[j]})
                    out = out + mono * self.dx(i)
        return out

    def D_K(self, alg):
        """Directional X-derivative along J_K(X); raises K-degree by one."""
        out = XKPolynomial(self.k, self.l)
        for a in range(self.l):
            Ja = alg.J_basis[a]
            # (J_K X)_i includes K_a (J_a X)_i
            for i in range(self.k):
                di = self.dx(i)
                if not di.coeffs:
                    continue
                for j in range(self.k):
                    v = Ja[i, j]
                    if v == 0:
                        continue
                    xe = [0] * self.k
                    xe[j] = 1
                    ke = [0] * self.l
                    ke[a] = 1
                    mono = XKPolynomial(self.k, self.l, {(tuple(xe), tuple(ke)): v})
                    out = out + mono * di
        return out

    def x_laplacian(self):
        out = {}
        for (xe, ke), c in self.coeffs.items():
            for i, e in enumerate(xe):
                if e >= 2:
                    new = list(xe)
                    new[i] -= 2
                    key = (tuple(new), ke)
                    out[key] = out.get(key, 0.0) + c * e * (e - 1)
        return XKPolynomial(self.k, self.l, out)

    def x_degree(self):
        return max((sum(xe) for (xe, _ke) in self.coeffs), default=0)

    def project_x(self):
        """X-harmonic projection (input must be X-homogeneous)."""
        n = self.x_degree()
        if n == 0:
            return self.copy()
        cs = projection_coefficients(self.k, n)
        r2 = XKPolynomial(self.k, self.l)
        for i in range(self.k):
            xe = [0] * self.k
            xe[i] = 2
            r2 = r2 + XKPolynomial(self.k, self.l, {(tuple(xe), tuple([0] * self.l)): 1.0})
        out = self.copy()
        term = self
        r2s = None
        for s in range(1, n // 2 + 1):
            term = term.x_laplacian()
            if not term.coeffs:
                break
            r2s = r2 if r2s is None else r2s * r2
            out = out + cs[s] * (r2s * term)
        return out

    def evaluate(self, X, Knodes):
        """Values at fixed X over an array of K nodes."""
        X = np.asarray(X, dtype=float)
        Knodes = np.atleast_2d(np.asarray(Knodes, dtype=float))
        out = np.zeros(len(Knodes), dtype=complex)
        for (xe, ke), c in self.coeffs.items():
            xv = 1.0
            for i, e in enumerate(xe):
                if e:
                    xv *= X[i] ** e
            kv = np.ones(len(Knodes))
            for a, e in enumerate(ke):
                if e:
                    kv = kv * Knodes[:, a] ** e
            out += c * xv * kv
        return out


def _sphere_projector(l, s, nodes, weights):
    cosang = np.clip(nodes @ nodes.T, -1.0, 1.0)
    kern = zonal_eigenfunction(l, s, np.arccos(cosang))
    scale = harmonic_space_dimension(l, s) / sphere_area(l)
    return scale * kern * weights[None, :]


def m_perp_values(alg, F, X, nodes):
    """M_{K_u^perp} F at (X, node): tangential part of sum_m d_{K_m} D_{e_m}.

    Frame-free form: sum_m <grad_K H_m, e_m> - <grad_K H_m, K_u> K_{u,m},
    H_m = D_{e_m} F.
    """
    l = alg.l
    total = np.zeros(len(nodes), dtype=complex)
    radial = np.zeros((len(nodes), l), dtype=complex)
    for m in range(l):
        Hm = F.directional_x(alg, alg.J_basis[m])
        for b in range(l):
            dHb = Hm.dk(b).evaluate(X, nodes)
            if b == m:
                total += dHb
            radial[:, m] += dHb * nodes[:, b]
    total -= np.einsum("na,na->n", radial, nodes)
    return total


def spin_matrix(alg, test_functions, s_from, s_to_list, X_samples=None, sphere_order=14, rng=None):
    """Least-squares S with [D_K, Pi^(s_from)] F = sum_s S[s] Pi^(s) M_perp F.

    test_functions: XKPolynomials, X-homogeneous, K-homogeneous (evaluated
    on the unit K-sphere).  Returns (S coefficients indexed by s_to_list,
    relative residual of the decomposition).
    """
    rng = rng or np.random.default_rng(5)
    if X_samples is None:
        X_samples = rng.standard_normal((6, alg.k))
    nodes, weights = sphere_rule(alg.l, sphere_order)
    proj_from = _sphere_projector(alg.l, s_from, nodes, weights)
    projs_to = [_sphere_projector(alg.l, s, nodes, weights) for s in s_to_list]

    lhs_rows = []
    cand_rows = [[] for _ in s_to_list]
    for F in test_functions:
        DF = F.D_K(alg)
        for X in X_samples:
            # D_K(Pi F) at outer node j: the projected value combines F at
            # inner nodes m, so the X-derivative along J_{theta_j} X passes
            # onto each inner evaluation
            gmat = np.array([F.dx(i).evaluate(X, nodes) for i in range(alg.k)])  # (k, n)
            JX = np.einsum("aij,j->ai", alg.J_basis, X)  # (l, k): rows J_a X
            field = nodes @ JX  # (n, k): row j holds J_{theta_j} X
            dir_inner = field @ gmat  # [j, m] = grad F(X, v_m) . J_{theta_j} X
            term1 = np.einsum("jm,jm->j", proj_from, dir_inner)
            term2 = proj_from @ DF.evaluate(X, nodes)
            lhs_rows.append(term1 - term2)
            mp = m_perp_values(alg, F, X, nodes)
            for idx, P in enumerate(projs_to):
                cand_rows[idx].append(P @ mp)

    b = np.concatenate(lhs_rows)
    A = np.column_stack([np.concatenate(rows) for rows in cand_rows])
    coef, *_ = np.linalg.lstsq(A, b, rcond=None)
    resid = np.linalg.norm(A @ coef - b) / max(np.linalg.norm(b), 1e-300)
    return coef, resid
