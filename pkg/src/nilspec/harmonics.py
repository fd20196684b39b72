"""Solid harmonics: projections and graded decompositions of homogeneous
polynomials, the Hankel transform, and the spherical mean value identity.
"""

from itertools import combinations_with_replacement

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma, jv

from .quadrature import (
    gauss_legendre,
    orthcomplement_basis,
    sphere_area,
    sphere_rule,
    zonal_eigenfunction,
)

__all__ = [
    "HomogeneousPolynomial",
    "harmonic_projection",
    "harmonic_decomposition",
    "projection_coefficients",
    "dimension_free_projection_recursion",
    "HankelSpec",
    "hankel_transform",
    "hankel_transform_slice",
    "fourier_quadrature",
    "spherical_mean",
]


def _monomials(d, n):
    out = []
    for combo in combinations_with_replacement(range(d), n):
        expo = [0] * d
        for i in combo:
            expo[i] += 1
        out.append(tuple(expo))
    return out


class HomogeneousPolynomial:
    """Homogeneous polynomial over R^d as a sparse monomial -> coefficient map."""

    def __init__(self, dimension, degree, coeffs=None):
        self.dimension = int(dimension)
        self.degree = int(degree)
        self.coeffs = {}
        if coeffs:
            for expo, c in coeffs.items():
                if len(expo) != self.dimension or sum(expo) != self.degree:
                    raise ValueError(f"monomial {expo} is not degree {degree} in d={dimension}")
                if c != 0:
                    self.coeffs[tuple(expo)] = complex(c)

    @classmethod
    def linear_form(cls, W):
        W = np.asarray(W)
        d = len(W)
        coeffs = {}
        for i, w in enumerate(W):
            if w != 0:
                expo = [0] * d
                expo[i] = 1
                coeffs[tuple(expo)] = w
        return cls(d, 1, coeffs)

    @classmethod
    def radius_squared(cls, d):
        coeffs = {}
        for i in range(d):
            expo = [0] * d
            expo[i] = 2
            coeffs[tuple(expo)] = 1.0
        return cls(d, 2, coeffs)

    @classmethod
    def random(cls, d, n, rng, complex_coeffs=False):
        coeffs = {}
        for expo in _monomials(d, n):
            c = rng.standard_normal()
            if complex_coeffs:
                c = c + 1j * rng.standard_normal()
            coeffs[expo] = c
        return cls(d, n, coeffs)

    def __add__(self, other):
        if other.degree != self.degree or other.dimension != self.dimension:
            raise ValueError("degree/dimension mismatch")
        coeffs = dict(self.coeffs)
        for expo, c in other.coeffs.items():
            coeffs[expo] = coeffs.get(expo, 0.0) + c
        return HomogeneousPolynomial(self.dimension, self.degree, coeffs)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rmul__(self, scalar):
        coeffs = {e: scalar * c for e, c in self.coeffs.items()}
        return HomogeneousPolynomial(self.dimension, self.degree, coeffs)

    def __mul__(self, other):
        if isinstance(other, HomogeneousPolynomial):
            coeffs = {}
            for e1, c1 in self.coeffs.items():
                for e2, c2 in other.coeffs.items():
                    expo = tuple(a + b for a, b in zip(e1, e2))
                    coeffs[expo] = coeffs.get(expo, 0.0) + c1 * c2
            return HomogeneousPolynomial(self.dimension, self.degree + other.degree, coeffs)
        return self.__rmul__(other)

    def power(self, m):
        out = HomogeneousPolynomial(self.dimension, 0, {tuple([0] * self.dimension): 1.0})
        for _ in range(m):
            out = out * self
        return out

    def laplacian(self):
        coeffs = {}
        for expo, c in self.coeffs.items():
            for i, e in enumerate(expo):
                if e >= 2:
                    new = list(expo)
                    new[i] -= 2
                    key = tuple(new)
                    coeffs[key] = coeffs.get(key, 0.0) + c * e * (e - 1)
        return HomogeneousPolynomial(self.dimension, max(self.degree - 2, 0), coeffs)

    def divide_radius_squared(self):
        """Q with |x|^2 Q = self; least-squares on the monomial basis."""
        if self.degree < 2:
            raise ValueError("degree too small")
        target = _monomials(self.dimension, self.degree)
        source = _monomials(self.dimension, self.degree - 2)
        index = {e: i for i, e in enumerate(target)}
        M = np.zeros((len(target), len(source)))
        for j, e in enumerate(source):
            for i in range(self.dimension):
                up = list(e)
                up[i] += 2
                M[index[tuple(up)], j] += 1.0
        rhs = np.zeros(len(target), dtype=complex)
        for e, c in self.coeffs.items():
            rhs[index[e]] = c
        sol, *_ = np.linalg.lstsq(M, rhs, rcond=None)
        coeffs = {e: sol[j] for j, e in enumerate(source) if sol[j] != 0}
        return HomogeneousPolynomial(self.dimension, self.degree - 2, coeffs)

    def __call__(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.zeros(len(points), dtype=complex)
        for expo, c in self.coeffs.items():
            term = np.ones(len(points))
            for i, e in enumerate(expo):
                if e:
                    term = term * points[:, i] ** e
            out += c * term
        return out

    def max_coeff(self):
        if not self.coeffs:
            return 0.0
        return max(abs(c) for c in self.coeffs.values())

    def is_zero(self, tol=0.0):
        return self.max_coeff() <= tol

    def to_json_dict(self):
        return {
            "dimension": self.dimension,
            "degree": self.degree,
            "coeffs": {
                ",".join(map(str, e)): [c.real, c.imag] for e, c in self.coeffs.items()
            },
        }


def projection_coefficients(d, n):
    """Coefficients c_s of Pi = sum_s c_s |x|^{2s} Delta^s on degree n, dim d.

    Solved from the harmonicity condition, which collapses to the
    triangular recursion c_{s+1} = -c_s / (2(s+1)(2n - 2s + d - 4)).
    """
    if d < 2:
        raise ValueError("need dimension >= 2")
    cs = [1.0]
    for s in range(n // 2):
        cs.append(-cs[-1] / (2.0 * (s + 1) * (2 * n - 2 * s + d - 4)))
    return cs


def dimension_free_projection_recursion(n, smax):
    """The recursion 2s(2(s+n)-1) C_s + C_{s-1} = 0, for diagnostics.

    It carries no ambient-dimension dependence and agrees with the
    harmonicity-forced coefficients only at particular dimensions
    (d = 4s + 1 at order s).
    """
    cs = [1.0]
    for s in range(1, smax + 1):
        cs.append(-cs[-1] / (2.0 * s * (2 * (s + n) - 1)))
    return cs


def harmonic_projection(P):
    """Harmonic component of a homogeneous polynomial.

    Pi(P) = sum_s c_s |x|^{2s} Delta^s P is harmonic and differs from P by
    a multiple of |x|^2; harmonic inputs are returned unchanged.
    """
    d, n = P.dimension, P.degree
    cs = projection_coefficients(d, n)
    r2 = HomogeneousPolynomial.radius_squared(d)
    out = HomogeneousPolynomial(d, n, dict(P.coeffs))
    term = P
    r2s = None
    for s in range(1, n // 2 + 1):
        term = term.laplacian()
        if term.is_zero():
            break
        r2s = r2 if r2s is None else r2s * r2
        out = out + cs[s] * (r2s * term)
    return out


def harmonic_decomposition(P):
    """Graded decomposition P = sum_i |x|^{2i} H_{n-2i} with H harmonic.

    Returns the list of (i, H_{n-2i}); reconstruction is exact up to
    roundoff.
    """
    out = []
    rest = P
    i = 0
    while True:
        H = harmonic_projection(rest)
        if not H.is_zero(tol=0.0):
            out.append((i, H))
        if rest.degree < 2:
            break
        residual = rest - H
        if residual.max_coeff() < 1e-14 * max(1.0, P.max_coeff()):
            break
        rest = residual.divide_radius_squared()
        i += 1
    return out


# -- Hankel transform --------------------------------------------------------


class HankelSpec:
    """Transform order data: ambient dimension l >= 2 and harmonic order nu."""

    def __init__(self, l, nu, radial=None):
        if l < 2 or nu < 0:
            raise ValueError("need l >= 2 and nu >= 0")
        self.l = int(l)
        self.nu = int(nu)
        self.radial = radial


def hankel_transform(spec, r, radial=None, rmax=np.inf, tol=1e-10):
    """H^(l)_nu of a radial profile, Bessel-kernel path.

    Defined so the l-dimensional Fourier transform (kernel e^{i<Z,K>}) of
    f(|K|) F(theta_K), F a degree-nu spherical harmonic, equals
    H^(l)_nu(f)(|Z|) F(theta_Z):

        H(r) = (2 pi)^{l/2} i^nu r^{1-l/2}
               * integral_0^inf f(k) J_{nu+l/2-1}(k r) k^{l/2} dk.

    The profile must decay fast enough for absolute convergence
    (Gaussian-class by default).
    """
    f = radial if radial is not None else spec.radial
    l, nu = spec.l, spec.nu
    order = nu + l / 2.0 - 1.0
    if r < 0:
        raise ValueError("radius must be >= 0")
    if r == 0.0:
        if nu > 0:
            return 0.0
        val, err = quad(lambda k: np.real(f(k)) * k ** (l - 1), 0, rmax, epsabs=tol)
        vali, erri = quad(lambda k: np.imag(f(k)) * k ** (l - 1), 0, rmax, epsabs=tol)
        const = (2.0 * np.pi) ** (l / 2.0) / (2.0 ** (l / 2.0 - 1.0) * gamma(l / 2.0))
        return const * (val + 1j * vali)

    def kernel_re(k):
        return np.real(f(k)) * jv(order, k * r) * k ** (l / 2.0)

    def kernel_im(k):
        return np.imag(f(k)) * jv(order, k * r) * k ** (l / 2.0)

    val, err = quad(kernel_re, 0, rmax, epsabs=tol, limit=400)
    vali, erri = quad(kernel_im, 0, rmax, epsabs=tol, limit=400)
    if max(err, erri) > 1e-6:
        raise RuntimeError(f"hankel quadrature did not converge (error {max(err, erri):.2e})")
    front = (2.0 * np.pi) ** (l / 2.0) * (1j**nu) * r ** (1.0 - l / 2.0)
    return front * (val + 1j * vali)


def hankel_transform_slice(spec, r, radial=None, tmax=12.0, n=220):
    """H^(l)_nu by the Fubini slicing through hyperplanes meeting the Z-axis.

    For each axis position t the hyperplane integral is folded with the
    mean value identity, leaving the zonal eigenfunction at the polar
    angle rho = atan2(tau, t); the radial profile is evaluated at the
    Euclidean radius sqrt(t^2 + tau^2) of the slice point.  Cross-checks
    the Bessel path.
    """
    f = radial if radial is not None else spec.radial
    l, nu = spec.l, spec.nu
    t, wt = gauss_legendre(n, 0.0, tmax)
    tau, wtau = gauss_legendre(n, 0.0, tmax)
    T, TAU = np.meshgrid(t, tau, indexing="ij")
    W = np.outer(wt, wtau)
    rho = np.arctan2(TAU, T)
    vals = f(np.sqrt(T**2 + TAU**2)) * zonal_eigenfunction(l, nu, rho) * TAU ** (l - 2)
    phase = np.exp(1j * r * T) + (-1.0) ** nu * np.exp(-1j * r * T)
    omega = sphere_area(l - 1)
    return omega * np.sum(W * vals * phase)


def fourier_quadrature(l, func, Z, radial_max=12.0, radial_n=160, sphere_order=24):
    """Direct l-dimensional Fourier integral of func(K) at Z, in polar form.

    Oracle for the Hankel paths: integral of e^{i<Z,K>} func(K) dK with a
    Gauss-Legendre radial rule times a sphere rule.
    """
    Z = np.asarray(Z, dtype=float)
    nodes, weights = sphere_rule(l, sphere_order)
    k, wk = gauss_legendre(radial_n, 0.0, radial_max)
    total = 0.0 + 0.0j
    for ki, wi in zip(k, wk):
        pts = ki * nodes
        total += wi * ki ** (l - 1) * np.sum(weights * func(pts) * np.exp(1j * pts @ Z))
    return total


def spherical_mean(l, F, theta, rho, order=24):
    """Average of F over the sphere of spherical radius rho around theta.

    For a degree-nu spherical harmonic this equals F(theta) times the
    zonal eigenfunction at rho (mean value identity).
    """
    theta = np.asarray(theta, dtype=float)
    theta = theta / np.linalg.norm(theta)
    if rho < 0 or rho > np.pi:
        raise ValueError("rho must lie in [0, pi]")
    if rho == 0.0:
        return complex(np.asarray(F(theta[None, :]))[0])
    basis = orthcomplement_basis(theta)
    sub_nodes, sub_weights = sphere_rule(l - 1, order)
    pts = np.cos(rho) * theta[None, :] + np.sin(rho) * (sub_nodes @ basis)
    vals = np.asarray(F(pts))
    return complex((sub_weights @ vals) / sub_weights.sum())
