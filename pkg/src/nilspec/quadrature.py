"""Sphere quadrature rules, zonal harmonics and spherical-harmonic projectors."""

from functools import lru_cache
from math import comb

import numpy as np
from scipy.special import eval_gegenbauer, gamma, roots_jacobi

__all__ = [
    "sphere_area",
    "sphere_rule",
    "zonal_eigenfunction",
    "harmonic_space_dimension",
    "project_spherical",
    "orthcomplement_basis",
    "gauss_legendre",
]


def sphere_area(l):
    """Surface area of the unit sphere S^{l-1} in R^l."""
    return 2.0 * np.pi ** (l / 2.0) / gamma(l / 2.0)


@lru_cache(maxsize=64)
def _sphere_rule_cached(l, order):
    if l == 1:
        nodes = np.array([[1.0], [-1.0]])
        weights = np.array([1.0, 1.0])
        return nodes, weights
    if l == 2:
        n = max(4, 2 * order)
        ang = 2.0 * np.pi * np.arange(n) / n
        nodes = np.column_stack([np.cos(ang), np.sin(ang)])
        weights = np.full(n, 2.0 * np.pi / n)
        return nodes, weights
    # recursive product: x = (sin(theta) y, cos(theta)), y on S^{l-2};
    # Gauss-Jacobi in u = cos(theta) integrates (1-u^2)^{(l-3)/2} exactly
    sub_nodes, sub_weights = _sphere_rule_cached(l - 1, order)
    alpha = (l - 3) / 2.0
    u, wu = roots_jacobi(order, alpha, alpha)
    s = np.sqrt(1.0 - u**2)
    nodes = np.concatenate(
        [np.column_stack([si * sub_nodes, np.full(len(sub_nodes), ui)]) for ui, si in zip(u, s)]
    )
    weights = np.concatenate([wi * sub_weights for wi in wu])
    return nodes, weights


def sphere_rule(l, order=20):
    """Quadrature nodes/weights on S^{l-1}; weights sum to the sphere area.

    Exact for polynomials of degree < 2*order restricted to the sphere.
    """
    nodes, weights = _sphere_rule_cached(l, order)
    return nodes.copy(), weights.copy()


def zonal_eigenfunction(l, nu, rho):
    """Radial eigenfunction phi of the sphere Laplacian on S^{l-1}.

    Order-nu eigenvalue nu(nu+l-2), normalized to phi(0) = 1; rho is the
    polar distance.  Gegenbauer for l >= 3, cos(nu rho) on the circle.
    """
    rho = np.asarray(rho, dtype=float)
    if l < 2:
        raise ValueError("need l >= 2")
    if l == 2:
        return np.cos(nu * rho)
    alpha = (l - 2) / 2.0
    return eval_gegenbauer(nu, alpha, np.cos(rho)) / eval_gegenbauer(nu, alpha, 1.0)


def harmonic_space_dimension(l, s):
    """Dimension of degree-s spherical harmonics on S^{l-1}."""
    if s == 0:
        return 1
    if l == 1:
        return 1 if s == 1 else 0
    return comb(s + l - 1, l - 1) - comb(s + l - 3, l - 1)


def project_spherical(l, s, func, points, order=24):
    """Degree-s spherical-harmonic component of func, at the given points.

    Zonal-kernel projector: (Pi_s F)(theta) =
    dim(l,s)/area * integral of phi_s(<theta, v>) F(v) dv over the sphere.
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    nodes, weights = sphere_rule(l, order)
    vals = np.asarray(func(nodes))
    cosang = np.clip(points @ nodes.T, -1.0, 1.0)
    kern = zonal_eigenfunction(l, s, np.arccos(cosang))
    scale = harmonic_space_dimension(l, s) / sphere_area(l)
    return scale * kern @ (weights * vals)


def orthcomplement_basis(theta):
    """Deterministic orthonormal basis of the hyperplane orthogonal to theta."""
    theta = np.asarray(theta, dtype=float)
    l = theta.shape[0]
    rows = [theta / np.linalg.norm(theta)]
    for cand in np.eye(l):
        v = cand.copy()
        for w in rows:
            v -= (v @ w) * w
        norm = np.linalg.norm(v)
        if norm > 1e-10:
            rows.append(v / norm)
        if len(rows) == l:
            break
    return np.vstack(rows[1:])


def gauss_legendre(n, a, b):
    """Gauss-Legendre nodes/weights on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(n)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    return mid + half * x, half * w
