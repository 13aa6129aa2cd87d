"""
Reference triangle shape functions and quadrature.

Six-node (quadratic) and three-node (linear) Lagrange triangles on the
reference element {(xi, eta): xi >= 0, eta >= 0, xi + eta <= 1}, with node
ordering corners (0,0), (1,0), (0,1) followed by midsides 01, 12, 20 for the
quadratic family.
"""

import numpy as np

__all__ = [
    "p1_values", "p1_grads", "p2_values", "p2_grads",
    "quadrature_rule", "edge_quadrature_rule", "shape_eval",
]


def p1_values(points):
    """Linear shape functions at reference points (n, 2) -> (n, 3)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    xi, eta = pts[:, 0], pts[:, 1]
    return np.stack([1.0 - xi - eta, xi, eta], axis=1)


def p1_grads():
    """Constant reference gradients of the linear functions, (3, 2)."""
    return np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]])


def p2_values(points):
    """Quadratic shape functions at reference points (n, 2) -> (n, 6)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    xi, eta = pts[:, 0], pts[:, 1]
    l1 = 1.0 - xi - eta
    return np.stack([
        l1 * (2.0 * l1 - 1.0),
        xi * (2.0 * xi - 1.0),
        eta * (2.0 * eta - 1.0),
        4.0 * l1 * xi,
        4.0 * xi * eta,
        4.0 * eta * l1,
    ], axis=1)


def p2_grads(points):
    """Reference gradients of the quadratic functions, (n, 6, 2)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    xi, eta = pts[:, 0], pts[:, 1]
    l1 = 1.0 - xi - eta
    zeros = np.zeros_like(xi)
    d = np.empty((pts.shape[0], 6, 2))
    d[:, 0, 0] = 1.0 - 4.0 * l1
    d[:, 0, 1] = 1.0 - 4.0 * l1
    d[:, 1, 0] = 4.0 * xi - 1.0
    d[:, 1, 1] = zeros
    d[:, 2, 0] = zeros
    d[:, 2, 1] = 4.0 * eta - 1.0
    d[:, 3, 0] = 4.0 * (l1 - xi)
    d[:, 3, 1] = -4.0 * xi
    d[:, 4, 0] = 4.0 * eta
    d[:, 4, 1] = 4.0 * xi
    d[:, 5, 0] = -4.0 * eta
    d[:, 5, 1] = 4.0 * (l1 - eta)
    return d


def quadrature_rule():
    """Six-point, degree-4-exact rule on the reference triangle.

    Weights sum to the reference area 1/2.  Degree-5 monomials are not
    integrated exactly by this rule.
    """
    a = 0.445948490915965
    b = 0.091576213509771
    wa = 0.223381589678011 * 0.5
    wb = 0.109951743655322 * 0.5
    points = np.array([
        [a, a], [1.0 - 2.0 * a, a], [a, 1.0 - 2.0 * a],
        [b, b], [1.0 - 2.0 * b, b], [b, 1.0 - 2.0 * b],
    ])
    weights = np.array([wa, wa, wa, wb, wb, wb])
    return points, weights


def edge_quadrature_rule():
    """Three-point Gauss rule on [0, 1] (degree 5), for boundary terms."""
    x = np.array([0.5 - np.sqrt(15.0) / 10.0, 0.5, 0.5 + np.sqrt(15.0) / 10.0])
    w = np.array([5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0])
    return x, w


def shape_eval(coords, ref_point):
    """Shape values, physical gradients and Jacobian at one reference point.

    Args:
        coords: (6, 2) physical node coordinates of a quadratic triangle
        ref_point: (2,) point in the reference triangle

    Returns:
        dict with 'N2' (6,), 'N1' (3,), 'dN2' (6, 2), 'dN1' (3, 2) physical
        gradients, and 'detJ' of the isoparametric map.

    Raises:
        ValueError: on non-positive Jacobian determinant.
    """
    coords = np.asarray(coords, dtype=float)
    pt = np.asarray(ref_point, dtype=float).reshape(1, 2)
    n2 = p2_values(pt)[0]
    dn2_ref = p2_grads(pt)[0]
    # isoparametric Jacobian J[i, j] = dx_i/dxi_j
    J = coords.T @ dn2_ref
    detJ = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
    if detJ <= 0.0:
        raise ValueError(f"non-positive Jacobian determinant {detJ}")
    Jinv = np.array([[J[1, 1], -J[0, 1]], [-J[1, 0], J[0, 0]]]) / detJ
    dn2 = dn2_ref @ Jinv
    dn1 = p1_grads() @ Jinv
    return {
        "N2": n2,
        "N1": p1_values(pt)[0],
        "dN2": dn2,
        "dN1": dn1,
        "detJ": float(detJ),
    }
