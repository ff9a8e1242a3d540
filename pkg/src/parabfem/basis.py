"""Lagrange shape functions (P1/P2) and quadrature on the reference simplex.

The reference triangle has vertices (0,0),(1,0),(0,1); the reference
tetrahedron (0,0,0),(1,0,0),(0,1,0),(0,0,1).  Quadrature rules are
positive-weight: the degree-2 triangle rule is the classical
edge-midpoint rule, everything else comes from collapsed-coordinate
Gauss-Jacobi products, exact to the requested total degree.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

TRI_EDGES = ((0, 1), (1, 2), (2, 0))
TET_EDGES = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

MAX_QUAD_DEGREE = 10


class BasisError(ValueError):
    """Unsupported element parameters or point outside the simplex."""


def _vertices(dim):
    v = np.zeros((dim + 1, dim))
    for i in range(dim):
        v[i + 1, i] = 1.0
    return v


def _edges(dim):
    return TRI_EDGES if dim == 2 else TET_EDGES


class ReferenceElement:
    """P1 or P2 Lagrange element on the reference triangle/tetrahedron."""

    def __init__(self, dim, degree):
        if dim not in (2, 3):
            raise BasisError("dim must be 2 or 3")
        if degree not in (1, 2):
            raise BasisError("degree must be 1 or 2")
        self.dim = dim
        self.degree = degree
        verts = _vertices(dim)
        if degree == 1:
            self.local_nodes = verts
        else:
            mids = np.array([(verts[a] + verts[b]) / 2.0
                             for a, b in _edges(dim)])
            self.local_nodes = np.vstack([verts, mids])
        self.node_count = self.local_nodes.shape[0]
        # gradients of the barycentric coordinates, constant in space
        self._dlam = np.vstack([-np.ones(dim), np.eye(dim)])

    def _bary(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        lam0 = 1.0 - points.sum(axis=1)
        return np.column_stack([lam0, points])

    def values(self, points):
        """Shape function values, shape (npts, node_count)."""
        lam = self._bary(points)
        if self.degree == 1:
            return lam
        vert = lam * (2.0 * lam - 1.0)
        edge = np.column_stack([4.0 * lam[:, a] * lam[:, b]
                                for a, b in _edges(self.dim)])
        return np.hstack([vert, edge])

    def gradients(self, points):
        """Reference-coordinate gradients, shape (npts, node_count, dim)."""
        lam = self._bary(points)
        npts = lam.shape[0]
        dlam = self._dlam
        if self.degree == 1:
            return np.broadcast_to(dlam, (npts, self.node_count, self.dim)).copy()
        out = np.empty((npts, self.node_count, self.dim))
        for i in range(self.dim + 1):
            out[:, i, :] = (4.0 * lam[:, i] - 1.0)[:, None] * dlam[i]
        for k, (a, b) in enumerate(_edges(self.dim)):
            out[:, self.dim + 1 + k, :] = 4.0 * (
                lam[:, a][:, None] * dlam[b] + lam[:, b][:, None] * dlam[a])
        return out


def _check_inside(elem, point):
    lam = elem._bary(point)
    if np.any(lam < -1e-12):
        raise BasisError(f"point {point} lies outside the reference simplex")


def shape_values(elem, point):
    """Lagrange basis values at a single reference point."""
    _check_inside(elem, point)
    return elem.values(point)[0]


def shape_gradients(elem, point):
    """Reference-coordinate basis gradients at a single point."""
    _check_inside(elem, point)
    return elem.gradients(point)[0]


@dataclass(frozen=True)
class QuadratureRule:
    points: np.ndarray   # (nq, dim)
    weights: np.ndarray  # (nq,), positive, summing to the simplex measure
    exact_degree: int


def _gauss01(n):
    t, w = roots_legendre(n)
    return (t + 1.0) / 2.0, w / 2.0


def _jacobi01(n, alpha):
    # nodes/weights for int_0^1 (1-u)^alpha f(u) du
    t, w = roots_jacobi(n, alpha, 0.0)
    return (t + 1.0) / 2.0, w / 2.0 ** (alpha + 1)


@lru_cache(maxsize=None)
def quadrature(dim, exact_degree):
    """Positive-weight rule on the reference simplex, exact to exact_degree."""
    if dim not in (2, 3):
        raise BasisError("dim must be 2 or 3")
    if not 1 <= exact_degree <= MAX_QUAD_DEGREE:
        raise BasisError(f"unsupported quadrature degree {exact_degree}")
    if dim == 2 and exact_degree == 1:
        pts = np.array([[1.0 / 3.0, 1.0 / 3.0]])
        wts = np.array([0.5])
    elif dim == 2 and exact_degree == 2:
        pts = np.array([[0.5, 0.0], [0.5, 0.5], [0.0, 0.5]])
        wts = np.full(3, 1.0 / 6.0)
    else:
        n = (exact_degree + 2) // 2  # Gauss exactness 2n-1 >= exact_degree
        if dim == 2:
            u, wu = _jacobi01(n, 1.0)
            v, wv = _gauss01(n)
            uu, vv = np.meshgrid(u, v, indexing="ij")
            pts = np.column_stack([uu.ravel(), (vv * (1.0 - uu)).ravel()])
            wts = np.outer(wu, wv).ravel()
        else:
            u, wu = _jacobi01(n, 2.0)
            v, wv = _jacobi01(n, 1.0)
            w, ww = _gauss01(n)
            uu, vv, www = np.meshgrid(u, v, w, indexing="ij")
            x = uu
            y = vv * (1.0 - uu)
            z = www * (1.0 - uu) * (1.0 - vv)
            pts = np.column_stack([x.ravel(), y.ravel(), z.ravel()])
            wts = (wu[:, None, None] * wv[None, :, None]
                   * ww[None, None, :]).ravel()
    assert abs(wts.sum() - 1.0 / math.factorial(dim)) < 1e-13
    return QuadratureRule(points=pts, weights=wts, exact_degree=exact_degree)
