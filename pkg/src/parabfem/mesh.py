"""Structured simplicial meshes for the three experiment geometries.

Builders produce immutable meshes with positively oriented elements,
boundary nodes detected from facet incidence, and the mesh size h equal
to the largest vertex-pair distance over all elements.
"""

from dataclasses import dataclass, field
from itertools import combinations, permutations
import math

import numpy as np


class MeshError(ValueError):
    """Invalid mesh parameter or degenerate geometry."""


@dataclass(frozen=True)
class Mesh:
    """Simplicial mesh: triangles (dim=2) or tetrahedra (dim=3)."""

    dim: int
    nodes: np.ndarray           # (n_nodes, dim)
    elements: np.ndarray        # (n_elements, dim + 1), int
    boundary_nodes: np.ndarray  # sorted node indices on the boundary
    boundary_facets: np.ndarray # (n_bfacets, dim), sorted vertex tuples
    h: float

    @property
    def n_nodes(self):
        return self.nodes.shape[0]

    @property
    def n_elements(self):
        return self.elements.shape[0]


@dataclass(frozen=True)
class ElementGeometry:
    """Affine map data of one element: x = v0 + J xi."""

    vertex_coords: np.ndarray
    jacobian: np.ndarray
    jacobian_inv_t: np.ndarray
    measure: float


def _facets(element):
    # facets of a d-simplex are the (d)-subsets of its vertices
    return [tuple(sorted(c)) for c in combinations(element, len(element) - 1)]


def _boundary_info(elements):
    count = {}
    for el in elements:
        for f in _facets(el):
            count[f] = count.get(f, 0) + 1
    bfacets = sorted(f for f, c in count.items() if c == 1)
    bnodes = sorted({v for f in bfacets for v in f})
    return (np.array(bnodes, dtype=np.int64),
            np.array(bfacets, dtype=np.int64))


def _signed_volume(coords):
    jac = (coords[1:] - coords[0]).T
    return np.linalg.det(jac) / math.factorial(coords.shape[0] - 1)


def _orient(nodes, elements):
    """Swap the last two vertices of negatively oriented elements."""
    elements = elements.copy()
    for i, el in enumerate(elements):
        if _signed_volume(nodes[el]) < 0.0:
            elements[i, -2], elements[i, -1] = el[-1], el[-2]
        if _signed_volume(nodes[elements[i]]) <= 0.0:
            raise MeshError(f"element {i} has non-positive measure")
    return elements


def _mesh_size(nodes, elements):
    h = 0.0
    for el in elements:
        xs = nodes[el]
        for a, b in combinations(range(len(el)), 2):
            h = max(h, float(np.linalg.norm(xs[a] - xs[b])))
    return h


def _build(dim, nodes, elements):
    nodes = np.asarray(nodes, dtype=float)
    elements = _orient(nodes, np.asarray(elements, dtype=np.int64))
    bnodes, bfacets = _boundary_info(elements)
    return Mesh(dim=dim, nodes=nodes, elements=elements,
                boundary_nodes=bnodes, boundary_facets=bfacets,
                h=_mesh_size(nodes, elements))


def unit_square_mesh(M):
    """Uniform triangulation of (0,1)^2 with (M+1)^2 lattice nodes.

    Each cell is split along its lower-left to upper-right diagonal,
    giving 2 M^2 triangles and h = sqrt(2)/M.
    """
    if M < 1:
        raise MeshError("M must be a positive integer")
    line = np.linspace(0.0, 1.0, M + 1)
    xx, yy = np.meshgrid(line, line, indexing="xy")
    nodes = np.column_stack([xx.ravel(), yy.ravel()])  # index = j*(M+1) + i

    def nid(i, j):
        return j * (M + 1) + i

    elements = []
    for j in range(M):
        for i in range(M):
            a, b = nid(i, j), nid(i + 1, j)
            c, d = nid(i + 1, j + 1), nid(i, j + 1)
            elements.append((a, b, c))
            elements.append((a, c, d))
    return _build(2, nodes, elements)


# vertex orderings of the 6 Kuhn tetrahedra of a unit cube: walk from the
# low corner to the high corner along one axis permutation each
_KUHN_PERMS = sorted(permutations(range(3)))


def unit_cube_mesh(M):
    """Uniform tetrahedralization of (0,1)^3 via the Kuhn 6-tet split."""
    if M < 1:
        raise MeshError("M must be a positive integer")
    line = np.linspace(0.0, 1.0, M + 1)
    n1 = M + 1
    grid = np.array([[x, y, z] for z in line for y in line for x in line])

    def nid(i, j, k):
        return (k * n1 + j) * n1 + i

    elements = []
    for k in range(M):
        for j in range(M):
            for i in range(M):
                base = np.array([i, j, k])
                for perm in _KUHN_PERMS:
                    corners = [base.copy()]
                    p = base.copy()
                    for ax in perm:
                        p = p.copy()
                        p[ax] += 1
                        corners.append(p)
                    elements.append(tuple(nid(*c) for c in corners))
    return _build(3, grid, elements)


def unit_disk_mesh(M):
    """Quasi-uniform triangulation of the unit disk with M boundary nodes.

    Nodes sit on M/8 concentric rings (ring k holds 8k nodes at radius
    k/(M/8)), plus the center; the boundary is the inscribed M-gon.
    """
    if M < 8 or M % 8 != 0:
        raise MeshError("M must be a multiple of 8 with M >= 8")
    R = M // 8
    nodes = [(0.0, 0.0)]
    ring_start = [0]
    for k in range(1, R + 1):
        ring_start.append(len(nodes))
        nk = 8 * k
        ang = 2.0 * np.pi * np.arange(nk) / nk
        r = k / R
        nodes.extend(zip(r * np.cos(ang), r * np.sin(ang)))

    elements = []
    for j in range(8):  # center fan
        elements.append((0, 1 + j, 1 + (j + 1) % 8))
    for k in range(2, R + 1):
        n_in, n_out = 8 * (k - 1), 8 * k
        s_in, s_out = ring_start[k - 1], ring_start[k]
        i = o = 0
        # march around the annulus, always advancing the pointer whose
        # next node comes first in angle
        while i < n_in or o < n_out:
            next_in = (i + 1) / n_in if i < n_in else 2.0
            next_out = (o + 1) / n_out if o < n_out else 2.0
            if next_out <= next_in:
                elements.append((s_out + o % n_out,
                                 s_out + (o + 1) % n_out,
                                 s_in + i % n_in))
                o += 1
            else:
                elements.append((s_in + i % n_in,
                                 s_in + (i + 1) % n_in,
                                 s_out + o % n_out))
                i += 1
    return _build(2, nodes, elements)


def element_geometry(mesh, element_index):
    """Affine reference-to-physical map data for one element."""
    if not 0 <= element_index < mesh.n_elements:
        raise IndexError(f"element index {element_index} out of range")
    coords = mesh.nodes[mesh.elements[element_index]]
    jac = (coords[1:] - coords[0]).T
    det = np.linalg.det(jac)
    measure = abs(det) / math.factorial(mesh.dim)
    if measure <= 1e-14 * mesh.h ** mesh.dim:
        raise MeshError(f"element {element_index} is degenerate")
    return ElementGeometry(vertex_coords=coords, jacobian=jac,
                           jacobian_inv_t=np.linalg.inv(jac).T,
                           measure=measure)


def write_mesh(mesh, path):
    """Plain-text export: header, node lines, element lines, boundary line."""
    with open(path, "w") as fh:
        fh.write(f"{mesh.dim} {mesh.n_nodes} {mesh.n_elements}\n")
        for x in mesh.nodes:
            fh.write(" ".join(f"{v:.17g}" for v in x) + "\n")
        for el in mesh.elements:
            fh.write(" ".join(str(v) for v in el) + "\n")
        fh.write(" ".join(str(v) for v in mesh.boundary_nodes) + "\n")
