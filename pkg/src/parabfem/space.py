"""Finite element space: global DOF numbering and cached geometry data.

For degree 1 the DOFs are the mesh vertices; for degree 2 the edge
midpoints are appended after the vertices, numbered in order of first
appearance while walking the elements.
"""

from dataclasses import dataclass
import math

import numpy as np

from .basis import ReferenceElement, _edges, quadrature


@dataclass(frozen=True)
class QuadData:
    """Per-rule assembly arrays, shared across time steps."""

    weights: np.ndarray   # (nq,)
    values: np.ndarray    # (nq, nd) reference shape values
    grads: np.ndarray     # (ne, nq, nd, dim) physical shape gradients
    points: np.ndarray    # (ne, nq, dim) physical quadrature points


class FunctionSpace:
    """Scalar Lagrange space of degree 1 or 2 on a simplicial mesh."""

    def __init__(self, mesh, degree):
        self.mesh = mesh
        self.degree = degree
        self.ref = ReferenceElement(mesh.dim, degree)
        dim = mesh.dim

        if degree == 1:
            self.element_dofs = mesh.elements
            self.dof_coords = mesh.nodes
            self.boundary_dofs = mesh.boundary_nodes
        else:
            edge_ids = {}
            coords = []
            eldofs = np.empty(
                (mesh.n_elements, self.ref.node_count), dtype=np.int64)
            eldofs[:, :dim + 1] = mesh.elements
            for e, el in enumerate(mesh.elements):
                for k, (a, b) in enumerate(_edges(dim)):
                    key = tuple(sorted((el[a], el[b])))
                    if key not in edge_ids:
                        edge_ids[key] = mesh.n_nodes + len(coords)
                        coords.append(
                            (mesh.nodes[key[0]] + mesh.nodes[key[1]]) / 2.0)
                    eldofs[e, dim + 1 + k] = edge_ids[key]
            self.element_dofs = eldofs
            self.dof_coords = np.vstack([mesh.nodes, np.array(coords)])
            bdofs = set(int(v) for v in mesh.boundary_nodes)
            for facet in mesh.boundary_facets:
                facet = [int(v) for v in facet]
                pairs = ([tuple(sorted(facet))] if dim == 2 else
                         [tuple(sorted(p)) for p in
                          ((facet[0], facet[1]), (facet[0], facet[2]),
                           (facet[1], facet[2]))])
                for key in pairs:
                    bdofs.add(edge_ids[key])
            self.boundary_dofs = np.array(sorted(bdofs), dtype=np.int64)

        self.n_dofs = self.dof_coords.shape[0]

        v = mesh.nodes[mesh.elements]                     # (ne, d+1, d)
        self.v0 = v[:, 0, :]
        self.jac = np.transpose(v[:, 1:, :] - v[:, :1, :], (0, 2, 1))
        self.absdet = np.abs(np.linalg.det(self.jac))
        self.inv_t = np.transpose(np.linalg.inv(self.jac), (0, 2, 1))
        self.measures = self.absdet / math.factorial(dim)
        self._quad_cache = {}

    def quad_data(self, exact_degree):
        if exact_degree not in self._quad_cache:
            rule = quadrature(self.mesh.dim, exact_degree)
            V = self.ref.values(rule.points)
            G = self.ref.gradients(rule.points)
            Gp = np.einsum("eij,qnj->eqni", self.inv_t, G)
            X = self.v0[:, None, :] + np.einsum(
                "eij,qj->eqi", self.jac, rule.points)
            self._quad_cache[exact_degree] = QuadData(
                weights=rule.weights, values=V, grads=Gp, points=X)
        return self._quad_cache[exact_degree]

    def evaluate(self, qd, dof_values):
        """Values and gradients of a coefficient vector at quadrature points.

        dof_values has shape (components, n_dofs); returns arrays of shape
        (ne, nq, components) and (ne, nq, components, dim).
        """
        Ue = dof_values[:, self.element_dofs]             # (c, ne, nd)
        vals = np.einsum("qn,cen->eqc", qd.values, Ue)
        grads = np.einsum("eqnd,cen->eqcd", qd.grads, Ue)
        return vals, grads
