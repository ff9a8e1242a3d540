"""Compressed-row matrices, Dirichlet elimination, and Jacobi-CG.

Storage and matvec are delegated to scipy's CSR format; the CG loop is
hand-rolled so iteration counts, the Jacobi preconditioner, and the
a-posteriori true-residual check match the solver contract exactly.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp


class SparseError(ValueError):
    """Out-of-range index in sparse assembly."""


@dataclass(frozen=True)
class SolveStats:
    iterations: int
    final_relative_residual: float
    converged: bool


class SparseMatrix:
    """Square CSR matrix with duplicate-summing assembly."""

    def __init__(self, csr):
        csr = csr.tocsr()
        csr.sum_duplicates()
        csr.sort_indices()
        self._csr = csr

    @property
    def n(self):
        return self._csr.shape[0]

    @property
    def row_offsets(self):
        return self._csr.indptr

    @property
    def column_indices(self):
        return self._csr.indices

    @property
    def values(self):
        return self._csr.data

    def matvec(self, x):
        return self._csr @ np.asarray(x, dtype=float)

    def __matmul__(self, x):
        return self.matvec(x)

    def diagonal(self):
        return self._csr.diagonal()

    def toarray(self):
        return self._csr.toarray()


def from_arrays(n, rows, cols, values):
    """Fast assembly path from index/value arrays (duplicates summed)."""
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    values = np.asarray(values, dtype=float)
    if rows.size and (rows.min() < 0 or rows.max() >= n
                      or cols.min() < 0 or cols.max() >= n):
        raise SparseError("triplet index out of range")
    return SparseMatrix(sp.coo_matrix((values, (rows, cols)), shape=(n, n)))


def assemble_from_triplets(n, triplets):
    """Build an n x n matrix from (row, col, value) triplets."""
    triplets = list(triplets)
    if not triplets:
        return from_arrays(n, [], [], [])
    rows, cols, values = zip(*triplets)
    return from_arrays(n, rows, cols, values)


def apply_dirichlet(matrix, rhs, constraints):
    """Symmetric elimination of Dirichlet constraints.

    constraints maps dof index -> prescribed value.  Constrained rows and
    columns are zeroed, the diagonal set to 1, and the known values moved
    to the right-hand side, so the system stays SPD.
    """
    n = matrix.n
    idx = np.fromiter(sorted(constraints), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise SparseError("constraint index out of range")
    vals = np.array([constraints[int(i)] for i in idx], dtype=float)

    rhs = np.asarray(rhs, dtype=float).copy()
    if idx.size:
        rhs -= matrix._csr[:, idx] @ vals
    keep_mask = np.ones(n, dtype=bool)
    keep_mask[idx] = False
    coo = matrix._csr.tocoo()
    keep = keep_mask[coo.row] & keep_mask[coo.col]
    rows = np.concatenate([coo.row[keep], idx])
    cols = np.concatenate([coo.col[keep], idx])
    data = np.concatenate([coo.data[keep], np.ones(idx.size)])
    rhs[idx] = vals
    return from_arrays(n, rows, cols, data), rhs


def cg_solve(matrix, rhs, tol=1e-10, max_iter=None):
    """Jacobi-preconditioned conjugate gradients.

    Convergence means the recomputed true residual satisfies
    ||A x - b|| <= tol ||b||; the recursive residual alone is not trusted.
    """
    b = np.asarray(rhs, dtype=float)
    n = matrix.n
    if max_iter is None:
        max_iter = 10 * n
    norm_b = np.linalg.norm(b)
    if norm_b == 0.0:
        return np.zeros(n), SolveStats(0, 0.0, True)

    diag = matrix.diagonal()
    inv_diag = np.where(diag > 0.0, 1.0 / np.where(diag > 0.0, diag, 1.0), 1.0)

    x = np.zeros(n)
    r = b.copy()
    z = inv_diag * r
    p = z.copy()
    rz = r @ z
    it = 0
    while it < max_iter:
        Ap = matrix @ p
        pAp = p @ Ap
        if pAp <= 0.0:
            break  # loss of positive definiteness
        alpha = rz / pAp
        x += alpha * p
        r -= alpha * Ap
        it += 1
        if np.linalg.norm(r) <= tol * norm_b:
            true_res = np.linalg.norm(b - matrix @ x)
            if true_res <= tol * norm_b:
                return x, SolveStats(it, true_res / norm_b, True)
            r = b - matrix @ x
        z = inv_diag * r
        rz_new = r @ z
        p = z + (rz_new / rz) * p
        rz = rz_new
    true_res = np.linalg.norm(b - matrix @ x) / norm_b
    return x, SolveStats(it, true_res, true_res <= tol)
