"""Sparse assembly, constraint elimination, and the CG solver."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parabfem.sparse import (SparseError, apply_dirichlet,
                             assemble_from_triplets, cg_solve, from_arrays)


def test_triplet_assembly_sums_duplicates():
    A = assemble_from_triplets(3, [(0, 0, 1.0), (0, 0, 2.0), (1, 2, -1.0),
                                   (2, 1, -1.0), (1, 1, 4.0), (2, 2, 4.0)])
    dense = np.array([[3.0, 0.0, 0.0],
                      [0.0, 4.0, -1.0],
                      [0.0, -1.0, 4.0]])
    assert np.allclose(A.toarray(), dense)
    x = np.array([1.0, 2.0, 3.0])
    assert np.allclose(A.matvec(x), dense @ x)
    assert np.allclose(A @ x, dense @ x)
    assert np.allclose(A.diagonal(), [3.0, 4.0, 4.0])
    # CSR arrays are exposed and consistent
    assert A.row_offsets[0] == 0 and A.row_offsets[-1] == A.values.size


def test_from_arrays_validates_indices():
    with pytest.raises(SparseError):
        from_arrays(2, np.array([0, 2]), np.array([0, 0]), np.array([1.0, 1.0]))


def _random_spd(rng, n):
    B = rng.standard_normal((n, n))
    return B @ B.T + n * np.eye(n)


def test_dirichlet_elimination_matches_dense():
    rng = np.random.default_rng(7)
    n = 8
    dense = _random_spd(rng, n)
    A = assemble_from_triplets(
        n, [(i, j, dense[i, j]) for i in range(n) for j in range(n)])
    b = rng.standard_normal(n)
    constraints = {1: 2.5, 6: -0.5}

    A2, b2 = apply_dirichlet(A, b, constraints)
    dense2 = A2.toarray()
    # eliminated rows/columns are identity, and symmetry survives
    assert np.allclose(dense2, dense2.T)
    for i, v in constraints.items():
        assert np.allclose(dense2[i], np.eye(n)[i])
        assert b2[i] == pytest.approx(v)

    x = np.linalg.solve(dense2, b2)
    # the solve reproduces the constrained dense solution
    free = [i for i in range(n) if i not in constraints]
    xc = np.zeros(n)
    for i, v in constraints.items():
        xc[i] = v
    rhs_free = b[free] - dense[np.ix_(free, list(constraints))] @ np.array(
        [constraints[i] for i in constraints])
    xc[free] = np.linalg.solve(dense[np.ix_(free, free)], rhs_free)
    assert np.allclose(x, xc, atol=1e-10)


def test_dirichlet_rejects_bad_index():
    A = assemble_from_triplets(2, [(0, 0, 1.0), (1, 1, 1.0)])
    with pytest.raises(SparseError):
        apply_dirichlet(A, np.zeros(2), {5: 1.0})


@pytest.mark.property
@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 20))
def test_cg_matches_dense_solve(seed, n):
    rng = np.random.default_rng(seed)
    dense = _random_spd(rng, n)
    A = assemble_from_triplets(
        n, [(i, j, dense[i, j]) for i in range(n) for j in range(n)])
    b = rng.standard_normal(n)
    x, stats = cg_solve(A, b, tol=1e-12)
    assert stats.converged
    assert stats.iterations >= 1
    assert np.linalg.norm(dense @ x - b) <= 1e-11 * np.linalg.norm(b)
    assert stats.final_relative_residual <= 1e-12


def test_cg_zero_rhs():
    A = assemble_from_triplets(3, [(i, i, 2.0) for i in range(3)])
    x, stats = cg_solve(A, np.zeros(3))
    assert np.all(x == 0.0)
    assert stats.converged and stats.iterations == 0


def test_cg_reports_nonconvergence():
    rng = np.random.default_rng(0)
    dense = _random_spd(rng, 30)
    A = assemble_from_triplets(
        30, [(i, j, dense[i, j]) for i in range(30) for j in range(30)])
    b = rng.standard_normal(30)
    x, stats = cg_solve(A, b, tol=1e-14, max_iter=1)
    assert not stats.converged
    assert stats.iterations == 1
