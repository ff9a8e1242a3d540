"""L2 and H1 error norms against the exact solution, and observed rates."""

from dataclasses import dataclass
import math

import numpy as np

from .problem import FdStencil, exact_gradient


@dataclass(frozen=True)
class ErrorPair:
    l2: float
    h1: float   # full norm: sqrt(l2^2 + |grad error|_L2^2)


def error_norms(spec, space, state, t, quad_degree=None,
                stencil=FdStencil()):
    """Element-wise quadrature of |U_h - u| and |grad(U_h - u)| at time t.

    Exact-solution gradients come from the same finite-difference stencil
    used for the manufactured forcing.  Component errors are summed.
    """
    if quad_degree is None:
        quad_degree = 2 * space.degree + 4
    qd = space.quad_data(quad_degree)
    U = state.components_view(spec.components)
    vals, grads = space.evaluate(qd, U)

    ne, nq, c = vals.shape
    x = qd.points.reshape(ne * nq, -1)
    uex = spec.exact(x, t).reshape(ne, nq, c)
    gex = exact_gradient(spec.exact, x, t, stencil).reshape(
        ne, nq, c, spec.dim)

    det = space.absdet
    dv = vals - uex
    dg = grads - gex
    l2_sq = float(np.einsum("q,eqc,eqc,e->", qd.weights, dv, dv, det))
    semi_sq = float(np.einsum("q,eqcd,eqcd,e->", qd.weights, dg, dg, det))
    return ErrorPair(l2=math.sqrt(l2_sq), h1=math.sqrt(l2_sq + semi_sq))


def observed_rate(coarse, fine):
    """log-ratio convergence rate from (h, error) pairs."""
    h1, e1 = coarse
    h2, e2 = fine
    if e1 <= 0.0 or e2 <= 0.0:
        raise ValueError("observed rate undefined for zero error")
    if not h1 > h2:
        raise ValueError("coarse mesh size must exceed fine mesh size")
    return math.log(e1 / e2) / math.log(h1 / h2)
