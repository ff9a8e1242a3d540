"""PDE instances: coefficients, exact solutions, and manufactured forcing.

All closures are vectorized over points: positions have shape (n, dim),
solution values (n, components), solution gradients (n, components, dim).
The forcing that makes the chosen exact solution solve

    du/dt - div(kappa(u) grad u) = g(u, grad u, x, t) + f

is synthesized by central finite differences of the exact solution, so
no derivative algebra is transcribed by hand.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class FdStencil:
    """Step sizes for the finite-difference synthesis of derivatives."""

    space_step: float = 1e-4
    time_step: float = 1e-6


@dataclass(frozen=True)
class ProblemSpec:
    dim: int
    components: int
    kappa: Callable          # (n, c) values -> (n,) positive diffusivity
    source: Callable         # (u, grad_u, x, t) -> (n, c)
    exact: Callable          # (x, t) -> (n, c)
    forcing: Callable        # (x, t) -> (n, c)
    boundary_kind: str       # "homogeneous" | "exact"
    T: float
    domain_tag: str          # "square" | "disk" | "cube"


def exact_gradient(exact, x, t, stencil=FdStencil()):
    """Central-difference spatial gradient of exact, shape (n, c, dim)."""
    x = np.asarray(x, dtype=float)
    d = stencil.space_step
    cols = []
    for j in range(x.shape[1]):
        e = np.zeros(x.shape[1])
        e[j] = d
        cols.append((exact(x + e, t) - exact(x - e, t)) / (2.0 * d))
    return np.stack(cols, axis=-1)


def manufactured_forcing(exact, kappa, source, stencil=FdStencil()):
    """Forcing f(x, t) induced by the manufactured-solution identity.

    f = du/dt - grad(kappa(u)) . grad(u) - kappa(u) lap(u) - g, with the
    time derivative, gradients, Laplacian, and the chain-rule factor of
    kappa all taken by second-order central differences.
    """

    def forcing(x, t):
        x = np.asarray(x, dtype=float)
        d = stencil.space_step
        dt = stencil.time_step
        u = exact(x, t)
        dudt = (exact(x, t + dt) - exact(x, t - dt)) / (2.0 * dt)
        grad_cols = []
        lap = np.zeros_like(u)
        grad_kappa_dot_grad = np.zeros_like(u)
        for j in range(x.shape[1]):
            e = np.zeros(x.shape[1])
            e[j] = d
            up = exact(x + e, t)
            um = exact(x - e, t)
            du_j = (up - um) / (2.0 * d)
            grad_cols.append(du_j)
            lap += (up - 2.0 * u + um) / d ** 2
            dk_j = (kappa(up) - kappa(um)) / (2.0 * d)
            grad_kappa_dot_grad += dk_j[:, None] * du_j
        grad = np.stack(grad_cols, axis=-1)
        kap = kappa(u)
        div_term = grad_kappa_dot_grad + kap[:, None] * lap
        return dudt - div_term - source(u, grad, x, t)

    return forcing


def _const_kappa(u):
    return np.ones(u.shape[0])


def example_1():
    """Scalar problem on the unit square with constant diffusivity, a
    quartic-gradient source, and homogeneous Dirichlet data."""

    def exact(x, t):
        x = np.asarray(x, dtype=float)
        s = 1.0 / np.cosh(x[:, 0] + x[:, 1] - t)
        u = 10.0 * x[:, 0] * (1.0 - x[:, 0]) * x[:, 1] * (1.0 - x[:, 1]) * s ** 2
        return u[:, None]

    def source(u, grad, x, t):
        grad_sq = np.sum(grad[:, 0, :] ** 2, axis=1)
        return (grad_sq ** 2 / (1.0 + u[:, 0]))[:, None]

    return ProblemSpec(
        dim=2, components=1, kappa=_const_kappa, source=source, exact=exact,
        forcing=manufactured_forcing(exact, _const_kappa, source),
        boundary_kind="homogeneous", T=1.0, domain_tag="square")


def example_2():
    """Burgers system on the unit disk with inhomogeneous Dirichlet data."""

    def exact(x, t):
        x = np.asarray(x, dtype=float)
        s = x[:, 0] + x[:, 1] - t
        c = np.cosh(s)
        return np.column_stack([1.0 / c ** 2, c ** 2])

    def source(u, grad, x, t):
        # advection u . grad u moved to the right-hand side of the
        # generic parabolic form, hence the minus sign
        return -np.einsum("nj,nij->ni", u, grad)

    return ProblemSpec(
        dim=2, components=2, kappa=_const_kappa, source=source, exact=exact,
        forcing=manufactured_forcing(exact, _const_kappa, source),
        boundary_kind="exact", T=1.0, domain_tag="disk")


def example_3():
    """Scalar problem on the unit cube with solution-dependent diffusivity."""

    def exact(x, t):
        x = np.asarray(x, dtype=float)
        poly = 100.0
        for j in range(3):
            poly = poly * x[:, j] * (1.0 - x[:, j])
        u = poly * np.sin(x[:, 0] + 2.0 * x[:, 1] - x[:, 2]) * t * np.exp(-t)
        return u[:, None]

    def kappa(u):
        return 1.0 + np.sin(u[:, 0]) ** 2

    def source(u, grad, x, t):
        grad_sq = np.sum(grad[:, 0, :] ** 2, axis=1)
        return (grad_sq ** 2 / (1.0 + u[:, 0]))[:, None]

    return ProblemSpec(
        dim=3, components=1, kappa=kappa, source=source, exact=exact,
        forcing=manufactured_forcing(exact, kappa, source),
        boundary_kind="homogeneous", T=1.0, domain_tag="cube")


EXAMPLES = {1: example_1, 2: example_2, 3: example_3}
