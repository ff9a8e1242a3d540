"""Linearized backward-Euler time stepping.

Scheme A freezes the diffusivity and the source at the previous time
level, so each step solves one SPD linear system per solution component:

    (1/tau) M U_next + K[kappa(U)] U_next = (1/tau) M U + load(g + f).

Scheme B additionally treats the u-derivative of the source implicitly
through a weighted mass matrix; the gradient-derivative part stays
explicit so the matrix remains symmetric (see module notes in README).
"""

from dataclasses import dataclass, replace

import numpy as np

from .problem import FdStencil, exact_gradient
from .sparse import apply_dirichlet, cg_solve, from_arrays


class EllipticityError(RuntimeError):
    """Diffusivity dropped to ~0 at a quadrature point."""


class SolverError(RuntimeError):
    """The per-step linear solve failed to converge."""


@dataclass(frozen=True)
class DiscreteState:
    step_index: int
    time: float
    dof_values: np.ndarray   # (components * n_dofs,), component-major
    tau: float
    monitor_linf: float
    monitor_w1inf: float

    def components_view(self, components):
        return self.dof_values.reshape(components, -1)


@dataclass(frozen=True)
class StepSystem:
    matrix: object           # SparseMatrix, constraints applied
    rhs: np.ndarray          # (components, n_dofs), constraints applied


_G1_STEP = 1e-6
_KAPPA_FLOOR = 1e-8


def _assembly_degree(degree):
    return 2 * degree + 2


def _boundary_values(spec, space, t):
    bd = space.boundary_dofs
    if spec.boundary_kind == "homogeneous":
        return bd, np.zeros((spec.components, bd.size))
    vals = spec.exact(space.dof_coords[bd], t)
    return bd, vals.T


def _monitors(space, qd, U):
    vals, grads = space.evaluate(qd, U)
    linf = float(np.max(np.abs(vals))) if vals.size else 0.0
    gnorm = np.sqrt(np.sum(grads ** 2, axis=3))
    w1inf = float(np.max(gnorm)) if gnorm.size else 0.0
    return linf, w1inf


def _check_ellipticity(kap, qd, step_index):
    if np.min(kap) <= _KAPPA_FLOOR:
        e, q = np.unravel_index(int(np.argmin(kap)), kap.shape)
        point = qd.points[e, q]
        raise EllipticityError(
            f"diffusivity {kap[e, q]:.3e} <= {_KAPPA_FLOOR:g} at step "
            f"{step_index}, point {point}")


def _scatter_matrix(space, Ae):
    ed = space.element_dofs
    nd = ed.shape[1]
    rows = np.repeat(ed[:, :, None], nd, axis=2).ravel()
    cols = np.repeat(ed[:, None, :], nd, axis=1).ravel()
    return from_arrays(space.n_dofs, rows, cols, Ae.ravel())


def _scatter_vector(space, be):
    # be: (c, ne, nd)
    out = np.zeros((be.shape[0], space.n_dofs))
    flat = space.element_dofs.ravel()
    for c in range(be.shape[0]):
        np.add.at(out[c], flat, be[c].ravel())
    return out


def _flat_eval(spec, qd, vals, grads, t):
    """Source and forcing at all quadrature points; returns (ne, nq, c)."""
    ne, nq, c = vals.shape
    x = qd.points.reshape(ne * nq, -1)
    u = vals.reshape(ne * nq, c)
    gu = grads.reshape(ne * nq, c, -1)
    g = spec.source(u, gu, x, t).reshape(ne, nq, c)
    f = spec.forcing(x, t).reshape(ne, nq, c)
    return g, f, u, gu, x


def initialize(spec, space, mode="ritz"):
    """Initial state from nodal interpolation or the Ritz projection."""
    interp = spec.exact(space.dof_coords, 0.0).T   # (c, ndof)
    if mode == "interpolation":
        U = interp
    elif mode == "ritz":
        qd = space.quad_data(_assembly_degree(space.degree))
        vals, _ = space.evaluate(qd, interp)
        kap = spec.kappa(vals.reshape(-1, spec.components)).reshape(
            vals.shape[0], vals.shape[1])
        _check_ellipticity(kap, qd, 0)
        Ke = np.einsum("q,eq,eqid,eqjd->eij", qd.weights, kap,
                       qd.grads, qd.grads) * space.absdet[:, None, None]
        K = _scatter_matrix(space, Ke)
        gex = exact_gradient(spec.exact, qd.points.reshape(-1, spec.dim), 0.0)
        gex = gex.reshape(vals.shape[0], vals.shape[1], spec.components, spec.dim)
        be = np.einsum("q,eq,eqcd,eqid->cei", qd.weights, kap, gex,
                       qd.grads) * space.absdet[None, :, None]
        b = _scatter_vector(space, be)
        bd, bvals = _boundary_values(spec, space, 0.0)
        U = np.empty_like(interp)
        for c in range(spec.components):
            Ac, bc = apply_dirichlet(
                K, b[c], dict(zip(bd.tolist(), bvals[c].tolist())))
            x, stats = cg_solve(Ac, bc, tol=1e-12)
            if not stats.converged:
                raise SolverError("Ritz initialization solve did not converge")
            U[c] = x
            U[c, bd] = bvals[c]
    else:
        raise ValueError(f"unknown init mode {mode!r}")
    qd = space.quad_data(_assembly_degree(space.degree))
    linf, w1inf = _monitors(space, qd, U)
    return DiscreteState(step_index=0, time=0.0, dof_values=U.ravel().copy(),
                         tau=0.0, monitor_linf=linf, monitor_w1inf=w1inf)


def _assemble_common(spec, space, state, t_next, g_time):
    tau = t_next - state.time
    qd = space.quad_data(_assembly_degree(space.degree))
    U = state.components_view(spec.components)
    vals, grads = space.evaluate(qd, U)
    kap = spec.kappa(vals.reshape(-1, spec.components)).reshape(
        vals.shape[0], vals.shape[1])
    _check_ellipticity(kap, qd, state.step_index)
    # explicit time argument of the data terms g and f; the backward-Euler
    # target time t_{n+1} is the default, t_n is offered for sensitivity runs
    t_data = t_next if g_time == "n+1" else state.time
    g, f, u_flat, gu_flat, x_flat = _flat_eval(spec, qd, vals, grads, t_data)

    det = space.absdet
    mass0 = np.einsum("q,qi,qj->ij", qd.weights, qd.values, qd.values)
    Me = det[:, None, None] * mass0
    Ke = np.einsum("q,eq,eqid,eqjd->eij", qd.weights, kap,
                   qd.grads, qd.grads) * det[:, None, None]
    # (1/tau) M U^n via the same quadrature
    mass_rhs = np.einsum("q,eqc,qi->cei", qd.weights, vals,
                         qd.values) * det[None, :, None] / tau
    load = np.einsum("q,eqc,qi->cei", qd.weights, g + f,
                     qd.values) * det[None, :, None]
    return tau, qd, U, vals, grads, g, Me, Ke, mass_rhs, load


def _eliminate(spec, space, A, b, t_next):
    bd, bvals = _boundary_values(spec, space, t_next)
    rhs = np.empty_like(b)
    matrix = None
    for c in range(spec.components):
        matrix, rhs[c] = apply_dirichlet(
            A, b[c], dict(zip(bd.tolist(), bvals[c].tolist())))
    return StepSystem(matrix=matrix, rhs=rhs), bd, bvals


def assemble_step_A(spec, space, state, t_next, g_time="n+1"):
    """One backward-Euler step system with lagged coefficients."""
    tau, qd, U, vals, grads, g, Me, Ke, mass_rhs, load = _assemble_common(
        spec, space, state, t_next, g_time)
    A = _scatter_matrix(space, Me / tau + Ke)
    b = _scatter_vector(space, mass_rhs + load)
    system, _, _ = _eliminate(spec, space, A, b, t_next)
    return system


def assemble_step_B(spec, space, state, t_next, g_time="n+1"):
    """Taylor-linearized source variant (scalar problems).

    The source is expanded about the previous state; its u-derivative
    enters the matrix as a weighted mass term, while the gradient
    derivative is kept explicit at the old state so the system stays
    symmetric.  The explicit gradient term cancels exactly against its
    expansion-point adjustment, leaving
        matrix -= Mass[g1],   rhs += load[g0 - g1 U^n].
    """
    if spec.components != 1:
        raise ValueError("scheme B is implemented for scalar problems only")
    tau, qd, U, vals, grads, g, Me, Ke, mass_rhs, load = _assemble_common(
        spec, space, state, t_next, g_time)
    t_g = t_next if g_time == "n+1" else state.time

    ne, nq, _ = vals.shape
    x = qd.points.reshape(ne * nq, -1)
    u = vals.reshape(ne * nq, 1)
    gu = grads.reshape(ne * nq, 1, -1)
    dstep = np.full_like(u, _G1_STEP)
    g1 = ((spec.source(u + dstep, gu, x, t_g)
           - spec.source(u - dstep, gu, x, t_g))
          / (2.0 * _G1_STEP)).reshape(ne, nq)

    det = space.absdet
    Mg1 = np.einsum("q,eq,qi,qj->eij", qd.weights, g1,
                    qd.values, qd.values) * det[:, None, None]
    adj = np.einsum("q,eq,eqc,qi->cei", qd.weights, g1, vals,
                    qd.values) * det[None, :, None]
    A = _scatter_matrix(space, Me / tau + Ke - Mg1)
    b = _scatter_vector(space, mass_rhs + load - adj)
    system, _, _ = _eliminate(spec, space, A, b, t_next)
    return system


def advance(spec, space, state, scheme="A", tol=1e-10, max_iter=None,
            g_time="n+1"):
    """Advance one time step; returns the new state and per-component stats."""
    t_next = (state.step_index + 1) * state.tau
    assemble = assemble_step_A if scheme == "A" else assemble_step_B
    system = assemble(spec, space, state, t_next, g_time=g_time)
    bd, bvals = _boundary_values(spec, space, t_next)

    U = np.empty((spec.components, space.n_dofs))
    stats_list = []
    for c in range(spec.components):
        x, stats = cg_solve(system.matrix, system.rhs[c],
                            tol=tol, max_iter=max_iter)
        if not stats.converged:
            hint = ("; matrix may have lost positive definiteness, "
                    "try a smaller tau" if scheme == "B" else "")
            raise SolverError(
                f"CG failed at step {state.step_index + 1} "
                f"(component {c}, residual {stats.final_relative_residual:.3e})"
                + hint)
        U[c] = x
        U[c, bd] = bvals[c]
        stats_list.append(stats)

    qd = space.quad_data(_assembly_degree(space.degree))
    linf, w1inf = _monitors(space, qd, U)
    return DiscreteState(
        step_index=state.step_index + 1, time=t_next,
        dof_values=U.ravel().copy(), tau=state.tau,
        monitor_linf=linf, monitor_w1inf=w1inf), stats_list


def with_tau(state, tau):
    """A copy of the state carrying the time-step size used by advance."""
    return replace(state, tau=tau)
