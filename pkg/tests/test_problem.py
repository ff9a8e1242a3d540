"""Problem instances and the finite-difference forcing synthesis."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from parabfem.problem import (EXAMPLES, FdStencil, ProblemSpec,
                              exact_gradient, example_1, example_2,
                              example_3, manufactured_forcing)

# independently computed point values of the exact solutions
EX1_CENTER_T0 = 0.2624839635087663          # 0.625 / cosh(1)^2
EX2_POINT_T0 = (0.9900662908474399,         # 1 / cosh(0.1)^2 at (0.3, -0.2)
                1.0100333778095378)         # cosh(0.1)^2
EX3_CENTER_T1 = 0.48368730570798785         # 100/64 * sin(1) * e^-1


def test_example_1_point_value():
    spec = example_1()
    u = spec.exact(np.array([[0.5, 0.5]]), 0.0)
    assert u.shape == (1, 1)
    assert u[0, 0] == pytest.approx(EX1_CENTER_T0, rel=1e-12)
    # homogeneous Dirichlet data on the square boundary
    edge = np.array([[0.0, 0.3], [1.0, 0.7], [0.4, 0.0], [0.6, 1.0]])
    assert np.allclose(spec.exact(edge, 0.37), 0.0)


def test_example_2_point_value():
    spec = example_2()
    u = spec.exact(np.array([[0.3, -0.2]]), 0.0)
    assert u.shape == (1, 2)
    assert u[0, 0] == pytest.approx(EX2_POINT_T0[0], rel=1e-12)
    assert u[0, 1] == pytest.approx(EX2_POINT_T0[1], rel=1e-12)
    assert spec.components == 2
    assert spec.boundary_kind == "exact"


def test_example_3_point_value():
    spec = example_3()
    x = np.array([[0.5, 0.5, 0.5]])
    assert spec.exact(x, 0.0)[0, 0] == 0.0   # zero initial condition
    assert spec.exact(x, 1.0)[0, 0] == pytest.approx(EX3_CENTER_T1, rel=1e-12)
    # diffusivity stays inside [1, 2]
    u = np.linspace(-50.0, 50.0, 101)[:, None]
    k = spec.kappa(u)
    assert np.all(k >= 1.0) and np.all(k <= 2.0)


def test_exact_gradient_matches_analytic():
    exact = lambda x, t: np.column_stack([
        np.sin(x[:, 0]) * np.cos(x[:, 1]),
        x[:, 0] ** 2 * x[:, 1]])
    x = np.array([[0.3, 0.8], [1.1, -0.4]])
    g = exact_gradient(exact, x, 0.0)
    expect = np.empty((2, 2, 2))
    expect[:, 0, 0] = np.cos(x[:, 0]) * np.cos(x[:, 1])
    expect[:, 0, 1] = -np.sin(x[:, 0]) * np.sin(x[:, 1])
    expect[:, 1, 0] = 2.0 * x[:, 0] * x[:, 1]
    expect[:, 1, 1] = x[:, 0] ** 2
    assert np.allclose(g, expect, atol=1e-8)


def test_forcing_matches_analytic_heat_solution():
    """For u = sin(pi x) sin(pi y) e^-t, kappa = 1, g = 0 the forcing is
    (2 pi^2 - 1) u; the synthesized forcing must agree."""
    exact = lambda x, t: (np.sin(np.pi * x[:, 0]) * np.sin(np.pi * x[:, 1])
                          * math.exp(-t))[:, None]
    kappa = lambda u: np.ones(u.shape[0])
    source = lambda u, g, x, t: np.zeros_like(u)
    forcing = manufactured_forcing(exact, kappa, source)
    rng = np.random.default_rng(3)
    x = rng.random((40, 2))
    f = forcing(x, 0.35)
    assert np.allclose(f, (2.0 * np.pi ** 2 - 1.0) * exact(x, 0.35),
                       rtol=1e-6, atol=1e-8)


def test_forcing_sees_solution_dependent_diffusivity():
    """With kappa(u) = 1 + u^2 and u = x the identity gives
    f = -(d/dx kappa(u)) du/dx = -2x on (0,1)^2 x {g = 0}."""
    exact = lambda x, t: x[:, :1].copy()
    kappa = lambda u: 1.0 + u[:, 0] ** 2
    source = lambda u, g, x, t: np.zeros_like(u)
    forcing = manufactured_forcing(exact, kappa, source)
    x = np.array([[0.2, 0.9], [0.7, 0.1]])
    assert np.allclose(forcing(x, 0.0), -2.0 * x[:, :1], atol=1e-6)


@pytest.mark.parametrize("key", sorted(EXAMPLES))
def test_examples_satisfy_their_pde(key):
    """Residual check with an independent, coarser stencil: the exact
    solution must satisfy du/dt - div(kappa grad u) - g - f = 0."""
    spec = EXAMPLES[key]()
    rng = np.random.default_rng(key)
    n = 50
    if spec.domain_tag == "disk":
        r = 0.7 * np.sqrt(rng.random(n))
        a = 2.0 * np.pi * rng.random(n)
        x = np.column_stack([r * np.cos(a), r * np.sin(a)])
    else:
        x = 0.2 + 0.6 * rng.random((n, spec.dim))
    t = 0.4
    st2 = FdStencil(space_step=3e-4, time_step=3e-6)
    check = manufactured_forcing(spec.exact, spec.kappa, spec.source,
                                 stencil=st2)
    residual = check(x, t) - spec.forcing(x, t)
    scale = np.max(np.abs(spec.forcing(x, t))) + 1.0
    assert np.max(np.abs(residual)) <= 1e-5 * scale


@pytest.mark.property
@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_example_shapes_are_consistent(seed):
    rng = np.random.default_rng(seed)
    for key, build in EXAMPLES.items():
        spec = build()
        n = 7
        x = 0.1 + 0.5 * rng.random((n, spec.dim))
        u = spec.exact(x, 0.3)
        assert u.shape == (n, spec.components)
        g = exact_gradient(spec.exact, x, 0.3)
        assert g.shape == (n, spec.components, spec.dim)
        assert spec.kappa(u).shape == (n,)
        assert np.all(spec.kappa(u) > 0.0)
        assert spec.source(u, g, x, 0.3).shape == (n, spec.components)
        assert spec.forcing(x, 0.3).shape == (n, spec.components)
