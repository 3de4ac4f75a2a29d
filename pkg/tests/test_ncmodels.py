import numpy as np
import pytest

from aweno.awenocorr import NEW, OLD, SchemeConfig, semidiscrete_rhs
from aweno.grid import FREE, PERIODIC, WALL, BoundarySpec, Grid1D, Grid2D
from aweno.models import burgers_model, euler2d_model
from aweno.ncmodels import (Multifluid, ScalarSourceModel, cosine_bump, cosine_bump_slope,
                            multifluid2d_model, scalar_source_model)
from aweno.timeint import TimeController, simulate

from conftest import padded


def test_topography():
    assert cosine_bump(np.array([2.0]))[0] == -1.0
    assert cosine_bump(np.array([1.0]))[0] == 0.0
    # continuous at the ends of the support
    assert abs(cosine_bump(np.array([1.5 + 1e-12]))[0]) < 1e-10
    assert abs(cosine_bump(np.array([2.5 - 1e-12]))[0]) < 1e-10
    x = np.linspace(1.6, 2.4, 9)
    h = 1e-6
    fd = (cosine_bump(x + h) - cosine_bump(x - h)) / (2 * h)
    np.testing.assert_allclose(cosine_bump_slope(x), fd, rtol=1e-8, atol=1e-8)


def test_water_and_explosive_parameters():
    Gamma, Pi = Multifluid.parameters(7.15, 3309.0)
    assert Gamma == pytest.approx(1 / 6.15, rel=1e-15)
    assert Pi == pytest.approx(7.15 * 3309.0 / 6.15, rel=1e-15)
    Gamma, Pi = Multifluid.parameters(2.0, 0.0)
    assert Gamma == 1.0 and Pi == 0.0
    gamma, pi_inf = Multifluid.eos(*Multifluid.parameters(7.15, 3309.0))
    assert gamma == pytest.approx(7.15, rel=1e-14) and pi_inf == pytest.approx(3309.0, rel=1e-14)


def test_multifluid_pressure_round_trip(rng):
    m = multifluid2d_model()
    p = rng.uniform(0.1, 10, 20)
    U = m.from_primitive_eos(rng.uniform(0.1, 2, 20), rng.normal(size=20), rng.normal(size=20),
                             p, rng.uniform(1.1, 7, 20), rng.uniform(0, 3000, 20))
    np.testing.assert_allclose(m.pressure(U), p, rtol=1e-10)
    np.testing.assert_allclose(m.conservative(m.primitive(U)), U, rtol=1e-13)


def test_explosion_initial_regions():
    from aweno.models import get_problem
    prob = get_problem("multifluid-explosion")
    m = prob.model()
    pts = (np.array([5.0, 5.0, 1.0]), np.array([2.0, 5.0, 1.0]))  # bubble, air, water
    V = m.primitive(prob.initial(*pts))
    np.testing.assert_allclose(V[0], [1.27, 0.02, 1.0], rtol=1e-14)
    np.testing.assert_allclose(V[3], [8290.0, 1.0, 1.0], rtol=1e-12)
    np.testing.assert_allclose(V[4], [1.0, 2.5, 1 / 6.15], rtol=1e-14)
    assert prob.t_final == 0.02
    assert prob.boundary.sides == ((FREE, FREE), (WALL, FREE))


def _contact_setup(u0, n=(8, 24)):
    m = multifluid2d_model()
    grid = Grid2D(Grid1D(0, 1, n[0]), Grid1D(0, 1, n[1]))
    X, Y = np.meshgrid(grid.x.centers, grid.y.centers, indexing="ij")
    water = (Y > 0.3) & (Y < 0.7)
    rho = np.where(water, 1.0, 0.05)
    gamma = np.where(water, 7.15, 1.4)
    pinf = np.where(water, 3309.0, 0.0)
    U = m.from_primitive_eos(rho, 0 * X, u0 + 0 * X, 1.0 + 0 * X, gamma, pinf)
    return m, grid, U


@pytest.mark.parametrize("variant", [OLD, NEW])
def test_moving_interface_keeps_pressure_for_one_step(variant):
    m, grid, U0 = _contact_setup(0.5)
    bc = BoundarySpec.uniform(PERIODIC, 2)
    cfg = SchemeConfig(variant=variant, characteristic=True, positivity=True)
    r = simulate(U0, grid, bc, m, cfg, TimeController(1.0), max_steps=1)
    V = m.primitive(r.U)
    assert np.max(np.abs(V[3] - 1.0)) <= 1e-10
    assert np.max(np.abs(V[2] - 0.5)) <= 1e-10
    assert np.max(np.abs(V[1])) <= 1e-10


@pytest.mark.parametrize("variant", [OLD, NEW])
def test_rest_state_momentum_and_pressure_balance(variant):
    m, grid, U0 = _contact_setup(0.0)
    bc = BoundarySpec(((FREE, FREE), (WALL, FREE)))
    t = semidiscrete_rhs(padded(U0, bc, m, grid), grid, bc, m,
                         SchemeConfig(variant=variant, characteristic=True))
    # no momentum is created; the nonconservative terms vanish with u = v = 0
    assert np.max(np.abs(t[1:3])) <= 1e-12 * 3309


def test_multifluid_degenerates_to_ideal_gas(rng):
    mf = multifluid2d_model()
    eu = euler2d_model(interp="primitive")
    grid = Grid2D(Grid1D(0, 1, 10), Grid1D(0, 1, 12))
    shape = (10, 12)
    V = np.stack([rng.uniform(0.8, 1.2, shape), 0.1 * rng.normal(size=shape),
                  0.1 * rng.normal(size=shape), rng.uniform(0.8, 1.2, shape)])
    Ue = eu.conservative(V)
    Um = mf.from_primitive_eos(V[0], V[1], V[2], V[3], 1.4, 0.0)
    bc = BoundarySpec.uniform(PERIODIC, 2)
    for variant in (OLD, NEW):
        cfg = SchemeConfig(variant=variant, characteristic=True)
        te = semidiscrete_rhs(padded(Ue, bc, eu, grid), grid, bc, eu, cfg)
        tm = semidiscrete_rhs(padded(Um, bc, mf, grid), grid, bc, mf, cfg)
        np.testing.assert_allclose(tm[:4], te, rtol=0, atol=1e-12 * np.abs(te).max())
        assert np.max(np.abs(tm[4:])) <= 1e-12


def test_scalar_model_without_topography_is_burgers():
    grid = Grid1D(0, 1, 24)
    U = padded((0.25 + 0.5 * np.sin(2 * np.pi * grid.centers))[None],
               BoundarySpec.uniform(PERIODIC))
    bc = BoundarySpec.uniform(PERIODIC)
    for variant in (OLD, NEW):
        for char in (False, True):
            cfg = SchemeConfig(variant=variant, characteristic=char)
            a = semidiscrete_rhs(U, grid, bc, ScalarSourceModel(None), cfg)
            b = semidiscrete_rhs(U, grid, bc, burgers_model(), cfg)
            np.testing.assert_array_equal(a, b)


def test_steady_state_helper():
    m = scalar_source_model()
    x = np.linspace(0, 4, 41)
    u = m.steady_state(x, 2.0)
    np.testing.assert_allclose(u[0] + m.z(x), 2.0, rtol=0, atol=1e-15)
