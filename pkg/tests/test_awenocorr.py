from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aweno.awenocorr import (NEW, OLD, CorrectionTerms, SchemeConfig, assemble_awenoflux,
                             conservative_line_flux, correction_new, correction_old,
                             evaluate_rhs, semidiscrete_rhs)
from aweno.errors import ConfigurationError
from aweno.grid import GHOST, PERIODIC, BoundarySpec, Grid1D, Grid2D
from aweno.models import burgers_model, euler1d_model, euler2d_model

from conftest import padded

PER = BoundarySpec.uniform(PERIODIC)


def _points(x0, dx):
    return x0 + dx * np.arange(-2.5, 3.0)  # x_{j-2} .. x_{j+3} about x_{j+1/2} = x0


def _faces(x0, dx):
    return x0 + dx * np.arange(-2.0, 3.0)  # x_{j-3/2} .. x_{j+5/2}


def test_constant_fluxes_give_zero_corrections():
    old = correction_old(np.full(6, 3.0), 0.1)
    new = correction_new(np.full(5, 3.0), 0.1)
    assert old.d2[0] == 0.0 and old.d4[0] == 0.0
    assert new.d2[0] == 0.0 and new.d4[0] == 0.0


def test_quadratic_examples():
    assert correction_old(_points(0.0, 1.0) ** 2, 1.0).d2[0] == 2.0
    assert correction_old(_points(0.0, 1.0) ** 2, 1.0).d4[0] == 0.0
    assert correction_new(_faces(0.0, 1.0) ** 2, 1.0).d2[0] == 2.0
    assert correction_new(_faces(0.0, 1.0) ** 2, 1.0).d4[0] == 0.0


def test_quartic_examples():
    assert correction_old(_points(0.0, 1.0) ** 4, 1.0).d4[0] == pytest.approx(24.0, rel=1e-14)
    new = correction_new(_faces(0.0, 1.0) ** 4, 1.0)
    assert new.d4[0] == pytest.approx(24.0, rel=1e-14)
    assert new.d2[0] == pytest.approx(0.0, abs=1e-13)


def _d2_d4(k, x0):
    d2 = k * (k - 1) * x0 ** (k - 2) if k >= 2 else 0.0
    d4 = k * (k - 1) * (k - 2) * (k - 3) * x0 ** (k - 4) if k >= 4 else 0.0
    return d2, d4


@pytest.mark.parametrize("k", range(6))
@pytest.mark.parametrize("x0,dx", [(0.3, 0.1), (-1.7, 0.05), (2.0, 0.25)])
def test_degree_exactness(k, x0, dx):
    d2, d4 = _d2_d4(k, x0)
    old = correction_old(_points(x0, dx) ** k, dx)
    new = correction_new(_faces(x0, dx) ** k, dx)
    scale2 = max(1.0, abs(d2))
    scale4 = max(1.0, abs(d4))
    # old d2 and both d4 are exact up to degree 5, new d2 as well
    assert abs(old.d2[0] - d2) <= 1e-8 * scale2
    assert abs(new.d2[0] - d2) <= 1e-8 * scale2
    assert abs(old.d4[0] - d4) <= 1e-8 * scale4
    assert abs(new.d4[0] - d4) <= 1e-8 * scale4


@settings(max_examples=100, deadline=None)
@given(st.floats(-10, 10), st.floats(-10, 10), st.floats(1e-3, 1.0))
def test_linear_null_space(a, b, dx):
    old = correction_old(a + b * _points(0.0, dx), dx)
    new = correction_new(a + b * _faces(0.0, dx), dx)
    tol = 1e-13 * (abs(a) + abs(b) + 1.0)
    assert abs(old.d2[0]) * dx * dx <= tol * 100 and abs(old.d4[0]) * dx ** 4 <= tol * 100
    assert abs(new.d2[0]) * dx * dx <= tol * 100 and abs(new.d4[0]) * dx ** 4 <= tol * 100


def test_short_inputs_rejected():
    with pytest.raises(ConfigurationError):
        correction_old(np.zeros(5), 1.0)
    with pytest.raises(ConfigurationError):
        correction_new(np.zeros(4), 1.0)


def test_assembly_coefficients():
    fv = np.array([1.0])
    dx = 0.2
    assert assemble_awenoflux(fv, CorrectionTerms(np.zeros(1), np.zeros(1)), dx)[0] == 1.0
    H = assemble_awenoflux(fv, CorrectionTerms(np.array([24.0 / dx ** 2]), np.zeros(1)), dx)
    assert H[0] == pytest.approx(0.0, abs=1e-15)
    H = assemble_awenoflux(fv, CorrectionTerms(np.zeros(1), np.array([5760.0 / (7 * dx ** 4)])), dx)
    assert H[0] == pytest.approx(2.0, rel=1e-14)


def _burgers_line(n, variant):
    grid = Grid1D(0.0, 1.0, n)
    a, b, k = 0.25, 0.5, 2 * np.pi
    u = a + b * np.sin(k * grid.centers)
    U = padded(u[None], PER)
    lf = conservative_line_flux(U, burgers_model(), grid.dx, PER.sides[0],
                                SchemeConfig(variant=variant))
    # f = u^2/2 = const + ab sin(kx) - b^2/4 cos(2kx); H must match the series
    # f - dx^2/24 f_xx + 7 dx^4/5760 f_xxxx whose differences give f_x exactly
    th = k * grid.interfaces
    f = 0.5 * (a + b * np.sin(th)) ** 2
    f2 = -a * b * k ** 2 * np.sin(th) + b * b * k ** 2 * np.cos(2 * th)
    f4 = a * b * k ** 4 * np.sin(th) - 4 * b * b * k ** 4 * np.cos(2 * th)
    series = f - grid.dx ** 2 / 24 * f2 + 7 * grid.dx ** 4 / 5760 * f4
    return np.max(np.abs(lf.H[0] - series)), np.max(np.abs(lf.fv[0] - f))


@pytest.mark.parametrize("variant", [OLD, NEW])
def test_numerical_flux_is_fifth_order(variant):
    errs = np.array([_burgers_line(n, variant) for n in (40, 80, 160)])
    rates = np.log2(errs[1] / errs[2])
    assert np.all(rates > 4.6), errs


def _burgers_tendency_error(n, variant):
    grid = Grid1D(0.0, 1.0, n)
    x = grid.centers
    u = 0.25 + 0.5 * np.sin(2 * np.pi * x)
    t = semidiscrete_rhs(padded(u[None], PER), grid, PER, burgers_model(),
                         SchemeConfig(variant=variant))
    exact = -u * np.pi * np.cos(2 * np.pi * x)
    return np.max(np.abs(t[0] - exact))


@pytest.mark.parametrize("variant", [OLD, NEW])
def test_tendency_is_fifth_order(variant):
    errs = [_burgers_tendency_error(n, variant) for n in (40, 80, 160)]
    assert np.log2(errs[1] / errs[2]) > 4.6, errs


def test_old_new_tendencies_differ_at_fifth_order():
    gaps = []
    for n in (40, 80, 160):
        grid = Grid1D(0.0, 1.0, n)
        u = 0.25 + 0.5 * np.sin(2 * np.pi * grid.centers)
        U = padded(u[None], PER)
        a = semidiscrete_rhs(U, grid, PER, burgers_model(), SchemeConfig(variant=OLD))
        b = semidiscrete_rhs(U, grid, PER, burgers_model(), SchemeConfig(variant=NEW))
        gaps.append(np.max(np.abs(a - b)))
    assert np.log2(gaps[1] / gaps[2]) > 4.5, gaps


def test_constant_field_zero_tendency():
    grid = Grid1D(0.0, 1.0, 16)
    U = padded(np.tile([[1.0], [0.4], [2.0]], (1, 16)), PER)
    for variant in (OLD, NEW):
        t = semidiscrete_rhs(U, grid, PER, euler1d_model(), SchemeConfig(variant=variant))
        assert np.max(np.abs(t)) <= 1e-13


@pytest.mark.parametrize("variant", [OLD, NEW])
@pytest.mark.parametrize("char", [False, True])
def test_periodic_conservation(variant, char, rng):
    model = euler1d_model()
    grid = Grid1D(0.0, 1.0, 32)
    V = np.stack([rng.uniform(0.5, 1.5, 32), rng.normal(scale=0.3, size=32),
                  rng.uniform(0.5, 1.5, 32)])
    U = model.conservative(V)
    t = semidiscrete_rhs(padded(U, PER), grid, PER, model,
                         SchemeConfig(variant=variant, characteristic=char))
    mass = np.sum(np.abs(U), axis=1) * grid.dx
    assert np.all(np.abs(t.sum(axis=1) * grid.dx) <= 1e-13 * mass / grid.dx)


def test_new_variant_skips_point_fluxes():
    grid = Grid1D(0.0, 1.0, 20)
    U = padded((0.25 + 0.5 * np.sin(2 * np.pi * grid.centers))[None], PER)
    new, old = Counter(), Counter()
    semidiscrete_rhs(U, grid, PER, burgers_model(), SchemeConfig(variant=NEW), new)
    semidiscrete_rhs(U, grid, PER, burgers_model(), SchemeConfig(variant=OLD), old)
    assert new["point_flux_for_corrections"] == 0
    assert old["point_flux_for_corrections"] == 20 + 2 * GHOST
    assert new["fv_flux_faces"] == old["fv_flux_faces"] == 21


def test_new_variant_never_touches_model_flux_at_cells():
    calls = []

    class Spy(type(burgers_model())):
        def flux(self, U):
            calls.append(U.shape)
            return super().flux(U)

    grid = Grid1D(0.0, 1.0, 20)
    U = padded((0.25 + 0.5 * np.sin(2 * np.pi * grid.centers))[None], PER)
    semidiscrete_rhs(U, grid, PER, Spy(), SchemeConfig(variant=NEW))
    # only the two one-sided face-state evaluations
    assert calls == [(1, 21), (1, 21)]


def test_2d_sweeps_match_1d_on_x_independent_data():
    model2, model1 = euler2d_model(), euler1d_model()
    g1 = Grid1D(0.0, 1.0, 16)
    grid = Grid2D(Grid1D(0.0, 1.0, 6), g1)
    y = g1.centers
    V1 = np.stack([1 + 0.2 * np.sin(2 * np.pi * y), 0.3 * np.cos(2 * np.pi * y),
                   1 + 0.1 * np.cos(2 * np.pi * y)])
    U1 = model1.conservative(V1)
    U2 = np.zeros((4, 6, 16))
    U2[0], U2[2], U2[3] = U1[0], U1[1], U1[2]
    bc2 = BoundarySpec.uniform(PERIODIC, 2)
    for variant in (OLD, NEW):
        cfg = SchemeConfig(variant=variant, characteristic=True)
        t2 = evaluate_rhs(padded(U2, bc2), grid, bc2, model2, cfg).tendency
        t1 = semidiscrete_rhs(padded(U1, PER), g1, PER, model1, cfg)
        np.testing.assert_allclose(t2[0], np.broadcast_to(t1[0], (6, 16)), atol=1e-12)
        np.testing.assert_allclose(t2[2], np.broadcast_to(t1[1], (6, 16)), atol=1e-12)
        np.testing.assert_allclose(t2[1], 0.0, atol=1e-12)


def test_bad_variant_rejected():
    with pytest.raises(ConfigurationError):
        SchemeConfig(variant="older")
