import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pcapmono.errors import BracketError
from pcapmono.radial_metric import euclidean, perturbed, schwarzschild
from pcapmono.schwarzschild import schwarzschild_u
from pcapmono.solver import (asymptotic_diagnostics, boundary_sample, level_radius,
                             ode_residual, sample_level_surface, solve, surface_at_radius)
from pcapmono.specfun import PExponentParams, incomplete_I, model_from_capacity, model_from_mass_radius

P2 = PExponentParams.from_p(2.0)


@pytest.mark.parametrize("p", [1.5, 2.0, 2.5])
@pytest.mark.parametrize("r0", [1.0, 2.5])
def test_euclidean_closed_form(p, r0):
    P = PExponentParams.from_p(p)
    sol = solve(euclidean(r0), P)
    assert sol.cp == pytest.approx(P.a * r0 ** P.a, rel=1e-12)
    r = np.geomspace(r0, 1e4 * r0, 30)
    assert np.max(np.abs(sol.u(r) - (1 - (r0 / r) ** P.a))) < 1e-12


@pytest.mark.parametrize("m, r0", [(2.0, 1.0), (2.0, 1.5), (1.0, 3.0), (-1.0, 1.0)])
def test_p2_schwarzschild(m, r0):
    sol = solve(schwarzschild(m, r0), P2)
    c2 = r0 + m / 2
    assert sol.cp == pytest.approx(c2, rel=1e-13)
    r = np.geomspace(r0, 1e3 * r0, 100)
    assert np.max(np.abs(sol.u(r) - (1 - c2 / (r + m / 2)))) < 1e-9


@pytest.mark.parametrize("p", [1.5, 2.5])
def test_solver_matches_closed_form_level(p):
    P = PExponentParams.from_p(p)
    sol = solve(schwarzschild(2.0, 1.4), P)
    model = model_from_mass_radius(P, 2.0, 1.4)
    assert sol.cp == pytest.approx(model.cp, rel=1e-12)
    for r in np.geomspace(1.4, 1.4e3, 20):
        assert float(sol.u(r)) == pytest.approx(schwarzschild_u(r, model), abs=1e-9)


@pytest.mark.parametrize("metric", [schwarzschild(2.0), perturbed(1.0, 0.1), euclidean(1.0)])
def test_radial_equation_residual(metric):
    sol = solve(metric, PExponentParams.from_p(1.7))
    r = np.geomspace(metric.r0 * 1.01, 1e3 * metric.r0, 25)
    assert np.max(np.abs(ode_residual(sol, r))) < 1e-8


def test_flux_is_constant():
    P = PExponentParams.from_p(2.2)
    sol = solve(perturbed(1.0, 0.05), P)
    for r in np.geomspace(sol.metric.r0, 1e4 * sol.metric.r0, 12):
        s = surface_at_radius(sol, float(r))
        assert s.area * s.grad_u ** (P.p - 1) == pytest.approx(sol.cap_p, rel=1e-10)
    assert sol.cap_p == pytest.approx(4 * math.pi * sol.cp ** (P.p - 1), rel=1e-14)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, math.log(1e5)))
def test_level_radius_inverts(logr):
    sol = solve(perturbed(1.0, 0.1), P2)
    r = sol.metric.r0 * math.exp(logr)
    assert level_radius(sol, complement=sol.complement(r)) == pytest.approx(r, rel=1e-9)


def test_level_radius_domain():
    sol = solve(euclidean(1.0), P2)
    assert level_radius(sol, 0.0) == pytest.approx(1.0)
    assert level_radius(sol, 0.5) == pytest.approx(2.0, rel=1e-12)
    with pytest.raises(BracketError):
        level_radius(sol, 1.0)
    with pytest.raises(BracketError):
        level_radius(sol, -0.1)


def test_level_surface_follows_model():
    P = PExponentParams.from_p(1.8)
    sol = solve(perturbed(1.0, 0.1), P)
    model = model_from_capacity(P, sol.cp, 0.5)
    s = sample_level_surface(sol, model, 4 * model.r0)
    assert float(sol.u(s.r)) == pytest.approx(s.level, abs=1e-13)


def test_boundary_sample_on_horizon():
    b = boundary_sample(solve(schwarzschild(2.0), P2))
    assert b.level == 0.0 and abs(b.H) < 1e-14
    assert b.int_H_sq < 1e-25


@pytest.mark.parametrize("p", [1.5, 2.5])
def test_asymptotic_slopes(p):
    P = PExponentParams.from_p(p)
    d = asymptotic_diagnostics(solve(perturbed(1.0, 0.1), P))
    assert d.slope_u == pytest.approx(-P.a, rel=1e-2)
    assert d.slope_grad == pytest.approx(-P.a - 1, rel=1e-2)
