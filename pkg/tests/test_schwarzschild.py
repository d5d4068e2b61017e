import math

import numpy as np
import pytest

from pcapmono.inequalities import solve_k
from pcapmono.radial_metric import schwarzschild
from pcapmono.schwarzschild import schwarzschild_surface, schwarzschild_u, willmore_deficit
from pcapmono.solver import solve, surface_at_radius
from pcapmono.specfun import PExponentParams, eta, model_from_mass_radius


def test_horizon_values():
    model = model_from_mass_radius(PExponentParams.from_p(2.0), 2.0, 1.0)
    d = schwarzschild_surface(1.0, model)
    assert d.H == 0.0 and d.int_H_sq == 0.0
    assert d.area == pytest.approx(64 * math.pi)
    assert schwarzschild_u(1.0, model) == pytest.approx(0.0, abs=1e-15)


def test_massless_is_euclidean():
    model = model_from_mass_radius(PExponentParams.from_p(1.5), 0.0, 2.0)
    d = schwarzschild_surface(5.0, model)
    assert d.H == pytest.approx(0.4) and d.area == pytest.approx(100 * math.pi)
    assert d.int_H_sq == pytest.approx(16 * math.pi)


@pytest.mark.parametrize("p", [1.4, 2.0, 2.6])
@pytest.mark.parametrize("m, r0", [(2.0, 1.0), (2.0, 3.0), (-1.0, 2.0)])
def test_closed_forms_match_solver(p, m, r0):
    P = PExponentParams.from_p(p)
    model = model_from_mass_radius(P, m, r0)
    sol = solve(schwarzschild(m, r0), P)
    for r in np.geomspace(r0, 1e2 * r0, 7):
        d, s = schwarzschild_surface(r, model), surface_at_radius(sol, float(r))
        for key in ("area", "grad_u", "int_H_grad", "int_grad_sq", "int_H_sq"):
            assert getattr(d, key) == pytest.approx(getattr(s, key), rel=1e-9, abs=1e-13), key
        assert d.H == pytest.approx(s.H, rel=1e-12, abs=1e-15)
        if r > r0:
            assert d.H / (2 * d.grad_u) == pytest.approx(eta(r, model), rel=1e-12)


@pytest.mark.parametrize("k", [1.0, 0.5, 0.1, -0.3, -0.9])
def test_willmore_deficit_inverts(k):
    assert solve_k(willmore_deficit(k)) == pytest.approx(k, abs=1e-13)
    model = model_from_mass_radius(PExponentParams.from_p(2.0), 2 * k, 1.0)
    d = schwarzschild_surface(1.0, model)
    assert 1 - d.int_H_sq / (16 * math.pi) == pytest.approx(willmore_deficit(k), abs=1e-14)
