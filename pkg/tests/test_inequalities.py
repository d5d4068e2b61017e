import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pcapmono import inequalities as ineq
from pcapmono.errors import DomainError, NearSingularError, NotMinimalError
from pcapmono.radial_metric import adm_mass, euclidean, perturbed, schwarzschild
from pcapmono.solver import boundary_sample, solve
from pcapmono.specfun import PExponentParams, model_from_capacity


@given(st.floats(-3.0, 1.0))
def test_solve_k_back_substitution(W):
    k = ineq.solve_k(W)
    assert -1 < k <= 1
    assert abs(4 * k / (1 + k) ** 2 - W) < 1e-12


def test_solve_k_edges():
    assert ineq.solve_k(1.0) == 1.0
    assert ineq.solve_k(0.0) == 0.0
    with pytest.raises(DomainError):
        ineq.solve_k(1.0 + 1e-9)
    with pytest.raises(NearSingularError):
        ineq.solve_k(-1e14)


@pytest.mark.parametrize("p", [1.5, 2.0, 2.5])
def test_horizon_equalities(p):
    sol = solve(schwarzschild(2.0), PExponentParams.from_p(p))
    reps = (ineq.horizon_inequalities(sol) + ineq.willmore_bounds(sol)
            + ineq.minimal_boundary_bounds(sol))
    assert [r.name for r in reps] == ["horizon:mean-curvature", "horizon:mass", "willmore:mass",
                                      "willmore:area", "minimal:mass", "minimal:area"]
    assert all(r.satisfied and r.equality for r in reps)


@pytest.mark.parametrize("p", [1.5, 2.5])
def test_general_k_equality_on_matched_model(p):
    P = PExponentParams.from_p(p)
    sol = solve(schwarzschild(2.0, 2.0), P)
    reps = ineq.general_k_inequalities(sol, model_from_capacity(P, sol.cp, 0.5))
    assert all(r.satisfied and r.equality for r in reps)


def test_euclidean_uses_k0_limits():
    P = PExponentParams.from_p(1.8)
    sol = solve(euclidean(2.0), P)
    reps = ineq.general_k_inequalities(sol, model_from_capacity(P, sol.cp, 0.0))
    reps += ineq.willmore_bounds(sol)
    assert all(r.satisfied and r.equality for r in reps)
    area = [r for r in reps if r.name == "willmore:area"][0]
    assert area.rhs == pytest.approx(1.0, rel=1e-12)  # r0 / 2


@pytest.mark.parametrize("b", [0.05, 0.1])
def test_perturbed_is_strict(b):
    P = PExponentParams.from_p(2.2)
    sol = solve(perturbed(1.0, b), P)
    model = model_from_capacity(P, sol.cp, 0.5)
    reps = (ineq.general_k_inequalities(sol, model) + ineq.horizon_inequalities(sol)
            + ineq.willmore_bounds(sol) + ineq.minimal_boundary_bounds(sol))
    assert all(r.satisfied and not r.equality and r.slack > 0 for r in reps)


def test_minimal_gate():
    sol = solve(schwarzschild(2.0, 1.5), PExponentParams.from_p(2.0))
    with pytest.raises(NotMinimalError):
        ineq.minimal_boundary_bounds(sol)


def test_negative_k_never_equality():
    P = PExponentParams.from_p(2.0)
    sol = solve(schwarzschild(-1.0, 1.0), P)
    reps = ineq.general_k_inequalities(sol, model_from_capacity(P, sol.cp, -0.5))
    assert all(r.satisfied and not r.equality for r in reps)
    assert all(r.note == ineq.NEGATIVE_K_NOTE for r in reps)


def test_harmonic_reduction():
    P = PExponentParams.from_p(2.0)
    sol = solve(perturbed(1.0, 0.1), P)
    b = boundary_sample(sol)
    for k in (0.3, -0.4):
        r1, r2 = ineq.general_k_inequalities(sol, model_from_capacity(P, sol.cp, k), b)
        s3, s4 = ineq.harmonic_reference_slacks(b, sol.cp, k, 2.0)
        assert r1.slack == pytest.approx((1 + k) / 2 * s3, rel=1e-10)
        assert r2.slack == pytest.approx((1 + k) * s4, rel=1e-10)


def test_corollaries():
    P = PExponentParams.from_p(2.0)
    sol = solve(perturbed(1.0, 0.1), P)
    reps = ineq.boundary_value_reports(sol, model_from_capacity(P, sol.cp, 1.0))
    assert [r.name for r in reps] == ["monotone:thm11-a", "monotone:thm11-b"]
    assert all(r.satisfied and r.slack > 0 for r in reps)


def test_report_serializes():
    sol = solve(schwarzschild(2.0), PExponentParams.from_p(2.0))
    d = ineq.willmore_bounds(sol)[0].as_dict()
    assert {"name", "lhs", "rhs", "slack", "satisfied", "equality"} <= set(d)
