import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from pcapmono.errors import DomainError, InadmissibleCoefficientsError
from pcapmono.monotone import (CoefficientChoice, F_derivative_identity, alpha_nonneg, alpha_value,
                               alpha_second_order_residual, coefficients, coefficients_k0,
                               default_grid, evaluate_F, monotonicity_scan, ode_residual,
                               preset_choice, special_alpha)
from pcapmono.radial_metric import euclidean, perturbed, schwarzschild
from pcapmono.solver import solve
from pcapmono.specfun import PExponentParams, eta, model_from_capacity

models = st.builds(
    lambda a, k, cp: model_from_capacity(PExponentParams.from_a(a), cp, k),
    st.floats(0.2, 5.0), st.one_of(st.floats(-0.9, -0.01), st.floats(0.01, 1.0), st.just(1.0)),
    st.floats(0.3, 3.0))


def _matched(p, k, m=2.0):
    P = PExponentParams.from_p(p)
    sol = solve(schwarzschild(m, m / (2 * k)), P)
    return sol, model_from_capacity(P, sol.cp, k)


class TestCoefficients:
    @settings(max_examples=60, deadline=None)
    @given(models, st.floats(0.0, 2.0), st.floats(-2.0, 2.0), st.floats(0.01, math.log(1e3)))
    def test_first_order_system(self, model, C2, C1, logt):
        choice = CoefficientChoice(model, -abs(C1) if model.k == 1.0 else C1, C2)
        if not choice.predicate():
            return
        assert ode_residual(choice, model.r0 * math.exp(logt)).worst < 1e-6

    @settings(max_examples=30, deadline=None)
    @given(models, st.floats(0.2, math.log(1e3)))
    def test_special_solution(self, model, logt):
        t = model.r0 * math.exp(logt)
        assert alpha_second_order_residual(model, special_alpha(model), t) < 1e-8

    @pytest.mark.parametrize("k", [0.0, 0.4, 1.0, -0.5])
    def test_alpha_value_matches_coefficients(self, k):
        model = model_from_capacity(PExponentParams.from_p(1.9), 1.2, k)
        choice = CoefficientChoice(model, -0.3, 0.8)
        for t in (model.r0, 3 * model.r0, 1e3 * model.r0):
            assert alpha_value(choice, t) == coefficients(choice, t)[0]

    def test_k0_limit_is_continuous(self):
        P = PExponentParams.from_p(1.8)
        base = model_from_capacity(P, 1.5, 0.0)
        near = model_from_capacity(P, 1.5, 1e-7)
        t = 3.0 * base.r0
        exact = coefficients_k0(base, -0.4, 0.7, t)
        approx = coefficients(CoefficientChoice(near, -0.4, 0.7), t)
        for e, g in zip(exact, approx):
            assert g == pytest.approx(e, rel=1e-5, abs=1e-6)

    def test_k0_closed_forms(self):
        P = PExponentParams.from_a(2.0)
        model = model_from_capacity(P, 2.0, 0.0)
        alpha, beta, gamma = coefficients_k0(model, -3.0, 0.5, 2.0)
        assert alpha == pytest.approx(0.5 * 8 + 1.0)

    def test_thm12b_alpha_vanishes_at_boundary(self):
        model = model_from_capacity(PExponentParams.from_p(2.2), 1.0, 0.4)
        choice = preset_choice("thm12-b", model)
        assert choice.predicate()
        assert abs(coefficients(choice, model.r0)[0]) < 1e-12

    def test_presets_check_k(self):
        model = model_from_capacity(PExponentParams.from_p(2.0), 1.0, 0.5)
        with pytest.raises(DomainError):
            preset_choice("thm11-a", model)
        with pytest.raises(DomainError):
            preset_choice("AMMO", model)
        with pytest.raises(DomainError):
            preset_choice("nope", model)


class TestAlphaCriterion:
    @settings(max_examples=25, deadline=None)
    @given(models, st.floats(-0.5, 2.0), st.floats(-2.0, 2.0))
    def test_predicate_matches_sampling(self, model, C2, C1):
        # stay off the measure-zero ties where alpha touches 0 (at r0 or at infinity)
        assume(abs(C2) > 1e-6 and abs(C1) > 1e-6)
        crit = alpha_nonneg(CoefficientChoice(model, C1, C2), n=200, span=1e5)
        assert crit.agree

    def test_negative_C2_rejected(self):
        model = model_from_capacity(PExponentParams.from_p(2.0), 1.0, 0.5)
        crit = alpha_nonneg(CoefficientChoice(model, -1.0, -0.1))
        assert not crit.predicate and crit.min_alpha < 0


class TestF:
    @pytest.mark.parametrize("p", [1.5, 2.5])
    def test_ammo_on_euclidean(self, p):
        P = PExponentParams.from_p(p)
        a = P.a
        sol = solve(euclidean(1.3), P)
        model = model_from_capacity(P, sol.cp, 0.0)
        choice = preset_choice("AMMO", model)
        for t in (1.3, 5.0, 100.0):
            s = evaluate_F(sol, choice, t)
            g = s.surface
            direct = (-4 * math.pi * t + t ** (a + 1) / sol.cp * g.int_H_grad
                      - sol.cp ** -2 * t ** (2 * a + 1) * g.int_grad_sq)
            assert s.F == pytest.approx(direct, abs=1e-10)
            assert abs(s.F) < 1e-9

    @pytest.mark.parametrize("k", [0.25, 1.0])
    def test_rigidity(self, k):
        sol, model = _matched(1.7, k)
        name = "thm11-b" if k == 1.0 else "thm12-a"
        rep = monotonicity_scan(sol, preset_choice(name, model), default_grid(model, 64))
        assert np.max(np.abs(rep.F)) < 1e-8 and rep.passed

    def test_strictly_decreasing_off_model(self):
        P = PExponentParams.from_p(2.0)
        sol = solve(perturbed(1.0, 0.1), P)
        choice = preset_choice("thm11-a", model_from_capacity(P, sol.cp, 1.0))
        rep = monotonicity_scan(sol, choice, default_grid(choice.model, 64))
        assert rep.passed and rep.F[0] - rep.F[-1] > 0.1
        for s in rep.samples[1:]:
            assert s.F_alt == pytest.approx(s.F, abs=1e-9)

    def test_derivative_identity(self):
        P = PExponentParams.from_p(1.6)
        sol = solve(perturbed(1.0, 0.05), P)
        choice = preset_choice("thm12-b", model_from_capacity(P, sol.cp, 0.5))
        t = 2.0 * choice.model.r0
        h = 1e-4 * t
        fd = (evaluate_F(sol, choice, t + h).F - evaluate_F(sol, choice, t - h).F) / (2 * h)
        assert F_derivative_identity(choice, evaluate_F(sol, choice, t)) == pytest.approx(fd, rel=1e-5)

    def test_guards(self):
        P = PExponentParams.from_p(2.0)
        sol = solve(perturbed(1.0, 0.1), P)
        model = model_from_capacity(P, sol.cp, 0.5)
        with pytest.raises(InadmissibleCoefficientsError):
            monotonicity_scan(sol, CoefficientChoice(model, 5.0, 0.0))
        other = model_from_capacity(P, 2 * sol.cp, 0.5)
        with pytest.raises(DomainError):
            evaluate_F(sol, preset_choice("thm12-a", other), other.r0)
        with pytest.raises(DomainError):
            monotonicity_scan(sol, preset_choice("thm12-a", model), [2.0, 1.0])

    def test_thread_count_does_not_change_results(self):
        P = PExponentParams.from_p(2.5)
        sol = solve(perturbed(1.0, 0.05), P)
        choice = preset_choice("thm12-a", model_from_capacity(P, sol.cp, 0.5))
        grid = default_grid(choice.model, 40)
        one = monotonicity_scan(sol, choice, grid)
        four = monotonicity_scan(sol, choice, grid, threads=4)
        assert np.array_equal(one.F, four.F) and one.summary() == four.summary()
