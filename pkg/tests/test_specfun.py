import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from pcapmono.errors import DomainError, NearSingularError
from pcapmono.specfun import (PExponentParams, beta_identity_residual, eta, half_beta,
                              incomplete_I, model_from_capacity, model_from_mass_radius,
                              model_level, model_level_complement, model_level_derivative,
                              model_level_quadrature, xi, xi_closed_form)


def I_oracle(a, k):
    """I_a(k) through scipy's regularized incomplete beta (k > 0) and 2F1 (k < 0)."""
    if k > 0:
        return special.beta(a, a) * special.betainc(a, a, k / (1 + k))
    Y = -k / (1 + k)
    return Y ** a / a * special.hyp2f1(1 - a, a, a + 1, -Y)


class TestExponent:
    def test_a_from_p(self):
        assert PExponentParams.from_p(2.0).a == 1.0
        assert PExponentParams.from_p(1.5).a == pytest.approx(3.0)
        assert PExponentParams.from_p(2.5).a == pytest.approx(1 / 3)

    @pytest.mark.parametrize("p", [1.0, 3.0, 0.5, 4.0, math.nan])
    def test_p_outside_range(self, p):
        with pytest.raises(DomainError):
            PExponentParams.from_p(p)

    @given(st.floats(1.01, 2.99))
    def test_round_trip(self, p):
        P = PExponentParams.from_p(p)
        assert PExponentParams.from_a(P.a).p == pytest.approx(p, rel=1e-13)


class TestIncompleteIntegral:
    @pytest.mark.parametrize("a", [0.25, 0.5, 1.0, 1.7, 3.0, 8.0])
    @pytest.mark.parametrize("k", [0.01, 0.3, 0.75, 1.0, -0.2, -0.6, -0.95])
    def test_matches_special_functions(self, a, k):
        assert incomplete_I(a, k) == pytest.approx(I_oracle(a, k), rel=1e-10)

    def test_exact_values(self):
        assert incomplete_I(1.0, 1.0) == pytest.approx(0.5, abs=1e-12)
        assert incomplete_I(2.0, 1.0) == pytest.approx(1 / 12, abs=1e-12)
        assert incomplete_I(1.0, 0.5) == pytest.approx(1 / 3, rel=1e-13)

    @pytest.mark.parametrize("a", np.geomspace(0.21, 8, 9))
    def test_half_beta(self, a):
        assert half_beta(a) == pytest.approx(0.5 * special.beta(a, a), rel=1e-13)
        assert beta_identity_residual(a) < 1e-9

    def test_zero_and_guard(self):
        assert incomplete_I(1.3, 0.0) == 0.0
        with pytest.raises(NearSingularError):
            incomplete_I(1.0, -1.0 + 1e-9)
        with pytest.raises(DomainError):
            incomplete_I(1.0, 1.5)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.2, 6.0), st.floats(0.01, 0.99))
    def test_increasing_in_abs_k(self, a, k):
        assert incomplete_I(a, k) < incomplete_I(a, min(1.0, k * 1.01))
        assert incomplete_I(a, -k * 0.99) < incomplete_I(a, -k)


class TestModel:
    def test_p2_horizon(self):
        model = model_from_mass_radius(PExponentParams.from_p(2.0), 2.0, 1.0)
        assert model.k == 1.0 and model.cp == pytest.approx(2.0, rel=1e-14)

    @pytest.mark.parametrize("k", [1.0, 0.4, -0.5])
    def test_coupling_round_trip(self, k):
        P = PExponentParams.from_p(1.8)
        model = model_from_capacity(P, 1.3, k)
        assert model.r0 == pytest.approx(model.m / (2 * k))
        assert model.x(model.r0) == k
        back = model_from_mass_radius(P, model.m, model.r0)
        assert back.cp == pytest.approx(1.3, rel=1e-13)

    def test_k0_limit(self):
        P = PExponentParams.from_a(2.0)
        model = model_from_capacity(P, 8.0, 0.0)
        assert model.m == 0.0 and model.r0 == pytest.approx(2.0)

    def test_p2_level(self):
        model = model_from_mass_radius(PExponentParams.from_p(2.0), 2.0, 1.5)
        for t in (1.5, 2.0, 10.0, 1e4):
            assert model_level(t, model) == pytest.approx(1 - model.cp / (t + 1.0), abs=1e-14)

    def test_euclidean_level(self):
        P = PExponentParams.from_a(0.5)
        model = model_from_capacity(P, 0.5 * 4 ** 0.5, 0.0)
        assert model.r0 == pytest.approx(4.0)
        assert model_level(16.0, model) == pytest.approx(0.5, rel=1e-14)

    @pytest.mark.parametrize("k", [1.0, 0.3, -0.7, 0.0])
    def test_derivative_finite_difference(self, k):
        model = model_from_capacity(PExponentParams.from_p(2.3), 0.9, k)
        for t in np.geomspace(1.01 * model.r0, 1e3 * model.r0, 9):
            h = 1e-4 * t
            fd = (model_level(t + h, model) - model_level(t - h, model)) / (2 * h)
            assert fd == pytest.approx(model_level_derivative(t, model), rel=1e-6)

    @pytest.mark.parametrize("k", [0.8, -0.3])
    def test_both_level_branches(self, k):
        model = model_from_capacity(PExponentParams.from_p(1.6), 2.0, k)
        for t in np.geomspace(model.r0, 50 * model.r0, 6):
            assert model_level_quadrature(t, model) == pytest.approx(model_level(t, model), abs=1e-10)

    def test_level_at_boundary_and_infinity(self):
        model = model_from_capacity(PExponentParams.from_p(2.0), 1.0, 0.5)
        assert model_level(model.r0, model) == pytest.approx(0.0, abs=1e-15)
        assert model_level_complement(1e9 * model.r0, model) < 1e-8

    def test_below_boundary_rejected(self):
        model = model_from_capacity(PExponentParams.from_p(2.0), 1.0, 0.5)
        with pytest.raises(DomainError):
            model_level(0.5 * model.r0, model)

    def test_eta_vanishes_on_horizon(self):
        model = model_from_capacity(PExponentParams.from_p(2.0), 1.0, 1.0)
        assert eta(model.r0, model) == 0.0
        assert eta(2 * model.r0, model) > 0

    @pytest.mark.parametrize("k", [1.0, 0.5, -0.5])
    @pytest.mark.parametrize("a", [0.5, 2.0])
    def test_xi_closed_form_and_limit(self, a, k):
        model = model_from_capacity(PExponentParams.from_a(a), 1.1, k)
        t = 3 * model.r0
        assert xi_closed_form(t, model) == pytest.approx(xi(t, model), rel=1e-9)
        far = 1e3 * model.r0
        assert xi(far, model) * far ** (a + 1) / model.cp == pytest.approx(1 / (a + 1), rel=5e-3)
