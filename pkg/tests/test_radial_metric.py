import math

import numpy as np
import pytest

from pcapmono.errors import AdmissibilityError, DomainError, MassNonconvergenceError
from pcapmono.radial_metric import (adm_mass, check_admissible, euclidean, from_family,
                                    perturbed, perturbed_horizon, power, scalar_curvature,
                                    schwarzschild, sphere_geometry)


def test_schwarzschild_horizon_is_minimal():
    g = schwarzschild(2.0)
    assert g.r0 == 1.0
    area, H = sphere_geometry(g, 1.0)
    assert H == pytest.approx(0.0, abs=1e-15)
    assert area == pytest.approx(4 * math.pi * 16, rel=1e-14)


def test_euclidean_sphere():
    area, H = sphere_geometry(euclidean(1.0), 3.0)
    assert area == pytest.approx(36 * math.pi) and H == pytest.approx(2 / 3)


def test_schwarzschild_is_scalar_flat():
    r = np.geomspace(1.0, 1e4, 50)
    assert np.max(np.abs(scalar_curvature(schwarzschild(2.0), r))) < 1e-12


def test_perturbed_derivatives_by_finite_differences():
    g = perturbed(1.0, 0.1, r0=1.0)
    r, h = 2.0, 1e-5
    assert g.dw(r) == pytest.approx((g.w(r + h) - g.w(r - h)) / (2 * h), rel=1e-8)
    assert g.d2w(r) == pytest.approx((g.dw(r + h) - g.dw(r - h)) / (2 * h), rel=1e-7)


def test_perturbed_horizon_is_minimal_and_nonnegative_curvature():
    g = perturbed(1.0, 0.1)
    assert g.r0 == pytest.approx(perturbed_horizon(1.0, 0.1))
    assert abs(sphere_geometry(g, g.r0)[1]) < 1e-12
    assert check_admissible(g).min_curvature >= -1e-12


def test_first_variation_of_area():
    g = perturbed(1.0, 0.05)
    for r in (1.2, 3.0, 40.0):
        h = 1e-5 * r
        dA = (sphere_geometry(g, r + h)[0] - sphere_geometry(g, r - h)[0]) / (2 * h)
        area, H = sphere_geometry(g, r)
        assert dA == pytest.approx(H * g.w(r) ** 2 * area, rel=1e-6)


@pytest.mark.parametrize("metric, mass", [(schwarzschild(2.0), 2.0), (perturbed(1.0, 0.1), 2.0),
                                          (euclidean(1.0), 0.0), (schwarzschild(-1.0, 2.0), -1.0)])
def test_adm_mass(metric, mass):
    assert adm_mass(metric) == pytest.approx(mass, abs=1e-8)


def test_slow_decay_has_no_mass():
    with pytest.raises(MassNonconvergenceError):
        adm_mass(power(1.0, 0.5, 1.0))


def test_negative_curvature_rejected():
    # w = 1 + 0.5/r^2 has w'' + 2w'/r > 0, hence R < 0 everywhere
    with pytest.raises(AdmissibilityError):
        check_admissible(power(0.5, 2.0, 1.0))
    assert check_admissible(power(-0.5, 2.0, 1.0)).min_curvature > 0


def test_from_family_errors():
    with pytest.raises(DomainError, match="missing parameter 'b'"):
        from_family("perturbed", {"A": 1.0})
    with pytest.raises(DomainError, match="does not take"):
        from_family("euclidean", {"m": 1.0}, 1.0)
    with pytest.raises(DomainError, match="unknown metric family"):
        from_family("kerr", {}, 1.0)
    assert from_family("schwarzschild", {"m": 2.0}, "horizon").r0 == 1.0
