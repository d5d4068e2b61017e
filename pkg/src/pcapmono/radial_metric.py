"""Rotationally symmetric metrics g = w(r)^4 delta outside the ball B_{r0}.

A metric is described by its conformal factor and the factor's first two
derivatives, all supplied analytically by the family. Three families are
built in:

* ``schwarzschild``: w = 1 + m/2r
* ``euclidean``: w = 1
* ``perturbed``: w = 1 + A/r - b e^{-r}/r, whose flat Laplacian is
  -b e^{-r}/r. For 0 <= b <= A the factor is positive and superharmonic, so
  the scalar curvature is nonnegative (positive once b > 0) and the ADM mass
  is 2A.

``power`` (w = 1 + c r^-s) is a diagnostic family: for s < 1 its mass
diverges, which exercises the non-convergence path of :func:`adm_mass`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from scipy import optimize

from .errors import (AdmissibilityError, DomainError, MassNonconvergenceError,
                     PositivityError)
from .settings import DEFAULT_TOL

Radial = Callable[[np.ndarray], np.ndarray]

FAMILIES = ("schwarzschild", "euclidean", "perturbed", "power")


@dataclass(frozen=True, eq=False)
class RadialConformalMetric:
    w: Radial
    dw: Radial
    d2w: Radial
    r0: float
    family: str = "custom"
    params: Mapping[str, float] = field(default_factory=dict)
    # claimed decay rate of w - 1; metadata only, never checked
    decay_tau: float = 1.0

    def __post_init__(self):
        if not self.r0 > 0.0:
            raise DomainError(f"r0 must be positive, got {self.r0!r}")
        if not float(self.w(self.r0)) > 0.0:
            raise PositivityError(f"w(r0) = {float(self.w(self.r0))!r} <= 0 at r0={self.r0!r}")

    def describe(self) -> str:
        kv = ", ".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{self.family}({kv}; r0={self.r0:g})"


def _const(value: float) -> Radial:
    return lambda r: np.zeros_like(np.asarray(r, dtype=float)) + value


def schwarzschild(m: float, r0: float | None = None) -> RadialConformalMetric:
    """Spatial Schwarzschild of mass m; r0 defaults to the horizon m/2."""
    m = float(m)
    if r0 is None:
        if m <= 0.0:
            raise DomainError("the horizon default r0 = m/2 needs m > 0")
        r0 = m / 2.0
    r0 = float(r0)
    if r0 < abs(m) / 2.0:
        raise DomainError(f"Schwarzschild needs r0 >= |m|/2, got m={m!r}, r0={r0!r}")
    h = m / 2.0
    return RadialConformalMetric(
        w=lambda r: 1.0 + h / np.asarray(r, dtype=float),
        dw=lambda r: -h / np.asarray(r, dtype=float) ** 2,
        d2w=lambda r: 2.0 * h / np.asarray(r, dtype=float) ** 3,
        r0=r0, family="schwarzschild", params={"m": m}, decay_tau=1.0,
    )


def euclidean(r0: float) -> RadialConformalMetric:
    return RadialConformalMetric(w=_const(1.0), dw=_const(0.0), d2w=_const(0.0),
                                 r0=float(r0), family="euclidean", params={},
                                 decay_tau=math.inf)


def perturbed_horizon(A: float, b: float) -> float:
    """The radius where the coordinate sphere of the perturbed family is minimal.

    H = 0 is 2w/r + 4w' = 0, which for w = 1 + A/r - b e^{-r}/r reduces to
    r - A + b (2r + 1) e^{-r} = 0. The root lies in (0, A] for 0 <= b <= A.
    """
    A = float(A)
    b = float(b)
    if b == 0.0:
        return A
    g = lambda r: r - A + b * (2.0 * r + 1.0) * math.exp(-r)
    lo = 1e-12
    if g(lo) >= 0.0:
        raise DomainError(f"no minimal sphere for A={A!r}, b={b!r}")
    return optimize.brentq(g, lo, A, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


def perturbed(A: float, b: float, r0: float | None = None) -> RadialConformalMetric:
    """w = 1 + A/r - b e^{-r}/r with 0 <= b <= A; r0 defaults to the minimal sphere."""
    A = float(A)
    b = float(b)
    if not A > 0.0:
        raise DomainError(f"perturbed family needs A > 0, got {A!r}")
    if not 0.0 <= b <= A:
        raise DomainError(f"perturbed family needs 0 <= b <= A, got A={A!r}, b={b!r}")
    if r0 is None:
        r0 = perturbed_horizon(A, b)

    def w(r):
        r = np.asarray(r, dtype=float)
        return 1.0 + (A - b * np.exp(-r)) / r

    def dw(r):
        r = np.asarray(r, dtype=float)
        e = b * np.exp(-r)
        return (e * r + e - A) / r ** 2

    def d2w(r):
        r = np.asarray(r, dtype=float)
        e = b * np.exp(-r)
        # (r w)'' = -b e^{-r}  =>  w'' = -2w'/r - b e^{-r}/r
        return -2.0 * (e * r + e - A) / r ** 3 - e / r

    return RadialConformalMetric(w=w, dw=dw, d2w=d2w, r0=float(r0), family="perturbed",
                                 params={"A": A, "b": b}, decay_tau=1.0)


def power(c: float, s: float, r0: float) -> RadialConformalMetric:
    """w = 1 + c r^-s; superharmonic for c > 0 and 0 < s < 1."""
    c = float(c)
    s = float(s)
    return RadialConformalMetric(
        w=lambda r: 1.0 + c * np.asarray(r, dtype=float) ** -s,
        dw=lambda r: -c * s * np.asarray(r, dtype=float) ** (-s - 1.0),
        d2w=lambda r: c * s * (s + 1.0) * np.asarray(r, dtype=float) ** (-s - 2.0),
        r0=float(r0), family="power", params={"c": c, "s": s}, decay_tau=s,
    )


def from_family(family: str, params: Mapping[str, float], r0: float | str | None = None
                ) -> RadialConformalMetric:
    """Build a built-in family from a name and parameter map (used by scenario files).

    ``r0`` may be a number, ``None`` or ``"horizon"`` (the minimal sphere).
    """
    if isinstance(r0, str):
        if r0.strip().lower() != "horizon":
            raise DomainError(f"r0 must be a number or 'horizon', got {r0!r}")
        r0 = None
    required = {"schwarzschild": ("m",), "euclidean": (), "perturbed": ("A", "b"),
                "power": ("c", "s")}
    if family not in required:
        raise DomainError(f"unknown metric family {family!r}; expected one of {FAMILIES}")
    missing = [k for k in required[family] if k not in params]
    extra = sorted(set(params) - set(required[family]))
    if missing:
        raise DomainError(f"family {family!r} is missing parameter {missing[0]!r}")
    if extra:
        raise DomainError(f"family {family!r} does not take parameter {extra[0]!r}")
    if family == "schwarzschild":
        return schwarzschild(params["m"], r0)
    if family == "perturbed":
        return perturbed(params["A"], params["b"], r0)
    if r0 is None:
        raise DomainError(f"{family} metric needs an explicit r0")
    if family == "euclidean":
        return euclidean(r0)
    return power(params["c"], params["s"], r0)


def _check_r(metric: RadialConformalMetric, r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.any(r < metric.r0 * (1.0 - 1e-15)):
        raise DomainError(f"radius below r0={metric.r0!r}")
    return r


def scalar_curvature(metric: RadialConformalMetric, r):
    """R = -8 w^-5 (w'' + 2w'/r)."""
    r = _check_r(metric, r)
    w = metric.w(r)
    return -8.0 * w ** -5 * (metric.d2w(r) + 2.0 * metric.dw(r) / r)


def sphere_geometry(metric: RadialConformalMetric, r):
    """Area and mean curvature of the coordinate sphere S_r.

    area = 4 pi r^2 w^4 and H = w^-3 (2w/r + 4w').
    """
    r = _check_r(metric, r)
    w = metric.w(r)
    area = 4.0 * np.pi * r ** 2 * w ** 4
    H = w ** -3 * (2.0 * w / r + 4.0 * metric.dw(r))
    return area, H


def adm_mass(metric: RadialConformalMetric, R: float | None = None, *,
             tol: float = DEFAULT_TOL.mass_extrapolation) -> float:
    """ADM mass read off the 1/r falloff of w.

    M(r) = 2r(w(r) - 1) tends to the mass. One Richardson step removes the
    1/r correction at R and 2R; the two extrapolants must agree to ``tol``
    (relative to max(1, |mass|)), which fails when the falloff is slower than 1/r.
    """
    if R is None:
        R = 1e3 * max(metric.r0, 1.0)
    radii = np.array([R, 2.0 * R, 4.0 * R])
    M = 2.0 * radii * (metric.w(radii) - 1.0)
    first = 2.0 * M[1] - M[0]
    second = 2.0 * M[2] - M[1]
    if not (math.isfinite(first) and math.isfinite(second)):
        raise MassNonconvergenceError(f"non-finite mass extrapolants for {metric.describe()}")
    spread = abs(second - first)
    if spread > tol * max(1.0, abs(second)):
        raise MassNonconvergenceError(
            f"ADM mass of {metric.describe()} does not converge: extrapolants "
            f"{first:.6e} and {second:.6e} at R={R:g}")
    return float(second)


@dataclass(frozen=True)
class AdmissibilityReport:
    min_curvature: float
    r_at_min: float
    min_w: float
    n: int


def check_admissible(metric: RadialConformalMetric, *, n: int = 400, span: float = 1e4,
                     floor: float = DEFAULT_TOL.curvature_floor,
                     raise_on_fail: bool = True) -> AdmissibilityReport:
    """Sampled gate: w > 0 and R >= -floor on n log-spaced radii in [r0, span*r0]."""
    r = np.geomspace(metric.r0, span * metric.r0, n)
    w = metric.w(r)
    R = scalar_curvature(metric, r)
    i = int(np.argmin(R))
    report = AdmissibilityReport(float(R[i]), float(r[i]), float(np.min(w)), n)
    if raise_on_fail:
        if report.min_w <= 0.0:
            raise PositivityError(f"w <= 0 on the sample grid of {metric.describe()}")
        if report.min_curvature < -floor:
            raise AdmissibilityError(
                f"scalar curvature {report.min_curvature:.3e} < 0 at r={report.r_at_min:g} "
                f"for {metric.describe()}")
    return report
