"""Radial p-capacitary functions on g = w^4 delta.

For a radial u the p-Laplace equation reduces to

    (p-1) u'' + (2/r) u' + 2(3-p) u' (ln w)' = 0,

whose solution with u(r0) = 0 and u -> 1 is u' = C r^(-a-1) w^(-2a) with
C = 1 / int_{r0}^inf s^(-a-1) w^(-2a) ds. The constant C is the normalized
capacity cp.

All tail integrals are taken in the variable z = r^-a, where

    T(r) = int_r^inf s^(-a-1) w(s)^(-2a) ds = (1/a) int_0^{r^-a} W(z) dz,
    W(z) = w(z^(-1/a))^(-2a),

a bounded integrand on a finite interval with W(0) = 1. The cumulative
integral of W is tabulated once per solution on log-spaced radii, so the
complement 1 - u is available to full relative precision even where u is
within 1e-10 of 1.

Level sets of a radial solution are coordinate spheres and u' > 0
everywhere, so every level value in [0, 1) is regular.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import BracketError, PositivityError, QuadratureError
from .radial_metric import RadialConformalMetric, scalar_curvature, sphere_geometry
from .specfun import PExponentParams, SchwarzschildModel, model_level_complement

_GL_X, _GL_W = np.polynomial.legendre.leggauss(12)

DEFAULT_NODES = 2048
DEFAULT_SPAN = 1e6


class CapacitarySolution:
    """The normalized radial solution on a fixed metric. Immutable after construction."""

    def __init__(self, metric: RadialConformalMetric, params: PExponentParams, *,
                 nodes: int = DEFAULT_NODES, span: float = DEFAULT_SPAN):
        self.metric = metric
        self.params = params
        a = params.a
        r_nodes = np.geomspace(metric.r0, span * metric.r0, nodes)
        w_nodes = metric.w(r_nodes)
        if np.any(~(w_nodes > 0.0)):
            raise PositivityError(f"w <= 0 on the solution grid of {metric.describe()}")
        # ascending in z: z[0] = (span r0)^-a, z[-1] = r0^-a
        z = r_nodes[::-1] ** -a
        z[-1] = metric.r0 ** -a
        if not (z[0] > 0.0 and np.isfinite(z[-1])):
            raise QuadratureError(f"z = r^-a under/overflows for a={a:g}, r0={metric.r0:g}")
        self._z = z
        lo, hi = z[:-1], z[1:]
        panels = self._panel(lo, hi)
        innermost = self._inner_integral(z[0])
        self._cum = np.concatenate(([innermost], innermost + np.cumsum(panels)))
        self._total = float(self._cum[-1])
        self.norm_C = a / self._total
        self.cp = self.norm_C
        self.cap_p = 4.0 * math.pi * self.cp ** (params.p - 1.0)

    def __repr__(self):
        return (f"CapacitarySolution({self.metric.describe()}, p={self.params.p:g}, "
                f"cp={self.cp:.15g})")

    # -- integrand in z ------------------------------------------------------
    def _W(self, z):
        a = self.params.a
        r = np.asarray(z, dtype=float) ** (-1.0 / a)
        w = self.metric.w(r)
        if np.any(~(w > 0.0)):
            raise PositivityError(f"w <= 0 inside the domain of {self.metric.describe()}")
        return w ** (-2.0 * a)

    def _panel(self, lo, hi):
        lo = np.asarray(lo, dtype=float)
        hi = np.asarray(hi, dtype=float)
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        nodes = mid[..., None] + half[..., None] * _GL_X
        return half * (self._W(nodes) @ _GL_W)

    def _inner_integral(self, z_hi: float) -> float:
        # int_0^z_hi W dz with z = z_hi y; W(0) = 1 with a z^(1/a) cusp at 0
        val, err, *_ = integrate.quad(lambda y: float(self._W(z_hi * y)) if y > 0 else 1.0,
                                      0.0, 1.0, epsabs=1e-15, epsrel=1e-13, limit=200,
                                      full_output=1)
        if not math.isfinite(val) or err > 1e-10:
            raise QuadratureError(f"innermost tail integral failed (err {err:.2e})")
        return z_hi * val

    def _cum_at(self, z):
        """int_0^z W, vectorized."""
        z = np.atleast_1d(np.asarray(z, dtype=float))
        out = np.empty_like(z)
        inner = z < self._z[0]
        if np.any(inner):
            out[inner] = [self._inner_integral(zi) if zi > 0 else 0.0 for zi in z[inner]]
        rest = ~inner
        if np.any(rest):
            zr = np.minimum(z[rest], self._z[-1])
            j = np.clip(np.searchsorted(self._z, zr, side="right") - 1, 0, len(self._z) - 2)
            out[rest] = self._cum[j] + self._panel(self._z[j], zr)
        return out

    # -- the solution --------------------------------------------------------
    def complement(self, r):
        """1 - u(r), accurate in relative terms for large r."""
        r = np.asarray(r, dtype=float)
        z = r ** -self.params.a
        q = self._cum_at(z) / self._total
        return q.reshape(r.shape) if r.shape else float(q[0])

    def u(self, r):
        return 1.0 - self.complement(r)

    def du(self, r):
        """u'(r) = cp r^(-a-1) w^(-2a)."""
        r = np.asarray(r, dtype=float)
        a = self.params.a
        return self.norm_C * r ** (-a - 1.0) * self.metric.w(r) ** (-2.0 * a)

    def grad_norm(self, r):
        """|grad u|_g = w^-2 u'."""
        r = np.asarray(r, dtype=float)
        return self.metric.w(r) ** -2 * self.du(r)


def solve(metric: RadialConformalMetric, params: PExponentParams, *,
          nodes: int = DEFAULT_NODES, span: float = DEFAULT_SPAN) -> CapacitarySolution:
    """Radial p-capacitary function of ``metric``; the integral table is built eagerly."""
    return CapacitarySolution(metric, params, nodes=nodes, span=span)


def ode_residual(sol: CapacitarySolution, r, *, rel_step: float = 1e-3):
    """Scaled residual of the radial p-Laplace ODE at radii ``r``.

    u' and u'' come from five-point differences of the tabulated complement,
    so this checks the table against the equation rather than the closed-form
    derivative. The residual is divided by the sum of magnitudes of its terms.
    """
    r = np.atleast_1d(np.asarray(r, dtype=float))
    h = rel_step * r
    q = [sol.complement(r + j * h) for j in (-2, -1, 0, 1, 2)]
    d1 = -(q[0] - 8.0 * q[1] + 8.0 * q[3] - q[4]) / (12.0 * h)
    d2 = -(-q[0] + 16.0 * q[1] - 30.0 * q[2] + 16.0 * q[3] - q[4]) / (12.0 * h * h)
    p = sol.params.p
    w = sol.metric.w(r)
    dlogw = sol.metric.dw(r) / w
    terms = np.stack([(p - 1.0) * d2, 2.0 / r * d1, 2.0 * (3.0 - p) * d1 * dlogw])
    return terms.sum(axis=0) / np.abs(terms).sum(axis=0)


def level_radius(sol: CapacitarySolution, level: float | None = None, *,
                 complement: float | None = None, max_iter: int = 60) -> float:
    """The radius r >= r0 with u(r) = level.

    Pass ``complement = 1 - level`` instead when the level is close to 1; the
    root is then located to full relative precision. Newton steps in
    z = r^-a (where the cumulative integral is nearly linear) fall back to
    bisection after three steps that fail to contract.
    """
    if complement is None:
        if level is None:
            raise TypeError("give level or complement")
        complement = 1.0 - float(level)
    q = float(complement)
    if not q > 0.0:
        raise BracketError(f"level {1.0 - q!r} is not below 1; no finite radius attains it")
    if q > 1.0:
        raise BracketError(f"level {1.0 - q!r} is below 0; u >= 0 on the domain")
    if q == 1.0:
        return sol.metric.r0
    target = q * sol._total
    zs, cum = sol._z, sol._cum
    if target >= cum[0]:
        j = min(int(np.searchsorted(cum, target, side="right")) - 1, len(zs) - 2)
        lo, hi = zs[j], zs[j + 1]
        f_lo, f_hi = cum[j] - target, cum[j + 1] - target
        z = lo + (hi - lo) * (-f_lo) / (f_hi - f_lo)
    else:
        lo, hi = 0.0, zs[0]
        z = target
    last_step = math.inf
    stalls = 0
    for _ in range(max_iter):
        g = float(sol._cum_at(z)[0]) - target
        if g == 0.0:
            break
        if g > 0.0:
            hi = z
        else:
            lo = z
        step = g / float(sol._W(z))
        z_new = z - step
        if abs(step) > 0.5 * last_step:
            stalls += 1
        last_step = abs(step)
        if stalls >= 3 or not lo <= z_new <= hi:
            z_new = 0.5 * (lo + hi)
            stalls = 0
        if abs(z_new - z) <= 2e-16 * z:
            z = z_new
            break
        z = z_new
    else:
        raise BracketError(f"level search for complement {q:.6e} did not converge")
    return float(z ** (-1.0 / sol.params.a))


@dataclass(frozen=True)
class LevelSurfaceSample:
    """Geometry of the level sphere {u = f(t)} and the integrals F(t) consumes."""

    t: float
    level: float
    complement: float
    r: float
    area: float
    H: float
    grad_u: float
    int_H_grad: float
    int_grad_sq: float
    int_H_sq: float
    int_R: float


def surface_at_radius(sol: CapacitarySolution, r: float, *, t: float = math.nan,
                      complement: float | None = None) -> LevelSurfaceSample:
    """Integrals over the coordinate sphere S_r; radial symmetry makes each a product."""
    area, H = (float(v) for v in sphere_geometry(sol.metric, r))
    g = float(sol.grad_norm(r))
    q = float(sol.complement(r)) if complement is None else float(complement)
    R = float(scalar_curvature(sol.metric, r))
    return LevelSurfaceSample(
        t=t, level=1.0 - q, complement=q, r=float(r), area=area, H=H, grad_u=g,
        int_H_grad=area * H * g, int_grad_sq=area * g * g, int_H_sq=area * H * H,
        int_R=area * R,
    )


def sample_level_surface(sol: CapacitarySolution, model: SchwarzschildModel,
                         t: float) -> LevelSurfaceSample:
    """Sample Sigma_t = {u = f(t)} where f is the model's level function."""
    q = model_level_complement(t, model)
    r = level_radius(sol, complement=q)
    return surface_at_radius(sol, r, t=float(t), complement=q)


def boundary_sample(sol: CapacitarySolution) -> LevelSurfaceSample:
    """The boundary sphere, u = 0."""
    return surface_at_radius(sol, sol.metric.r0, complement=1.0)


@dataclass(frozen=True)
class AsymptoticDiagnostics:
    slope_u: float
    slope_grad: float
    area_ratio: float
    fit_residual_u: float
    fit_residual_grad: float
    r_range: tuple


def asymptotic_diagnostics(sol: CapacitarySolution, *, lo: float = 1e2, hi: float = 1e4,
                           n: int = 64) -> AsymptoticDiagnostics:
    """Log-log slopes of 1 - u and u' on [lo r0, hi r0], and |S_r| / 4 pi r^2 at hi r0.

    Expected: slope_u -> -a, slope_grad -> -(a+1), area_ratio -> 1.
    """
    r = np.geomspace(lo * sol.metric.r0, hi * sol.metric.r0, n)
    x = np.log(r)
    yu = np.log(sol.complement(r))
    yg = np.log(sol.du(r))
    cu, ru = np.polyfit(x, yu, 1, full=True)[:2]
    cg, rg = np.polyfit(x, yg, 1, full=True)[:2]
    area, _ = sphere_geometry(sol.metric, r[-1])
    rms = lambda res: float(math.sqrt(res[0] / n)) if len(res) else 0.0
    return AsymptoticDiagnostics(
        slope_u=float(cu[0]), slope_grad=float(cg[0]),
        area_ratio=float(area / (4.0 * math.pi * r[-1] ** 2)),
        fit_residual_u=rms(ru), fit_residual_grad=rms(rg),
        r_range=(float(r[0]), float(r[-1])),
    )
