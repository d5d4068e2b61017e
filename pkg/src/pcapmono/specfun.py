"""Scalar special functions of the Schwarzschild p-capacity model.

Everything here is a pure function of its arguments. The one cached value,
``I_a(k)``, is computed when a :class:`SchwarzschildModel` is built.

Notation: ``a = (3 - p)/(p - 1)``, ``cp`` is the normalized capacity
``(Cap_p / 4 pi)^(1/(p-1))`` and ``I_a(k)`` is

    I_a(k) = int_0^|k| s^(a-1) (1 + sgn(k) s)^(-2a) ds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate, special

from .errors import DomainError, NearSingularError, QuadratureError
from .settings import DEFAULT_QUAD, DEFAULT_TOL, QuadratureSettings

# t below r0 by less than this (relative) is snapped to r0
_EDGE = 8 * 2.220446049250313e-16


@dataclass(frozen=True)
class PExponentParams:
    """The exponent ``p`` in (1, 3) and the derived decay rate ``a``."""

    p: float
    a: float

    def __post_init__(self):
        if not 1.0 < self.p < 3.0:
            raise DomainError(f"p must lie in (1, 3), got {self.p!r}")
        if not self.a > 0.0:
            raise DomainError(f"a must be positive, got {self.a!r}")
        if abs(self.a * (self.p - 1.0) - (3.0 - self.p)) > 1e-12 * max(1.0, self.a):
            raise DomainError(f"inconsistent pair p={self.p!r}, a={self.a!r}")

    @classmethod
    def from_p(cls, p: float) -> "PExponentParams":
        p = float(p)
        if not 1.0 < p < 3.0:
            raise DomainError(f"p must lie in (1, 3), got {p!r}")
        return cls(p=p, a=(3.0 - p) / (p - 1.0))

    @classmethod
    def from_a(cls, a: float) -> "PExponentParams":
        a = float(a)
        if not a > 0.0:
            raise DomainError(f"a must be positive, got {a!r}")
        return cls(p=(3.0 + a) / (1.0 + a), a=a)


def _quad(func, lo, hi, settings: QuadratureSettings, what: str, *,
          scale: float = 1.0, **kw) -> float:
    # epsabs is relative to `scale`, the integrand's typical magnitude
    epsabs = settings.epsabs * scale
    value, err, *info = integrate.quad(
        func, lo, hi, epsabs=epsabs, epsrel=settings.epsrel,
        limit=settings.limit, full_output=1, **kw,
    )
    tol = max(epsabs, settings.epsrel * abs(value))
    # QUADPACK's error estimate is pessimistic; only reject gross failures
    if not math.isfinite(value) or err > 1e3 * tol:
        raise QuadratureError(f"{what}: quadrature error estimate {err:.3e} (value {value:.6e})")
    return value


def incomplete_I(a: float, k: float, *, guard: float = DEFAULT_TOL.k_guard,
                 quad: QuadratureSettings = DEFAULT_QUAD) -> float:
    """I_a(k) for a > 0 and -1 < k <= 1.

    With s = |k| v the integral is |k|^a int_0^1 v^(a-1) (1 + sgn(k)|k| v)^(-2a) dv.
    For a >= 1 that integrand is smooth and is integrated as is. For a < 1 the
    v^(a-1) endpoint singularity is removed by v = y^(1/a):

        I_a(k) = |k|^a / a * int_0^1 (1 + sgn(k) |k| y^(1/a))^(-2a) dy.
    """
    a = float(a)
    k = float(k)
    if not a > 0.0:
        raise DomainError(f"I_a needs a > 0, got a={a!r}")
    if not -1.0 < k <= 1.0:
        raise DomainError(f"I_a needs k in (-1, 1], got k={k!r}")
    if k + 1.0 < guard:
        raise NearSingularError(
            f"k={k!r} is within {guard:g} of -1 where I_a(k) diverges")
    if k == 0.0:
        return 0.0
    x = abs(k)
    sx = x if k > 0 else -x
    what = f"I_a(k) at a={a:g}, k={k:g}"
    if a >= 1.0:
        def integrand(v):
            return v ** (a - 1.0) * (1.0 + sx * v) ** (-2.0 * a)
        # interior maximum of the integrand, for the absolute tolerance
        v_peak = min(1.0, (a - 1.0) / (sx * (a + 1.0))) if sx > 0 else 1.0
        body = _quad(integrand, 0.0, 1.0, quad, what, scale=integrand(v_peak))
        return x ** a * body
    inv_a = 1.0 / a
    body = _quad(lambda y: (1.0 + sx * y ** inv_a) ** (-2.0 * a), 0.0, 1.0, quad, what)
    return x ** a / a * body


def half_beta(a: float) -> float:
    """B(a, a) / 2 through log-gamma."""
    return 0.5 * math.exp(2.0 * special.gammaln(a) - special.gammaln(2.0 * a))


def beta_identity_residual(a: float, *, quad: QuadratureSettings = DEFAULT_QUAD) -> float:
    """I_a(1) - B(a, a)/2, which vanishes identically. Self-test only."""
    return incomplete_I(a, 1.0, quad=quad) - half_beta(a)


@dataclass(frozen=True)
class SchwarzschildModel:
    """Model parameters (k, m, r0, cp) tied together by the capacity coupling.

    For k != 0: ``m = 2 sgn(k) (I_a(k) cp)^(1/a)`` and ``r0 = m / 2k``.
    For k = 0 the limits ``m = 0`` and ``r0 = (cp/a)^(1/a)`` are used.
    """

    params: PExponentParams
    k: float
    m: float
    r0: float
    cp: float
    Ia_k: float

    @property
    def a(self) -> float:
        return self.params.a

    @property
    def p(self) -> float:
        return self.params.p

    def x(self, t: float) -> float:
        """m / 2t, written as k r0 / t so that x(r0) == k exactly."""
        return self.k * (self.r0 / t)


def model_from_capacity(params: PExponentParams, cp: float, k: float, *,
                        guard: float = DEFAULT_TOL.k_guard,
                        quad: QuadratureSettings = DEFAULT_QUAD) -> SchwarzschildModel:
    cp = float(cp)
    k = float(k)
    if not cp > 0.0:
        raise DomainError(f"cp must be positive, got {cp!r}")
    a = params.a
    if k == 0.0:
        return SchwarzschildModel(params, 0.0, 0.0, (cp / a) ** (1.0 / a), cp, 0.0)
    Ia = incomplete_I(a, k, guard=guard, quad=quad)
    m = math.copysign(2.0 * (Ia * cp) ** (1.0 / a), k)
    return SchwarzschildModel(params, k, m, m / (2.0 * k), cp, Ia)


def model_from_mass_radius(params: PExponentParams, m: float, r0: float, *,
                           guard: float = DEFAULT_TOL.k_guard,
                           quad: QuadratureSettings = DEFAULT_QUAD) -> SchwarzschildModel:
    """The model whose boundary sphere is r = r0 in the mass-m Schwarzschild space.

    The capacity is read back from the coupling, ``cp = (|m|/2)^a / I_a(k)``.
    """
    m = float(m)
    r0 = float(r0)
    if not r0 > 0.0 or r0 < abs(m) / 2.0:
        raise DomainError(f"need r0 >= |m|/2 > 0, got m={m!r}, r0={r0!r}")
    a = params.a
    if m == 0.0:
        return SchwarzschildModel(params, 0.0, 0.0, r0, a * r0 ** a, 0.0)
    k = m / (2.0 * r0)
    Ia = incomplete_I(a, k, guard=guard, quad=quad)
    cp = (abs(m) / 2.0) ** a / Ia
    return SchwarzschildModel(params, k, m, r0, cp, Ia)


def _check_t(t: float, model: SchwarzschildModel, what: str) -> float:
    t = float(t)
    if t < model.r0:
        if t >= model.r0 * (1.0 - _EDGE):
            return model.r0
        raise DomainError(f"{what}: t={t!r} lies below r0={model.r0!r}")
    return t


def eta(t: float, model: SchwarzschildModel) -> float:
    """cp^-1 t^a (1 + m/2t)^(2a-1) (1 - m/2t); equals H / 2|grad u| on the model."""
    t = _check_t(t, model, "eta")
    a = model.a
    if model.k == 0.0:
        return t ** a / model.cp
    x = model.x(t)
    return t ** a * (1.0 + x) ** (2.0 * a - 1.0) * (1.0 - x) / model.cp


def model_level_complement(t: float, model: SchwarzschildModel, *,
                           quad: QuadratureSettings = DEFAULT_QUAD) -> float:
    """1 - f(t) = I_a(m/2t) / I_a(k), computed without cancellation."""
    t = _check_t(t, model, "model level")
    if model.k == 0.0:
        return model.cp / model.a * t ** (-model.a)
    if t == model.r0:
        return 1.0
    return incomplete_I(model.a, model.x(t), quad=quad) / model.Ia_k


def level_defect(t: float, model: SchwarzschildModel, *,
                 quad: QuadratureSettings = DEFAULT_QUAD) -> float:
    """(a (1 - f(t)) eta(t) - 1) / m, free of the 1/m cancellation as k -> 0.

    Integrating I_a by parts gives a (1 - f) eta = (1 + x Q)(1 - x)/(1 + x) with
    Q = 2a (1 + x)^(2a) int_0^1 u^a (1 + x u)^(-2a-1) du, so the defect is
    (Q (1 - x) - 2) / (2t (1 + x)). At k = 0 it equals -1 / ((a + 1) t).
    """
    t = _check_t(t, model, "level defect")
    a = model.a
    x = 0.0 if model.k == 0.0 else model.x(t)
    # u^a endpoint handled by the algebraic weight
    L = _quad(lambda u: (1.0 + x * u) ** (-2.0 * a - 1.0), 0.0, 1.0, quad,
              f"level defect at t={t:g}", weight="alg", wvar=(a, 0.0))
    Q = 2.0 * a * (1.0 + x) ** (2.0 * a) * L
    return (Q * (1.0 - x) - 2.0) / (2.0 * t * (1.0 + x))


def model_level(t: float, model: SchwarzschildModel, *,
                quad: QuadratureSettings = DEFAULT_QUAD) -> float:
    """The model's level function f(t); f(r0) = 0 and f increases to 1."""
    return 1.0 - model_level_complement(t, model, quad=quad)


def model_level_derivative(t: float, model: SchwarzschildModel) -> float:
    """f'(t) = cp t^(-a-1) (1 + m/2t)^(-2a)."""
    t = _check_t(t, model, "model level derivative")
    a = model.a
    x = 0.0 if model.k == 0.0 else model.x(t)
    return model.cp * t ** (-a - 1.0) * (1.0 + x) ** (-2.0 * a)


def model_level_quadrature(t: float, model: SchwarzschildModel, *,
                           quad: QuadratureSettings = DEFAULT_QUAD) -> float:
    """f(t) straight from the tail integral, as a cross-check on the I_a ratio.

    With s = t/y the tail cp int_t^inf s^(-a-1)(1 + m/2s)^(-2a) ds becomes
    cp t^-a int_0^1 y^(a-1) (1 + m y/2t)^(-2a) dy, and the algebraic weight
    y^(a-1) is handed to QUADPACK's endpoint-singularity rule.
    """
    t = _check_t(t, model, "model level")
    a = model.a
    half_m_over_t = 0.5 * model.m / t
    tail = _quad(lambda y: (1.0 + half_m_over_t * y) ** (-2.0 * a), 0.0, 1.0, quad,
                 "level tail", weight="alg", wvar=(a - 1.0, 0.0))
    return 1.0 - model.cp * t ** (-a) * tail


def xi(t: float, model: SchwarzschildModel, *,
       quad: QuadratureSettings = DEFAULT_QUAD) -> float:
    """cp int_t^inf s^(-a-2) (1 + m/2s)^(-2a) (1 - m/2s)^(-2) ds for t > |m|/2."""
    t = float(t)
    if not t > abs(model.m) / 2.0:
        raise DomainError(f"xi: t={t!r} must exceed |m|/2={abs(model.m) / 2.0!r}")
    a = model.a
    h = 0.5 * model.m / t
    body = _quad(lambda y: (1.0 + h * y) ** (-2.0 * a) * (1.0 - h * y) ** -2.0,
                 0.0, 1.0, quad, "xi tail", weight="alg", wvar=(a, 0.0))
    return model.cp * t ** (-a - 1.0) * body


def xi_closed_form(t: float, model: SchwarzschildModel, *,
                   quad: QuadratureSettings = DEFAULT_QUAD) -> float:
    """1/(m eta(t)) - (a/m) I_a(m/2t)/I_a(k), the integrated-by-parts form of xi."""
    if model.m == 0.0:
        raise DomainError("xi closed form needs m != 0")
    return (1.0 / eta(t, model) - model.a * model_level_complement(t, model, quad=quad)) / model.m
