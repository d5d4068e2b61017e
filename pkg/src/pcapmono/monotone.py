"""The monotone quantity F(t) along level sets of the capacitary function.

    F(t) = 4 pi gamma(t) + alpha(t) int H |grad u| + beta(t) int |grad u|^2

over Sigma_t = {u = f(t)}, with f the model level function. The coefficient
functions solve

    alpha' - (2a+1) eta f' alpha - a f' beta = 0
    beta'  + (2a+1) eta^2 f' alpha          = 0
    gamma' = -f' alpha

in closed form. Throughout, R(t) = 1 - f(t) = I_a(m/2t)/I_a(k) and

    P(t) = C2 cp m/a + C1 R(t)

so that alpha = t(1+m/2t)^2 {(a/m) P eta - C1/m}.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InadmissibleCoefficientsError, MassNonconvergenceError
from .radial_metric import adm_mass
from .settings import DEFAULT_TOL, Tolerances
from .solver import CapacitarySolution, LevelSurfaceSample, sample_level_surface
from .specfun import (SchwarzschildModel, _check_t, eta, level_defect,
                      model_level_complement, model_level_derivative)

ROUNDOFF = 1e-12

PRESETS = ("AMMO", "HMT", "thm11-a", "thm11-b", "thm12-a", "thm12-b")


@dataclass(frozen=True)
class CoefficientChoice:
    model: SchwarzschildModel
    C1: float
    C2: float
    C3: float = 0.0
    label: str = "custom"

    def predicate(self) -> bool:
        """The closed-form test for alpha >= 0 on [r0, inf).

        Boundary cases where alpha(r0) = 0 exactly (such as thm12-b) are
        accepted within a roundoff band of ROUNDOFF relative.
        """
        model = self.model
        if self.C2 < 0.0:
            return False
        if model.k == 0.0:
            # alpha = C2 t^(a+1) - C1/(a+1) is nondecreasing once C2 >= 0
            a = model.a
            head = self.C2 * model.r0 ** (a + 1.0)
            tail = self.C1 / (a + 1.0)
            return head - tail >= -ROUNDOFF * (abs(head) + abs(tail))
        if model.k == 1.0:
            return self.C1 <= 0.0
        a, m = model.a, model.m
        lhs = (self.C2 * model.cp + self.C1 * a / m) * eta(model.r0, model)
        rhs = self.C1 / m
        return lhs - rhs >= -ROUNDOFF * (abs(lhs) + abs(rhs))


def _alpha(model: SchwarzschildModel, C1: float, C2: float, t: float, e: float) -> float:
    # t w^2 (a P eta - C1) / m, regrouped so nothing is divided by m
    w = 1.0 + model.x(t)
    return t * w * w * (C2 * model.cp * e + C1 * level_defect(t, model))


def _alpha_beta_gamma(model: SchwarzschildModel, C1: float, C2: float, C3: float, t: float):
    a, m, cp = model.a, model.m, model.cp
    e = eta(t, model)
    R = model_level_complement(t, model)
    P = C2 * cp * m / a + C1 * R
    w = 1.0 + model.x(t)
    alpha = _alpha(model, C1, C2, t, e)
    beta = -e * alpha + P * cp ** -2 * t ** (2.0 * a) * w ** (4.0 * a)
    gamma = -cp * cp * t ** (-2.0 * a) * w ** (-4.0 * a) * e * alpha - P + C3
    return alpha, beta, gamma


def coefficients_k0(model: SchwarzschildModel, C1: float, C2: float, t: float,
                    C3: float = 0.0):
    """alpha, beta, gamma for k = 0 (m = 0, eta = t^a/cp, f' = cp t^(-a-1))."""
    t = _check_t(t, model, "k = 0 coefficients")
    a, cp = model.a, model.cp
    alpha = C2 * t ** (a + 1.0) - C1 / (a + 1.0)
    beta = C1 * (2.0 * a + 1.0) / (a * (a + 1.0)) * t ** a / cp - C2 * t ** (2.0 * a + 1.0) / cp
    gamma = -C2 * cp * t - C1 * cp * t ** -a / (a * (a + 1.0)) + C3
    return alpha, beta, gamma


def coefficients(choice: CoefficientChoice, t: float):
    """(alpha, beta, gamma) at t >= r0."""
    model = choice.model
    if model.k == 0.0:
        return coefficients_k0(model, choice.C1, choice.C2, t, choice.C3)
    t = _check_t(t, model, "coefficients")
    return _alpha_beta_gamma(model, choice.C1, choice.C2, choice.C3, t)


def alpha_value(choice: CoefficientChoice, t: float) -> float:
    """alpha alone; cheaper than ``coefficients`` when beta and gamma are not needed."""
    model = choice.model
    if model.k == 0.0:
        t = _check_t(t, model, "alpha")
        return choice.C2 * t ** (model.a + 1.0) - choice.C1 / (model.a + 1.0)
    t = _check_t(t, model, "alpha")
    return _alpha(model, choice.C1, choice.C2, t, eta(t, model))


def preset_choice(name: str, model: SchwarzschildModel, C3: float = 0.0) -> CoefficientChoice:
    """Named coefficient choices.

    AMMO and HMT are the two k = 0 choices (C2 = 1/cp, C1 = 0) and
    (C2 = 0, C1 = -a(a+1)/cp). The thm11 pair is for k = 1 and the thm12 pair
    for any k != 0; the "-a" member is (C2, C1) = (0, -1), the "-b" member is
    C2 = 1/cp with C1 = 0 for k = 1 and C1 = m eta(r0)/(1 - a eta(r0)) otherwise,
    which makes alpha(r0) vanish.
    """
    a, cp, k = model.a, model.cp, model.k
    if name in ("AMMO", "HMT"):
        if k != 0.0:
            raise DomainError(f"preset {name} needs k = 0, got k={k!r}")
        if name == "AMMO":
            return CoefficientChoice(model, 0.0, 1.0 / cp, C3, name)
        return CoefficientChoice(model, -a * (a + 1.0) / cp, 0.0, C3, name)
    if name in ("thm11-a", "thm11-b") and k != 1.0:
        raise DomainError(f"preset {name} needs k = 1, got k={k!r}")
    if name in ("thm12-a", "thm12-b") and k == 0.0:
        raise DomainError(f"preset {name} needs k != 0")
    if name in ("thm11-a", "thm12-a"):
        return CoefficientChoice(model, -1.0, 0.0, C3, name)
    if name == "thm11-b":
        return CoefficientChoice(model, 0.0, 1.0 / cp, C3, name)
    if name == "thm12-b":
        e0 = eta(model.r0, model)
        return CoefficientChoice(model, model.m * e0 / (1.0 - a * e0), 1.0 / cp, C3, name)
    raise DomainError(f"unknown preset {name!r}; expected one of {PRESETS}")


# -- ODE verification ---------------------------------------------------------

@dataclass(frozen=True)
class ODEResidual:
    t: float
    residuals: tuple
    scales: tuple

    @property
    def scaled(self) -> tuple:
        return tuple(abs(r) / s if s > 0 else abs(r) for r, s in zip(self.residuals, self.scales))

    @property
    def worst(self) -> float:
        return max(self.scaled)


def _derivative(fn, t: float, h: float):
    return (fn(t + h) - fn(t - h)) / (2.0 * h)


def ode_residual(choice: CoefficientChoice, t: float) -> ODEResidual:
    """Plug central differences of the closed forms into the first-order system.

    Each residual is paired with the sum of magnitudes of its terms plus
    |coefficient|/t, the natural rate of change. The extra term keeps the ratio
    meaningful where every term vanishes (beta' near a horizon), where the
    difference quotient is otherwise all roundoff.
    """
    model = choice.model
    a = model.a
    h = max(1e-5 * t, 1e-7)
    if t - h < model.r0:
        raise DomainError(f"ode_residual needs t - h >= r0; t={t!r} is too close to r0")
    al, be, ga = coefficients(choice, t)
    fp = model_level_derivative(t, model)
    e = t ** a / model.cp if model.k == 0.0 else eta(t, model)
    d = [_derivative(lambda s, i=i: coefficients(choice, s)[i], t, h) for i in range(3)]
    t1 = (d[0], (2 * a + 1) * e * fp * al, a * fp * be)
    t2 = (d[1], (2 * a + 1) * e * e * fp * al)
    t3 = (d[2], fp * al)
    residuals = (t1[0] - t1[1] - t1[2], t2[0] + t2[1], t3[0] + t3[1])
    scales = tuple(sum(abs(v) for v in terms) + abs(c) / t
                   for terms, c in zip((t1, t2, t3), (al, be, ga)))
    return ODEResidual(t, residuals, scales)


def _five_point(fn, t: float, h: float):
    v = [fn(t + j * h) for j in (-2, -1, 0, 1, 2)]
    d1 = (v[0] - 8 * v[1] + 8 * v[3] - v[4]) / (12 * h)
    d2 = (-v[0] + 16 * v[1] - 30 * v[2] + 16 * v[3] - v[4]) / (12 * h * h)
    return v[2], d1, d2


def alpha_second_order_residual(model: SchwarzschildModel, alpha, t: float,
                                rel_step: float = 2e-3) -> float:
    """Scaled residual of the second-order equation for alpha,

        t^2 (1+m/2t)^2 alpha'' + t (1+m/2t)(-a + (a+2) m/2t) alpha' - 2(2a+1)(m/2t) alpha = 0,

    with five-point differences of the callable ``alpha`` at steps h and h/2,
    combined by one Richardson step.
    """
    a = model.a
    h = rel_step * t
    v, d1h, d2h = _five_point(alpha, t, h)
    _, d1q, d2q = _five_point(alpha, t, 0.5 * h)
    d1 = (16.0 * d1q - d1h) / 15.0
    d2 = (16.0 * d2q - d2h) / 15.0
    x = 0.0 if model.k == 0.0 else model.x(t)
    terms = (t * t * (1 + x) ** 2 * d2,
             t * (1 + x) * (-a + (a + 2) * x) * d1,
             -2 * (2 * a + 1) * x * v)
    scale = sum(abs(s) for s in terms)
    return abs(sum(terms)) / scale if scale > 0 else 0.0


def special_alpha(model: SchwarzschildModel):
    """t^(a+1) (1+m/2t)^(2a+1) (1-m/2t), a particular solution of the alpha equation."""
    a = model.a
    return lambda t: t ** (a + 1) * (1 + model.x(t)) ** (2 * a + 1) * (1 - model.x(t))


# -- alpha >= 0 ---------------------------------------------------------------

@dataclass(frozen=True)
class AlphaCriterion:
    predicate: bool
    sampled_nonneg: bool
    min_alpha: float
    t_at_min: float
    n: int

    @property
    def agree(self) -> bool:
        return self.predicate == self.sampled_nonneg

    def __bool__(self):
        return self.predicate


def alpha_nonneg(choice: CoefficientChoice, *, n: int = 400, span: float = 1e6) -> AlphaCriterion:
    """The closed-form alpha >= 0 test, cross-checked on n log-spaced t in [r0, span r0]."""
    r0 = choice.model.r0
    ts = np.geomspace(r0, span * r0, n)
    alphas = np.array([alpha_value(choice, t) for t in ts])
    i = int(np.argmin(alphas))
    scale = 1e-12 * max(1.0, abs(choice.C1), float(np.max(np.abs(alphas[:2]))))
    return AlphaCriterion(
        predicate=bool(choice.predicate()),
        sampled_nonneg=bool(alphas[i] >= -scale),
        min_alpha=float(alphas[i]), t_at_min=float(ts[i]), n=n,
    )


# -- F(t) ---------------------------------------------------------------------

@dataclass(frozen=True)
class MonotoneSample:
    t: float
    alpha: float
    beta: float
    gamma: float
    F: float
    F_alt: float | None
    surface: LevelSurfaceSample


def F_from_parts(alpha: float, beta: float, gamma: float, s: LevelSurfaceSample) -> float:
    return 4.0 * math.pi * gamma + alpha * s.int_H_grad + beta * s.int_grad_sq


def F_reformulated(choice: CoefficientChoice, t: float, alpha: float,
                   s: LevelSurfaceSample) -> float | None:
    """F rewritten as a sum of a capacity term, a square, a Willmore term and a
    mass-like term. Needs m != 0 and eta(t) > 0; returns None otherwise."""
    model = choice.model
    if model.m == 0.0:
        return None
    e = eta(t, model)
    if not e > 0.0:
        return None
    a, m, cp = model.a, model.m, model.cp
    x = model.x(t)
    P = choice.C2 * cp * m / a + choice.C1 * model_level_complement(t, model)
    square = s.int_H_sq - 4.0 * e * s.int_H_grad + 4.0 * e * e * s.int_grad_sq
    ratio = alpha / e
    rho = ((1.0 - x) / (1.0 + x)) ** 2
    return (-P * (4.0 * math.pi - cp ** -2 * t ** (2 * a) * (1 + x) ** (4 * a) * s.int_grad_sq)
            - 0.25 * ratio * square
            - 0.25 * ratio * (16.0 * math.pi - s.int_H_sq)
            - 4.0 * math.pi * ratio * (rho - 1.0)
            + 4.0 * math.pi * choice.C3)


def _require_admissible(choice: CoefficientChoice):
    if not choice.predicate():
        raise InadmissibleCoefficientsError(
            f"C1={choice.C1!r}, C2={choice.C2!r} do not keep alpha >= 0 for k={choice.model.k!r}")


def _require_same_capacity(sol: CapacitarySolution, model: SchwarzschildModel):
    if abs(sol.cp - model.cp) > 1e-12 * sol.cp:
        raise DomainError(f"model cp={model.cp!r} differs from the solution's cp={sol.cp!r}")


def evaluate_F(sol: CapacitarySolution, choice: CoefficientChoice, t: float) -> MonotoneSample:
    _require_admissible(choice)
    _require_same_capacity(sol, choice.model)
    s = sample_level_surface(sol, choice.model, t)
    al, be, ga = coefficients(choice, s.t)
    return MonotoneSample(s.t, al, be, ga, F_from_parts(al, be, ga, s),
                          F_reformulated(choice, s.t, al, s), s)


def F_derivative_identity(choice: CoefficientChoice, sample: MonotoneSample) -> float:
    """dF/dt on a radial metric, from the level-set integrals alone:

        F'(t) = gamma'(t) [ (1/2) int R + (2a+1) int (H/2 - eta |grad u|)^2 ],

    with gamma' = -f' alpha <= 0. Nonpositive whenever R >= 0 and alpha >= 0.
    """
    model = choice.model
    a, t, s = model.a, sample.t, sample.surface
    e = t ** a / model.cp if model.k == 0.0 else eta(t, model)
    dgamma = -model_level_derivative(t, model) * sample.alpha
    square = 0.25 * s.int_H_sq - e * s.int_H_grad + e * e * s.int_grad_sq
    return dgamma * (0.5 * s.int_R + (2 * a + 1) * square)


# -- scans --------------------------------------------------------------------

def default_grid(model: SchwarzschildModel, n: int = 256, span: float = 1e3,
                 spacing: str = "log") -> np.ndarray:
    r0 = model.r0
    if spacing == "log":
        grid = np.geomspace(r0, span * r0, n)
    elif spacing == "linear":
        grid = np.linspace(r0, span * r0, n)
    else:
        raise DomainError(f"grid spacing must be 'log' or 'linear', got {spacing!r}")
    grid[0] = r0
    return grid


@dataclass(frozen=True)
class ScanReport:
    label: str
    samples: tuple
    t: np.ndarray = field(repr=False)
    F: np.ndarray = field(repr=False)
    dF: np.ndarray = field(repr=False)
    max_increase: float
    tol: float
    monotone: bool
    F_final: float
    m_adm: float | None
    limit_bound: float | None
    limit_ok: bool | None

    @property
    def passed(self) -> bool:
        return self.monotone and self.limit_ok is not False

    @property
    def scale(self) -> float:
        return 1.0 + float(np.max(np.abs(self.F)))

    def summary(self) -> dict:
        return {
            "label": self.label, "n": len(self.samples),
            "t_min": float(self.t[0]), "t_max": float(self.t[-1]),
            "max_increase": self.max_increase, "tol": self.tol,
            "monotone": self.monotone, "F_first": float(self.F[0]),
            "F_final": self.F_final, "max_abs_F": float(np.max(np.abs(self.F))),
            "m_adm": self.m_adm, "limit_bound": self.limit_bound, "limit_ok": self.limit_ok,
            "verdict": "PASS" if self.passed else "FAIL",
        }


def monotonicity_scan(sol: CapacitarySolution, choice: CoefficientChoice, grid=None, *,
                      tol: Tolerances = DEFAULT_TOL, threads: int = 1,
                      m_adm: float | None = None, limit_slack: float = 1e-4) -> ScanReport:
    """Sample F on an increasing grid and certify it is non-increasing.

    Monotone means every forward difference is at most mono_rel (1 + max|F|).
    The last value is also compared with -8 pi C2 cp (m_ADM - m) when the
    ADM mass converges. Grid points may be evaluated on a thread pool; results
    are collected in grid order, so the report does not depend on ``threads``.
    """
    _require_admissible(choice)
    _require_same_capacity(sol, choice.model)
    grid = default_grid(choice.model) if grid is None else np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2 or np.any(np.diff(grid) <= 0):
        raise DomainError("scan grid must be strictly increasing with at least two points")
    work = lambda t: evaluate_F(sol, choice, float(t))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            samples = tuple(pool.map(work, grid))
    else:
        samples = tuple(map(work, grid))
    F = np.array([s.F for s in samples])
    if not np.all(np.isfinite(F)):
        bad = grid[~np.isfinite(F)][0]
        raise DomainError(f"F is not finite at t={bad!r}")
    dF = np.diff(F)
    scale = 1.0 + float(np.max(np.abs(F)))
    mono_tol = tol.mono_rel * scale
    max_inc = float(np.max(dF))
    if m_adm is None:
        try:
            m_adm = adm_mass(sol.metric, tol=tol.mass_extrapolation)
        except MassNonconvergenceError:
            m_adm = None
    bound = limit_ok = None
    if m_adm is not None:
        model = choice.model
        bound = -8.0 * math.pi * choice.C2 * model.cp * (m_adm - model.m) + 0.0
        limit_ok = bool(F[-1] >= bound - limit_slack * scale)
    return ScanReport(choice.label, samples, grid, F, dF, max_inc, mono_tol,
                      bool(max_inc <= mono_tol), float(F[-1]), m_adm, bound, limit_ok)
