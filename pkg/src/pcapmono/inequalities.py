"""Geometric inequalities between capacity, boundary geometry and ADM mass.

Every evaluator returns :class:`InequalityReport` records with the slack
oriented so that ``slack >= 0`` means the inequality holds. Boundary
integrals are always taken on the exact inner sphere r = r0 of the metric.

Families of inequalities, for a model parameter k in (-1, 1]:

* ``general_k_inequalities``: k != 1, a square-completion bound and a mass bound.
* ``horizon_inequalities``: k = 1, no minimality needed.
* ``willmore_bounds``: k fixed by the boundary Willmore deficit; mass and area bounds.
* ``minimal_boundary_bounds``: the k = 1 mass and area bounds for a minimal boundary.
* ``boundary_value_reports``: F at the boundary against -8 pi C2 cp (m_ADM - m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError, NearSingularError, NotMinimalError
from .monotone import CoefficientChoice, coefficients, evaluate_F, preset_choice
from .radial_metric import adm_mass
from .settings import DEFAULT_TOL, Tolerances
from .solver import CapacitarySolution, LevelSurfaceSample, boundary_sample
from .specfun import (SchwarzschildModel, eta, half_beta, incomplete_I,
                      model_from_capacity)

NEGATIVE_K_NOTE = "equality impossible for -1 < k < 0 (negative-mass model)"


@dataclass(frozen=True)
class InequalityReport:
    name: str
    lhs: float
    rhs: float
    slack: float
    satisfied: bool
    equality: bool
    inputs: dict = field(default_factory=dict)
    note: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "slack": self.slack,
                "satisfied": self.satisfied, "equality": self.equality,
                "note": self.note, "inputs": dict(self.inputs)}


def _report(name, lhs, rhs, slack, tol: Tolerances, inputs, *, k=None, note="") -> InequalityReport:
    for label, v in (("lhs", lhs), ("rhs", rhs), ("slack", slack)):
        if not math.isfinite(v):
            raise DomainError(f"{name}: {label} is not finite ({v!r})")
    scale = max(abs(lhs), abs(rhs), 1.0)
    equality = abs(slack) < tol.eq_rel * scale
    if k is not None and k < 0.0:
        equality = False
        note = note or NEGATIVE_K_NOTE
    return InequalityReport(name, float(lhs), float(rhs), float(slack),
                            bool(slack >= -tol.ineq_rel * scale), bool(equality),
                            dict(inputs), note)


def solve_k(W: float, *, guard: float = DEFAULT_TOL.k_guard) -> float:
    """The k in (-1, 1] with 4k/(1+k)^2 = W, for a Willmore deficit W <= 1.

    The smaller root of W k^2 + (2W - 4) k + W = 0, written as
    k = W / ((2 - W) + 2 sqrt(1 - W)) to avoid cancellation; W = 1 gives k = 1.
    """
    W = float(W)
    if not W <= 1.0:
        raise DomainError(f"Willmore deficit must be <= 1, got {W!r}")
    k = W / ((2.0 - W) + 2.0 * math.sqrt(1.0 - W))
    if k + 1.0 < guard:
        raise NearSingularError(f"W={W!r} gives k={k!r} within {guard:g} of -1")
    return k


def willmore_deficit_of(boundary: LevelSurfaceSample) -> float:
    return 1.0 - boundary.int_H_sq / (16.0 * math.pi)


def _inputs(sol, model, boundary, m_adm, **extra):
    d = {"p": sol.params.p, "k": model.k, "m": model.m, "r0": model.r0, "cp": model.cp,
         "int_H_sq": boundary.int_H_sq, "int_H_grad": boundary.int_H_grad,
         "int_grad_sq": boundary.int_grad_sq, "area": boundary.area, "m_adm": m_adm}
    d.update(extra)
    return d


def _mass(sol, m_adm, tol):
    return adm_mass(sol.metric, tol=tol.mass_extrapolation) if m_adm is None else float(m_adm)


def general_k_inequalities(sol: CapacitarySolution, model: SchwarzschildModel,
                           boundary: LevelSurfaceSample | None = None, *,
                           m_adm: float | None = None, tol: Tolerances = DEFAULT_TOL):
    """The square-completion and mass inequalities for a model with k in (-1, 1).

    With e0 = eta(r0) and c = (1 - a e0)/m,

        4 pi - (1+k)^2/(1-k)^2 e0^2 int|grad u|^2
            >= (1+k)^2 r0/e0 c { 4 pi (1-k)^2/(1+k)^2 - int (H/2)^2 + int (H/2 - e0|grad u|)^2 }

        4 pi - (1+k)^2/(1-k)^2 e0^2 int|grad u|^2 <= 8 pi a (m_ADM - m) c.

    For k = 0 the limits e0 = 1/a, (1+k)^2 r0/e0 = a r0 and
    c = a^2/(a+1) (cp/a)^(-1/a) are used.
    """
    k, a = model.k, model.a
    if k == 1.0:
        raise DomainError("k = 1 has no general-k form; use horizon_inequalities")
    boundary = boundary_sample(sol) if boundary is None else boundary
    m_adm = _mass(sol, m_adm, tol)
    if k == 0.0:
        e0 = 1.0 / a
        c = a * a / (a + 1.0) * (model.cp / a) ** (-1.0 / a)
        front = a * model.r0
    else:
        e0 = eta(model.r0, model)
        c = (1.0 - a * e0) / model.m
        front = (1.0 + k) ** 2 * model.r0 / e0
    ratio = (1.0 + k) ** 2 / (1.0 - k) ** 2
    G = boundary.int_grad_sq
    quarter_H2 = 0.25 * boundary.int_H_sq
    square = quarter_H2 - e0 * boundary.int_H_grad + e0 * e0 * G
    lhs = 4.0 * math.pi - ratio * e0 * e0 * G
    rhs1 = front * c * (4.0 * math.pi / ratio - quarter_H2 + square)
    rhs2 = 8.0 * math.pi * a * (m_adm - model.m) * c
    inputs = _inputs(sol, model, boundary, m_adm, eta_r0=e0, c=c, square=square)
    return (_report("general-k:square-completion", lhs, rhs1, lhs - rhs1, tol, inputs, k=k),
            _report("general-k:mass", lhs, rhs2, rhs2 - lhs, tol, inputs, k=k))


def horizon_inequalities(sol: CapacitarySolution, model: SchwarzschildModel | None = None,
                         boundary: LevelSurfaceSample | None = None, *,
                         m_adm: float | None = None, tol: Tolerances = DEFAULT_TOL):
    """The k = 1 pair, with m = 2 (I_a(1) cp)^(1/a) and B = 2^(4a) I_a(1)^2:

        4 pi + 2 int H|grad u| - B int|grad u|^2 >= 0,
        4 pi (1 + 2a) - B int|grad u|^2 <= 8 pi a m_ADM / m.
    """
    if model is None:
        model = model_from_capacity(sol.params, sol.cp, 1.0)
    if model.k != 1.0:
        raise DomainError(f"horizon inequalities need k = 1, got k={model.k!r}")
    boundary = boundary_sample(sol) if boundary is None else boundary
    m_adm = _mass(sol, m_adm, tol)
    a = model.a
    B = 2.0 ** (4.0 * a) * model.Ia_k ** 2
    G = boundary.int_grad_sq
    lhs1 = 4.0 * math.pi + 2.0 * boundary.int_H_grad - B * G
    lhs2 = 4.0 * math.pi * (1.0 + 2.0 * a) - B * G
    rhs2 = 8.0 * math.pi * a * m_adm / model.m
    inputs = _inputs(sol, model, boundary, m_adm, B=B)
    return (_report("horizon:mean-curvature", lhs1, 0.0, lhs1, tol, inputs),
            _report("horizon:mass", lhs2, rhs2, rhs2 - lhs2, tol, inputs))


def willmore_bounds(sol: CapacitarySolution, boundary: LevelSurfaceSample | None = None, *,
                    m_adm: float | None = None, tol: Tolerances = DEFAULT_TOL):
    """Mass and area bounds with k chosen by 1 - int H^2/16 pi = 4k/(1+k)^2:

        m_ADM >= 2 sgn(k) (I_a(k) cp)^(1/a),
        sqrt(|Sigma|/16 pi) >= (1+k)^2/(2|k|) (I_a(k) cp)^(1/a),

    and for k = 0, m_ADM >= 0 and sqrt(|Sigma|/16 pi) >= (cp/a)^(1/a)/2.
    """
    boundary = boundary_sample(sol) if boundary is None else boundary
    m_adm = _mass(sol, m_adm, tol)
    a, cp = sol.params.a, sol.cp
    W = willmore_deficit_of(boundary)
    k = solve_k(W, guard=tol.k_guard)
    if k == 0.0:
        mass_rhs = 0.0
        area_rhs = 0.5 * (cp / a) ** (1.0 / a)
    else:
        base = (incomplete_I(a, k, guard=tol.k_guard) * cp) ** (1.0 / a)
        mass_rhs = math.copysign(2.0 * base, k)
        area_rhs = (1.0 + k) ** 2 / (2.0 * abs(k)) * base
    area_lhs = math.sqrt(boundary.area / (16.0 * math.pi))
    inputs = {"p": sol.params.p, "W": W, "k": k, "cp": cp, "area": boundary.area,
              "int_H_sq": boundary.int_H_sq, "m_adm": m_adm}
    return (_report("willmore:mass", m_adm, mass_rhs, m_adm - mass_rhs, tol, inputs, k=k),
            _report("willmore:area", area_lhs, area_rhs, area_lhs - area_rhs, tol, inputs, k=k))


def minimal_boundary_bounds(sol: CapacitarySolution, boundary: LevelSurfaceSample | None = None,
                            *, m_adm: float | None = None, tol: Tolerances = DEFAULT_TOL):
    """For a minimal boundary: m_ADM and sqrt(|Sigma|/16 pi) both dominate 2 (I_a(1) cp)^(1/a)."""
    boundary = boundary_sample(sol) if boundary is None else boundary
    if not abs(boundary.H) < tol.minimal_h:
        raise NotMinimalError(
            f"boundary mean curvature {boundary.H:.3e} exceeds the minimality gate {tol.minimal_h:g}")
    m_adm = _mass(sol, m_adm, tol)
    a, cp = sol.params.a, sol.cp
    bound = 2.0 * (half_beta(a) * cp) ** (1.0 / a)
    area_lhs = math.sqrt(boundary.area / (16.0 * math.pi))
    inputs = {"p": sol.params.p, "cp": cp, "H": boundary.H, "area": boundary.area, "m_adm": m_adm}
    return (_report("minimal:mass", m_adm, bound, m_adm - bound, tol, inputs),
            _report("minimal:area", area_lhs, bound, area_lhs - bound, tol, inputs))


def boundary_value_report(sol: CapacitarySolution, choice: CoefficientChoice, *,
                     m_adm: float | None = None, tol: Tolerances = DEFAULT_TOL) -> InequalityReport:
    """F at the boundary (t = r0 of the model) against -8 pi C2 cp (m_ADM - m)."""
    m_adm = _mass(sol, m_adm, tol)
    model = choice.model
    sample = evaluate_F(sol, choice, model.r0)
    bound = -8.0 * math.pi * choice.C2 * model.cp * (m_adm - model.m) + 0.0
    inputs = {"p": sol.params.p, "k": model.k, "m": model.m, "cp": model.cp,
              "C1": choice.C1, "C2": choice.C2, "C3": choice.C3, "m_adm": m_adm,
              "alpha_r0": sample.alpha}
    F0 = sample.F - 4.0 * math.pi * choice.C3
    return _report(f"monotone:{choice.label}", F0, bound, F0 - bound, tol, inputs, k=model.k)


def boundary_value_reports(sol: CapacitarySolution, model: SchwarzschildModel,
                      choice: CoefficientChoice | None = None, *,
                      m_adm: float | None = None, tol: Tolerances = DEFAULT_TOL):
    """The boundary bound for ``choice`` (if given) and for the two preset choices
    matching the model: thm11-a/b for k = 1, AMMO/HMT for k = 0, thm12-a/b otherwise."""
    m_adm = _mass(sol, m_adm, tol)
    if model.k == 1.0:
        names = ("thm11-a", "thm11-b")
    elif model.k == 0.0:
        names = ("AMMO", "HMT")
    else:
        names = ("thm12-a", "thm12-b")
    choices = [] if choice is None or choice.label in names else [choice]
    choices += [preset_choice(n, model) for n in names]
    return tuple(boundary_value_report(sol, c, m_adm=m_adm, tol=tol) for c in choices)


def alpha_at_boundary(choice: CoefficientChoice) -> float:
    return coefficients(choice, choice.model.r0)[0]


def harmonic_reference_slacks(boundary: LevelSurfaceSample, cp: float, k: float,
                              m_adm: float) -> tuple:
    """Slacks of the p = 2 pair with l = 1 + k and capacity cp:

        4 pi + l int H|grad u| - l(4 - l) int|grad u|^2 >= 0,
        4 pi (2 - 1/l) - l int|grad u|^2 <= 4 pi m_ADM / cp.

    At p = 2 the general-k slacks equal l/2 and l times these.
    """
    l = 1.0 + k
    G = boundary.int_grad_sq
    s3 = 4.0 * math.pi + l * boundary.int_H_grad - l * (4.0 - l) * G
    s4 = 4.0 * math.pi * m_adm / cp - (4.0 * math.pi * (2.0 - 1.0 / l) - l * G)
    return s3, s4
