"""Closed-form quantities on spatial Schwarzschild, g = (1 + m/2r)^4 delta.

These are the ground truth the generic solver is compared against. Negative
m is allowed (the zero-area singularity branch); no equality case can occur
there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .specfun import (SchwarzschildModel, _check_t, model_level,
                      model_level_derivative)


def schwarzschild_u(r: float, model: SchwarzschildModel) -> float:
    """The p-capacitary function at isotropic radius r; identical to the model level f(r)."""
    return model_level(r, model)


@dataclass(frozen=True)
class SchwarzschildSurfaceData:
    r: float
    area: float
    H: float
    grad_u: float
    int_H_grad: float
    int_grad_sq: float
    int_H_sq: float


def schwarzschild_surface(r: float, model: SchwarzschildModel) -> SchwarzschildSurfaceData:
    """Geometry of S_r and the integrals of u over it, all in closed form."""
    r = _check_t(r, model, "schwarzschild surface")
    a = model.a
    x = 0.0 if model.k == 0.0 else model.x(r)
    w = 1.0 + x
    area = 4.0 * math.pi * r * r * w ** 4
    H = 2.0 / r * w ** -3 * (1.0 - x)
    grad = w ** -2 * model_level_derivative(r, model)
    return SchwarzschildSurfaceData(
        r=r, area=area, H=H, grad_u=grad,
        int_H_grad=area * H * grad,
        int_grad_sq=4.0 * math.pi * model.cp ** 2 * r ** (-2.0 * a) * w ** (-4.0 * a),
        int_H_sq=16.0 * math.pi * (1.0 - x) ** 2 / w ** 2,
    )


def willmore_deficit(k: float) -> float:
    """1 - (1/16 pi) int H^2 over S_{r0} with m/2r0 = k, which is 4k/(1+k)^2."""
    k = float(k)
    if not -1.0 < k <= 1.0:
        raise DomainError(f"k must lie in (-1, 1], got {k!r}")
    return 4.0 * k / (1.0 + k) ** 2
