"""Numerical defaults. Every tolerance the library uses lives here."""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class QuadratureSettings:
    epsabs: float = 1e-12
    epsrel: float = 1e-12
    limit: int = 200


@dataclass(frozen=True)
class Tolerances:
    # |k + 1| below this is rejected (I_a blows up at k = -1)
    k_guard: float = 1e-6
    # Richardson extrapolants for the ADM mass must agree to this
    mass_extrapolation: float = 1e-8
    # Sampled admissibility: R >= -curvature_floor
    curvature_floor: float = 1e-12
    # F(t_{i+1}) - F(t_i) <= mono_rel * (1 + max|F|)
    mono_rel: float = 1e-7
    # satisfied <=> slack >= -ineq_rel * max(|lhs|, |rhs|, 1)
    ineq_rel: float = 1e-8
    # equality <=> |slack| < eq_rel * max(|lhs|, |rhs|, 1)
    eq_rel: float = 1e-6
    # |H| on the boundary below this counts as minimal
    minimal_h: float = 1e-10

    def scaled(self, factor: float) -> "Tolerances":
        """All pass/fail tolerances multiplied by ``factor``; the guard band is kept."""
        return replace(
            self,
            mass_extrapolation=self.mass_extrapolation * factor,
            curvature_floor=self.curvature_floor * factor,
            mono_rel=self.mono_rel * factor,
            ineq_rel=self.ineq_rel * factor,
            eq_rel=self.eq_rel * factor,
            minimal_h=self.minimal_h * factor,
        )


DEFAULT_QUAD = QuadratureSettings()
DEFAULT_TOL = Tolerances()
