"""p-capacitary functions and the monotone quantity F(t) on radial asymptotically flat metrics."""

from .errors import (AdmissibilityError, BracketError, ConfigError, DomainError,
                     InadmissibleCoefficientsError, MassNonconvergenceError, NearSingularError,
                     NotMinimalError, PcapError, PositivityError, QuadratureError)
from .monotone import (PRESETS, CoefficientChoice, coefficients, coefficients_k0, evaluate_F,
                       monotonicity_scan, preset_choice)
from .radial_metric import (RadialConformalMetric, adm_mass, check_admissible, euclidean,
                            from_family, perturbed, power, schwarzschild)
from .settings import DEFAULT_TOL, Tolerances
from .solver import CapacitarySolution, boundary_sample, level_radius, solve
from .specfun import (PExponentParams, SchwarzschildModel, incomplete_I, model_from_capacity,
                      model_from_mass_radius)

__version__ = "0.1.0"
