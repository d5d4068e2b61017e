"""Exception hierarchy shared by every module."""


class PcapError(Exception):
    """Base class for all library errors."""


class DomainError(PcapError, ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class NearSingularError(DomainError):
    """k sits inside the guard band around -1, where I_a(k) diverges."""


class QuadratureError(PcapError, RuntimeError):
    """Adaptive quadrature did not reach its target accuracy."""


class PositivityError(PcapError):
    """The conformal factor w became non-positive on the domain."""


class AdmissibilityError(PcapError):
    """A metric failed the sampled nonnegative-scalar-curvature gate."""


class MassNonconvergenceError(PcapError):
    """Richardson extrapolants of 2r(w - 1) did not settle."""


class BracketError(PcapError):
    """A level value could not be bracketed on the radial domain."""


class InadmissibleCoefficientsError(PcapError):
    """The coefficient choice does not keep alpha >= 0 on [r0, inf)."""


class NotMinimalError(PcapError):
    """The boundary mean curvature exceeds the minimality gate."""


class ConfigError(PcapError):
    """A scenario file is malformed; the message names the offending field."""
