"""Exception types shared across the package."""


class MuskatLabError(Exception):
    """Base class for everything this package raises on purpose."""


class ConfigurationError(MuskatLabError):
    """A parameter combination the numerics cannot honor (bad quadrature radius,
    σ out of range, window outside the domain, ...)."""


class UnresolvableScaleError(ConfigurationError):
    """A length scale (mollifier width, kernel split radius, ripple wavelength)
    fell below what the grid can represent."""


class UnsupportedDimensionError(ConfigurationError):
    """Grid dimension outside {1, 2}.  Documented extension point."""


class InputDataError(MuskatLabError):
    """Non-finite or structurally invalid input profile."""


class ConstraintError(MuskatLabError):
    """An initial-data spec asks for something its own admissibility condition
    forbids (e.g. large slopes of both signs inside one interval)."""


class NonConcaveModulusError(MuskatLabError):
    """The two-regime modulus parameters violate the concavity splice."""


class NoCertificateError(MuskatLabError):
    """Parameter search exhausted its ladder without a passing certificate."""

    def __init__(self, message, best_margin=None, best_params=None):
        super().__init__(message)
        self.best_margin = best_margin
        self.best_params = best_params


class StiffnessError(MuskatLabError):
    """Adaptive step size collapsed below dt_min.  Carries the last valid frame."""

    def __init__(self, message, last_frame=None):
        super().__init__(message)
        self.last_frame = last_frame


class InsufficientDataError(MuskatLabError):
    """A trajectory fit was asked for with too few usable frames."""
