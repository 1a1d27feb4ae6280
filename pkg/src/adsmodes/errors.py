"""Exception hierarchy shared by all modules."""


class AdsModesError(Exception):
    """Base class."""


class ParameterPoleError(AdsModesError, ValueError):
    pass


class DomainError(AdsModesError, ValueError):
    pass


class NonConvergenceError(AdsModesError, ArithmeticError):
    pass


class InvalidSpecError(AdsModesError, ValueError):
    pass


class NormalizationPoleError(AdsModesError, ValueError):
    pass


class DegenerateParameterError(AdsModesError, ValueError):
    pass


class ChartBoundaryError(AdsModesError, ValueError):
    pass


class PoleError(AdsModesError, ValueError):
    pass


class BelowBoundError(AdsModesError, ValueError):
    pass


class DivergenceError(AdsModesError, ArithmeticError):
    pass


class ExtrapolationError(AdsModesError, ArithmeticError):
    pass
