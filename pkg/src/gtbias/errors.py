"""Exception hierarchy shared by every module of the package."""


class GTBiasError(Exception):
    """Base class for all errors raised by :mod:`gtbias`."""


class EmptyInput(GTBiasError, ValueError):
    pass


class InvalidSize(GTBiasError, ValueError):
    pass


class InvalidDistribution(GTBiasError, ValueError):
    pass


class LengthMismatch(GTBiasError, ValueError):
    pass


class CapExceeded(GTBiasError, ValueError):
    pass


class NotDivisible(GTBiasError, ValueError):
    pass


class Overflow(GTBiasError, OverflowError):
    pass


class UnknownIndex(GTBiasError, KeyError):
    pass


class InvalidBeta(GTBiasError, ValueError):
    pass


class InvalidArgument(GTBiasError, ValueError):
    pass


class InsufficientPoints(GTBiasError, ValueError):
    pass


class IndexSetMismatch(GTBiasError, ValueError):
    pass


class UnknownScenario(GTBiasError, KeyError):
    pass
