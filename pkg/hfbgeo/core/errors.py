# hfbgeo/core/errors.py
"""
Exception hierarchy.

- DomainError: a precondition of an operation does not hold
- NumericalError: the input is admissible but a factorization broke down
- ConfigError: the experiment configuration cannot be used
"""


class HfbgeoError(Exception):
    """Base class for every error raised by hfbgeo."""


class DomainError(HfbgeoError, ValueError):
    pass


class NumericalError(HfbgeoError, RuntimeError):
    pass


class ConfigError(HfbgeoError, ValueError):
    pass


class NoTrials(ConfigError):
    pass


# Domain errors

class SingularInput(DomainError):
    pass


class LogDomain(DomainError):
    pass


class IndexOutOfRange(DomainError):
    pass


class NotOrthogonal(DomainError):
    pass


class DimensionMismatch(DomainError):
    pass


class BadSpec(DomainError):
    pass


class NotAdmissible(DomainError):
    pass


class OutsideRadius(DomainError):
    pass


class InKernel(DomainError):
    pass


class NotInComplement(DomainError):
    pass


class NotInPolarization(DomainError):
    pass


class CapExceeded(DomainError):
    pass


# Numerical errors

class IllConditioned(NumericalError):
    pass


class NumericalFailure(NumericalError):
    pass


class ClusterAmbiguity(NumericalError):
    pass


class DegenerateSpectrum(NumericalError):
    pass


class SingularCompression(NumericalError):
    pass


class RankAmbiguity(NumericalError):
    pass


class VacuumDegeneracy(NumericalError):
    pass
