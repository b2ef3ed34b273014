"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so each class carries its own.
"""


class MilnorForgeError(Exception):
    exit_code = 1


class ConfigurationError(MilnorForgeError):
    """Operands built over different primes, variable sets or groups."""


class ResourceError(MilnorForgeError):
    """A size cap would be exceeded."""


class ParameterError(MilnorForgeError):
    """Parameters outside the documented range."""


class ValuationError(ArithmeticError, MilnorForgeError):
    """Inverting an element of positive p-adic valuation."""


class StructuralError(MilnorForgeError):
    """Two objects that must match (dimensions, gradings) do not."""


class CertificationFailure(MilnorForgeError):
    """A certificate could not be established; ``witness`` says why."""

    exit_code = 2

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class AmbiguityError(CertificationFailure):
    pass
