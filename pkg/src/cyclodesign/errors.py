"""Exception hierarchy.

Every error raised by the library derives from :class:`CycloDesignError`.
``VerificationError`` subclasses mark a mathematical check that failed (the
CLI maps those to exit status 2); everything else is a usage/config error
(exit status 1).
"""


class CycloDesignError(Exception):
    pass


class VerificationError(CycloDesignError):
    """A mathematical verification failed."""


# field_core
class NotPrime(CycloDesignError):
    pass


class EvenCharacteristic(CycloDesignError):
    pass


class NotPrimitivePolynomial(CycloDesignError):
    pass


class FieldTooLarge(CycloDesignError):
    pass


# char_sums
class MixedModulus(CycloDesignError):
    pass


class OddQuotient(CycloDesignError):
    pass


class ZeroCoefficient(CycloDesignError):
    pass


# code_builder
class BadExponent(CycloDesignError):
    pass


class DomainViolation(CycloDesignError):
    pass


class UnsupportedRegime(CycloDesignError):
    pass


class BudgetExceeded(CycloDesignError):
    pass


class DistributionMismatch(VerificationError):
    pass


# invariance
class BadModulus(CycloDesignError):
    pass


class SampleBudgetZero(CycloDesignError):
    pass


# designs
class WeightAbsent(CycloDesignError):
    pass


class BadLevel(CycloDesignError):
    pass


class MultiplicityViolation(VerificationError):
    pass


class NotADesign(VerificationError):
    def __init__(self, message, witnesses=None):
        super().__init__(message)
        self.witnesses = witnesses or []


class NonIntegralLambda(VerificationError):
    pass


class FormulaMismatch(VerificationError):
    def __init__(self, message, findings=None):
        super().__init__(message)
        self.findings = findings or []
