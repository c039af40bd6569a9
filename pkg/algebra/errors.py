from typing import Any, Optional


class IsoPairError(Exception):
    """Base class for every error raised by this package"""


class ContractViolation(IsoPairError):
    """Raised when an operation is called with arguments it cannot accept
    (dimension mismatch, wrong basis order, missing realization)"""


class ParameterError(IsoPairError):
    """Raised for oscillator parameters that violate a hard requirement"""


class AxiomViolation(IsoPairError):
    """Raised when a construction needs an identity that does not hold"""

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness


class SingularMatrixError(IsoPairError):
    pass


class IncompleteBunchError(IsoPairError):
    """Raised by enlarge_bunch when A ◊_X B has no representative in g"""

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness


class IntegrationError(IsoPairError):
    """Raised when an integrator produces NaN or overflows"""

    def __init__(self, message: str, time: Optional[float] = None):
        super().__init__(message)
        self.time = time


class AngleUnwindingError(IntegrationError):
    pass


class ReductionUnavailable(IsoPairError):
    """Raised when the angle reduction is undefined (I1 = 0, I2 = 0 or ε3 + ε̃3 = 0)"""


class ConfigError(IsoPairError):
    pass
