class PadicError(Exception):
    """Base class for all errors raised by the library."""


class DomainError(PadicError, ValueError):
    pass


class HypothesisError(DomainError):
    pass


class LevelError(DomainError):
    pass


class DegreeError(DomainError):
    pass


class SupportError(DomainError):
    pass


class ContractError(DomainError):
    pass


class DivergenceError(DomainError):
    pass


class PrecisionError(PadicError, ArithmeticError):
    pass
