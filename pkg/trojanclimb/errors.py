"""Exceptions shared across trojanclimb packages."""


class TrojanClimbError(Exception):
    """Base class for all exceptions.

    Only to be invoked when a more specific error is not available.
    """


class ConfigurationError(TrojanClimbError):
    """Raised for invalid configuration: bad values, unknown fields, or
    mismatched dimensions between a model and its inputs.
    """


class ContractViolation(TrojanClimbError):
    """Raised when a documented precondition of an operation does not hold.

    Contains:
    operation (string)
    reason (string)
    """

    def __init__(self, operation, reason):
        super().__init__(operation, reason)
        self.operation = operation
        self.reason = reason

    def __repr__(self):
        return "Contract violated in {0}: {1}".format(self.operation, self.reason)

    def __str__(self):
        return self.__repr__()


class EmptyInputError(ContractViolation):
    """Raised when an operation that needs data receives none."""

    def __init__(self, operation, what):
        super().__init__(operation, "{} is empty".format(what))
        self.what = what
