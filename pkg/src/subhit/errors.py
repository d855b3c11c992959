class SubhitError(Exception):
    """Base class for all errors raised by this package."""


class ContractError(SubhitError, ValueError):
    """An input violates the documented precondition of an operation."""


class DispatchError(ContractError):
    """The pattern lies outside the class a solver supports."""


class ResourceLimitError(SubhitError):
    """A configured size cap would be exceeded."""


class ParseError(ContractError):
    """An input file could not be parsed."""
