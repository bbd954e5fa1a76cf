"""Exception types shared across the package."""


class ProponeError(Exception):
    """Base class for all package errors."""


class DomainError(ProponeError):
    """A good index is outside the instance's good range."""


class ContractError(ProponeError):
    """A precondition of an operation was violated by the caller."""


class SizeError(ProponeError):
    """An exhaustive operation was requested beyond its size cap."""


class ParseError(ProponeError):
    """A serialized document is malformed; the message carries a location."""


class GeneratorBugError(ProponeError):
    """A random generator produced an instance failing its own class verifier."""


class InternalInvariantError(ProponeError):
    """An invariant the algorithms guarantee was observed to fail."""
