"""Exception hierarchy shared by all helu modules."""


class HeluError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(HeluError):
    """Operand shapes are incompatible for the requested operation."""


class DomainError(HeluError):
    """Input values violate an operation's domain (e.g. non-finite entries)."""


class GraphError(HeluError):
    """Malformed autograd graph, such as a dangling input node id."""


class ContractError(HeluError):
    """A call violates an operation contract (e.g. non-scalar loss node)."""


class DataError(HeluError):
    """Dataset-level problem: label out of class range, count mismatch."""


class EmptyDataError(DataError):
    """An operation that needs at least one sample received none."""


class ParseError(HeluError):
    """A file could not be parsed; message carries byte offset or line number."""


class ConfigError(HeluError):
    """Invalid experiment configuration (bad key, unparseable value)."""


class MeasurementUnreliableError(HeluError):
    """Timer resolution is too coarse relative to the timed region."""
