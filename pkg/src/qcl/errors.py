"""Exception hierarchy shared by every module."""


class QCLError(Exception):
    """Base class for all library errors."""


class DimensionError(QCLError, ValueError):
    """Operands live in incompatible Hilbert or coordinate dimensions."""


class InvalidCoordsError(QCLError, ValueError):
    pass


class NotADensityMatrix(QCLError, ValueError):
    pass


class NotAMemberError(QCLError, ValueError):
    pass


class NeedsWitnessError(QCLError):
    """A spectrahedral section carries no generating states to read a support from."""


class InconclusiveError(QCLError):
    """A numerical search ended inside its undecided band."""


class UnsupportedBodyError(QCLError, TypeError):
    pass


class PreconditionError(QCLError, ValueError):
    pass


class InputError(QCLError, ValueError):
    """Malformed JSON document or command-line input."""
