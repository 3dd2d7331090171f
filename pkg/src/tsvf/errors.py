"""Exception hierarchy shared across the package.

Every domain error derives from :class:`TsvfError`; the CLI maps
:class:`InputError` subclasses to exit code 2 and everything else to 1.
"""


class TsvfError(Exception):
    """Base class for all package errors."""


class InputError(TsvfError):
    """Malformed or invalid user input."""


# hilbert
class DimensionMismatch(InputError):
    pass


class NormalizationError(InputError):
    pass


class NonHermitian(InputError):
    pass


class DependentSpan(InputError):
    pass


# tsv
class UnsupportedDescription(TsvfError):
    pass


# abl
class NullEvent(TsvfError):
    """The selection has zero probability given the intermediate measurement."""


class NotAProjector(InputError):
    pass


# weak
class OrthogonalSelection(TsvfError):
    """Pre- and post-selected states are orthogonal; the weak value diverges."""


# pointer
class NullSelection(TsvfError):
    pass


class RegimeViolation(TsvfError):
    pass


# ensemble
class NoSelectedTrials(TsvfError):
    pass


# scenario documents
class ParseError(InputError):
    def __init__(self, message, path=None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class ValidationError(InputError):
    def __init__(self, message, path=None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)
