"""Exception hierarchy.

``PreconditionError`` subclasses correspond to violated operation
preconditions and map to exit code 2 at the command line; anything else
escaping the library is treated as an internal error (exit code 1).
"""


class ToolkitError(Exception):
    """Base class for all errors raised by sftlab."""


class PreconditionError(ToolkitError):
    """An operation was invoked on input violating its precondition."""


class EmptyShift(PreconditionError):
    """No essential part remains: the shift space is empty."""


class NotEssential(PreconditionError):
    """The graph has stranded symbols; essentialize it first."""


class NotIrreducible(PreconditionError):
    """The graph is not strongly connected."""


class NotFiniteToOne(PreconditionError):
    """The factor code admits a diamond, hence is infinite-to-one."""


class NotInImage(PreconditionError):
    """The given periodic point does not lie in the image shift."""


class InfiniteFiber(PreconditionError):
    """The fiber over the given periodic point is uncountable."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ImageMismatch(PreconditionError):
    """Words or points that must share an image do not."""


class LengthMismatch(PreconditionError):
    """Words that must have equal length do not."""


class ArityMismatch(PreconditionError):
    """Tuple joinings of different arity cannot be compared."""


class RepresentativeClassCollision(PreconditionError):
    """Two representatives lie in the same transition class."""


class NotALift(PreconditionError):
    """The measure does not project to the orbit of the given point."""


class TwoIsAFactor(PreconditionError):
    """The measure has the two-point rotation as a factor."""


class ParseError(ToolkitError):
    """A problem document failed to parse."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class ValidationError(ToolkitError):
    """A parsed problem document violates a structural invariant."""
