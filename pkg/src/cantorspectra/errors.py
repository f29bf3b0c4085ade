"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-range input (bad letters, bad parameters)."""


class NoPathError(InputError):
    """No admissible path between the requested letters."""


class BracketUndefinedError(InputError):
    """Bracket of two sequences that do not share the letter at position 0."""


class SurgeryError(InputError):
    """A splice produced an inadmissible junction; carries the location."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class PresentationError(InputError):
    """A Cantor-set presentation violates its certificates (expansion, disjointness)."""


class OutOfRangeError(InputError):
    """Pressure equation has no nonnegative root for the requested constant."""


class EmptySubshiftError(InputError):
    """Cylinder removal emptied the subshift where a nonempty one was required."""


class ExactArithmeticError(ArithmeticError):
    """Operation would leave the exactly-representable number class."""


class CoverBlowupError(RuntimeError):
    """Cover construction exceeded the component/pair budget without a shortcut."""
