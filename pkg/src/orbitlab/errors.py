"""Exception hierarchy shared by all orbitlab modules."""

from __future__ import annotations


class OrbitLabError(Exception):
    """Base class for every error raised by orbitlab."""


class ZeroInput(OrbitLabError, ValueError):
    pass


class NotSUnit(OrbitLabError, ValueError):
    """Raised when a rational does not factor over the prime set.

    ``cofactor`` is what is left of ``|num| * den`` after trial division,
    ``index`` is set when the offending value sits inside a sequence.
    """

    def __init__(self, cofactor, index=None):
        self.cofactor = cofactor
        self.index = index
        where = f" at index {index}" if index is not None else ""
        super().__init__(f"not an S-unit{where}: leftover cofactor {cofactor}")


class ZeroGenerator(OrbitLabError, ValueError):
    pass


class NotMember(OrbitLabError, LookupError):
    """Membership failure. ``reason`` is one of support, lattice, sign, infinite, zero."""

    def __init__(self, reason, value=None, index=None):
        self.reason = reason
        self.value = value
        self.index = index
        where = f" at index {index}" if index is not None else ""
        super().__init__(f"not a member ({reason}){where}: {value}")


class NotFree(OrbitLabError, ValueError):
    pass


class EmptySupport(OrbitLabError, ValueError):
    pass


class DimensionMismatch(OrbitLabError, ValueError):
    pass


class ZeroConstant(OrbitLabError, ValueError):
    pass


class Indeterminate(OrbitLabError, ArithmeticError):
    """A denominator vanished while evaluating a rational map."""

    def __init__(self, coordinate):
        self.coordinate = coordinate
        super().__init__(f"indeterminate at coordinate {coordinate}")


class DegenerateODE(OrbitLabError, ValueError):
    pass


class PoleHit(OrbitLabError, ArithmeticError):
    pass


class NotAnnihilating(OrbitLabError, ValueError):
    pass


class BadResidue(OrbitLabError, ValueError):
    pass


class WindowTooLarge(OrbitLabError, ValueError):
    pass


class ZeroOnTail(OrbitLabError, ValueError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"zero value on the tail at index {index}")


class ZeroValue(OrbitLabError, ValueError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"zero value at index {index}")


class TooShort(OrbitLabError, ValueError):
    pass


class ParseError(OrbitLabError, ValueError):
    """Input could not be parsed.

    ``kind`` is SyntaxError, UnknownVariable or NonIntegerExponent.  ``line``
    and ``column`` are 1-based positions inside the offending text, ``where``
    names the JSON field the text came from.
    """

    def __init__(self, kind, message, line=1, column=1, token=None, where=None):
        self.kind = kind
        self.line = line
        self.column = column
        self.token = token
        self.where = where
        loc = f"{where}: " if where else ""
        super().__init__(f"{loc}{kind} at {line}:{column} near {token!r}: {message}")
