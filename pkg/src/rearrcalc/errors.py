"""Exception hierarchy for rearrcalc.

Every error raised on purpose by the library derives from RearrCalcError, so
callers (and the CLI) can map failure classes to exit statuses without string
matching.
"""

from __future__ import annotations


class RearrCalcError(Exception):
    """Base class for all rearrcalc errors."""


class ParseError(RearrCalcError, ValueError):
    """Malformed textual or JSON input (bad rational literal, bad schema)."""


class PreconditionError(RearrCalcError, ValueError):
    """An operation's mathematical precondition does not hold."""


class DomainMismatchError(PreconditionError):
    """Operands live on different base intervals ([0,1) vs [0,inf))."""


class InfiniteIntegralError(RearrCalcError):
    """An integral that must be finite diverges."""


class EmptyFamilyError(PreconditionError):
    """The order-interval section contains no usable member for the request."""


class HypothesisError(PreconditionError):
    """A checked hypothesis fails; carries an exact witness point.

    ``witness`` is a rational t at which the violated inequality can be
    re-evaluated and seen to fail.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness
