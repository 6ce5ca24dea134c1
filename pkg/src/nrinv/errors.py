"""Exception types raised by the invariant calculus.

Every error carries its class name as ``name`` so the command line can
report it verbatim.
"""

from __future__ import annotations


class InvariantError(Exception):
    """Base class for domain errors."""

    @property
    def name(self) -> str:
        return type(self).__name__


class InadmissibleColor(InvariantError, ValueError):
    pass


class NonIntegralDifference(InvariantError, ValueError):
    pass


class DivergentBinomial(InvariantError, ArithmeticError):
    pass


class RangeError(InvariantError, ValueError):
    pass


class EvenLevel(InvariantError, ValueError):
    pass


class EvenLevelMod4(InvariantError, ValueError):
    pass


class IntegralDegree(InvariantError, ValueError):
    pass


class ColorMismatch(InvariantError, ValueError):
    pass


class NotComputable(InvariantError, ValueError):
    pass


class InfiniteFamily(InvariantError, ValueError):
    pass


class InvalidClass(InvariantError, ValueError):
    """Meridian values that do not satisfy the linking relations mod 2."""


class ZeroFraming(InvariantError, ValueError):
    pass


class DegenerateFraming(InvariantError, ValueError):
    pass


class AsymmetricKnot(InvariantError, ValueError):
    pass


class SingularNormalization(InvariantError, ArithmeticError):
    pass
