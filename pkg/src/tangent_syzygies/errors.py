"""Exceptions raised by the package (linear-algebra ones live in ``linalg``)."""

from __future__ import annotations


class InvalidRange(ValueError):
    """An index such as ``p`` lies outside the range where a map is defined."""


class ZeroFunctional(ValueError):
    """A fiber check was asked about the zero functional."""


class PieceUnavailable(LookupError):
    """A section-ring model cannot provide the requested graded piece."""


class HilbertMismatch(AssertionError):
    def __init__(self, degree: int, expected: int, found: int):
        super().__init__(f"dim R_{degree} = {found}, expected {expected}")
        self.degree = degree
        self.expected = expected
        self.found = found


class CharTwoUnsupported(ValueError):
    """The tangent-developable model is only set up away from characteristic 2."""


class UnsupportedDegree(ValueError):
    pass


class CharTooSmall(ValueError):
    pass
