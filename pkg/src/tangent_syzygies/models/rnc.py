"""Tangent developable of the rational normal curve of degree ``g``.

The curve is ``s |-> (1, s, ..., s^g)`` and its tangent surface is
parametrised by the first jets ``phi_i = s^i + i t s^{i-1}``. Polynomial axes
are ``(s, t, unused)``; the torus weight ``a + b`` of ``s^a t^b`` makes every
piece weight-graded, which the rank routines exploit through block splitting.
"""

from __future__ import annotations

from ..errors import CharTwoUnsupported, InvalidRange
from ..linalg import FieldSpec
from .base import SectionRingModel, Terms


class RncTangentModel(SectionRingModel):
    def __init__(self, g: int, field: FieldSpec):
        if g < 3:
            raise InvalidRange("the rational normal curve model needs g >= 3")
        if field.characteristic == 2:
            raise CharTwoUnsupported("the tangent developable model is set up only for char != 2")
        super().__init__(field, f"tangent-rnc:g={g}")
        self.g = g

    def generators(self) -> list[Terms]:
        gens = []
        for i in range(self.g + 1):
            terms = [(i, 0, 0, 1)]
            if i % self.p:
                terms.append((i - 1, 1, 0, i))
            gens.append(terms)
        return gens

    def expected_hilbert(self, m: int) -> int:
        if m == 0:
            return 1
        return (self.g - 1) * m * m + 2

    @property
    def r(self) -> int:
        return self.g


def rnc_tangent_model(g: int, field: FieldSpec) -> RncTangentModel:
    return RncTangentModel(g, field)
