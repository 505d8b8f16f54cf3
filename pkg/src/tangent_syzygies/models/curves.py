"""Tangent surfaces of the genus-1 and genus-2 curves.

Both curves are handled in affine coordinates with a polynomial normal form,
and the tangent lines come from a polynomial derivation ``D`` of the
coordinate ring (a nowhere-zero multiple of ``d/dx``, resp. ``d/ds``). A
section ``f`` contributes the jet generator ``f + u D(f)``; rescaling ``u``
pointwise does not change the image surface, so the span of ``m``-fold
products of these generators is the degree-``m`` piece of its homogeneous
coordinate ring.

* genus 1: ``y^2 = x^3 - x``, sections ``x^i y^j`` with ``2i + 3j <= d``,
  ``j <= 1`` (pole order at the point at infinity at most ``d``),
  ``D = 2y d/dx + (3x^2 - 1) d/dy``; polynomial axes ``(u, x, y)``.
* genus 2: ``F = s^2 (t^3 + 1) + t^2 - t = 0`` in ``P^1 x P^1``, sections
  ``s^a t^b`` (``a <= 3``, ``b <= 2``) of ``O(3) x O(2)``,
  ``D = F_t d/ds - F_s d/dt``; normal form rewrites ``s^2 t^3`` as
  ``-(s^2 + t^2 - t)``; polynomial axes ``(u, s, t)``.
"""

from __future__ import annotations

import numpy as np

from ..errors import CharTooSmall, UnsupportedDegree
from ..linalg import FieldSpec
from .base import (
    SectionRingModel,
    Terms,
    array_terms,
    derive,
    multiply,
    pad_to,
    poly_array,
    trim,
)


class _CurveTangentModel(SectionRingModel):
    genus: int
    degree: int
    # derivation D = P d/d(second variable) + Q d/d(third variable), u-exponent 0
    _P: Terms
    _Q: Terms

    def sections(self) -> list[Terms]:
        raise NotImplementedError

    def derivation(self, f: np.ndarray) -> np.ndarray:
        """Apply ``D`` to a batch of polynomials with no ``u``."""
        p = self.p
        parts = []
        for axis, coef in ((2, self._P), (3, self._Q)):
            d = derive(f, axis, p)
            if np.any(d):
                parts.append(trim(self.normal_form(multiply(d, coef, p))))
        if not parts:
            return np.zeros((f.shape[0], 1, 1, 1), dtype=np.int64)
        shape = tuple(max(x.shape[k + 1] for x in parts) for k in range(3))
        return sum(pad_to(x, shape) for x in parts) % p

    def generators(self) -> list[Terms]:
        gens = []
        for sec in self.sections():
            f = poly_array(sec, self.p)[None]
            df = self.derivation(f)[0]
            terms = array_terms(f[0])
            terms += [(1, j, k, c) for (_, j, k, c) in array_terms(df)]
            gens.append(terms)
        return gens

    def expected_hilbert(self, m: int) -> int:
        if m == 0:
            return 1
        return (self.degree + self.genus - 1) * m * m + 2 - 2 * self.genus

    @property
    def r(self) -> int:
        return self.degree - self.genus


class EllipticTangentModel(_CurveTangentModel):
    genus = 1
    _P = [(0, 0, 1, 2)]  # 2y
    _Q = [(0, 2, 0, 3), (0, 0, 0, -1)]  # 3x^2 - 1

    def __init__(self, d: int, field: FieldSpec):
        if not 7 <= d <= 16:
            raise UnsupportedDegree("the genus-1 model covers 7 <= d <= 16")
        if field.characteristic <= d:
            raise CharTooSmall(f"the genus-1 model needs a prime larger than d={d}")
        super().__init__(field, f"elliptic:d={d}")
        self.degree = d

    def sections(self) -> list[Terms]:
        out = []
        for j in (0, 1):
            for i in range((self.degree - 3 * j) // 2 + 1):
                out.append([(0, i, j, 1)])
        # order by pole order 2i + 3j
        out.sort(key=lambda t: 2 * t[0][1] + 3 * t[0][2])
        return out

    def normal_form(self, batch: np.ndarray) -> np.ndarray:
        """Rewrite ``y^2`` as ``x^3 - x`` until the ``y``-degree is at most 1."""
        p = self.p
        while batch.shape[3] > 2:
            n, a, b, c = batch.shape
            top = batch[:, :, :, c - 1]
            out = np.zeros((n, a, b + 3, c - 1), dtype=np.int64)
            out[:, :, :b, :] = batch[:, :, :, : c - 1]
            out[:, :, 3 : b + 3, c - 3] += top
            out[:, :, 1 : b + 1, c - 3] -= top
            batch = out % p
        return batch


class Genus2TangentModel(_CurveTangentModel):
    genus = 2
    degree = 13
    _P = [(0, 2, 2, 3), (0, 0, 1, 2), (0, 0, 0, -1)]  # F_t = 3 s^2 t^2 + 2t - 1
    _Q = [(0, 1, 3, -2), (0, 1, 0, -2)]  # -F_s = -2 s (t^3 + 1)

    def __init__(self, field: FieldSpec):
        if field.characteristic <= 13:
            raise CharTooSmall("the genus-2 model needs a prime larger than 13")
        super().__init__(field, "genus2:deg13")

    def sections(self) -> list[Terms]:
        return [[(0, a, b, 1)] for b in range(3) for a in range(4)]

    def normal_form(self, batch: np.ndarray) -> np.ndarray:
        """Rewrite ``s^a t^b`` (``a >= 2``, ``b >= 3``) via ``s^2 t^3 = -s^2 - t^2 + t``."""
        p = self.p
        n, k, a, b = batch.shape
        if a < 3 or b < 4:
            return batch
        batch = batch.copy()
        for tb in range(b - 1, 2, -1):
            c = batch[:, :, 2:, tb].copy()
            if not c.any():
                continue
            batch[:, :, 2:, tb] = 0
            batch[:, :, 2:, tb - 3] -= c
            batch[:, :, : a - 2, tb - 1] -= c
            batch[:, :, : a - 2, tb - 2] += c
            batch %= p
        return batch


def elliptic_tangent_model(d: int, field: FieldSpec) -> EllipticTangentModel:
    return EllipticTangentModel(d, field)


def genus2_tangent_model(field: FieldSpec) -> Genus2TangentModel:
    return Genus2TangentModel(field)
