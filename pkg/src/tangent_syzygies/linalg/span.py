from __future__ import annotations

from fractions import Fraction

import numpy as np

from .dense import rref_modp
from .field import FieldSpec


class NotInSpan(ValueError):
    pass


class SpanBasis:
    """Reduced echelon basis of a span of coordinate vectors.

    ``basis`` holds one row per basis vector, with an identity block in the
    ``pivots`` columns; the coordinates of a span member are therefore just its
    entries at the pivot columns.
    """

    def __init__(self, basis, pivots: list[int], ambient_dim: int, field: FieldSpec):
        self.basis = basis
        self.pivots = list(pivots)
        self.ambient_dim = ambient_dim
        self.field = field

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def __len__(self) -> int:
        return self.dim

    def coordinates(self, vector):
        """Coordinates of ``vector`` in the echelon basis; NotInSpan if it is not a member."""
        coords = self.coordinates_many(np.atleast_2d(np.asarray(vector, dtype=object if self.field.is_rational else np.int64)))
        return coords[0]

    def coordinates_many(self, vectors):
        """Coordinates of each row of ``vectors``."""
        p = self.field.characteristic
        if p:
            v = np.asarray(vectors, dtype=np.int64) % p
            if v.ndim == 1:
                v = v[None, :]
            if v.shape[1] != self.ambient_dim:
                raise ValueError("vector lives in a different ambient space")
            coords = v[:, self.pivots] if self.pivots else np.zeros((v.shape[0], 0), dtype=np.int64)
            if self.pivots:
                recon = _matmul_int(coords, self.basis, p)
            else:
                recon = np.zeros_like(v)
            if not np.array_equal(recon, v):
                raise NotInSpan("vector is not in the span")
            return coords
        out = []
        for row in vectors:
            row = [Fraction(x) for x in row]
            if len(row) != self.ambient_dim:
                raise ValueError("vector lives in a different ambient space")
            coords = [row[j] for j in self.pivots]
            recon = [sum((c * b[k] for c, b in zip(coords, self.basis)), Fraction(0)) for k in range(self.ambient_dim)]
            if recon != row:
                raise NotInSpan("vector is not in the span")
            out.append(coords)
        return out


def span_reduce(vectors, field: FieldSpec, ambient_dim: int | None = None) -> SpanBasis:
    """Echelonised basis of the span of ``vectors`` (rows) in a fixed ambient space."""
    p = field.characteristic
    if p:
        a = np.asarray(vectors, dtype=np.int64)
        if a.size == 0:
            n = ambient_dim if ambient_dim is not None else (a.shape[1] if a.ndim == 2 else 0)
            return SpanBasis(np.zeros((0, n), dtype=np.int64), [], n, field)
        red, piv = rref_modp(a, p)
        return SpanBasis(red, piv, a.shape[1], field)
    rows = [[Fraction(x) for x in r] for r in vectors]
    n = ambient_dim if ambient_dim is not None else (len(rows[0]) if rows else 0)
    red, piv = _rref_fraction(rows, n)
    return SpanBasis(red, piv, n, field)


def _rref_fraction(rows: list[list[Fraction]], ncols: int):
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for j in range(ncols):
        s = next((i for i in range(r, len(m)) if m[i][j] != 0), None)
        if s is None:
            continue
        m[r], m[s] = m[s], m[r]
        inv = 1 / m[r][j]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][j] != 0:
                f = m[i][j]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(j)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def _matmul_int(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    from .dense import matmul_modp

    return matmul_modp(a, b, p)
