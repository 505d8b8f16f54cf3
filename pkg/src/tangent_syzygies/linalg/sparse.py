from __future__ import annotations

from collections.abc import Iterable

import numpy as np
import scipy.sparse as sp

from .field import FieldSpec

# char-0 entries are carried as int64; this bound keeps products of two entries
# summed over a few thousand terms inside int64.
_INT_BOUND = 2**24


class DimensionMismatch(ValueError):
    pass


class SparseMatrix:
    """Exact sparse matrix over a FieldSpec, stored as sorted COO triplets.

    ``nrows`` is the codomain dimension and ``ncols`` the domain dimension, so
    column ``j`` holds the image of the ``j``-th domain basis vector. Entries
    are canonical: reduced into ``[0, p)`` over F_p, integers over QQ, no
    explicit zeros and no duplicate positions.
    """

    __slots__ = ("cols", "field", "ncols", "nrows", "rows", "vals")

    def __init__(self, nrows: int, ncols: int, rows, cols, vals, field: FieldSpec):
        self.nrows = int(nrows)
        self.ncols = int(ncols)
        self.field = field
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        vals = _as_int_array(vals).ravel()
        if not (rows.shape == cols.shape == vals.shape):
            raise ValueError("rows, cols and vals must have equal length")
        if rows.size:
            if rows.min() < 0 or rows.max() >= self.nrows or cols.min() < 0 or cols.max() >= self.ncols:
                raise IndexError("matrix entry index out of range")
        # coalesce duplicates by summation, then canonicalise
        m = sp.coo_matrix((vals, (rows, cols)), shape=(self.nrows, self.ncols)).tocsr()
        m.sum_duplicates()
        m = m.tocoo()
        r, c, v = m.row.astype(np.int64), m.col.astype(np.int64), m.data.astype(np.int64)
        p = field.characteristic
        if p:
            v = v % p
        elif v.size and np.abs(v).max() >= _INT_BOUND:
            raise OverflowError("characteristic-0 entries exceed the supported integer range")
        keep = v != 0
        order = np.lexsort((c[keep], r[keep]))
        self.rows = r[keep][order]
        self.cols = c[keep][order]
        self.vals = v[keep][order]
        for a in (self.rows, self.cols, self.vals):
            a.setflags(write=False)

    # construction helpers -------------------------------------------------

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: Iterable[tuple[int, int, int]], field: FieldSpec):
        entries = list(entries)
        if not entries:
            return cls.zeros(nrows, ncols, field)
        r, c, v = zip(*entries)
        return cls(nrows, ncols, r, c, v, field)

    @classmethod
    def from_dense(cls, array, field: FieldSpec):
        a = _as_int_array(array)
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        r, c = np.nonzero(a)
        return cls(a.shape[0], a.shape[1], r, c, a[r, c], field)

    @classmethod
    def from_scipy(cls, m, field: FieldSpec):
        m = sp.coo_matrix(m)
        return cls(m.shape[0], m.shape[1], m.row, m.col, m.data, field)

    @classmethod
    def zeros(cls, nrows: int, ncols: int, field: FieldSpec):
        e = np.zeros(0, dtype=np.int64)
        return cls(nrows, ncols, e, e, e, field)

    @classmethod
    def identity(cls, n: int, field: FieldSpec):
        idx = np.arange(n, dtype=np.int64)
        return cls(n, n, idx, idx, np.ones(n, dtype=np.int64), field)

    # basic protocol ---------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def domain_dim(self) -> int:
        return self.ncols

    @property
    def codomain_dim(self) -> int:
        return self.nrows

    @property
    def nnz(self) -> int:
        return int(self.vals.size)

    def entries(self) -> list[tuple[int, int, int]]:
        return list(zip(self.rows.tolist(), self.cols.tolist(), self.vals.tolist()))

    def to_scipy(self) -> sp.csr_matrix:
        return sp.csr_matrix((self.vals, (self.rows, self.cols)), shape=self.shape, dtype=np.int64)

    def to_dense(self) -> np.ndarray:
        a = np.zeros(self.shape, dtype=np.int64)
        a[self.rows, self.cols] = self.vals
        return a

    def transpose(self) -> SparseMatrix:
        return SparseMatrix(self.ncols, self.nrows, self.cols, self.rows, self.vals, self.field)

    @property
    def T(self) -> SparseMatrix:
        return self.transpose()

    def is_zero(self) -> bool:
        return self.nnz == 0

    def reduce_mod(self, p: int) -> SparseMatrix:
        """The same integer matrix read over F_p (only from characteristic 0)."""
        if self.field.characteristic != 0:
            raise ValueError("reduce_mod expects an integer (characteristic-0) matrix")
        return SparseMatrix(self.nrows, self.ncols, self.rows, self.cols, self.vals, FieldSpec(p))

    def __matmul__(self, other: SparseMatrix) -> SparseMatrix:
        """Composition ``self o other``."""
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        if self.field != other.field:
            raise ValueError("matrices live over different fields")
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"cannot compose {self.shape} with {other.shape}")
        p = self.field.characteristic
        a, b = self.to_scipy(), other.to_scipy()
        if p:
            # int64 products of reduced entries stay exact; split the inner
            # dimension so that partial sums do too
            prod = _chunked_product(a, b, p)
        else:
            prod = a @ b
        return SparseMatrix.from_scipy(prod, self.field)

    def __add__(self, other: SparseMatrix) -> SparseMatrix:
        if self.shape != other.shape or self.field != other.field:
            raise DimensionMismatch("shape or field mismatch in addition")
        return SparseMatrix(
            self.nrows,
            self.ncols,
            np.concatenate([self.rows, other.rows]),
            np.concatenate([self.cols, other.cols]),
            np.concatenate([self.vals, other.vals]),
            self.field,
        )

    def scale(self, c: int) -> SparseMatrix:
        return SparseMatrix(self.nrows, self.ncols, self.rows, self.cols, self.vals * int(c), self.field)

    def __neg__(self) -> SparseMatrix:
        return self.scale(-1)

    def __sub__(self, other: SparseMatrix) -> SparseMatrix:
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and self.field == other.field
            and np.array_equal(self.rows, other.rows)
            and np.array_equal(self.cols, other.cols)
            and np.array_equal(self.vals, other.vals)
        )

    __hash__ = None  # type: ignore[assignment]

    def submatrix(self, row_idx, col_idx) -> SparseMatrix:
        row_idx = np.asarray(row_idx, dtype=np.int64)
        col_idx = np.asarray(col_idx, dtype=np.int64)
        m = self.to_scipy()[row_idx][:, col_idx]
        return SparseMatrix.from_scipy(m, self.field)

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz}, over {self.field})"


def kron(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    """Kronecker product; the first factor indexes the major position."""
    if a.field != b.field:
        raise ValueError("matrices live over different fields")
    m = sp.kron(a.to_scipy(), b.to_scipy(), format="coo")
    return SparseMatrix.from_scipy(m, a.field)


def hstack(blocks: list[SparseMatrix]) -> SparseMatrix:
    f = blocks[0].field
    return SparseMatrix.from_scipy(sp.hstack([b.to_scipy() for b in blocks], format="coo"), f)


def vstack(blocks: list[SparseMatrix]) -> SparseMatrix:
    f = blocks[0].field
    return SparseMatrix.from_scipy(sp.vstack([b.to_scipy() for b in blocks], format="coo"), f)


def _as_int_array(values) -> np.ndarray:
    a = np.asarray(values)
    if a.dtype == object:
        out = np.empty(a.shape, dtype=np.int64)
        flat = a.ravel()
        res = out.ravel()
        for i, x in enumerate(flat):
            if hasattr(x, "denominator") and x.denominator != 1:
                raise ValueError("non-integral entry; clear denominators before building a matrix")
            res[i] = int(x)
        return out
    if a.dtype.kind == "f":
        if a.size and not np.all(np.equal(np.mod(a, 1), 0)):
            raise ValueError("non-integral floating entry")
        return a.astype(np.int64)
    return a.astype(np.int64, copy=False)


def _chunked_product(a: sp.csr_matrix, b: sp.csr_matrix, p: int) -> sp.csr_matrix:
    # each product is < p^2; keep at most `step` of them per partial sum
    step = max(1, (2**62) // (p * p) - 1)
    n = a.shape[1]
    if n <= step:
        out = a @ b
        out.data %= p
        return out
    out = None
    for s in range(0, n, step):
        part = a[:, s : s + step] @ b[s : s + step]
        part.data %= p
        out = part if out is None else out + part
        out.data %= p
    return out
