"""Graded section rings given by explicit degree-1 generators.

A model is a finitely generated graded algebra ``R = k[phi_0, ..., phi_r]``
where the ``phi_i`` are polynomials in three variables modulo a normal-form
rule. The degree-``m`` piece ``R_m`` is the span of all ``m``-fold products,
computed inductively as ``R_{m+1} = span(phi_i * R_m)`` and stored as a reduced
echelon basis inside a dense coefficient array. Multiplication by ``phi_i``
``R_m -> R_{m+1}`` is recorded at the same time, so every matrix the Koszul
engine needs is a by-product of building the pieces.

All arithmetic is over a prime field F_p; characteristic-0 computations are
run over proxy primes by the callers.
"""

from __future__ import annotations

import hashlib
import logging
import os
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import HilbertMismatch, PieceUnavailable
from ..linalg import FieldSpec, SparseMatrix, hstack
from ..linalg.dense import matmul_modp, rref_modp

log = logging.getLogger(__name__)

CACHE_ENV = "SYZYGY_CACHE_DIR"

Terms = list[tuple[int, int, int, int]]  # (e0, e1, e2, coefficient)


class GradedModule(ABC):
    """Contract used by the Koszul engine: pieces and multiplication by variables.

    ``nvars`` variables ``v_0..v_{nvars-1}`` act by ``mult_by(i, m): M_m -> M_{m+1}``
    (dense ``int64`` arrays reduced mod ``p``); ``piece_dim(m)`` is ``dim M_m``.
    """

    field: FieldSpec
    model_id: str

    @property
    @abstractmethod
    def nvars(self) -> int: ...

    @abstractmethod
    def piece_dim(self, m: int) -> int: ...

    @abstractmethod
    def mult_by(self, i: int, m: int) -> np.ndarray: ...

    def expected_hilbert(self, m: int) -> int | None:
        return None

    def mult(self, m: int) -> SparseMatrix:
        """``V (x) R_m -> R_{m+1}``; the ``V`` index is the major one in the domain."""
        return hstack([SparseMatrix.from_dense(self.mult_by(i, m), self.field) for i in range(self.nvars)])


@dataclass
class Piece:
    degree: int
    shape: tuple[int, int, int]
    basis: np.ndarray  # (dim, prod(shape)) reduced echelon rows
    pivots: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])


def poly_array(terms: Terms, p: int) -> np.ndarray:
    shape = tuple(max(t[k] for t in terms) + 1 for k in range(3))
    a = np.zeros(shape, dtype=np.int64)
    for e0, e1, e2, c in terms:
        a[e0, e1, e2] = (a[e0, e1, e2] + c) % p
    return a


def array_terms(a: np.ndarray) -> Terms:
    return [(int(i), int(j), int(k), int(a[i, j, k])) for i, j, k in zip(*np.nonzero(a))]


def multiply(batch: np.ndarray, terms: Terms, p: int) -> np.ndarray:
    """Multiply every polynomial in ``batch`` (shape ``(n, a, b, c)``) by a polynomial given as terms."""
    n, a, b, c = batch.shape
    m0 = max(t[0] for t in terms)
    m1 = max(t[1] for t in terms)
    m2 = max(t[2] for t in terms)
    out = np.zeros((n, a + m0, b + m1, c + m2), dtype=np.int64)
    for e0, e1, e2, coef in terms:
        out[:, e0 : e0 + a, e1 : e1 + b, e2 : e2 + c] += (coef % p) * batch
        out %= p
    return out


def derive(batch: np.ndarray, axis: int, p: int) -> np.ndarray:
    """Formal partial derivative along array ``axis`` (2 or 3; axis 0 indexes the batch)."""
    n = batch.shape[axis]
    if n <= 1:
        shape = list(batch.shape)
        shape[axis] = 1
        return np.zeros(shape, dtype=np.int64)
    exps = np.arange(1, n, dtype=np.int64)
    sl = [slice(None)] * 4
    sl[axis] = slice(1, None)
    shape = [1, 1, 1, 1]
    shape[axis] = n - 1
    return (batch[tuple(sl)] * exps.reshape(shape)) % p


def trim(batch: np.ndarray) -> np.ndarray:
    """Crop trailing all-zero slabs in the three polynomial axes."""
    nz = np.nonzero(batch)
    if nz[0].size == 0:
        return batch[:, :1, :1, :1]
    return batch[:, : nz[1].max() + 1, : nz[2].max() + 1, : nz[3].max() + 1]


def pad_to(batch: np.ndarray, shape: tuple[int, int, int]) -> np.ndarray:
    if batch.shape[1:] == tuple(shape):
        return batch
    s = batch.shape[1:]
    if any(x > y for x, y in zip(s, shape)):
        # anything beyond the target box must be zero
        if np.any(batch[:, shape[0] :]) or np.any(batch[:, :, shape[1] :]) or np.any(batch[:, :, :, shape[2] :]):
            raise PieceUnavailable("product leaves the ambient monomial box of the target piece")
        batch = batch[:, : shape[0], : shape[1], : shape[2]]
        s = batch.shape[1:]
    out = np.zeros((batch.shape[0],) + tuple(shape), dtype=np.int64)
    out[:, : s[0], : s[1], : s[2]] = batch
    return out


class SectionRingModel(GradedModule):
    """Section ring generated in degree 1 by explicit polynomials.

    Subclasses supply ``generators()`` (term lists), ``normal_form(batch)`` and
    ``expected_hilbert(m)``; everything else is generic.
    """

    max_degree = 8

    def __init__(self, field: FieldSpec, model_id: str):
        if field.characteristic == 0:
            raise ValueError("section-ring models are built over a prime field; use proxy primes for characteristic 0")
        self.field = field
        self.model_id = model_id
        self.p = field.characteristic
        self._gens: list[Terms] | None = None
        self._pieces: dict[int, Piece] = {}
        self._mult: dict[int, list[np.ndarray]] = {}

    # subclass hooks -------------------------------------------------------

    @abstractmethod
    def generators(self) -> list[Terms]: ...

    def normal_form(self, batch: np.ndarray) -> np.ndarray:
        return batch

    # generic machinery ----------------------------------------------------

    @property
    def gens(self) -> list[Terms]:
        if self._gens is None:
            self._gens = self.generators()
        return self._gens

    @property
    def nvars(self) -> int:
        return len(self.gens)

    def generator_array(self, i: int) -> np.ndarray:
        return poly_array(self.gens[i], self.p)

    def piece(self, m: int) -> Piece:
        if m < 0:
            raise PieceUnavailable("negative degree")
        if m > self.max_degree:
            raise PieceUnavailable(f"degree {m} exceeds the supported maximum {self.max_degree}")
        if m not in self._pieces:
            if m == 0:
                self._pieces[0] = Piece(0, (1, 1, 1), np.ones((1, 1), dtype=np.int64), np.zeros(1, dtype=np.int64))
            elif not self._load(m):
                self._extend(m)
        return self._pieces[m]

    def piece_dim(self, m: int) -> int:
        if m < 0:
            return 0
        return self.piece(m).dim

    def mult_by(self, i: int, m: int) -> np.ndarray:
        """Matrix of multiplication by ``phi_i``: ``R_m -> R_{m+1}`` (shape ``H(m+1) x H(m)``)."""
        if m < 0:
            return np.zeros((self.piece_dim(m + 1), 0), dtype=np.int64)
        self.piece(m + 1)
        return self._mult[m][i]

    def element(self, m: int, k: int) -> np.ndarray:
        """The ``k``-th basis element of ``R_m`` as a coefficient array."""
        pc = self.piece(m)
        return pc.basis[k].reshape(pc.shape)

    def _extend(self, m: int) -> None:
        prev = self.piece(m - 1)
        batch = prev.basis.reshape((prev.dim,) + prev.shape)
        prods = [trim(self.normal_form(multiply(batch, g, self.p))) for g in self.gens]
        shape = tuple(max(pr.shape[k + 1] for pr in prods) for k in range(3))
        flat = [pad_to(pr, shape).reshape(prev.dim, -1) for pr in prods]
        allv = np.concatenate(flat, axis=0)
        basis, pivots = rref_modp(allv, self.p)
        piv = np.asarray(pivots, dtype=np.int64)
        self._pieces[m] = Piece(m, shape, basis, piv)
        # coordinates of a member of the span are its entries at the pivots
        self._mult[m - 1] = [np.ascontiguousarray(f[:, piv].T) for f in flat]
        self._store(m)

    # cache ---------------------------------------------------------------

    def _cache_path(self, m: int) -> Path | None:
        root = os.environ.get(CACHE_ENV)
        if not root:
            return None
        key = hashlib.sha1(repr((self.model_id, self.p, self.gens)).encode()).hexdigest()[:16]
        return Path(root) / f"{self.model_id.replace(':', '_').replace('=', '')}-p{self.p}-{key}-m{m}.npz"

    def _load(self, m: int) -> bool:
        path = self._cache_path(m)
        if path is None or not path.exists():
            return False
        self.piece(m - 1)
        with np.load(path) as z:
            self._pieces[m] = Piece(m, tuple(int(x) for x in z["shape"]), z["basis"], z["pivots"])
            self._mult[m - 1] = [z[f"mult{i}"] for i in range(self.nvars)]
        return True

    def _store(self, m: int) -> None:
        path = self._cache_path(m)
        if path is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        pc = self._pieces[m]
        arrays = {f"mult{i}": a for i, a in enumerate(self._mult[m - 1])}
        tmp = path.with_suffix(".tmp.npz")
        np.savez_compressed(tmp, shape=np.asarray(pc.shape), basis=pc.basis, pivots=pc.pivots, **arrays)
        os.replace(tmp, path)


# ---------------------------------------------------------------------------
# checks shared by all models


def hilbert_check(model: GradedModule, m_max: int) -> bool:
    """Compare ``dim R_m`` with the model's expected Hilbert function for ``1 <= m <= m_max``."""
    for m in range(1, m_max + 1):
        exp = model.expected_hilbert(m)
        if exp is None:
            raise ValueError(f"{model.model_id} declares no expected Hilbert function")
        found = model.piece_dim(m)
        if found != exp:
            raise HilbertMismatch(m, exp, found)
    return True


def associativity_check(model: GradedModule, samples: int = 100, seed: int = 0, m_max: int = 2) -> bool:
    """Spot-check ``v (w f) = w (v f)`` on seeded random triples (``f`` in ``R_m``, ``m < m_max``)."""
    p = model.field.characteristic
    rng = np.random.default_rng(seed)
    n = model.nvars
    for _ in range(samples):
        m = int(rng.integers(0, m_max))
        v, w = (int(x) for x in rng.integers(0, n, size=2))
        f = rng.integers(0, p, size=model.piece_dim(m)).astype(np.int64)
        a = matmul_modp(model.mult_by(v, m + 1), matmul_modp(model.mult_by(w, m), f[:, None], p), p)
        b = matmul_modp(model.mult_by(w, m + 1), matmul_modp(model.mult_by(v, m), f[:, None], p), p)
        if not np.array_equal(a, b):
            return False
    return True
