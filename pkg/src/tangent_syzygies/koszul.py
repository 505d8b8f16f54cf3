"""Koszul cohomology of graded modules and Betti tables.

``kappa_{p,q}`` is the middle homology of

    ^{p+1} V (x) M_{q-1} -> ^p V (x) M_q -> ^{p-1} V (x) M_{q+1},

with differential ``v_{i_0}^...^v_{i_p} (x) f |-> sum_j (-1)^j v_{...i_j omitted...} (x) v_{i_j} f``.
Wedge bases are strictly increasing index tuples in lexicographic order.

For the curve models the complexes are large and carry no torus grading, so
by default they are replaced by a generic linear section: if ``l1, l2`` is a
regular sequence of linear forms on ``R`` then ``K_{p,q}(R, V)`` equals
``K_{p,q}(R / (l1, l2), V / <l1, l2>)`` and the complexes lose two variables.
Regularity of the sequence is verified degree by degree.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
import time
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .linalg import (
    DEFAULT_CONFIG,
    EXACT_FP,
    MULTI_PRIME,
    CompositionNotZero,
    LinalgConfig,
    SparseMatrix,
    rank_with_certificate,
)
from .linalg.dense import matmul_modp, rref_modp
from .models.base import GradedModule

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# generic linear sections


class NotRegularSequence(RuntimeError):
    pass


class LinearSection(GradedModule):
    """``A = R / (l1, l2) R`` over ``k[v_2, ..., v_r]`` for seeded generic linear forms.

    ``l1 = v_0 + sum_{i>=2} a_i v_i`` and ``l2 = v_1 + sum_{i>=2} b_i v_i``, so the
    images of ``v_2..v_r`` form a basis of ``V / <l1, l2>``. ``A_m`` is
    represented by the coordinates of ``R_m`` that are not pivots of the echelon
    basis of ``l1 R_{m-1} + l2 R_{m-1}``.
    """

    def __init__(self, model: GradedModule, seed: int = 0):
        self.model = model
        self.field = model.field
        self.p = model.field.characteristic
        self.model_id = model.model_id
        self.seed = seed
        rng = np.random.default_rng(seed)
        n = model.nvars
        self.forms = np.zeros((2, n), dtype=np.int64)
        self.forms[0, 0] = 1
        self.forms[1, 1] = 1
        self.forms[:, 2:] = rng.integers(1, self.p, size=(2, n - 2))
        self._quot: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}
        self._mult: dict[tuple[int, int], np.ndarray] = {}

    @property
    def nvars(self) -> int:
        return self.model.nvars - 2

    def _form_matrix(self, k: int, m: int) -> np.ndarray:
        """Multiplication by ``l_k`` as a matrix ``R_m -> R_{m+1}``."""
        out = np.zeros((self.model.piece_dim(m + 1), self.model.piece_dim(m)), dtype=np.int64)
        for i, c in enumerate(self.forms[k].tolist()):
            if c:
                out = (out + c * self.model.mult_by(i, m)) % self.p
        return out

    def quotient(self, m: int):
        """``(pivots, free, E)`` with ``E`` the echelon basis of ``(l1, l2)_m`` in ``R_m`` coordinates."""
        if m not in self._quot:
            h = self.model.piece_dim(m)
            if m == 0:
                self._quot[0] = (np.zeros(0, dtype=np.int64), np.arange(h), np.zeros((0, h), dtype=np.int64))
            else:
                gens = np.concatenate([self._form_matrix(0, m - 1), self._form_matrix(1, m - 1)], axis=1)
                if gens.shape[1]:
                    e, piv = rref_modp(gens.T, self.p)
                else:
                    e, piv = np.zeros((0, h), dtype=np.int64), []
                piv = np.asarray(piv, dtype=np.int64)
                free = np.setdiff1d(np.arange(h), piv)
                self._quot[m] = (piv, free, e)
        return self._quot[m]

    def project(self, m: int, vecs: np.ndarray) -> np.ndarray:
        """Coordinates in ``A_m`` of the columns of ``vecs`` (vectors of ``R_m``)."""
        piv, free, e = self.quotient(m)
        out = vecs[free]
        if piv.size:
            out = (out - matmul_modp(e[:, free].T.copy(), vecs[piv], self.p)) % self.p
        return out

    def piece_dim(self, m: int) -> int:
        if m < 0:
            return 0
        return int(self.quotient(m)[1].size)

    def mult_by(self, i: int, m: int) -> np.ndarray:
        key = (i, m)
        if key not in self._mult:
            if m < 0:
                return np.zeros((self.piece_dim(m + 1), 0), dtype=np.int64)
            free = self.quotient(m)[1]
            full = self.model.mult_by(i + 2, m)[:, free]
            self._mult[key] = self.project(m + 1, full)
        return self._mult[key]

    def expected_hilbert(self, m: int) -> int | None:
        h = [self.model.expected_hilbert(k) if k >= 0 else 0 for k in (m, m - 1, m - 2)]
        if any(x is None for x in h):
            return None
        return h[0] - 2 * h[1] + h[2]

    def verify_regular(self, m_max: int) -> None:
        """Check that ``l1, l2`` is a regular sequence on ``R`` in degrees ``<= m_max``."""
        from .linalg.dense import dense_rank_modp

        for m in range(1, m_max + 1):
            h1 = self.model.piece_dim(m - 1)
            h2 = self.model.piece_dim(m - 2) if m >= 2 else 0
            l1 = self._form_matrix(0, m - 1)
            if dense_rank_modp(l1, self.p) != h1:
                raise NotRegularSequence(f"l1 is a zero divisor in degree {m - 1}")
            if self.model.piece_dim(m) - self.piece_dim(m) != 2 * h1 - h2:
                raise NotRegularSequence(f"l2 is a zero divisor on R/l1 in degree {m - 1}")


# ---------------------------------------------------------------------------
# the Koszul complex


def _subsets(n: int, p: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(n), p))


class KoszulEngine:
    """Betti numbers of a ``GradedModule`` over ``k[v_0..v_{n-1}]``, with rank caching."""

    def __init__(self, module: GradedModule, config: LinalgConfig | None = None, certify_complex: bool = True):
        self.module = module
        self.config = config or DEFAULT_CONFIG
        self.certify_complex = certify_complex
        self.n = module.nvars
        self._ranks: dict[tuple[int, int], tuple[int, str]] = {}
        self._checked: set[tuple[int, int]] = set()
        self.timings: dict[tuple[int, int], float] = {}

    def dim(self, p: int, q: int) -> int:
        if p < 0 or p > self.n or q < 0:
            return 0
        return comb(self.n, p) * self.module.piece_dim(q)

    def differential(self, p: int, q: int) -> SparseMatrix:
        """``d_{p,q}: ^p V (x) M_q -> ^{p-1} V (x) M_{q+1}``."""
        field = self.module.field
        hq = self.module.piece_dim(q) if q >= 0 else 0
        hq1 = self.module.piece_dim(q + 1) if q + 1 >= 0 else 0
        ncols = self.dim(p, q)
        nrows = self.dim(p - 1, q + 1)
        if p <= 0 or p > self.n or ncols == 0 or nrows == 0:
            return SparseMatrix.zeros(nrows, ncols, field)
        target = {s: k for k, s in enumerate(_subsets(self.n, p - 1))}
        per_var: list[list[tuple[int, int, int]]] = [[] for _ in range(self.n)]
        for k, s in enumerate(_subsets(self.n, p)):
            for j, i in enumerate(s):
                per_var[i].append((k, target[s[:j] + s[j + 1 :]], -1 if j % 2 else 1))
        rows, cols, vals = [], [], []
        for i in range(self.n):
            if not per_var[i]:
                continue
            mi = self.module.mult_by(i, q)
            r, c = np.nonzero(mi)
            v = mi[r, c]
            src = np.asarray(per_var[i], dtype=np.int64)
            rows.append((src[:, 1, None] * hq1 + r[None, :]).ravel())
            cols.append((src[:, 0, None] * hq + c[None, :]).ravel())
            vals.append((src[:, 2, None] * v[None, :]).ravel())
        if not rows:
            return SparseMatrix.zeros(nrows, ncols, field)
        return SparseMatrix(nrows, ncols, np.concatenate(rows), np.concatenate(cols), np.concatenate(vals), field)

    def rank(self, p: int, q: int) -> tuple[int, str]:
        key = (p, q)
        if key not in self._ranks:
            if p <= 0 or p > self.n or q < 0 or self.dim(p, q) == 0 or self.dim(p - 1, q + 1) == 0:
                self._ranks[key] = (0, EXACT_FP)
            else:
                t0 = time.perf_counter()
                d = self.differential(p, q)
                self._ranks[key] = rank_with_certificate(d, self.config)
                self.timings[key] = time.perf_counter() - t0
                log.debug("rank d_{%d,%d} (%dx%d) = %d", p, q, d.nrows, d.ncols, self._ranks[key][0])
        return self._ranks[key]

    def check_complex(self, p: int, q: int) -> None:
        """Assert ``d_{p-1,q+1} o d_{p,q} = 0``."""
        if (p, q) in self._checked:
            return
        if p >= 2 and q >= 0 and self.dim(p, q) and self.dim(p - 2, q + 2):
            comp = self.differential(p - 1, q + 1) @ self.differential(p, q)
            if not comp.is_zero():
                raise CompositionNotZero(f"Koszul differentials do not compose to zero at ({p}, {q})")
        self._checked.add((p, q))

    def betti(self, p: int, q: int) -> int:
        return self.betti_with_certificate(p, q)[0]

    def betti_with_certificate(self, p: int, q: int) -> tuple[int, str]:
        if p < 0 or p > self.n or q < 0:
            return 0, EXACT_FP
        if self.certify_complex:
            self.check_complex(p + 1, q - 1)
            self.check_complex(p, q)
        r_out, l_out = self.rank(p, q)
        r_in, l_in = self.rank(p + 1, q - 1)
        val = self.dim(p, q) - r_out - r_in
        return val, l_out if l_out == l_in else MULTI_PRIME


def koszul_betti(module: GradedModule, p: int, q: int, config: LinalgConfig | None = None) -> int:
    """``dim K_{p,q}`` of a graded module over its prime field."""
    return KoszulEngine(module, config).betti(p, q)


# ---------------------------------------------------------------------------
# Betti tables


@dataclass
class BettiTable:
    model: str
    char: int
    certification: str
    entries: dict[tuple[int, int], int]
    p_range: tuple[int, int]
    q_range: tuple[int, int]
    g: int | None = None
    notes: list[str] = field(default_factory=list)
    ms: dict[tuple[int, int], float] = field(default_factory=dict)

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.entries.get(key, 0)

    def row(self, q: int) -> list[int]:
        return [self[p, q] for p in range(self.p_range[0], self.p_range[1] + 1)]

    def nonzero(self) -> dict[tuple[int, int], int]:
        return {k: v for k, v in sorted(self.entries.items()) if v}

    def with_entry(self, key: tuple[int, int], value: int) -> BettiTable:
        e = dict(self.entries)
        e[key] = value
        return BettiTable(self.model, self.char, self.certification, e, self.p_range, self.q_range, self.g)

    # serialisation -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "model": self.model,
            "char": self.char,
            "certification": self.certification,
            "entries": [{"p": p, "q": q, "v": v} for (p, q), v in sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=False)

    @classmethod
    def from_dict(cls, d: dict) -> BettiTable:
        if d.get("schema") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema {d.get('schema')}")
        entries = {(e["p"], e["q"]): e["v"] for e in d["entries"]}
        ps = [p for p, _ in entries] or [0]
        qs = [q for _, q in entries] or [0]
        return cls(d["model"], d["char"], d["certification"], entries, (min(ps), max(ps)), (min(qs), max(qs)))

    def csv_rows(self) -> list[list]:
        g = "" if self.g is None else self.g
        return [
            [self.model, g, self.char, p, q, v, self.certification, round(self.ms.get((p, q), 0.0), 1)]
            for (p, q), v in sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))
        ]

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(CSV_HEADER)
        w.writerows(self.csv_rows())
        return buf.getvalue()

    def pretty(self) -> str:
        """Rows ``q``, columns ``p``, ``-`` for zero."""
        ps = range(self.p_range[0], self.p_range[1] + 1)
        qs = range(self.q_range[0], self.q_range[1] + 1)
        cells = [[str(p) for p in ps]] + [[str(self[p, q]) if self[p, q] else "-" for p in ps] for q in qs]
        width = max(len(c) for row in cells for c in row)
        lab = max(len(str(q)) for q in qs)
        lines = [" " * lab + " |" + "".join(f" {c:>{width}}" for c in cells[0])]
        lines.append("-" * len(lines[0]))
        for q, row in zip(qs, cells[1:]):
            lines.append(f"{q:>{lab}} |" + "".join(f" {c:>{width}}" for c in row))
        return "\n".join(lines) + "\n"


CSV_HEADER = ["model", "g", "char", "p", "q", "value", "certification", "ms"]


def betti_table(
    module: GradedModule,
    p_max: int | None = None,
    q_max: int = 3,
    config: LinalgConfig | None = None,
    model_id: str | None = None,
    engine: KoszulEngine | None = None,
) -> BettiTable:
    """Full grid ``0 <= p <= p_max``, ``0 <= q <= q_max`` over the module's prime field."""
    eng = engine or KoszulEngine(module, config)
    if p_max is None:
        p_max = eng.n
    entries, ms, labels = {}, {}, []
    for q in range(q_max + 1):
        for p in range(p_max + 1):
            t0 = time.perf_counter()
            v, lab = eng.betti_with_certificate(p, q)
            ms[(p, q)] = 1000 * (time.perf_counter() - t0)
            entries[(p, q)] = v
            labels.append(lab)
    char = module.field.characteristic
    return BettiTable(model_id or module.model_id, char, EXACT_FP, entries, (0, p_max), (0, q_max), ms=ms)


# ---------------------------------------------------------------------------
# consistency checks


def duality_check(table: BettiTable, g: int) -> bool:
    """``kappa_{p,q} = kappa_{g-p-2, 3-q}`` for every entry (missing entries count as zero)."""
    keys = set(table.entries) | {(g - 2 - p, 3 - q) for p, q in table.entries}
    for p, q in keys:
        if table[p, q] != table[g - 2 - p, 3 - q]:
            return False
    return True


def hilbert_series_numerator(table: BettiTable) -> dict[int, int]:
    out: dict[int, int] = {}
    for (p, q), v in table.entries.items():
        if v:
            out[p + q] = out.get(p + q, 0) + (-1) ** p * v
    return {k: v for k, v in out.items() if v}


def hilbert_numerator_check(table: BettiTable, hilbert, nvars: int, degree: int | None = None) -> bool:
    """Compare ``sum (-1)^p kappa_{p,q} t^{p+q}`` with ``(sum_m H(m) t^m) (1-t)^nvars`` through ``degree``.

    ``hilbert`` is a callable ``m -> dim M_m``; the default degree bound is the
    largest ``p + q`` the table can see.
    """
    if degree is None:
        degree = table.p_range[1] + table.q_range[1]
    lhs = hilbert_series_numerator(table)
    for k in range(degree + 1):
        rhs = sum((-1) ** j * comb(nvars, j) * hilbert(k - j) for j in range(min(k, nvars) + 1))
        if lhs.get(k, 0) != rhs:
            return False
    return True
