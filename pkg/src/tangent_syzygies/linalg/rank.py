"""Rank and homology dimensions for SparseMatrix.

Every rank is computed block by block: the bipartite row/column graph of the
matrix is split into connected components (for the torus-graded maps of this
package these are the weight spaces), and each block goes to the cheapest
exact eliminator for its size and density.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .bareiss import bareiss_rank
from .dense import dense_rank_modp
from .field import DEFAULT_CONFIG, LinalgConfig
from .markowitz import markowitz_rank_modp
from .sparse import DimensionMismatch, SparseMatrix
from .wiedemann import wiedemann_rank_modp

log = logging.getLogger(__name__)

EXACT_FP = "exact-Fp"
EXACT_Q = "exact-Q"
MULTI_PRIME = "multi-prime-char0"

_STRENGTH = {EXACT_FP: 2, EXACT_Q: 2, MULTI_PRIME: 1}


class CompositionNotZero(ValueError):
    pass


def weakest(labels) -> str:
    labels = list(labels)
    if not labels:
        return EXACT_Q
    return min(labels, key=lambda s: _STRENGTH[s])


@dataclass(frozen=True)
class Block:
    rows: np.ndarray
    cols: np.ndarray
    r: np.ndarray  # local row index of each entry
    c: np.ndarray
    v: np.ndarray


def blocks(m: SparseMatrix) -> list[Block]:
    """Connected components of the row/column incidence graph, with local indices."""
    if m.nnz == 0:
        return []
    n = m.nrows + m.ncols
    g = sp.coo_matrix((np.ones(m.nnz, dtype=np.int8), (m.rows, m.nrows + m.cols)), shape=(n, n))
    ncomp, labels = connected_components(g, directed=False)
    ent_lab = labels[m.rows]
    order = np.argsort(ent_lab, kind="stable")
    lab_sorted = ent_lab[order]
    cuts = np.flatnonzero(np.diff(lab_sorted)) + 1
    out = []
    for idx in np.split(order, cuts):
        r, c, v = m.rows[idx], m.cols[idx], m.vals[idx]
        ur, lr = np.unique(r, return_inverse=True)
        uc, lc = np.unique(c, return_inverse=True)
        out.append(Block(ur, uc, lr.astype(np.int64), lc.astype(np.int64), v))
    return out


def _rank_block_modp(b: Block, p: int, cfg: LinalgConfig) -> int:
    nr, nc = b.rows.size, b.cols.size
    if min(nr, nc) == 1:
        return 1
    size = nr * nc
    density = b.v.size / size
    if b.v.size >= cfg.wiedemann_min_nnz:
        a = sp.csr_matrix((b.v, (b.r, b.c)), shape=(nr, nc), dtype=np.int64)
        return wiedemann_rank_modp(a, p, seed=cfg.seed)
    if size >= cfg.markowitz_min_size and density <= cfg.markowitz_max_density:
        return markowitz_rank_modp(nr, nc, b.r, b.c, b.v, p, cfg.markowitz_switch_density, cfg.panel_width)
    a = np.zeros((nr, nc), dtype=np.int64)
    a[b.r, b.c] = b.v
    return dense_rank_modp(a, p, cfg.panel_width)


def rank_with_certificate(m: SparseMatrix, config: LinalgConfig | None = None) -> tuple[int, str]:
    """Rank of ``m`` and the label of the criterion that certifies it.

    Over F_p the rank is exact. Over QQ each block is reduced modulo every
    proxy prime; the block rank is certified exact when it reaches the block's
    full rank (reduction can only lower rank) or when a Bareiss elimination is
    affordable, and is otherwise reported as a multi-prime value.
    """
    cfg = config or DEFAULT_CONFIG
    p = m.field.characteristic
    if p:
        return sum(_rank_block_modp(b, p, cfg) for b in blocks(m)), EXACT_FP
    total = 0
    labels = []
    for b in blocks(m):
        full = min(b.rows.size, b.cols.size)
        ranks = []
        for q in cfg.proxy_primes:
            bq = Block(b.rows, b.cols, b.r, b.c, b.v % q)
            ranks.append(_rank_block_modp(bq, q, cfg))
            if ranks[-1] == full:
                break
        rk = max(ranks)
        if rk == full:
            labels.append(EXACT_Q)
        elif max(b.rows.size, b.cols.size) <= cfg.exact_certificate_size:
            dense = [[0] * b.cols.size for _ in range(b.rows.size)]
            for i, j, v in zip(b.r.tolist(), b.c.tolist(), b.v.tolist()):
                dense[i][j] = v
            rk = bareiss_rank(dense)
            labels.append(EXACT_Q)
        else:
            if len(set(ranks)) > 1:
                log.warning("proxy primes disagree on a block rank: %s", ranks)
            labels.append(MULTI_PRIME)
        total += rk
    return total, weakest(labels)


def rank(m: SparseMatrix, config: LinalgConfig | None = None) -> int:
    return rank_with_certificate(m, config)[0]


def check_composable(a: SparseMatrix, b: SparseMatrix) -> None:
    if a.nrows != b.ncols:
        raise DimensionMismatch(f"codomain of A ({a.nrows}) differs from domain of B ({b.ncols})")
    if a.field != b.field:
        raise DimensionMismatch("A and B live over different fields")


def homology_dim(a: SparseMatrix, b: SparseMatrix, config: LinalgConfig | None = None) -> int:
    """Middle homology of ``. -A-> . -B-> .``, i.e. ``dim ker B - rank A``."""
    return homology_with_certificate(a, b, config)[0]


def homology_with_certificate(a: SparseMatrix, b: SparseMatrix, config: LinalgConfig | None = None) -> tuple[int, str]:
    check_composable(a, b)
    if not (b @ a).is_zero():
        raise CompositionNotZero("B o A is not zero")
    ra, la = rank_with_certificate(a, config)
    rb, lb = rank_with_certificate(b, config)
    return b.ncols - rb - ra, weakest([la, lb])
