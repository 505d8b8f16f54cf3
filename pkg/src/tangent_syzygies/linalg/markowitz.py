"""Sparse Gaussian elimination over F_p with Markowitz pivot selection.

Rows are kept as dicts; a lazy heap over column counts proposes the sparsest
columns, and among their rows the pivot minimising ``(r - 1) * (c - 1)`` is
taken. Once the active part fills in past ``switch_density`` the remainder is
handed to the dense eliminator.
"""

from __future__ import annotations

import heapq

import numpy as np

from .dense import dense_rank_modp

_CANDIDATE_COLUMNS = 4


def markowitz_rank_modp(
    nrows: int,
    ncols: int,
    rows_idx: np.ndarray,
    cols_idx: np.ndarray,
    vals: np.ndarray,
    p: int,
    switch_density: float = 0.15,
    panel: int = 128,
) -> int:
    rows: dict[int, dict[int, int]] = {}
    colsets: dict[int, set[int]] = {}
    for r, c, v in zip(rows_idx.tolist(), cols_idx.tolist(), vals.tolist()):
        v %= p
        if v:
            rows.setdefault(r, {})[c] = v
            colsets.setdefault(c, set()).add(r)

    heap = [(len(s), c) for c, s in colsets.items()]
    heapq.heapify(heap)
    nnz = sum(len(r) for r in rows.values())
    rank = 0

    while rows:
        n_act, m_act = len(rows), len(colsets)
        if m_act == 0:
            break
        if nnz > switch_density * n_act * m_act and n_act * m_act > 4096:
            return rank + _dense_finish(rows, colsets, p, panel)

        # candidate columns: a few of the sparsest live columns
        cands: list[int] = []
        stash = []
        while heap and len(cands) < _CANDIDATE_COLUMNS:
            cnt, c = heapq.heappop(heap)
            s = colsets.get(c)
            if s is None or len(s) != cnt:
                if s is not None:
                    heapq.heappush(heap, (len(s), c))
                continue
            cands.append(c)
            stash.append((cnt, c))
        if not cands:
            break
        for item in stash:
            heapq.heappush(heap, item)

        best = None
        for c in cands:
            cc = len(colsets[c]) - 1
            for r in colsets[c]:
                cost = (len(rows[r]) - 1) * cc
                if best is None or cost < best[0]:
                    best = (cost, r, c)
            if best[0] == 0:
                break
        _, pr, pc = best

        prow = rows.pop(pr)
        nnz -= len(prow)
        for c in prow:
            colsets[c].discard(pr)
        inv = pow(prow[pc], p - 2, p)
        for r in list(colsets[pc]):
            row = rows[r]
            f = row[pc] * inv % p
            before = len(row)
            for c, v in prow.items():
                nv = (row.get(c, 0) - f * v) % p
                if nv:
                    if c not in row:
                        colsets[c].add(r)
                    row[c] = nv
                elif c in row:
                    del row[c]
                    colsets[c].discard(r)
            nnz += len(row) - before
            if not row:
                del rows[r]
        del colsets[pc]
        for c in prow:
            s = colsets.get(c)
            if s is not None:
                if s:
                    heapq.heappush(heap, (len(s), c))
                else:
                    del colsets[c]
        rank += 1
    return rank


def _dense_finish(rows: dict[int, dict[int, int]], colsets: dict[int, set[int]], p: int, panel: int) -> int:
    rlist = sorted(rows)
    clist = sorted(colsets)
    cpos = {c: j for j, c in enumerate(clist)}
    a = np.zeros((len(rlist), len(clist)), dtype=np.int64)
    for i, r in enumerate(rlist):
        for c, v in rows[r].items():
            a[i, cpos[c]] = v
    return dense_rank_modp(a, p, panel)
