"""Dense elimination over F_p on numpy arrays.

The blocked rank routine factors column panels with plain row operations and
pushes the trailing update through a float64 matrix product, which is exact as
long as ``panel * p**2 < 2**53``.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_FLOAT_EXACT = 2**53


@njit(cache=True)
def _panel_pivots_jit(a, p):
    n, b = a.shape
    active = np.ones(n, dtype=np.bool_)
    prows = np.empty(min(n, b), dtype=np.int64)
    pcols = np.empty(min(n, b), dtype=np.int64)
    k = 0
    for j in range(b):
        r = -1
        for i in range(n):
            if active[i] and a[i, j] != 0:
                r = i
                break
        if r < 0:
            continue
        # modular inverse by Fermat
        inv = 1
        base = a[r, j]
        e = p - 2
        while e > 0:
            if e & 1:
                inv = inv * base % p
            base = base * base % p
            e >>= 1
        for c in range(j, b):
            a[r, c] = a[r, c] * inv % p
        for i in range(r + 1, n):
            f = a[i, j]
            if f != 0 and active[i]:
                for c in range(j, b):
                    a[i, c] = (a[i, c] - f * a[r, c]) % p
        active[r] = False
        prows[k] = r
        pcols[k] = j
        k += 1
        if k == n:
            break
    return prows[:k], pcols[:k]


def panel_pivots(panel: np.ndarray, p: int) -> tuple[list[int], list[int]]:
    """Forward elimination on a copy of ``panel``.

    Returns pivot rows and pivot columns (indices into ``panel``) in the order
    found. The pivot rows are independent and span the row space.
    """
    a = np.array(panel, dtype=np.int64) % p
    if a.size == 0:
        return [], []
    prows, pcols = _panel_pivots_jit(a, int(p))
    return prows.tolist(), pcols.tolist()


def inverse_modp(g: np.ndarray, p: int) -> np.ndarray:
    """Inverse of a square invertible matrix over F_p (Gauss-Jordan)."""
    k = g.shape[0]
    aug = np.concatenate([np.array(g, dtype=np.int64) % p, np.eye(k, dtype=np.int64)], axis=1)
    for j in range(k):
        nz = np.flatnonzero(aug[j:, j]) + j
        if nz.size == 0:
            raise ZeroDivisionError("matrix is singular")
        r = int(nz[0])
        if r != j:
            aug[[j, r]] = aug[[r, j]]
        aug[j] = (aug[j] * pow(int(aug[j, j]), p - 2, p)) % p
        col = aug[:, j].copy()
        col[j] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            aug[rows] = (aug[rows] - np.outer(col[rows], aug[j])) % p
    return aug[:, k:]


def _mod_inplace(z: np.ndarray, p: int) -> None:
    # np.mod on floats is slow; floor-multiply then correct the off-by-one cases
    q = np.floor(z * (1.0 / p))
    z -= q * p
    z[z < 0] += p
    z[z >= p] -= p


def matmul_modp(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact ``a @ b mod p`` for reduced integer matrices, via float64 BLAS."""
    k = a.shape[1]
    step = max(1, (_FLOAT_EXACT // (p * p)) - 1)
    af = a.astype(np.float64)
    bf = b.astype(np.float64)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.float64)
    for s in range(0, k, step):
        out += af[:, s : s + step] @ bf[s : s + step]
        _mod_inplace(out, p)
    return out.astype(np.int64)


def dense_rank_modp(a: np.ndarray, p: int, panel: int = 128) -> int:
    """Rank over F_p of a dense integer matrix."""
    a = np.asarray(a)
    if a.size == 0:
        return 0
    if panel * p * p >= _FLOAT_EXACT:
        prows, _ = panel_pivots(a, p)
        return len(prows)
    if a.shape[1] > a.shape[0]:
        a = a.T
    work = np.mod(a, p).astype(np.float64)
    rank = 0
    while work.shape[0] and work.shape[1]:
        b = min(panel, work.shape[1])
        pan = work[:, :b].astype(np.int64)
        prows, pcols = panel_pivots(pan, p)
        k = len(prows)
        rank += k
        if b == work.shape[1] or k == work.shape[0]:
            break
        rest = work[:, b:]
        if k == 0:
            work = rest
            continue
        keep = np.ones(work.shape[0], dtype=bool)
        keep[prows] = False
        ginv = inverse_modp(pan[np.ix_(prows, pcols)], p)
        x = matmul_modp(ginv, rest[prows].astype(np.int64), p).astype(np.float64)
        y = pan[np.ix_(np.flatnonzero(keep), pcols)].astype(np.float64)
        # k <= panel, so every partial sum here is exact in float64
        work = rest[keep] - y @ x
        _mod_inplace(work, p)
    return rank


def rref_modp(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p; returns the nonzero rows and pivot columns."""
    m = np.array(a, dtype=np.int64) % p
    n, ncols = m.shape
    pivots: list[int] = []
    r = 0
    for j in range(ncols):
        if r == n:
            break
        nz = np.flatnonzero(m[r:, j])
        if nz.size == 0:
            continue
        s = int(nz[0]) + r
        if s != r:
            m[[r, s]] = m[[s, r]]
        m[r, j:] = (m[r, j:] * pow(int(m[r, j]), p - 2, p)) % p
        col = m[:, j].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            m[rows, j:] = (m[rows, j:] - np.outer(col[rows], m[r, j:])) % p
        pivots.append(j)
        r += 1
    return m[:r], pivots


def nullspace_modp(a: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of the right kernel of ``a`` over F_p."""
    a = np.asarray(a, dtype=np.int64)
    ncols = a.shape[1]
    red, pivots = rref_modp(a, p) if a.shape[0] else (np.zeros((0, ncols), dtype=np.int64), [])
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for i, pc in enumerate(pivots):
            basis[t, pc] = (-red[i, f]) % p
    return basis
