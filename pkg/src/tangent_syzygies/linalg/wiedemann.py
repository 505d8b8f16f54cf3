"""Black-box rank over F_p (Wiedemann / Kaltofen-Saunders style).

The matrix is only touched through products with vectors. For ``A`` of size
``n x m`` we form ``B = D1 A^T D2 A D1`` with random nonsingular diagonals;
with high probability (for ``p`` large compared with ``m``) ``rank B = rank A``
and the minimal polynomial of ``B`` has no repeated factor ``x``, so the rank is
its degree minus one when ``B`` is singular. The minimal polynomial comes from
Berlekamp-Massey on a projected Krylov sequence ``u^T B^i v``.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp


def berlekamp_massey(seq: list[int], p: int) -> list[int]:
    """Connection polynomial ``c`` (``c[0] = 1``) of the shortest LFSR generating ``seq``."""
    c = [1]
    b = [1]
    length = 0
    m = 1
    bb = 1
    for n, s in enumerate(seq):
        d = s
        for i in range(1, length + 1):
            d = (d + c[i] * seq[n - i]) % p
        if d == 0:
            m += 1
            continue
        coef = d * pow(bb, p - 2, p) % p
        t = list(c)
        if len(c) < len(b) + m:
            c = c + [0] * (len(b) + m - len(c))
        for i, bi in enumerate(b):
            c[i + m] = (c[i + m] - coef * bi) % p
        if 2 * length <= n:
            length = n + 1 - length
            b = t
            bb = d
            m = 1
        else:
            m += 1
    return (c + [0] * (length + 1))[: length + 1]


def _matvec(a: sp.csr_matrix, x: np.ndarray, p: int) -> np.ndarray:
    # entries < p and p < 2^22 keep each dot product well inside int64
    return (a @ x) % p


def wiedemann_rank_modp(a: sp.csr_matrix, p: int, seed: int = 0, trials: int = 2) -> int:
    """Randomised rank; never exceeds the true rank, equals it with high probability."""
    a = sp.csr_matrix(a, dtype=np.int64)
    a.data %= p
    a.eliminate_zeros()
    n, m = a.shape
    if a.nnz == 0:
        return 0
    at = a.T.tocsr()
    rng = np.random.default_rng(seed)
    best = 0
    for _ in range(trials):
        d1 = rng.integers(1, p, size=m, dtype=np.int64)
        d2 = rng.integers(1, p, size=n, dtype=np.int64)
        u = rng.integers(0, p, size=m, dtype=np.int64)
        v = rng.integers(0, p, size=m, dtype=np.int64)

        def apply_b(x: np.ndarray) -> np.ndarray:
            y = (d1 * x) % p
            y = _matvec(a, y, p)
            y = (d2 * y) % p
            y = _matvec(at, y, p)
            return (d1 * y) % p

        seq = []
        x = v
        for _ in range(2 * min(n, m) + 2):
            seq.append(int(np.dot(u, x) % p))
            x = apply_b(x)
        c = berlekamp_massey(seq, p)
        # reversed connection polynomial is the minimal polynomial of the sequence
        # strip the power of x dividing the minimal polynomial
        r = len(c) - 1
        while r > 0 and c[r] == 0:
            r -= 1
        best = max(best, min(r, n, m))
    return best
