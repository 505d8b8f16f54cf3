from __future__ import annotations


def bareiss_rank(rows: list[list[int]]) -> int:
    """Exact rank of an integer matrix by fraction-free (Bareiss) elimination.

    Every intermediate entry is a minor of the input, so nothing leaves ZZ and
    the entries stay polynomially bounded.
    """
    a = [list(map(int, r)) for r in rows]
    if not a or not a[0]:
        return 0
    n, m = len(a), len(a[0])
    prev = 1
    rank = 0
    col = 0
    while rank < n and col < m:
        piv = next((i for i in range(rank, n) if a[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        if piv != rank:
            a[rank], a[piv] = a[piv], a[rank]
        pr = a[rank]
        pv = pr[col]
        for i in range(rank + 1, n):
            ri = a[i]
            f = ri[col]
            for j in range(col + 1, m):
                ri[j] = (pv * ri[j] - f * pr[j]) // prev
            ri[col] = 0
        prev = pv
        rank += 1
        col += 1
    return rank
