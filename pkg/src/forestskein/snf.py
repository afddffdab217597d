"""Exact integer Smith normal form, for abelianization of finite presentations.

Pure-Python row/column reduction over arbitrary-precision ints.  Pivots are
chosen by minimal absolute value; after clearing the border, divisibility of
the pivot into the remaining block is restored by folding an offending
column into the pivot column.  Factors come out nonnegative and in
divisibility order.
"""

from __future__ import annotations


def smith_normal_form(matrix) -> list:
    """Invariant factors of an integer matrix (zeros dropped from the diagonal shape).

    Returns the list of nonzero invariant factors d_1 | d_2 | ... ; the rank
    is their count.  The cokernel of the matrix, viewed as a map on column
    vectors Z^cols / im, is Z^(cols - rank) plus Z/d for each factor d > 1.
    """
    m = [list(map(int, row)) for row in matrix]
    if not m or not m[0]:
        return []
    rows, cols = len(m), len(m[0])
    factors = []
    s = 0
    while s < min(rows, cols):
        pivot = _find_pivot(m, s, rows, cols)
        if pivot is None:
            break
        r, c = pivot
        if r != s:
            m[s], m[r] = m[r], m[s]
        if c != s:
            for row in m:
                row[s], row[c] = row[c], row[s]
        while True:
            _reduce_border(m, s, rows, cols)
            if all(m[i][s] == 0 for i in range(s + 1, rows)) and \
               all(m[s][j] == 0 for j in range(s + 1, cols)):
                if _fold_nondivisible(m, s, rows, cols):
                    continue
                break
            _swap_min_to_pivot(m, s, rows, cols)
        if m[s][s] < 0:
            m[s][s] = -m[s][s]
        factors.append(m[s][s])
        s += 1
    return [f for f in factors if f != 0]


def _find_pivot(m, s, rows, cols):
    best = None
    for i in range(s, rows):
        for j in range(s, cols):
            v = abs(m[i][j])
            if v and (best is None or v < abs(m[best[0]][best[1]])):
                best = (i, j)
    return best


def _swap_min_to_pivot(m, s, rows, cols):
    r, c = _find_pivot(m, s, rows, cols)
    if r != s:
        m[s], m[r] = m[r], m[s]
    if c != s:
        for row in m:
            row[s], row[c] = row[c], row[s]


def _reduce_border(m, s, rows, cols):
    p = m[s][s]
    for i in range(s + 1, rows):
        if m[i][s]:
            q = m[i][s] // p
            for j in range(s, cols):
                m[i][j] -= q * m[s][j]
    for j in range(s + 1, cols):
        if m[s][j]:
            q = m[s][j] // p
            for i in range(s, rows):
                m[i][j] -= q * m[i][s]


def _fold_nondivisible(m, s, rows, cols) -> bool:
    p = m[s][s]
    for i in range(s + 1, rows):
        for j in range(s + 1, cols):
            if m[i][j] % p:
                for k in range(s, rows):
                    m[k][s] += m[k][j]
                return True
    return False


def cokernel_invariants(matrix, cols: int) -> tuple:
    """(free_rank, torsion list) of Z^cols / row span of the matrix."""
    factors = smith_normal_form(matrix) if matrix else []
    torsion = [d for d in factors if d > 1]
    return cols - len(factors), torsion
