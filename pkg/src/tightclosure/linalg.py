"""Exact linear algebra over GF(p): row reduction and kernels.

Matrices are lists of int rows; all arithmetic is mod p.  Pivoting is
deterministic (first row with a nonzero entry, columns left to right), so
reduced forms and kernel bases are reproducible byte for byte.
"""

from __future__ import annotations


def rref(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = [[x % p for x in row] for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if m[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: list[list[int]], p: int) -> int:
    return len(rref(rows, p)[0])


def nullspace(rows: list[list[int]], ncols: int, p: int) -> list[list[int]]:
    """Canonical basis of {v : A v = 0}, one vector per free column.

    Each basis vector has 1 in its free column and the pivot entries
    filled by back-substitution; vectors are ordered by free column.
    """
    reduced, pivots = rref(rows, p)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [0] * ncols
        v[free] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-reduced[i][free]) % p
        basis.append(v)
    return basis


def row_space_contains(reduced: list[list[int]], pivots: list[int], v: list[int], p: int) -> bool:
    """Membership of v in a row space already in reduced echelon form."""
    w = [x % p for x in v]
    for i, c in enumerate(pivots):
        if w[c]:
            f = w[c]
            w = [(a - f * b) % p for a, b in zip(w, reduced[i])]
    return not any(w)
