"""Exact rational linear algebra: RREF, linear solve, null space.

Matrices are lists of rows of Fractions. Everything is exact; there is no
pivoting for stability because there is no rounding.
"""

from __future__ import annotations

from fractions import Fraction


def rref(matrix: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of a copy of ``matrix``.

    Returns (rref_matrix, pivot_columns).
    """
    m = [row[:] for row in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, rows):
            if m[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def solve_linear(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Exact particular solution of ``matrix @ x = rhs``, or None if inconsistent.

    Free variables are set to zero.
    """
    rows = len(matrix)
    if rows == 0:
        return []
    cols = len(matrix[0])
    aug = [list(matrix[i]) + [rhs[i]] for i in range(rows)]
    red, pivots = rref(aug)
    # Inconsistent iff a pivot lands in the rhs column.
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, c in enumerate(pivots):
        x[c] = red[r][cols]
    return x


def nullspace(matrix: list[list[Fraction]]) -> list[list[Fraction]]:
    """Exact basis of the kernel of ``matrix``; empty list means trivial kernel.

    Each basis vector is scaled so its first nonzero entry is 1.
    """
    rows = len(matrix)
    if rows == 0:
        return []
    cols = len(matrix[0])
    red, pivots = rref(matrix)
    pivot_set = set(pivots)
    basis: list[list[Fraction]] = []
    for free in range(cols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * cols
        vec[free] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -red[r][free]
        first = next(v for v in vec if v != 0)
        if first != 1:
            vec = [v / first for v in vec]
        basis.append(vec)
    return basis
