"""Exact linear algebra over Q: solving, rank, nullspace, span membership.

All matrices are lists of lists of Fractions; everything is fraction-exact
Gaussian elimination with first-nonzero pivoting for determinism.
"""

from __future__ import annotations

from fractions import Fraction


def _rref(rows, width):
    """Reduced row echelon form in place; returns list of pivot columns."""
    pivots = []
    r = 0
    for c in range(width):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def rank(matrix) -> int:
    if not matrix:
        return 0
    rows = [[Fraction(v) for v in row] for row in matrix]
    return len(_rref(rows, len(rows[0])))


def solve(matrix, rhs):
    """One solution of matrix @ x = rhs, or None if inconsistent.

    Free variables are set to zero (deterministically).
    """
    m = len(matrix)
    if m == 0:
        return []
    n = len(matrix[0])
    rows = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    pivots = _rref(rows, n)
    for i in range(len(pivots), m):
        if rows[i][n]:
            return None
    x = [Fraction(0)] * n
    for r, c in enumerate(pivots):
        x[c] = rows[r][n]
    return x


def nullspace(matrix, n=None):
    """Basis of the kernel of matrix (m x n); returns list of vectors."""
    m = len(matrix)
    if n is None:
        n = len(matrix[0]) if m else 0
    rows = [[Fraction(v) for v in row] for row in matrix]
    pivots = _rref(rows, n)
    pivot_set = set(pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * n
        v[free] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -rows[r][free]
        basis.append(v)
    return basis


class Span:
    """An incrementally built row space with exact membership/reduction."""

    def __init__(self, width: int):
        self.width = width
        self.rows = []      # rref rows
        self.pivots = []    # pivot column per row

    def reduce(self, vec):
        v = [Fraction(x) for x in vec]
        for row, p in zip(self.rows, self.pivots):
            if v[p]:
                f = v[p]
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def contains(self, vec) -> bool:
        return not any(self.reduce(vec))

    def add(self, vec) -> bool:
        """Insert a vector; returns True if it enlarged the span."""
        v = self.reduce(vec)
        for c in range(self.width):
            if v[c]:
                inv = Fraction(1) / v[c]
                v = [a * inv for a in v]
                for i in range(len(self.rows)):
                    if self.rows[i][c]:
                        f = self.rows[i][c]
                        self.rows[i] = [a - f * b for a, b in zip(self.rows[i], v)]
                self.rows.append(v)
                self.pivots.append(c)
                return True
        return False

    @property
    def dim(self) -> int:
        return len(self.rows)


def invertible(matrix) -> bool:
    m = len(matrix)
    return m == 0 or (len(matrix[0]) == m and rank(matrix) == m)
