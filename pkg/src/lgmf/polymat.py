"""Matrix helpers for rectangular arrays of Poly."""

from __future__ import annotations

from .ring import Poly, RingContext


def zeros(ctx: RingContext, rows: int, cols: int):
    return [[ctx.zero() for _ in range(cols)] for _ in range(rows)]


def identity(ctx: RingContext, n: int):
    return [[ctx.one() if i == j else ctx.zero() for j in range(n)] for i in range(n)]


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c):
    return [[x * c for x in row] for row in a]


def mat_mul(a, b):
    if not a:
        return []
    rows, inner = len(a), len(b)
    cols = len(b[0]) if inner else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = None
            for k in range(inner):
                t = a[i][k] * b[k][j]
                acc = t if acc is None else acc + t
            row.append(acc)
        out.append(row)
    return out


def mat_map(f, a):
    return [[f(x) for x in row] for row in a]


def transpose(a):
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def mat_eq(a, b) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def is_zero_matrix(a) -> bool:
    return all(x.is_zero() for row in a for x in row)


def det(a, ctx: RingContext | None = None) -> Poly:
    """Determinant by Laplace expansion along the first row (desk scale)."""
    n = len(a)
    if n == 0:
        if ctx is None:
            raise ValueError("determinant of empty matrix needs a context")
        return ctx.one()
    if any(len(row) != n for row in a):
        raise ValueError("determinant of non-square matrix")
    if n == 1:
        return a[0][0]
    acc = None
    for j in range(n):
        if a[0][j].is_zero():
            continue
        minor = [[a[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = a[0][j] * det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc if acc is not None else a[0][0].ctx.zero()
