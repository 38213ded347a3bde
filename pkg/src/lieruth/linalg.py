"""Dense exact linear algebra over the rationals.

Matrices are lists of rows of :class:`~fractions.Fraction`.  Sizes stay at
desk scale (a few hundred rows at most), so plain Gaussian elimination is
adequate.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Sequence

Matrix = List[List[Fraction]]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def zeros(rows: int, cols: int) -> Matrix:
    return [[_ZERO] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = _ONE
    return out


def to_fraction_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def transpose(a: Matrix, cols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*a)]


def matmul(a: Matrix, b: Matrix, cols: int | None = None) -> Matrix:
    """Product of an (n×k) and a (k×m) matrix.

    Entries may be Fractions or any ring elements supporting + and *.
    ``cols`` gives m when k = 0 and ``b`` carries no column information.
    """
    n = len(a)
    if not b:
        return zeros(n, cols or 0)
    bt = transpose(b)
    out = []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x]
        out.append([sum((x * col[k] for k, x in nz), _ZERO) for col in bt])
    return out


def mat_add(a: Matrix, b: Matrix, scale=1) -> Matrix:
    return [[x + scale * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Matrix, s) -> Matrix:
    return [[s * x for x in row] for row in a]


def is_zero(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def rref(a: Matrix):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    m = [list(row) for row in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = _ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        pivot_row = m[r]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], pivot_row)]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    if not a or not a[0]:
        return 0
    # forward elimination only; cheaper than full rref
    m = [list(row) for row in a if any(row)]
    rows = len(m)
    cols = len(a[0])
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pivot_row = m[r]
        pv = pivot_row[c]
        for i in range(r + 1, rows):
            if m[i][c]:
                f = m[i][c] / pv
                m[i] = [x - f * y for x, y in zip(m[i], pivot_row)]
        r += 1
    return r


def nullspace(a: Matrix, cols: int | None = None) -> Matrix:
    """Basis of {x : a x = 0}, returned as a list of column vectors."""
    n = cols if cols is not None else (len(a[0]) if a else 0)
    if not a:
        return [[_ONE if i == j else _ZERO for i in range(n)] for j in range(n)]
    red, pivots = rref(a)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [_ZERO] * n
        v[f] = _ONE
        for row_i, pc in enumerate(pivots):
            v[pc] = -red[row_i][f]
        basis.append(v)
    return basis


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + e for row, e in zip(a, identity(n))]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def solve(a: Matrix, b: Sequence) -> List[Fraction] | None:
    """One solution of a x = b, or None when inconsistent."""
    n = len(a[0]) if a else 0
    aug = [list(row) + [Fraction(y)] for row, y in zip(a, b)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    x = [_ZERO] * n
    for row_i, pc in enumerate(pivots):
        x[pc] = red[row_i][n]
    return x
