"""Exact linear algebra over the integers and rationals."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        raise TypeError("floats are not accepted; pass int, Fraction or a decimal string")
    return Fraction(v)


def frac_vector(v: Sequence) -> tuple[Fraction, ...]:
    return tuple(as_fraction(x) for x in v)


def frac_matrix(M: Sequence[Sequence]) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(frac_vector(row) for row in M)


def transpose(M: Sequence[Sequence]) -> list[list]:
    if not M:
        return []
    return [list(col) for col in zip(*M)]


def matvec(M: Sequence[Sequence], x: Sequence) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, x)) for row in M)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def bigint_det(M: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss fraction-free elimination.

    Every intermediate quotient is exact, so entries never leave the integers.
    """
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("bigint_det needs a square matrix")
    if n == 0:
        return 1
    A = [[int(v) for v in row] for row in M]
    if any(A[i][j] != M[i][j] for i in range(n) for j in range(n)):
        raise TypeError("bigint_det needs integer entries")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        rowk = A[k]
        for i in range(k + 1, n):
            rowi = A[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def rational_det(M: Sequence[Sequence]) -> Fraction:
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("determinant needs a square matrix")
    A = [list(frac_vector(row)) for row in M]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            A[k], A[piv] = A[piv], A[k]
            det = -det
        det *= A[k][k]
        for i in range(k + 1, n):
            if A[i][k]:
                f = A[i][k] / A[k][k]
                A[i] = [a - f * b for a, b in zip(A[i], A[k])]
    return det


def row_echelon(M: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q. Returns (rref rows, pivot columns)."""
    A = [list(frac_vector(row)) for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [v * inv for v in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def gaussian_rank(M: Sequence[Sequence]) -> int:
    """Exact rank over Q."""
    if not M or not M[0]:
        return 0
    return len(row_echelon(M)[1])


def nullspace(M: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {y : My = 0} over Q."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    if not M:
        basis = []
        for j in range(ncols):
            e = [Fraction(0)] * ncols
            e[j] = Fraction(1)
            basis.append(e)
        return basis
    R, pivots = row_echelon(M)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        y = [Fraction(0)] * ncols
        y[f] = Fraction(1)
        for i, p in enumerate(pivots):
            y[p] = -R[i][f]
        basis.append(y)
    return basis


def solve_square(M: Sequence[Sequence], rhs: Sequence) -> list[Fraction]:
    """Solve M y = rhs exactly by Gauss-Jordan elimination; M must be nonsingular."""
    n = len(M)
    aug = [list(frac_vector(row)) + [as_fraction(v)] for row, v in zip(M, rhs)]
    if len(aug) != n or any(len(row) != n + 1 for row in aug):
        raise ValueError("solve_square needs an n x n system")
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [v * inv for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [row[n] for row in aug]
