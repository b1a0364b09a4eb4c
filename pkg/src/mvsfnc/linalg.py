"""Exact linear algebra over GF(q) on code matrices."""
from __future__ import annotations

from .gf import FieldSpec


def rref(field: FieldSpec, rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and pivot columns (rows are copied)."""
    M = [list(r) for r in rows]
    if not M:
        return M, []
    ncols = len(M[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = field.inv(M[r][c])
        M[r] = [field.mul(v, inv) for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = field.neg(M[i][c])
                M[i] = [field.add(a, field.mul(f, b)) for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def solve_affine(field: FieldSpec, A: list[list[int]], b: list[int]):
    """Solve A x = b.

    Returns (particular solution, nullspace basis) or None when inconsistent.
    The particular solution sets every free variable to zero.
    """
    if not A:
        return None
    n = len(A[0])
    aug = [list(row) + [rhs] for row, rhs in zip(A, b)]
    R, piv = rref(field, aug)
    if n in piv:
        return None
    x = [0] * n
    for row, c in zip(R, piv):
        x[c] = row[n]
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for row, c in zip(R, piv):
            v[c] = field.neg(row[f])
        basis.append(v)
    return x, basis


def inverse(field: FieldSpec, A: list[list[int]]) -> list[list[int]] | None:
    """Inverse of a square matrix, or None when singular."""
    n = len(A)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(A)]
    R, piv = rref(field, aug)
    if piv[:n] != list(range(n)) or len(R) < n:
        return None
    return [row[n:] for row in R]
