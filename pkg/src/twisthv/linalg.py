"""Exact dense linear algebra over the Gaussian rationals."""

from __future__ import annotations

from typing import Sequence

from .scalar import Scalar, S

Matrix = list[list[Scalar]]


def _copy(rows: Sequence[Sequence]) -> Matrix:
    return [[S(x) for x in r] for r in rows]


def row_reduce(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = _copy(rows)
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][col].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_reduce(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Scalar]]:
    """Basis of ``{x : rows x = 0}``; each vector is normalized to 1 at its free column."""
    if not rows:
        return [[S(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = row_reduce(rows)
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for f in free:
        x = [S(0)] * ncols
        x[f] = S(1)
        for row, p in zip(red, pivots):
            x[p] = -row[f]
        out.append(x)
    return out


def determinant(rows: Sequence[Sequence]) -> Scalar:
    m = _copy(rows)
    n = len(m)
    det = S(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col]), None)
        if piv is None:
            return S(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det = det * m[col][col]
        inv = m[col][col].inverse()
        for i in range(col + 1, n):
            if m[i][col]:
                f = m[i][col] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return det


def is_symmetric(rows: Sequence[Sequence]) -> bool:
    n = len(rows)
    return all(rows[i][j] == rows[j][i] for i in range(n) for j in range(i + 1, n))


def definiteness(rows: Sequence[Sequence]) -> tuple[str, int]:
    """Classify a real symmetric matrix by symmetric Gaussian elimination.

    Returns ``(verdict, rank)`` with verdict one of ``positive-definite``,
    ``positive-semidefinite`` or ``indefinite`` (negative directions count as
    indefinite for our purposes, since only positivity is ever asked for).
    """
    m = [[S(x).real_value() for x in r] for r in rows]
    n = len(m)
    active = list(range(n))
    r = 0
    while active:
        diag = [i for i in active if m[i][i] != 0]
        if any(m[i][i] < 0 for i in diag):
            return "indefinite", r
        if not diag:
            if any(m[i][j] != 0 for i in active for j in active):
                return "indefinite", r
            break
        p = diag[0]
        active.remove(p)
        piv = m[p][p]
        for i in active:
            if m[i][p]:
                f = m[i][p] / piv
                for j in active:
                    m[i][j] -= f * m[p][j]
        r += 1
    return ("positive-definite" if r == n else "positive-semidefinite"), r
