"""Exact dense linear algebra over the prime field GF(2^61 - 1).

Matrices are lists of row lists holding Python ints in [0, P).  Arithmetic is
exact, so rank decisions carry no floating-point ambiguity; inverses use
Fermat's little theorem.
"""

from __future__ import annotations

P = (1 << 61) - 1


def inv(a: int) -> int:
    a %= P
    if a == 0:
        raise ZeroDivisionError("zero has no inverse in GF(P)")
    return pow(a, P - 2, P)


def mat_inv(m: list[list[int]]) -> list[list[int]] | None:
    """Inverse by Gauss-Jordan elimination, or None if singular."""
    n = len(m)
    aug = [
        [x % P for x in row] + [1 if i == j else 0 for j in range(n)]
        for i, row in enumerate(m)
    ]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        scale = inv(aug[col][col])
        aug[col] = [(x * scale) % P for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                row_c = aug[col]
                aug[r] = [(x - f * y) % P for x, y in zip(aug[r], row_c)]
    return [row[n:] for row in aug]


def rank(m: list[list[int]]) -> int:
    """Rank by forward elimination; handles rectangular and empty matrices."""
    if not m or not m[0]:
        return 0
    rows = [[x % P for x in row] for row in m]
    ncols = len(rows[0])
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        scale = inv(rows[r][col])
        rows[r] = [(x * scale) % P for x in rows[r]]
        for i in range(r + 1, len(rows)):
            if rows[i][col]:
                f = rows[i][col]
                top = rows[r]
                rows[i] = [(x - f * y) % P for x, y in zip(rows[i], top)]
        r += 1
        if r == len(rows):
            break
    return r


def mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    nb = len(b[0]) if b else 0
    return [
        [sum(x * b[k][j] for k, x in enumerate(row)) % P for j in range(nb)]
        for row in a
    ]
