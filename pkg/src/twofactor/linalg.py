"""Exact elimination over GF(2) and over the integers."""

from __future__ import annotations

from typing import Iterable, Sequence


def gf2_rank(columns: Iterable[int]) -> int:
    """Rank of a GF(2) matrix given as column bitmasks."""
    pivots: dict[int, int] = {}  # leading bit -> reduced vector
    for col in columns:
        while col:
            lead = col.bit_length() - 1
            if lead not in pivots:
                pivots[lead] = col
                break
            col ^= pivots[lead]
    return len(pivots)


def smith_diagonal(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix (all positive)."""
    A = [list(r) for r in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    out: list[int] = []
    t = 0
    while t < min(m, n):
        piv = _min_entry(A, t, m, n)
        if piv is None:
            break
        _swap_in(A, t, piv)
        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    if q:
                        ri, rt = A[i], A[t]
                        for j in range(t, n):
                            if rt[j]:
                                ri[j] -= q * rt[j]
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    if q:
                        for i in range(t, m):
                            if A[i][t]:
                                A[i][j] -= q * A[i][t]
                    if A[t][j]:
                        clean = False
            if not clean:
                # a smaller remainder sits in row t or column t; make it the pivot
                best = (t, t)
                for i in range(t + 1, m):
                    if A[i][t] and abs(A[i][t]) < abs(A[best[0]][best[1]]):
                        best = (i, t)
                for j in range(t + 1, n):
                    if A[t][j] and abs(A[t][j]) < abs(A[best[0]][best[1]]):
                        best = (t, j)
                _swap_in(A, t, best)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            # enforce divisibility: fold the offending row into the pivot row
            for j in range(t, n):
                A[t][j] += A[bad][j]
        out.append(abs(A[t][t]))
        t += 1
    return out


def _min_entry(A, t, m, n):
    best = None
    bv = 0
    for i in range(t, m):
        row = A[i]
        for j in range(t, n):
            x = row[j]
            if x and (best is None or abs(x) < bv):
                best, bv = (i, j), abs(x)
                if bv == 1:
                    return best
    return best


def _swap_in(A, t, pos):
    i, j = pos
    if i != t:
        A[t], A[i] = A[i], A[t]
    if j != t:
        for row in A:
            row[t], row[j] = row[j], row[t]


def int_rank(matrix: Sequence[Sequence[int]]) -> int:
    return len(smith_diagonal(matrix))


def gf2_solve(rows: Iterable[tuple[int, int]], n: int) -> list[int] | None:
    """One solution of a GF(2) system, rows given as (variable bitmask, right-hand side).

    Free variables are set to 0.  Returns None when the system is inconsistent.
    """
    pivots: dict[int, tuple[int, int]] = {}  # leading variable -> (mask, rhs)
    for mask, rhs in rows:
        while mask:
            lead = mask.bit_length() - 1
            if lead not in pivots:
                pivots[lead] = (mask, rhs)
                break
            pm, pr = pivots[lead]
            mask ^= pm
            rhs ^= pr
        else:
            if rhs:
                return None
    x = [0] * n
    for lead in sorted(pivots):
        mask, rhs = pivots[lead]
        rest = mask & ~(1 << lead)
        val = rhs
        while rest:
            low = rest & -rest
            val ^= x[low.bit_length() - 1]
            rest ^= low
        x[lead] = val
    return x
