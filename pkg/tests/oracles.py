"""Independent reference computations used to freeze expected values.

None of these reuse the package's face tracing, elimination or counting code.
"""

from __future__ import annotations

import itertools
from collections import Counter

import sympy
from sympy.combinatorics import Permutation
from sympy.matrices.normalforms import smith_normal_form
from sympy.polys.domains import GF, ZZ
from sympy.polys.matrices import DomainMatrix

from twofactor.plane_graph import MatchedGraph


def face_count_perm(g: MatchedGraph) -> int:
    """Faces as cycles of (rotation successor) composed with (edge reversal) on darts."""
    pos = {e: i for i, (e, _, _) in enumerate(g.edges)}
    n = 2 * len(g.edges)
    rot = list(range(n))
    for r in g.rotations:
        hs = [2 * pos[e] + k for e, k in r]
        for a, b in zip(hs, hs[1:] + hs[:1]):
            rot[a] = b
    sigma = Permutation(rot)
    alpha = Permutation([h ^ 1 for h in range(n)])
    return len((alpha * sigma).full_cyclic_form)


def two_factor_count_subsets(g: MatchedGraph) -> int:
    """Subsets of non-matching edges that complete the matching to a spanning 2-regular subgraph."""
    matched = set(g.matching)
    free = [e for e in g.edges if e[0] not in matched]
    fixed = [e for e in g.edges if e[0] in matched]
    count = 0
    for r in range(len(free) + 1):
        for sub in itertools.combinations(free, r):
            deg = Counter()
            for _, u, w in list(sub) + fixed:
                deg[u] += 1
                deg[w] += 1
            if all(deg[v] == 2 for v in g.vertices):
                count += 1
    return count


def rank_gf2(matrix: list[list[int]]) -> int:
    if not matrix or not matrix[0]:
        return 0
    return DomainMatrix([[GF(2)(x) for x in row] for row in matrix], (len(matrix), len(matrix[0])), GF(2)).rank()


def smith_invariants(matrix: list[list[int]]) -> list[int]:
    if not matrix or not matrix[0]:
        return []
    snf = smith_normal_form(sympy.Matrix(matrix), domain=ZZ)
    return sorted(abs(int(snf[i, i])) for i in range(min(snf.shape)) if snf[i, i] != 0)


def homology_oracle(C) -> dict[tuple[int, int], tuple[int, tuple[int, ...]]]:
    """(i, j) -> (free rank, torsion) computed from the block matrices with sympy."""
    rank, tors = {}, {}
    for i, j in C.blocks:
        M = C.block_matrix(i, j)
        if C.ring == "Z2":
            rank[(i, j)], tors[(i, j)] = rank_gf2(M), ()
        else:
            inv = smith_invariants(M)
            rank[(i, j)], tors[(i, j)] = len(inv), tuple(x for x in inv if x > 1)
    out = {}
    for i, j in C.blocks:
        free = len(C.blocks[(i, j)]) - rank[(i, j)] - rank.get((i - 1, j), 0)
        tor = tors.get((i - 1, j), ())
        if free or tor:
            out[(i, j)] = (free, tor)
    return out


def polynomial_sympy(g: MatchedGraph, circles) -> dict[int, int]:
    """State sum with sympy: sum of (-1)^|v| q^|v| (q + 1/q)^c(v)."""
    q = sympy.symbols("q")
    total = 0
    for v in itertools.product((0, 1), repeat=g.n):
        total += (-1) ** sum(v) * q ** sum(v) * (q + 1 / q) ** circles(v)
    poly = sympy.expand(total)
    out = {}
    for term in sympy.Add.make_args(poly):
        c, e = term.as_coeff_exponent(q)
        if c:
            out[int(e)] = out.get(int(e), 0) + int(c)
    return {k: c for k, c in out.items() if c}
