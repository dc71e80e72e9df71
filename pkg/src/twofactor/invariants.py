"""The bigraded chain complex, its homology, and the 2-factor polynomial.

Generators are pairs (state, labeling) where each circle carries x+ (label 0)
or x- (label 1).  The differential is built from the Frobenius algebra
A = Z[x]/(x^2) with x+ = 1 and x- = x.  Merging uses multiplication and
splitting uses the comultiplication 1 -> 1⊗x + x⊗1, x -> x⊗x.  Eta arcs
contribute zero.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

from .linalg import gf2_rank, smith_diagonal
from .plane_graph import MatchedGraph, two_factor_count
from .resolution import (
    ArcKind,
    State,
    all_states,
    arc_kind,
    flip_bit,
    is_member,
    resolve,
    state_str,
)

PLUS, MINUS = 0, 1
RINGS = ("Z2", "Z")


class ZLiftError(ValueError):
    pass


def normalize_ring(ring: str) -> str:
    r = ring.upper()
    if r not in RINGS:
        raise ValueError(f"unknown ring {ring!r}; use z2 or z")
    return r


# ----- Laurent polynomials ---------------------------------------------------


@dataclass(frozen=True)
class LaurentPoly:
    terms: tuple[tuple[int, int], ...]  # (exponent, coefficient), descending, no zeros

    @classmethod
    def from_dict(cls, d: dict[int, int]) -> "LaurentPoly":
        return cls(tuple(sorted(((k, c) for k, c in d.items() if c), reverse=True)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    def coeff(self, k: int) -> int:
        return self.as_dict().get(k, 0)

    def at_one(self) -> int:
        return sum(c for _, c in self.terms)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        d = defaultdict(int, self.as_dict())
        for k, c in other.terms:
            d[k] += c
        return LaurentPoly.from_dict(d)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        d: dict[int, int] = defaultdict(int)
        for k1, c1 in self.terms:
            for k2, c2 in other.terms:
                d[k1 + k2] += c1 * c2
        return LaurentPoly.from_dict(d)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for idx, (k, c) in enumerate(self.terms):
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else str(mag)) + ("q" if k == 1 else f"q^{k}")
            if idx == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        s = text.replace(" ", "")
        if s == "0":
            return cls(())
        d: dict[int, int] = defaultdict(int)
        for m in __import__("re").finditer(r"([+-]?)(\d*)(q(\^(-?\d+))?)?", s):
            if not m.group(0):
                continue
            sign = -1 if m.group(1) == "-" else 1
            if m.group(3):
                coef = int(m.group(2)) if m.group(2) else 1
                exp = int(m.group(5)) if m.group(5) else 1
            else:
                coef, exp = int(m.group(2)), 0
            d[exp] += sign * coef
        return cls.from_dict(d)


def two_factor_polynomial(g: MatchedGraph) -> LaurentPoly:
    """Sum over states of (-1)^|v| q^|v| (q + 1/q)^c(v)."""
    total: dict[int, int] = defaultdict(int)
    for v in all_states(g.n):
        w = sum(v)
        c = len(resolve(g, v).circles)
        sign = -1 if w % 2 else 1
        for k in range(c + 1):
            total[w + c - 2 * k] += sign * _binom(c, k)
    return LaurentPoly.from_dict(total)


@lru_cache(maxsize=None)
def _binom(n: int, k: int) -> int:
    from math import comb

    return comb(n, k)


# ----- the complex -------------------------------------------------------------


@dataclass(frozen=True)
class Generator:
    state: State
    labels: tuple[int, ...]

    @property
    def gr_h(self) -> int:
        return sum(self.state)

    @property
    def gr_q(self) -> int:
        return sum(self.state) + self.labels.count(PLUS) - self.labels.count(MINUS)

    @property
    def name(self) -> str:
        return state_str(self.state) + "/" + "".join("+-"[b] for b in self.labels)


def generators_of_state(g: MatchedGraph, v: State) -> list[Generator]:
    c = len(resolve(g, v).circles)
    return [Generator(v, lab) for lab in itertools.product((PLUS, MINUS), repeat=c)]


def cube_sign(v: State, i: int) -> int:
    return -1 if sum(v[:i]) % 2 else 1


def _mult(a: int, b: int) -> int | None:
    return a + b if a + b <= 1 else None


def _comult(a: int) -> list[tuple[int, int]]:
    return [(PLUS, MINUS), (MINUS, PLUS)] if a == PLUS else [(MINUS, MINUS)]


def edge_map(g: MatchedGraph, v: State, i: int, labels: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Images (with coefficient 1) of a labeling of state v under the edge map v -> v+e_i."""
    D0, D1 = resolve(g, v), resolve(g, flip_bit(v, i))
    k0, k1 = D0.keys, D1.keys
    pos1 = {k: n for n, k in enumerate(k1)}
    gone = [n for n, k in enumerate(k0) if k not in pos1]
    new = [n for n, k in enumerate(k1) if k not in set(k0)]
    base = [None] * len(k1)
    for n, k in enumerate(k0):
        if k in pos1:
            base[pos1[k]] = labels[n]
    if len(gone) == 2 and len(new) == 1:
        r = _mult(labels[gone[0]], labels[gone[1]])
        if r is None:
            return []
        base[new[0]] = r
        return [tuple(base)]
    if len(gone) == 1 and len(new) == 2:
        out = []
        for a, b in _comult(labels[gone[0]]):
            lab = list(base)
            lab[new[0]], lab[new[1]] = a, b
            out.append(tuple(lab))
        return out
    return []  # eta arc: zero map


@dataclass
class BigradedComplex:
    ring: str
    generators: list[Generator]
    index: dict[Generator, int]
    # sparse differential: source index -> {target index: coefficient}
    d: dict[int, dict[int, int]]
    blocks: dict[tuple[int, int], list[int]] = field(default_factory=dict)

    @property
    def quantum_gradings(self) -> list[int]:
        return sorted({j for _, j in self.blocks}, reverse=True)

    def block_matrix(self, i: int, j: int) -> list[list[int]]:
        """Matrix of C^{i,j} -> C^{i+1,j}; rows are targets, columns sources."""
        src = self.blocks.get((i, j), [])
        tgt = self.blocks.get((i + 1, j), [])
        tpos = {t: r for r, t in enumerate(tgt)}
        M = [[0] * len(src) for _ in tgt]
        for c, s in enumerate(src):
            for t, x in self.d.get(s, {}).items():
                M[tpos[t]][c] = x
        return M

    def homological_range(self) -> range:
        hs = [i for i, _ in self.blocks]
        return range(min(hs), max(hs) + 1) if hs else range(0)


def build_complex(g: MatchedGraph, ring: str = "Z2") -> BigradedComplex:
    ring = normalize_ring(ring)
    if ring == "Z" and not is_member(g):
        raise ZLiftError("Z-lift unavailable outside 𝒢")
    gens: list[Generator] = []
    for v in all_states(g.n):
        gens.extend(generators_of_state(g, v))
    index = {x: n for n, x in enumerate(gens)}
    d: dict[int, dict[int, int]] = {}
    for x in gens:
        v = x.state
        row: dict[int, int] = {}
        for i in range(g.n):
            if v[i]:
                continue
            sgn = cube_sign(v, i) if ring == "Z" else 1
            w = flip_bit(v, i)
            for lab in edge_map(g, v, i, x.labels):
                t = index[Generator(w, lab)]
                row[t] = row.get(t, 0) + sgn
        if ring == "Z2":
            row = {t: c % 2 for t, c in row.items() if c % 2}
        else:
            row = {t: c for t, c in row.items() if c}
        if row:
            d[index[x]] = row
    blocks: dict[tuple[int, int], list[int]] = defaultdict(list)
    for n, x in enumerate(gens):
        blocks[(x.gr_h, x.gr_q)].append(n)
    return BigradedComplex(ring, gens, index, d, dict(blocks))


def check_differential(C: BigradedComplex) -> list[str]:
    """Problems found: grading violations or a nonzero d∘d entry."""
    problems = []
    for s, row in C.d.items():
        xs = C.generators[s]
        for t in row:
            xt = C.generators[t]
            if xt.gr_h != xs.gr_h + 1 or xt.gr_q != xs.gr_q:
                problems.append(f"bad grading {xs.name} -> {xt.name}")
    for s, row in C.d.items():
        acc: dict[int, int] = defaultdict(int)
        for t, a in row.items():
            for u, b in C.d.get(t, {}).items():
                acc[u] += a * b
        for u, c in acc.items():
            if (c % 2 if C.ring == "Z2" else c):
                problems.append(f"d∘d nonzero: {C.generators[s].name} -> {C.generators[u].name}")
    return problems


# ----- homology --------------------------------------------------------------------


@dataclass(frozen=True)
class BigradedGroups:
    ring: str
    # (i, j) -> (free rank, torsion orders); over Z2 torsion is always empty
    groups: tuple[tuple[tuple[int, int], tuple[int, tuple[int, ...]]], ...]

    def as_dict(self) -> dict[tuple[int, int], tuple[int, tuple[int, ...]]]:
        return dict(self.groups)

    def dim(self, i: int, j: int) -> int:
        return self.as_dict().get((i, j), (0, ()))[0]

    def lines(self) -> list[str]:
        out = []
        for (i, j), (r, tor) in self.groups:
            if self.ring == "Z2":
                out.append(f"H[i={i}][j={j}] dim={r}")
            else:
                out.append(f"H[i={i}][j={j}] rank={r} torsion={','.join(map(str, tor))}")
        return out

    def euler(self) -> dict[int, int]:
        chi: dict[int, int] = defaultdict(int)
        for (i, j), (r, _) in self.groups:
            chi[j] += (-1) ** (i % 2) * r
        return {j: c for j, c in chi.items() if c}


def homology(C: BigradedComplex) -> BigradedGroups:
    rank: dict[tuple[int, int], int] = {}
    tors: dict[tuple[int, int], tuple[int, ...]] = {}
    keys = sorted(C.blocks)
    for i, j in keys:
        if (i + 1, j) not in C.blocks:
            rank[(i, j)] = 0
            tors[(i, j)] = ()
            continue
        if C.ring == "Z2":
            tgt = C.blocks[(i + 1, j)]
            tpos = {t: r for r, t in enumerate(tgt)}
            cols = []
            for s in C.blocks[(i, j)]:
                bits = 0
                for t in C.d.get(s, {}):
                    bits |= 1 << tpos[t]
                cols.append(bits)
            rank[(i, j)] = gf2_rank(cols)
            tors[(i, j)] = ()
        else:
            diag = smith_diagonal(C.block_matrix(i, j))
            rank[(i, j)] = len(diag)
            tors[(i, j)] = tuple(x for x in diag if x > 1)
    groups = []
    for i, j in keys:
        dim = len(C.blocks[(i, j)])
        free = dim - rank[(i, j)] - rank.get((i - 1, j), 0)
        tor = tors.get((i - 1, j), ())
        if free or tor:
            groups.append(((i, j), (free, tor)))
    groups.sort(key=lambda t: (-t[0][1], t[0][0]))
    return BigradedGroups(C.ring, tuple(groups))


def complex_euler(C: BigradedComplex) -> dict[int, int]:
    chi: dict[int, int] = defaultdict(int)
    for (i, j), idx in C.blocks.items():
        chi[j] += (-1) ** (i % 2) * len(idx)
    return {j: c for j, c in chi.items() if c}


@dataclass
class EulerReport:
    checks: list[tuple[str, bool, str]]

    @property
    def ok(self) -> bool:
        return all(p for _, p, _ in self.checks)

    def lines(self) -> list[str]:
        return [f"check={name} pass={int(p)} {detail}".rstrip() for name, p, detail in self.checks]


def euler_check(g: MatchedGraph, ring: str = "Z2") -> EulerReport:
    ring = normalize_ring(ring)
    poly = two_factor_polynomial(g)
    C = build_complex(g, ring)
    H = homology(C)
    chi_c = complex_euler(C)
    chi_h = H.euler()
    count = two_factor_count(g)
    return EulerReport(
        [
            ("complex_vs_polynomial", chi_c == poly.as_dict(), f"poly={poly}"),
            ("homology_vs_complex", chi_h == chi_c, f"ring={ring}"),
            ("count_at_q1", poly.at_one() == count, f"poly(1)={poly.at_one()} count={count}"),
        ]
    )
