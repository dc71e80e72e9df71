"""Census of small matched plane graphs and the fraction that lies in 𝒢.

Exhaustive mode lists every loopless connected cubic multigraph on 2m vertices
(m <= 3), every perfect matching and every genus-0 rotation system, then
removes duplicates twice:

* per embedding: (graph, matching, rotation system) up to homeomorphism of the
  sphere, reflections included;
* per abstract pair: (graph, matching) up to graph isomorphism.  Membership of
  an abstract pair is read off any of its embeddings; the census also records
  whether all embeddings agree, which they must since membership is invariant
  under flips.

Sample mode draws random configurations with a seeded generator instead.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache

from .plane_graph import MatchedGraph, face_count, is_connected
from .resolution import in_family_G

Edge = tuple[int, int]


class CensusError(ValueError):
    pass


@dataclass(frozen=True)
class CensusConfig:
    m: int = 3
    mode: str = "exhaustive"  # or "sample"
    seed: int = 0
    count: int = 1000


# ----- abstract cubic multigraphs ----------------------------------------------------------


def cubic_multigraphs(nv: int) -> list[tuple[Edge, ...]]:
    """Edge multisets of loopless cubic multigraphs on vertices 0..nv-1, one per labeling."""
    out = []
    deg = [3] * nv

    def rec(edges: list[Edge]) -> None:
        v = next((i for i in range(nv) if deg[i]), None)
        if v is None:
            out.append(tuple(edges))
            return
        last = edges[-1] if edges and edges[-1][0] == v else (v, v)
        for w in range(max(v + 1, last[1]), nv):
            if deg[w]:
                deg[v] -= 1
                deg[w] -= 1
                edges.append((v, w))
                rec(edges)
                edges.pop()
                deg[v] += 1
                deg[w] += 1

    rec([])
    return out


def _connected(nv: int, edges: tuple[Edge, ...]) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for a, b in edges:
            for p, q in ((a, b), (b, a)):
                if p == x and q not in seen:
                    seen.add(q)
                    stack.append(q)
    return len(seen) == nv


def abstract_form(nv: int, edges: tuple[Edge, ...], matching: tuple[int, ...] = ()) -> tuple:
    """Canonical form of a multigraph with marked edges, by brute force over relabelings."""
    best = None
    marked = set(matching)
    for perm in itertools.permutations(range(nv)):
        code = tuple(sorted(
            (tuple(sorted((perm[a], perm[b]))), k in marked) for k, (a, b) in enumerate(edges)
        ))
        if best is None or code < best:
            best = code
    return best


def perfect_matchings(nv: int, edges: tuple[Edge, ...]) -> list[tuple[int, ...]]:
    out = []
    for combo in itertools.combinations(range(len(edges)), nv // 2):
        covered = [v for k in combo for v in edges[k]]
        if len(set(covered)) == nv:
            out.append(combo)
    return out


# ----- rotation systems ---------------------------------------------------------------------


def _graph(nv: int, edges: tuple[Edge, ...], flips: int, matching: tuple[int, ...], name: str) -> MatchedGraph:
    inc: list[list[tuple[str, int]]] = [[] for _ in range(nv)]
    for k, (a, b) in enumerate(edges):
        inc[a].append((f"e{k}", 0))
        inc[b].append((f"e{k}", 1))
    rots = []
    for v in range(nv):
        r = inc[v]
        rots.append(tuple(r) if not (flips >> v) & 1 else (r[0], r[2], r[1]))
    return MatchedGraph(
        name,
        tuple(f"v{v}" for v in range(nv)),
        tuple((f"e{k}", f"v{a}", f"v{b}") for k, (a, b) in enumerate(edges)),
        tuple(rots),
        tuple(f"e{k}" for k in matching),
    )


def map_form(g: MatchedGraph) -> tuple:
    """Canonical code of a connected matched rotation system, up to sphere homeomorphism.

    Darts are renumbered in the order a fixed traversal first reaches them,
    from every starting dart and in both orientations; the smallest code wins.
    """
    ix = g._ix
    H = 2 * len(g.edges)
    matched = {ix.edge_pos[e] for e in g.matching}
    best = None
    for orient in (1, -1):
        step = ix.succ if orient == 1 else ix.pred
        for start in range(H):
            label = {start: 0}
            order = [start]
            k = 0
            while k < len(order):
                h = order[k]
                for nb in (h ^ 1, step(h)):
                    if nb not in label:
                        label[nb] = len(order)
                        order.append(nb)
                k += 1
            code = tuple(
                (label[h ^ 1], label[step(h)], (h >> 1) in matched) for h in order
            )
            if best is None or code < best:
                best = code
    return best


# ----- census -------------------------------------------------------------------------------


@dataclass
class CensusReport:
    m: int
    mode: str
    embeddings: int = 0
    embedding_members: int = 0
    abstract: int = 0
    abstract_members: int = 0
    inconsistent: int = 0  # abstract pairs whose embeddings disagree on membership
    samples: int = 0
    sample_members: int = 0
    witnesses: list[MatchedGraph] = field(default_factory=list)

    @staticmethod
    def _frac(a: int, b: int) -> float:
        return a / b if b else 1.0

    @property
    def embedding_fraction(self) -> float:
        return self._frac(self.embedding_members, self.embeddings)

    @property
    def abstract_fraction(self) -> float:
        return self._frac(self.abstract_members, self.abstract)

    @property
    def sample_fraction(self) -> float:
        return self._frac(self.sample_members, self.samples)

    def lines(self) -> list[str]:
        if self.mode == "sample":
            return [f"census m={self.m} mode=sample samples={self.samples} "
                    f"members={self.sample_members} fraction={self.sample_fraction:.4f}"]
        return [
            f"census m={self.m} grouping=embedding total={self.embeddings} "
            f"members={self.embedding_members} fraction={self.embedding_fraction:.4f}",
            f"census m={self.m} grouping=abstract total={self.abstract} "
            f"members={self.abstract_members} fraction={self.abstract_fraction:.4f}",
            f"census m={self.m} inconsistent_abstract={self.inconsistent}",
        ]


def _planar(g: MatchedGraph) -> bool:
    return len(g.vertices) - len(g.edges) + face_count(g) == 2


@lru_cache(maxsize=None)
def _abstract_classes(nv: int) -> tuple[tuple[Edge, ...], ...]:
    seen: dict[tuple, tuple[Edge, ...]] = {}
    for edges in cubic_multigraphs(nv):
        if _connected(nv, edges):
            seen.setdefault(abstract_form(nv, edges), edges)
    return tuple(seen[k] for k in sorted(seen))


def exhaustive_census(m: int) -> CensusReport:
    if m > 3:
        raise CensusError("exhaustive census is limited to m <= 3; use sample mode")
    if m < 1:
        raise CensusError("m must be at least 1")
    nv = 2 * m
    rep = CensusReport(m, "exhaustive")
    maps: dict[tuple, bool] = {}
    pairs: dict[tuple, set[bool]] = {}
    for gi, edges in enumerate(_abstract_classes(nv)):
        for mi, matching in enumerate(perfect_matchings(nv, edges)):
            akey = abstract_form(nv, edges, matching)
            for flips in range(2 ** nv):
                g = _graph(nv, edges, flips, matching, f"c{m}_{gi}_{mi}_{flips}")
                if not _planar(g):
                    continue
                key = map_form(g)
                if key in maps:
                    continue
                member = in_family_G(g).member
                maps[key] = member
                pairs.setdefault(akey, set()).add(member)
                if not member:
                    rep.witnesses.append(g)
    rep.embeddings = len(maps)
    rep.embedding_members = sum(maps.values())
    rep.abstract = len(pairs)
    rep.abstract_members = sum(1 for s in pairs.values() if True in s and len(s) == 1)
    rep.inconsistent = sum(1 for s in pairs.values() if len(s) > 1)
    return rep


def random_matched_graph(m: int, rng: random.Random, tries: int = 10000) -> MatchedGraph:
    """A random connected planar matched cubic multigraph on 2m vertices (rejection sampling)."""
    nv = 2 * m
    for _ in range(tries):
        half = [v for v in range(nv) for _ in range(3)]
        rng.shuffle(half)
        edges = tuple(tuple(sorted(half[k:k + 2])) for k in range(0, len(half), 2))
        if any(a == b for a, b in edges) or not _connected(nv, edges):
            continue
        pms = perfect_matchings(nv, edges)
        if not pms:
            continue
        g = _graph(nv, edges, rng.randrange(2 ** nv), rng.choice(pms), f"s{m}")
        if _planar(g) and is_connected(g):
            return g
    raise CensusError("rejection sampling found no planar graph")


def sample_census(m: int, count: int, seed: int = 0) -> CensusReport:
    rng = random.Random(seed)
    rep = CensusReport(m, "sample")
    for _ in range(count):
        g = random_matched_graph(m, rng)
        rep.samples += 1
        rep.sample_members += in_family_G(g).member
    return rep


def run_census(cfg: CensusConfig) -> CensusReport:
    if cfg.mode == "exhaustive":
        return exhaustive_census(cfg.m)
    if cfg.mode == "sample":
        return sample_census(cfg.m, cfg.count, cfg.seed)
    raise CensusError(f"unknown census mode {cfg.mode!r}")
