"""Plane trivalent multigraphs with a perfect matching, stored as rotation systems.

A graph is a list of vertices, a list of edges ``(eid, u, w)`` and, for every
vertex, the cyclic order of its three half-edges.  Half-edge ``eid.k`` sits at
the ``k``-th endpoint of edge ``eid``.  The matching is an ordered tuple of edge
ids; its order fixes the coordinate order of the hypercube of states.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

Token = tuple[str, int]  # (edge id, endpoint index 0|1)


class GraphError(ValueError):
    """Structural problem with a graph (dangling token, loop, bad flip, ...)."""


class GraphSyntaxError(GraphError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _natural_key(s: str) -> tuple:
    return tuple(int(p) if p.isdigit() else p for p in re.split(r"(\d+)", s) if p)


def token_str(tok: Token) -> str:
    return f"{tok[0]}.{tok[1]}"


def _rotate_to_min(rot: Sequence[Token]) -> tuple[Token, ...]:
    k = min(range(len(rot)), key=lambda i: (_natural_key(rot[i][0]), rot[i][1]))
    return tuple(rot[k:]) + tuple(rot[:k])


@dataclass(frozen=True)
class MatchedGraph:
    name: str
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]
    rotations: tuple[tuple[Token, ...], ...]  # aligned with ``vertices``
    matching: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "rotations", tuple(_rotate_to_min(r) if r else () for r in self.rotations))

    # ----- integer index ---------------------------------------------------
    # Half-edge h = 2*edge_index + k.  Everything downstream works on these.

    @cached_property
    def _ix(self) -> "_Index":
        return _Index.build(self)

    @property
    def n(self) -> int:
        return len(self.matching)

    def edge_index(self, eid: str) -> int:
        return self._ix.edge_pos[eid]

    def vertex_index(self, vid: str) -> int:
        return self._ix.vertex_pos[vid]

    def rotation_of(self, vid: str) -> tuple[Token, ...]:
        return self.rotations[self.vertex_index(vid)]

    def is_matching_edge(self, eid: str) -> bool:
        return eid in self._ix.match_pos


@dataclass
class _Index:
    edge_pos: dict[str, int]
    vertex_pos: dict[str, int]
    match_pos: dict[str, int]
    ends: list[tuple[int, int]]          # edge -> (vertex of end 0, vertex of end 1)
    rot: list[tuple[int, int, int]]      # vertex -> half-edges in cyclic order
    vertex_of: list[int]                 # half-edge -> vertex
    slot: list[int]                      # half-edge -> position in its rotation

    @classmethod
    def build(cls, g: MatchedGraph) -> "_Index":
        edge_pos = {e[0]: i for i, e in enumerate(g.edges)}
        vertex_pos = {v: i for i, v in enumerate(g.vertices)}
        match_pos = {e: i for i, e in enumerate(g.matching)}
        ends = [(vertex_pos[u], vertex_pos[w]) for _, u, w in g.edges]
        rot, vertex_of, slot = [], [-1] * (2 * len(g.edges)), [-1] * (2 * len(g.edges))
        for vi, r in enumerate(g.rotations):
            hs = tuple(2 * edge_pos[e] + k for e, k in r)
            rot.append(hs)
            for p, h in enumerate(hs):
                vertex_of[h] = vi
                slot[h] = p
        return cls(edge_pos, vertex_pos, match_pos, ends, rot, vertex_of, slot)

    def succ(self, h: int) -> int:
        r = self.rot[self.vertex_of[h]]
        return r[(self.slot[h] + 1) % 3]

    def pred(self, h: int) -> int:
        r = self.rot[self.vertex_of[h]]
        return r[(self.slot[h] + 2) % 3]


# ----- construction helpers ------------------------------------------------


def make_graph(
    name: str,
    edges: Iterable[tuple[str, str, str]],
    rotations: dict[str, Sequence[str]],
    matching: Sequence[str],
    vertices: Sequence[str] | None = None,
) -> MatchedGraph:
    """Build and check a graph from string tokens such as ``"e1.0"``."""
    edges = tuple(tuple(e) for e in edges)
    if vertices is None:
        vertices = tuple(rotations)
    rots = tuple(tuple(_parse_token(t) for t in rotations[v]) for v in vertices)
    g = MatchedGraph(name, tuple(vertices), edges, rots, tuple(matching))
    check_structure(g)
    return g


def _parse_token(t: str) -> Token:
    eid, _, k = t.rpartition(".")
    if not eid or k not in ("0", "1"):
        raise GraphError(f"bad half-edge token {t!r}")
    return eid, int(k)


def check_structure(g: MatchedGraph) -> None:
    """Raise GraphError on structural faults that make the other checks meaningless."""
    if not g.vertices:
        raise GraphError("graph has no vertices")
    if len(set(g.vertices)) != len(g.vertices):
        raise GraphError("duplicate vertex id")
    eids = [e[0] for e in g.edges]
    if len(set(eids)) != len(eids):
        raise GraphError("duplicate edge id")
    vset = set(g.vertices)
    for eid, u, w in g.edges:
        if u not in vset or w not in vset:
            raise GraphError(f"unknown id: edge {eid} has endpoint outside the vertex list")
        if u == w:
            raise GraphError(f"loop edge {eid}")
    ends = {eid: (u, w) for eid, u, w in g.edges}
    seen: set[Token] = set()
    for v, rot in zip(g.vertices, g.rotations):
        if len(rot) != 3:
            raise GraphError(f"rotation length ≠ 3 at vertex {v}")
        for tok in rot:
            if tok[0] not in ends:
                raise GraphError(f"unknown id: dangling half-edge token {token_str(tok)} at vertex {v}")
            if tok in seen:
                raise GraphError(f"duplicate token {token_str(tok)}")
            seen.add(tok)
            if ends[tok[0]][tok[1]] != v:
                raise GraphError(f"token {token_str(tok)} placed at {v}, but that end of the edge is elsewhere")
    missing = {(e, k) for e in ends for k in (0, 1)} - seen
    if missing:
        raise GraphError(f"half-edge {token_str(min(missing))} missing from rotations")
    for m in g.matching:
        if m not in ends:
            raise GraphError(f"unknown id: matching edge {m}")
    if len(set(g.matching)) != len(g.matching):
        raise GraphError("duplicate matching edge")


# ----- validation ----------------------------------------------------------


def face_count(g: MatchedGraph) -> int:
    """Number of face cycles: orbits of h -> succ(opposite(h))."""
    ix = g._ix
    seen = [False] * (2 * len(g.edges))
    faces = 0
    for start in range(len(seen)):
        if seen[start]:
            continue
        faces += 1
        h = start
        while not seen[h]:
            seen[h] = True
            h = ix.succ(h ^ 1)
    return faces


def faces(g: MatchedGraph) -> list[list[int]]:
    """Face boundaries as lists of half-edges (each half-edge leaves its vertex)."""
    ix = g._ix
    seen = [False] * (2 * len(g.edges))
    out = []
    for start in range(len(seen)):
        if seen[start]:
            continue
        cyc, h = [], start
        while not seen[h]:
            seen[h] = True
            cyc.append(h)
            h = ix.succ(h ^ 1)
        out.append(cyc)
    return out


def _vertex_classes(g: MatchedGraph) -> list[list[str]]:
    adj: dict[str, set[str]] = {v: set() for v in g.vertices}
    for _, u, w in g.edges:
        adj[u].add(w)
        adj[w].add(u)
    classes, seen = [], set()
    for v0 in g.vertices:
        if v0 in seen:
            continue
        stack, cls = [v0], {v0}
        while stack:
            for x in adj[stack.pop()]:
                if x not in cls:
                    cls.add(x)
                    stack.append(x)
        seen |= cls
        classes.append([v for v in g.vertices if v in cls])
    return classes


def is_connected(g: MatchedGraph) -> bool:
    return len(_vertex_classes(g)) == 1


def components(g: MatchedGraph) -> list[MatchedGraph]:
    """Connected components as matched graphs, in vertex order."""
    classes = _vertex_classes(g)
    if len(classes) == 1:
        return [g]
    out = []
    for k, cls in enumerate(classes, 1):
        vs = set(cls)
        out.append(MatchedGraph(
            f"{g.name}.{k}",
            tuple(cls),
            tuple(e for e in g.edges if e[1] in vs),
            tuple(g.rotations[g.vertices.index(v)] for v in cls),
            tuple(m for m in g.matching if next(e for e in g.edges if e[0] == m)[1] in vs),
        ))
    return out


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(g: MatchedGraph) -> ValidationReport:
    check_structure(g)
    rep = ValidationReport()
    ends = {eid: (u, w) for eid, u, w in g.edges}
    cover: dict[str, list[str]] = {v: [] for v in g.vertices}
    for m in g.matching:
        for x in ends[m]:
            cover[x].append(m)
    for v in g.vertices:
        if len(cover[v]) != 1:
            how = "uncovered" if not cover[v] else f"covered {len(cover[v])} times"
            rep.violations.append(f"matching not perfect: vertex {v} {how}")
    if not g.matching:
        rep.violations.append("matching not perfect: empty matching")
    if not is_connected(g):
        rep.violations.append("graph not connected")
    V, E, F = len(g.vertices), len(g.edges), face_count(g)
    if V - E + F != 2:
        rep.violations.append(f"genus not 0: V - E + F = {V - E + F}")
    return rep


def require_valid(g: MatchedGraph) -> MatchedGraph:
    rep = validate(g)
    if not rep.ok:
        raise GraphError("; ".join(rep.violations))
    return g


# ----- flips ----------------------------------------------------------------


@dataclass(frozen=True)
class FlipDisk:
    vertex_set: frozenset[str]
    kind: int

    @classmethod
    def of(cls, g: MatchedGraph, vertex_set: Iterable[str]) -> "FlipDisk":
        s = frozenset(vertex_set)
        if not s or len(s) >= len(g.vertices) or not s <= set(g.vertices):
            raise GraphError("not a flip disk: vertex set must be a proper nonempty subset")
        cut = cut_edges(g, s)
        if len(cut) > 2:
            raise GraphError(f"not a flip disk: cut size {len(cut)} > 2")
        return cls(s, len(cut))


def cut_edges(g: MatchedGraph, s: Iterable[str]) -> list[str]:
    s = set(s)
    return [eid for eid, u, w in g.edges if (u in s) != (w in s)]


def apply_flip(g: MatchedGraph, disk: FlipDisk | Iterable[str]) -> MatchedGraph:
    """Mirror the inside of the disk: reverse the rotation at each of its vertices."""
    if not isinstance(disk, FlipDisk):
        disk = FlipDisk.of(g, disk)
    else:
        disk = FlipDisk.of(g, disk.vertex_set)
    rots = tuple(
        tuple(reversed(r)) if v in disk.vertex_set else r for v, r in zip(g.vertices, g.rotations)
    )
    out = MatchedGraph(g.name, g.vertices, g.edges, rots, g.matching)
    rep = validate(out)
    if not rep.ok:  # pragma: no cover - would be a bug
        raise AssertionError(f"flip produced an invalid graph: {rep.violations}")
    return out


def flip_disks(g: MatchedGraph, max_size: int | None = None) -> Iterator[FlipDisk]:
    """All vertex subsets with cut size <= 2 (exponential; small graphs only).

    Each disk and its complement give the same graph up to a global mirror,
    so only subsets not containing the last vertex are listed.
    """
    vs = g.vertices[:-1]
    top = len(vs) if max_size is None else min(max_size, len(vs))
    for r in range(1, top + 1):
        for sub in itertools.combinations(vs, r):
            if len(cut_edges(g, sub)) <= 2:
                yield FlipDisk(frozenset(sub), len(cut_edges(g, sub)))


def mirror(g: MatchedGraph) -> MatchedGraph:
    """Global reflection: every rotation reversed."""
    rots = tuple(tuple(reversed(r)) for r in g.rotations)
    return MatchedGraph(g.name, g.vertices, g.edges, rots, g.matching)


@dataclass(frozen=True)
class Automorphism:
    """A half-edge permutation preserving edges, the matching and the rotation system.

    ``orientation`` is +1 when rotations are preserved and -1 when they are
    reversed (a reflection of the plane).  ``sites[i]`` is the image of
    matching coordinate ``i``.
    """

    orientation: int
    half_edges: tuple[int, ...]
    sites: tuple[int, ...]


def _extend(ix: "_Index", h0: int, x0: int, orientation: int, n_half: int) -> dict[int, int] | None:
    phi = {h0: x0}
    stack = [h0]
    while stack:
        h = stack.pop()
        x = phi[h]
        nxt = ix.succ(x) if orientation == 1 else ix.pred(x)
        for a, b in ((h ^ 1, x ^ 1), (ix.succ(h), nxt)):
            if a in phi:
                if phi[a] != b:
                    return None
            else:
                phi[a] = b
                stack.append(a)
    if len(phi) != n_half or len(set(phi.values())) != n_half:
        return None
    return phi


def automorphisms(g: MatchedGraph, reflections: bool = True) -> list[Automorphism]:
    """All automorphisms of a connected matched plane graph, found by propagating from one half-edge."""
    ix = g._ix
    n_half = 2 * len(g.edges)
    m_edges = [ix.edge_pos[e] for e in g.matching]
    site = {e: i for i, e in enumerate(m_edges)}
    out = []
    for orientation in ((1, -1) if reflections else (1,)):
        for x0 in range(n_half):
            phi = _extend(ix, 0, x0, orientation, n_half)
            if phi is None or any((phi[2 * e] >> 1) not in site for e in m_edges):
                continue
            out.append(Automorphism(
                orientation,
                tuple(phi[h] for h in range(n_half)),
                tuple(site[phi[2 * e] >> 1] for e in m_edges),
            ))
    return out


def reorder_matching(g: MatchedGraph, order: Sequence[int]) -> MatchedGraph:
    return MatchedGraph(g.name, g.vertices, g.edges, g.rotations, tuple(g.matching[i] for i in order))


# ----- 2-factors -------------------------------------------------------------


def two_factor_count(g: MatchedGraph) -> int:
    """Count spanning 2-regular subgraphs containing every matching edge.

    Every vertex picks one of its two non-matching edges; a choice is kept
    when each vertex ends up with degree exactly 2.
    """
    matched = set(g.matching)
    options = []
    for v, rot in zip(g.vertices, g.rotations):
        options.append([e for e, _ in rot if e not in matched])
    ends = {eid: (u, w) for eid, u, w in g.edges}
    count = 0
    for pick in itertools.product(*options):
        chosen = set(pick)
        deg = dict.fromkeys(g.vertices, 0)
        for e in chosen | matched:
            u, w = ends[e]
            deg[u] += 1
            deg[w] += 1
        if all(d == 2 for d in deg.values()):
            count += 1
    # a consistent pick is exactly a 2-factor, so nothing is double counted
    return count


# ----- text format -------------------------------------------------------------

_ID = re.compile(r"[A-Za-z0-9_\-+]+$")


def read_graph(text: str) -> MatchedGraph:
    name = None
    vertices: list[str] = []
    edges: list[tuple[str, str, str]] = []
    rotations: dict[str, tuple[Token, ...]] = {}
    matching: list[str] | None = None
    saw_any = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        saw_any = True
        words = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
        kw, col = words[0]
        args = words[1:]

        def need(k: int) -> None:
            if len(args) != k:
                c = args[k][1] if len(args) > k else len(line) + 1
                raise GraphSyntaxError(f"'{kw}' expects {k} argument(s), got {len(args)}", lineno, c)

        for w, c in args if kw != "rotation" else args[:1]:
            if not _ID.match(w):
                raise GraphSyntaxError(f"bad identifier {w!r}", lineno, c)
        if kw == "graph":
            need(1)
            if name is not None:
                raise GraphSyntaxError("second 'graph' line", lineno, col)
            name = args[0][0]
        elif kw == "vertex":
            need(1)
            vertices.append(args[0][0])
        elif kw == "edge":
            need(3)
            edges.append((args[0][0], args[1][0], args[2][0]))
        elif kw == "rotation":
            if len(args) != 4:
                raise GraphError(f"line {lineno}: rotation length ≠ 3 (got {max(len(args) - 1, 0)})")
            v = args[0][0]
            if v not in vertices:
                raise GraphError(f"line {lineno}: unknown id {v!r} in rotation")
            toks = []
            for w, c in args[1:]:
                m = re.fullmatch(r"(.+)\.([01])", w)
                if not m:
                    raise GraphSyntaxError(f"bad half-edge token {w!r}", lineno, c)
                toks.append((m.group(1), int(m.group(2))))
            if v in rotations:
                raise GraphSyntaxError(f"second rotation for {v}", lineno, col)
            rotations[v] = tuple(toks)
        elif kw == "matching":
            if not args:
                raise GraphSyntaxError("'matching' needs at least one edge", lineno, len(line) + 1)
            if matching is not None:
                raise GraphSyntaxError("second 'matching' line", lineno, col)
            matching = [w for w, _ in args]
        else:
            raise GraphSyntaxError(f"unknown keyword {kw!r}", lineno, col)
    if not saw_any:
        raise GraphSyntaxError("empty file", 1, 1)
    if name is None:
        raise GraphSyntaxError("missing 'graph' line", 1, 1)
    if matching is None:
        raise GraphSyntaxError("missing 'matching' line", 1, 1)
    for v in vertices:
        if v not in rotations:
            raise GraphError(f"vertex {v} has no rotation")
    g = MatchedGraph(name, tuple(vertices), tuple(edges), tuple(rotations[v] for v in vertices), tuple(matching))
    check_structure(g)
    return g


def write_graph(g: MatchedGraph) -> str:
    lines = [f"graph {g.name}"]
    lines += [f"vertex {v}" for v in g.vertices]
    lines += [f"edge {e} {u} {w}" for e, u, w in g.edges]
    for v, rot in zip(g.vertices, g.rotations):
        lines.append(f"rotation {v} " + " ".join(token_str(t) for t in rot))
    lines.append("matching " + " ".join(g.matching))
    return "\n".join(lines) + "\n"


def normalize(g: MatchedGraph) -> MatchedGraph:
    """Sort vertex and edge ids; the matching order is kept (it is semantic)."""
    vs = tuple(sorted(g.vertices, key=_natural_key))
    es = tuple(sorted(g.edges, key=lambda e: _natural_key(e[0])))
    rots = tuple(g.rotation_of(v) for v in vs)
    return MatchedGraph(g.name, vs, es, rots, g.matching)


def load_graph(path) -> MatchedGraph:
    with open(path, encoding="utf-8") as fh:
        return read_graph(fh.read())
