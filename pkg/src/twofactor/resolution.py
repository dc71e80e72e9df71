"""Resolution diagrams: circles traced in each state of the hypercube.

Local picture at matching edge ``i`` with endpoints ``u = ends[0]`` and
``w = ends[1]``.  At each endpoint the two non-matching half-edges are the
rotation successor and predecessor of the matching half-edge.

* 0-resolution: two strands run alongside the matching edge,
  ``succ(u)--pred(w)`` (port 0) and ``pred(u)--succ(w)`` (port 1).  The arc is a
  rung between them.
* 1-resolution: the strands cross once, ``succ(u)--succ(w)`` (port 0) and
  ``pred(u)--pred(w)`` (port 1).  This is surgery along the rung.

A traversal token is ``(0, edge, 0, dir)`` for a non-matching edge, or
``(1, site, port, dir)`` for a strand at a resolution site.  ``dir`` is +1 when
the token is crossed from end 0 to end 1 (from ``u`` to ``w`` for sites).
Every non-matching edge lies on exactly one circle, so a circle is named by the
frozenset of its edge indices.  This key is what carries labels between states.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .plane_graph import MatchedGraph

State = tuple[int, ...]
Tok = tuple[int, int, int, int]
CircleKey = frozenset


class ArcKind(enum.Enum):
    M = "m"
    DELTA = "delta"
    ETA = "eta"

    def __str__(self) -> str:
        return self.value


def parse_state(bits: str, n: int) -> State:
    if len(bits) != n or set(bits) - {"0", "1"}:
        raise ValueError(f"state must be {n} bits, got {bits!r}")
    return tuple(int(b) for b in bits)


def state_str(v: State) -> str:
    return "".join(map(str, v))


def all_states(n: int) -> Iterator[State]:
    return itertools.product((0, 1), repeat=n)


def flip_bit(v: State, i: int) -> State:
    return v[:i] + (1 - v[i],) + v[i + 1:]


@dataclass(frozen=True)
class Circle:
    tokens: tuple[Tok, ...]

    @property
    def key(self) -> CircleKey:
        return frozenset(t[1] for t in self.tokens if t[0] == 0)

    @property
    def first(self) -> int:
        return self.tokens[0][1]

    def site_passes(self, site: int) -> list[int]:
        return [p for p, t in enumerate(self.tokens) if t[0] == 1 and t[1] == site]


@dataclass(frozen=True)
class Arc:
    site: int
    ends: tuple[tuple[int, int], tuple[int, int]]  # (circle index, position) for ports 0, 1


@dataclass(frozen=True)
class ResolutionDiagram:
    state: State
    circles: tuple[Circle, ...]
    arcs: tuple[Arc, ...]

    @property
    def keys(self) -> tuple[CircleKey, ...]:
        return tuple(c.key for c in self.circles)

    def circle_of_edge(self, e: int) -> int:
        for ci, c in enumerate(self.circles):
            if e in c.key:
                return ci
        raise KeyError(e)

    def site_circles(self, site: int) -> tuple[int, int]:
        """Circles carrying port 0 and port 1 of a site (0- or 1-resolved)."""
        found = {}
        for ci, c in enumerate(self.circles):
            for t in c.tokens:
                if t[0] == 1 and t[1] == site:
                    found[t[2]] = ci
        return found[0], found[1]

    def double_points(self, ci: int) -> tuple[int, ...]:
        """Sites (sorted, with multiplicity) where circle ``ci`` passes a 1-resolved crossing."""
        return tuple(sorted(t[1] for t in self.circles[ci].tokens if t[0] == 1 and self.state[t[1]] == 1))

    def self_crossings(self, ci: int) -> tuple[int, ...]:
        """1-resolved sites where both strands lie on circle ``ci``."""
        dp = self.double_points(ci)
        return tuple(sorted({s for s in dp if dp.count(s) == 2}))


def _pairing(ix, site_edge: int, bit: int):
    """Strand ends at a site: list of (half-edge at u, half-edge at w) for ports 0, 1."""
    hu, hw = 2 * site_edge, 2 * site_edge + 1
    su, pu, sw, pw = ix.succ(hu), ix.pred(hu), ix.succ(hw), ix.pred(hw)
    if bit == 0:
        return ((su, pw), (pu, sw))
    return ((su, sw), (pu, pw))


@lru_cache(maxsize=65536)
def resolve(g: MatchedGraph, v: State) -> ResolutionDiagram:
    """Trace the circles of state ``v``."""
    if len(v) != g.n:
        raise ValueError(f"state length {len(v)} != |M| = {g.n}")
    ix = g._ix
    m_edges = [ix.edge_pos[e] for e in g.matching]
    site_of_edge = {e: i for i, e in enumerate(m_edges)}
    # for each non-matching half-edge: (site, port, side 0=u/1=w, partner half-edge)
    link: dict[int, tuple[int, int, int, int]] = {}
    for i, me in enumerate(m_edges):
        for port, (hu, hw) in enumerate(_pairing(ix, me, v[i])):
            link[hu] = (i, port, 0, hw)
            link[hw] = (i, port, 1, hu)
    nonmatching = [e for e in range(len(g.edges)) if e not in site_of_edge]
    seen: set[int] = set()
    circles = []
    for e0 in nonmatching:
        if e0 in seen:
            continue
        toks: list[Tok] = []
        h = 2 * e0  # leave along e0 from end 0
        while True:
            e, k = h >> 1, h & 1
            seen.add(e)
            toks.append((0, e, 0, +1 if k == 0 else -1))
            arrive = h ^ 1
            site, port, side, partner = link[arrive]
            toks.append((1, site, port, +1 if side == 0 else -1))
            h = partner
            if h == 2 * e0:
                break
        circles.append(Circle(tuple(toks)))
    # nonmatching is increasing, so circles are already ordered by first edge token
    arcs = []
    for i in range(g.n):
        if v[i] == 0:
            ends = {}
            for ci, c in enumerate(circles):
                for p, t in enumerate(c.tokens):
                    if t[0] == 1 and t[1] == i:
                        ends[t[2]] = (ci, p)
            arcs.append(Arc(i, (ends[0], ends[1])))
    return ResolutionDiagram(v, tuple(circles), tuple(arcs))


def circle_count(g: MatchedGraph, v: State) -> int:
    return len(resolve(g, v).circles)


def arc_kind(g: MatchedGraph, v: State, i: int) -> ArcKind:
    if v[i] != 0:
        raise ValueError("not a 0-resolved coordinate")
    d = circle_count(g, flip_bit(v, i)) - circle_count(g, v)
    return {-1: ArcKind.M, 1: ArcKind.DELTA, 0: ArcKind.ETA}[d]


def local_arc_kind(g: MatchedGraph, v: State, i: int) -> ArcKind:
    """Arc kind read off the strand directions at the site, without re-tracing.

    Different circles give m.  On a single circle the outside connects the
    strand ends crosswise exactly when both strands are crossed in the same
    direction; then surgery splits (Delta), otherwise it does not (eta).
    """
    if v[i] != 0:
        raise ValueError("not a 0-resolved coordinate")
    D = resolve(g, v)
    dirs = {}
    circ = {}
    for ci, c in enumerate(D.circles):
        for t in c.tokens:
            if t[0] == 1 and t[1] == i:
                dirs[t[2]] = t[3]
                circ[t[2]] = ci
    if circ[0] != circ[1]:
        return ArcKind.M
    return ArcKind.DELTA if dirs[0] == dirs[1] else ArcKind.ETA


# ----- faces ---------------------------------------------------------------


@dataclass(frozen=True)
class FaceReport:
    v: State
    i: int
    j: int
    kinds: tuple[ArcKind, ArcKind, ArcKind, ArcKind]

    @property
    def bad(self) -> bool:
        p1, p2 = self.kinds[:2], self.kinds[2:]
        dm = (ArcKind.DELTA, ArcKind.M)
        ee = (ArcKind.ETA, ArcKind.ETA)
        return (p1 == dm and p2 == ee) or (p1 == ee and p2 == dm)

    def line(self) -> str:
        k = self.kinds
        return (
            f"v={state_str(self.v)} face=({self.i},{self.j}) "
            f"kinds={k[0]},{k[1]}|{k[2]},{k[3]} bad={int(self.bad)}"
        )


def face_report(g: MatchedGraph, v: State, i: int, j: int) -> FaceReport:
    vi, vj = flip_bit(v, i), flip_bit(v, j)
    kinds = (arc_kind(g, v, i), arc_kind(g, vi, j), arc_kind(g, v, j), arc_kind(g, vj, i))
    return FaceReport(v, i, j, kinds)


def scan_faces(g: MatchedGraph) -> list[FaceReport]:
    out = []
    for v in all_states(g.n):
        zeros = [k for k in range(g.n) if v[k] == 0]
        for i, j in itertools.combinations(zeros, 2):
            out.append(face_report(g, v, i, j))
    return out


@dataclass(frozen=True)
class Membership:
    member: bool
    faces: int
    bad_faces: int
    witness: FaceReport | None


def in_family_G(g: MatchedGraph) -> Membership:
    reps = scan_faces(g)
    bad = [r for r in reps if r.bad]
    return Membership(not bad, len(reps), len(bad), bad[0] if bad else None)


def is_member(g: MatchedGraph) -> bool:
    for v in all_states(g.n):
        zeros = [k for k in range(g.n) if v[k] == 0]
        for i, j in itertools.combinations(zeros, 2):
            if face_report(g, v, i, j).bad:
                return False
    return True


# ----- configuration graph ------------------------------------------------------


@dataclass(frozen=True)
class ConfigurationGraph:
    """Circles as vertices, arcs as edges (loops allowed), with leaf and coleaf flags."""

    circles: tuple[CircleKey, ...]
    arcs: tuple[tuple[int, int, int], ...]  # (site, circle index, circle index)
    leaves: tuple[bool, ...]
    coleaf_arcs: tuple[int, ...]  # sites whose dual arc has a leaf endpoint

    def degree(self, ci: int) -> int:
        return sum((a == ci) + (b == ci) for _, a, b in self.arcs)

    @property
    def has_leaf_or_coleaf(self) -> bool:
        return any(self.leaves) or bool(self.coleaf_arcs)


def _restricted_graph(D: ResolutionDiagram, sites: Sequence[int]):
    used = sorted({c for s in sites for c in D.site_circles(s)})
    pos = {c: k for k, c in enumerate(used)}
    arcs = []
    for s in sites:
        a, b = D.site_circles(s)
        arcs.append((s, pos[a], pos[b]))
    deg = [0] * len(used)
    for _, a, b in arcs:
        deg[a] += 1
        deg[b] += 1
    return tuple(D.circles[c].key for c in used), tuple(arcs), deg


def configuration_graph(g: MatchedGraph, v: State, sites: Sequence[int] | None = None) -> ConfigurationGraph:
    """G(D) for the arcs at ``sites`` (default: every 0-site), restricted to circles they meet.

    The coleaf test reads the dual configuration at the fully surgered state,
    where each surgered site carries a dual arc across its crossing.
    """
    if sites is None:
        sites = [k for k in range(g.n) if v[k] == 0]
    sites = sorted(sites)
    if any(v[s] for s in sites):
        raise ValueError("not a 0-resolved coordinate")
    D = resolve(g, v)
    keys, arcs, deg = _restricted_graph(D, sites)
    top = v
    for s in sites:
        top = flip_bit(top, s)
    Dt = resolve(g, top)
    _, darcs, ddeg = _restricted_graph(Dt, sites)
    coleaf = tuple(s for s, a, b in darcs if ddeg[a] == 1 or ddeg[b] == 1)
    return ConfigurationGraph(keys, arcs, tuple(d == 1 for d in deg), coleaf)
