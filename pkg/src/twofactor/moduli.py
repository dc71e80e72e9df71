"""Chain-level moduli: face posets, index-2 classification, butterfly matching,
index-3 boundary graphs, dual posets, covers and the cellular cochain check.

A face of the hypercube is a base state ``v`` and a set ``S`` of 0-coordinates.
Only circles that pass a site in ``S`` take part (the basic restriction); every
other circle is the same circle, with the same label, in every state of the face.

Elements of the poset are pairs (T, labels) with T ⊆ S surgered.  Covering
steps use a relation on circle-keyed labelings that is written independently
of the algebraic edge maps, so rebuilding the complex from it is a real check.
"""

from __future__ import annotations

import enum
import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .invariants import PLUS, MINUS, build_complex, cube_sign, generators_of_state, normalize_ring
from .linalg import gf2_rank, gf2_solve
from .plane_graph import Automorphism, MatchedGraph, automorphisms, is_connected
from .resolution import (
    ArcKind,
    State,
    all_states,
    arc_kind,
    configuration_graph,
    face_report,
    resolve,
    state_str,
)


class FaceError(ValueError):
    pass


def _lab(labels: Iterable[int]) -> str:
    return "".join("+-"[b] for b in labels)


# ----- the covering relation ---------------------------------------------------


def covering_rule(src: dict, tgt: dict) -> bool:
    """Single-surgery relation between circle-keyed labelings.

    ``src`` and ``tgt`` map circle keys to labels.  Circles present on both
    sides keep their label; one circle splitting into two needs the labels
    (-; -, -) or (+; {+, -}); two circles merging need (+, +; +) or ({+, -}; -).
    Anything else, including a surgery that keeps the circle count, fails.
    """
    gone = [k for k in src if k not in tgt]
    new = [k for k in tgt if k not in src]
    if any(src[k] != tgt[k] for k in src if k in tgt):
        return False
    if len(gone) == 1 and len(new) == 2:
        a = src[gone[0]]
        b, c = tgt[new[0]], tgt[new[1]]
        return (a == MINUS and b == c == MINUS) or (a == PLUS and {b, c} == {PLUS, MINUS})
    if len(gone) == 2 and len(new) == 1:
        a, b = src[gone[0]], src[gone[1]]
        c = tgt[new[0]]
        return (a == b == c == PLUS) or ({a, b} == {PLUS, MINUS} and c == MINUS)
    return False


# ----- faces and posets ------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Element:
    surgered: tuple[int, ...]  # sorted subset of S
    labels: tuple[int, ...]  # aligned with the restricted circles of the state

    @property
    def rank(self) -> int:
        return len(self.surgered)


Chain = tuple[Element, ...]


@dataclass(frozen=True)
class DecoratedFace:
    v: State
    sites: tuple[int, ...]
    y: tuple[int, ...]  # bottom labels on the restricted circles at v
    x: tuple[int, ...]  # top labels on the restricted circles at the top state

    @property
    def index(self) -> int:
        return len(self.sites)

    def describe(self) -> str:
        return (f"v={state_str(self.v)} S={','.join(map(str, self.sites))} "
                f"x={_lab(self.x)} y={_lab(self.y)}")


class FaceCube:
    """All labeled configurations over one cube face, with their covering steps."""

    def __init__(self, g: MatchedGraph, v: State, sites: Sequence[int]) -> None:
        if any(v[s] for s in sites):
            raise FaceError("face sites must be 0-coordinates of the base state")
        self.g = g
        self.v = tuple(v)
        self.sites = tuple(sorted(sites))
        self.subsets = [
            tuple(c) for r in range(len(self.sites) + 1) for c in itertools.combinations(self.sites, r)
        ]

    def state(self, T: Sequence[int]) -> State:
        w = list(self.v)
        for s in T:
            w[s] = 1
        return tuple(w)

    def circles(self, T: Sequence[int]) -> tuple[int, ...]:
        """Indices of circles at state v+T that pass a site of the face."""
        return self._circles[tuple(T)]

    @cached_property
    def _circles(self) -> dict[tuple[int, ...], tuple[int, ...]]:
        out = {}
        S = set(self.sites)
        for T in self.subsets:
            D = resolve(self.g, self.state(T))
            out[T] = tuple(
                ci for ci, c in enumerate(D.circles) if any(t[0] == 1 and t[1] in S for t in c.tokens)
            )
        return out

    def keys(self, T: Sequence[int]) -> tuple[frozenset, ...]:
        D = resolve(self.g, self.state(T))
        return tuple(D.circles[ci].key for ci in self.circles(T))

    def label_map(self, e: Element) -> dict[frozenset, int]:
        return dict(zip(self.keys(e.surgered), e.labels))

    def elements(self, T: Sequence[int]) -> list[Element]:
        T = tuple(T)
        return [Element(T, lab) for lab in itertools.product((PLUS, MINUS), repeat=len(self.circles(T)))]

    @cached_property
    def up(self) -> dict[Element, list[Element]]:
        """Covering steps, from each element to those one surgery above it."""
        out: dict[Element, list[Element]] = defaultdict(list)
        for T in self.subsets:
            for s in self.sites:
                if s in T:
                    continue
                U = tuple(sorted(T + (s,)))
                for a in self.elements(T):
                    la = self.label_map(a)
                    for b in self.elements(U):
                        if covering_rule(la, self.label_map(b)):
                            out[a].append(b)
        return dict(out)

    @cached_property
    def down(self) -> dict[Element, list[Element]]:
        out: dict[Element, list[Element]] = defaultdict(list)
        for a, bs in self.up.items():
            for b in bs:
                out[b].append(a)
        return dict(out)

    def above(self, bottom: Element) -> set[Element]:
        return _closure(bottom, self.up)

    def poset(self, y: Sequence[int], x: Sequence[int]) -> "ChainPoset | None":
        bottom = Element((), tuple(y))
        top = Element(self.sites, tuple(x))
        return self._interval(bottom, top)

    def _interval(self, bottom: Element, top: Element) -> "ChainPoset | None":
        mid = self.above(bottom) & _closure(top, self.down)
        if top not in mid:
            return None
        covers = frozenset((a, b) for a in mid for b in self.up.get(a, ()) if b in mid)
        return ChainPoset(bottom, top, tuple(sorted(mid)), covers)

    def interval(self, bottom: Element, top: Element) -> "ChainPoset | None":
        return self._interval(bottom, top)


def _closure(start: Element, step: dict[Element, list[Element]]) -> set[Element]:
    seen = {start}
    stack = [start]
    while stack:
        for b in step.get(stack.pop(), ()):
            if b not in seen:
                seen.add(b)
                stack.append(b)
    return seen


@dataclass(frozen=True)
class ChainPoset:
    bottom: Element
    top: Element
    elements: tuple[Element, ...]
    covers: frozenset[tuple[Element, Element]]

    @property
    def middle(self) -> list[Element]:
        return [e for e in self.elements if e.rank == 1 + self.bottom.rank]

    @cached_property
    def maximal_chains(self) -> list[Chain]:
        up: dict[Element, list[Element]] = defaultdict(list)
        for a, b in self.covers:
            up[a].append(b)
        out: list[Chain] = []

        def walk(chain: list[Element]) -> None:
            last = chain[-1]
            if last == self.top:
                out.append(tuple(chain))
                return
            for b in sorted(up[last]):
                walk(chain + [b])

        walk([self.bottom])
        return sorted(out)


def chain_order(chain: Chain) -> tuple[int, ...]:
    """Sites in the order the chain surgers them."""
    return tuple(next(s for s in b.surgered if s not in a.surgered) for a, b in zip(chain, chain[1:]))


def face_poset(g: MatchedGraph, face: DecoratedFace) -> ChainPoset:
    cube = FaceCube(g, face.v, face.sites)
    if len(face.y) != len(cube.circles(())) or len(face.x) != len(cube.circles(cube.sites)):
        raise FaceError("labelings do not match the circles of the face")
    P = cube.poset(face.y, face.x)
    if P is None:
        raise FaceError("not a decorated face")
    return P


def decorated_faces(g: MatchedGraph, index: int) -> Iterator[tuple[FaceCube, ChainPoset]]:
    """Every nonempty face poset of the given index, in deterministic order."""
    for v in all_states(g.n):
        zeros = [k for k in range(g.n) if v[k] == 0]
        for S in itertools.combinations(zeros, index):
            cube = FaceCube(g, v, S)
            tops = cube.elements(cube.sites)
            for bottom in cube.elements(()):
                reach = cube.above(bottom)
                for top in tops:
                    if top in reach:
                        P = cube.interval(bottom, top)
                        if P is not None:
                            yield cube, P


def face_of(cube: FaceCube, P: ChainPoset) -> DecoratedFace:
    return DecoratedFace(cube.v, cube.sites, P.bottom.labels, P.top.labels)


# ----- index 2 -----------------------------------------------------------------------


class Index2Class(enum.Enum):
    LEAF_OR_COLEAF = "leaf_or_coleaf"
    TWO_CIRCLE_PARALLEL = "two_circle_parallel"
    BUTTERFLY = "butterfly"
    # only outside 𝒢: one surgery order is blocked by a circle-preserving arc
    BAD_FACE = "bad_face"

    @property
    def k(self) -> int:
        return 4 if self is Index2Class.BUTTERFLY else 2


def is_butterfly(g: MatchedGraph, v: State, a: int, b: int) -> bool:
    """One circle through both sites, both arcs split it, and the top state has one circle there."""
    cube = FaceCube(g, v, (a, b))
    if len(cube.circles(())) != 1:
        return False
    if arc_kind(g, v, a) is not ArcKind.DELTA or arc_kind(g, v, b) is not ArcKind.DELTA:
        return False
    return len(cube.circles(cube.sites)) == 1


def classify_index2(g: MatchedGraph, face: DecoratedFace) -> Index2Class:
    if face.index != 2:
        raise FaceError("classification needs an index-2 face")
    P = face_poset(g, face)
    a, b = face.sites
    if face_report(g, face.v, a, b).bad:
        cls = Index2Class.BAD_FACE
    elif configuration_graph(g, face.v, face.sites).has_leaf_or_coleaf:
        cls = Index2Class.LEAF_OR_COLEAF
    elif is_butterfly(g, face.v, a, b):
        cls = Index2Class.BUTTERFLY
    else:
        cls = Index2Class.TWO_CIRCLE_PARALLEL
    k = len(P.middle)
    assert k == cls.k, f"{face.describe()}: {cls.value} but {k} middle elements"
    return cls


# ----- butterfly matching ----------------------------------------------------------------


@dataclass(frozen=True)
class ButterflySegments:
    """The four runs of the circle between consecutive arc endpoints, and the chosen P and Q."""

    runs: tuple[tuple[int, ...], ...]  # edge indices per run, in traversal order
    crossings: tuple[int, ...]  # self-crossing passages per run
    p: int  # index of the run called P
    q: int

    @property
    def p_edge(self) -> int:
        return self.runs[self.p][0]

    @property
    def q_edge(self) -> int:
        return self.runs[self.q][0]


def butterfly_segments(g: MatchedGraph, v: State, a: int, b: int, shift: int = 0) -> ButterflySegments:
    """Split the butterfly circle at the four arc endpoints and pick P, Q.

    P and Q are the opposite runs that pass the circle's self-crossings an even
    number of times.  The number of passages in a run changes parity only when
    an arc endpoint slides across a double point, so this is the choice made
    after moving both arcs to opposite sides of one double point.  ``shift``
    re-roots the traversal, which must not change the answer.
    """
    D = resolve(g, v)
    cis = {D.site_circles(a)[0], D.site_circles(a)[1], D.site_circles(b)[0], D.site_circles(b)[1]}
    if len(cis) != 1:
        raise FaceError("not a butterfly: the arcs meet more than one circle")
    ci = cis.pop()
    toks = D.circles[ci].tokens
    L = len(toks)
    shift %= L
    toks = toks[shift:] + toks[:shift]
    selfx = set(D.self_crossings(ci))
    cuts = [p for p, t in enumerate(toks) if t[0] == 1 and t[1] in (a, b)]
    if len(cuts) != 4:
        raise FaceError("not a butterfly: expected four arc endpoints")
    runs, counts = [], []
    for r in range(4):
        lo, hi = cuts[r], cuts[(r + 1) % 4]
        span = [toks[p % L] for p in range(lo + 1, hi if hi > lo else hi + L)]
        runs.append(tuple(t[1] for t in span if t[0] == 0))
        counts.append(sum(1 for t in span if t[0] == 1 and t[1] in selfx))
    even = [(i, i + 2) for i in (0, 1) if counts[i] % 2 == 0 and counts[i + 2] % 2 == 0]
    if len(even) != 1 or not runs[even[0][0]] or not runs[even[0][1]]:
        raise FaceError("degenerate butterfly")
    p, q = even[0]
    # name P canonically so re-rooting does not swap the two runs
    if min(runs[q]) < min(runs[p]):
        p, q = q, p
    return ButterflySegments(tuple(runs), tuple(counts), p, q)


ButterflyId = tuple[State, int, int]  # (base state, site, site)


@dataclass(frozen=True)
class ButterflyMatching:
    sites: tuple[int, int]
    p_edge: int
    q_edge: int
    pairs: tuple[tuple[Chain, Chain], ...]


def _interval_sites(cube: FaceCube, P: ChainPoset) -> tuple[int, int]:
    a, b = [s for s in cube.sites if s not in P.bottom.surgered and s in P.top.surgered]
    return a, b


def interval_butterfly(cube: FaceCube, P: ChainPoset) -> ButterflyId:
    a, b = _interval_sites(cube, P)
    return (cube.state(P.bottom.surgered), a, b)


def _interval_pairs(cube: FaceCube, P: ChainPoset, flip: bool = False) -> list[tuple[Chain, Chain]]:
    """Pair the maximal chains of an index-2 interval into its 1-dimensional moduli.

    With ``flip`` a butterfly is matched through the other pair of opposite runs.
    """
    chains = P.maximal_chains
    if len(chains) == 2:
        return [(chains[0], chains[1])]
    if len(chains) != 4:
        raise FaceError(f"index-2 interval with {len(chains)} maximal chains")
    a, b = _interval_sites(cube, P)
    seg = butterfly_segments(cube.g, cube.state(P.bottom.surgered), a, b)
    edge = seg.runs[(seg.p + 1) % 4][0] if flip else seg.p_edge
    by_first: dict[int, dict[int, Chain]] = defaultdict(dict)
    for ch in chains:
        mid = ch[1]
        key = next(k for k in cube.label_map(mid) if edge in k)
        by_first[chain_order(ch)[0]][cube.label_map(mid)[key]] = ch
    first, second = by_first[a], by_first[b]
    if set(first) != {PLUS, MINUS} or set(second) != {PLUS, MINUS}:
        raise FaceError("butterfly chains do not split by the label on P")
    # chains match when the circle holding the chosen run has the same label
    return [(first[PLUS], second[PLUS]), (first[MINUS], second[MINUS])]


def butterfly_match(g: MatchedGraph, face: DecoratedFace, flip: bool = False) -> ButterflyMatching:
    cube = FaceCube(g, face.v, face.sites)
    P = face_poset(g, face)
    if len(P.maximal_chains) != 4:
        raise FaceError("not a butterfly face")
    seg = butterfly_segments(g, face.v, *face.sites)
    return ButterflyMatching(face.sites, seg.p_edge, seg.q_edge, tuple(_interval_pairs(cube, P, flip)))


# ----- index 3 -----------------------------------------------------------------------------


@dataclass
class BoundaryGraph:
    chains: list[Chain]
    edges: list[tuple[int, int]]

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.chains]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    @property
    def regular(self) -> bool:
        return all(len(a) == 2 for a in self.adjacency())

    def components(self) -> list[list[int]]:
        adj = self.adjacency()
        seen: set[int] = set()
        out = []
        for s in range(len(self.chains)):
            if s in seen:
                continue
            comp, stack = [], [s]
            seen.add(s)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            out.append(sorted(comp))
        return out

    def covers_permutohedron(self) -> bool:
        """Each component uses every surgery order exactly once."""
        for comp in self.components():
            orders = [chain_order(self.chains[i]) for i in comp]
            if len(set(orders)) != len(orders) or len(orders) != 6:
                return False
        return True


def _flipped(cube: FaceCube, sub: ChainPoset, wrong: bool, flips: frozenset) -> bool:
    if len(sub.maximal_chains) != 4:
        return False
    return wrong != (interval_butterfly(cube, sub) in flips)


def boundary_graph(
    cube: FaceCube, P: ChainPoset, wrong: bool = False, flips: frozenset = frozenset()
) -> BoundaryGraph:
    """Maximal chains of an index-3 poset joined along the six index-2 sub-faces.

    Butterflies named in ``flips`` use the other run pair; ``wrong`` flips all of them.
    """
    chains = P.maximal_chains
    pos = {c: i for i, c in enumerate(chains)}
    edges: list[tuple[int, int]] = []
    rank1 = sorted({c[1] for c in chains})
    rank2 = sorted({c[2] for c in chains})
    for e1 in rank1:
        sub = cube.interval(e1, P.top)
        for c1, c2 in _interval_pairs(cube, sub, _flipped(cube, sub, wrong, flips)):
            edges.append((pos[(P.bottom,) + c1], pos[(P.bottom,) + c2]))
    for e2 in rank2:
        sub = cube.interval(P.bottom, e2)
        for c1, c2 in _interval_pairs(cube, sub, _flipped(cube, sub, wrong, flips)):
            edges.append((pos[c1 + (P.top,)], pos[c2 + (P.top,)]))
    return BoundaryGraph(chains, sorted(edges))


@dataclass
class FaceRow:
    face: DecoratedFace
    components: tuple[int, ...]
    ok: bool
    note: str = ""

    def line(self) -> str:
        f = self.face
        return (f"face v={state_str(f.v)} S={','.join(map(str, f.sites))} x={_lab(f.x)} y={_lab(f.y)} "
                f"components={','.join(map(str, self.components))} pass={int(self.ok)}"
                + (f" note={self.note}" if self.note else ""))


@dataclass
class SixCycleReport:
    rows: list[FaceRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def failures(self) -> list[FaceRow]:
        return [r for r in self.rows if not r.ok]

    def lines(self) -> list[str]:
        return [r.line() for r in self.rows] + [
            f"six_cycles faces={len(self.rows)} failures={len(self.failures)} pass={int(self.ok)}"
        ]


def verify_six_cycles(g: MatchedGraph, wrong: bool = False, flips: Iterable = ()) -> SixCycleReport:
    """Boundary graphs of every index-3 face; pass iff all components are 6-cycles.

    ``wrong=True`` matches every butterfly through the other run pair (a
    negative control).  ``flips`` does the same for selected butterflies only.
    """
    flips = frozenset(flips)
    rep = SixCycleReport()
    for cube, P in decorated_faces(g, 3):
        face = face_of(cube, P)
        try:
            bg = boundary_graph(cube, P, wrong, flips)
        except FaceError as exc:
            rep.rows.append(FaceRow(face, (), False, str(exc).replace(" ", "_")))
            continue
        if not bg.regular:
            rep.rows.append(FaceRow(face, (), False, "not_2_regular"))
            continue
        comps = tuple(len(c) for c in bg.components())
        ok = all(n == 6 for n in comps) and bg.covers_permutohedron()
        rep.rows.append(FaceRow(face, comps, ok))
    return rep


# ----- consistency of butterfly matchings ------------------------------------------------
#
# Relative to the run-pair rule, each butterfly either keeps its matching or
# flips it.  An index-3 face whose boundary graph involves butterflies accepts
# some set of flip patterns; in practice this set is always "the XOR of the
# flips equals r" for one r, so the faces give a linear system over GF(2).


@dataclass(frozen=True)
class FlipConstraint:
    face: DecoratedFace
    butterflies: tuple[ButterflyId, ...]
    allowed: tuple[tuple[int, ...], ...]  # flip patterns that give 6-cycles

    @property
    def parity(self) -> int | None:
        """Required XOR of the flips, or None when the allowed set is not a parity class."""
        k = len(self.butterflies)
        want = {sum(c) % 2 for c in self.allowed}
        if len(want) != 1 or len(self.allowed) != 2 ** (k - 1):
            return None
        return want.pop()


def flip_constraints(g: MatchedGraph) -> list[FlipConstraint]:
    out = []
    for cube, P in decorated_faces(g, 3):
        chains = P.maximal_chains
        subs = [cube.interval(e1, P.top) for e1 in sorted({c[1] for c in chains})]
        subs += [cube.interval(P.bottom, e2) for e2 in sorted({c[2] for c in chains})]
        bfs = sorted({interval_butterfly(cube, s) for s in subs if len(s.maximal_chains) == 4})
        if not bfs:
            continue
        allowed = []
        for pattern in itertools.product((0, 1), repeat=len(bfs)):
            flips = frozenset(b for b, f in zip(bfs, pattern) if f)
            bg = boundary_graph(cube, P, flips=flips)
            if bg.regular and all(len(c) == 6 for c in bg.components()) and bg.covers_permutohedron():
                allowed.append(pattern)
        out.append(FlipConstraint(face_of(cube, P), tuple(bfs), tuple(allowed)))
    return out


def _act(a: Automorphism, b: ButterflyId) -> ButterflyId:
    v, s, t = b
    w = [0] * len(v)
    for i, bit in enumerate(v):
        w[a.sites[i]] = bit
    s, t = sorted((a.sites[s], a.sites[t]))
    return (tuple(w), s, t)


@dataclass
class FlipAnalysis:
    """Whether some butterfly matching makes every index-3 boundary graph a union of 6-cycles.

    ``solution`` is one consistent set of flips (None if none exists).  The two
    ``symmetric_*`` flags ask the same question for matchings that commute
    with all automorphisms of the graph, with and without reflections.  A
    matching defined from the local picture alone must commute with them.
    """

    butterflies: list[ButterflyId]
    constraints: list[FlipConstraint]
    solution: frozenset | None
    rank: int
    symmetric_ok: bool
    chiral_ok: bool

    @property
    def literal_ok(self) -> bool:
        return all(c.parity == 0 for c in self.constraints)

    def lines(self) -> list[str]:
        out = []
        for c in self.constraints:
            f = c.face
            bfs = " ".join(f"{state_str(v)}:{s},{t}" for v, s, t in c.butterflies)
            par = "none" if c.parity is None else str(c.parity)
            out.append(f"flips v={state_str(f.v)} S={','.join(map(str, f.sites))} "
                       f"x={_lab(f.x)} y={_lab(f.y)} butterflies={bfs} xor={par}")
        out.append(
            f"flips butterflies={len(self.butterflies)} constraints={len(self.constraints)} rank={self.rank} "
            f"literal={int(self.literal_ok)} solvable={int(self.solution is not None)} "
            f"symmetric={int(self.symmetric_ok)} chiral={int(self.chiral_ok)}"
        )
        return out


def _solve(constraints: list[FlipConstraint], var: dict) -> list[int] | None:
    rows = []
    for c in constraints:
        if c.parity is None:
            return None
        mask = 0
        for b in c.butterflies:
            mask ^= 1 << var[b]
        rows.append((mask, c.parity))
    n = max(var.values(), default=-1) + 1
    return gf2_solve(rows, n)


def analyze_flips(g: MatchedGraph) -> FlipAnalysis:
    cons = flip_constraints(g)
    bfs = sorted({b for c in cons for b in c.butterflies})
    var = {b: i for i, b in enumerate(bfs)}
    sol = _solve(cons, var)
    rank = gf2_rank(sum(1 << var[b] for b in c.butterflies) for c in cons)

    def orbit_ok(auts: list[Automorphism]) -> bool:
        orbit: dict[ButterflyId, int] = {}
        for b in bfs:
            if b not in orbit:
                k = len(set(orbit.values()))
                for a in auts:
                    orbit[_act(a, b)] = k
        return _solve(cons, orbit) is not None

    auts = automorphisms(g) if is_connected(g) else []
    sym = orbit_ok(auts) if auts else sol is not None
    chi = orbit_ok([a for a in auts if a.orientation == 1]) if auts else sol is not None
    flips = None if sol is None else frozenset(b for b in bfs if sol[var[b]])
    return FlipAnalysis(bfs, cons, flips, rank, sym, chi)


# ----- index-2 scan ------------------------------------------------------------------------


@dataclass
class Index2Report:
    counts: dict[str, int] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> list[str]:
        out = [f"index2 class={c} faces={n}" for c, n in sorted(self.counts.items())]
        out += [f"index2 failure {f}" for f in self.failures]
        out.append(f"index2 faces={sum(self.counts.values())} failures={len(self.failures)} pass={int(self.ok)}")
        return out


def classify_all_index2(g: MatchedGraph) -> Index2Report:
    """Every nonempty index-2 face: k is 2 or 4, and 4 exactly for butterflies."""
    rep = Index2Report()
    for cube, P in decorated_faces(g, 2):
        face = face_of(cube, P)
        k = len(P.middle)
        bfly = is_butterfly(g, face.v, *face.sites)
        if k not in (2, 4) or (k == 4) != bfly:
            rep.failures.append(f"{face.describe()} k={k} butterfly={int(bfly)}")
            continue
        try:
            cls = classify_index2(g, face)
        except AssertionError as exc:
            rep.failures.append(str(exc))
            continue
        rep.counts[cls.value] = rep.counts.get(cls.value, 0) + 1
    return rep


# ----- duality and covers --------------------------------------------------------------------


def dual_poset_check(g: MatchedGraph, face: DecoratedFace) -> bool:
    """The face read top-down with complemented labels gives the reversed poset."""
    cube = FaceCube(g, face.v, face.sites)
    P = face_poset(g, face)

    def comp(e: Element) -> dict:
        return {k: 1 - lab for k, lab in cube.label_map(e).items()}

    # dual covering steps run from the larger surgered set to the smaller one
    dual_up: dict[Element, list[Element]] = defaultdict(list)
    for T in cube.subsets:
        for s in T:
            U = tuple(t for t in T if t != s)
            for a in cube.elements(T):
                ca = comp(a)
                for b in cube.elements(U):
                    if covering_rule(ca, comp(b)):
                        dual_up[a].append(b)
    dual_down: dict[Element, list[Element]] = defaultdict(list)
    for a, bs in dual_up.items():
        for b in bs:
            dual_down[b].append(a)
    # elements are stored with primal labels; the dual bottom is the top of P
    mid = _closure(P.top, dual_up) & _closure(P.bottom, dual_down)
    if set(mid) != set(P.elements):
        return False
    dual_covers = {(b, a) for a in mid for b in dual_up.get(a, ()) if b in mid}
    return dual_covers == set(P.covers)


@dataclass
class CoverReport:
    faces: int = 0
    empty_faces: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self) -> list[str]:
        out = [f"cover failure {f}" for f in self.failures]
        out.append(f"cover faces={self.faces} empty={self.empty_faces} failures={len(self.failures)} "
                   f"pass={int(self.ok)}")
        return out


def cover_check(g: MatchedGraph, max_index: int = 3) -> CoverReport:
    """Chains project to coordinate orders; paired chains project to the two orders.

    A face (v, S) none of whose labelings gives a chain is counted as empty and
    reported apart from failures.
    """
    rep = CoverReport()
    for index in range(1, max_index + 1):
        for v in all_states(g.n):
            zeros = [k for k in range(g.n) if v[k] == 0]
            for S in itertools.combinations(zeros, index):
                cube = FaceCube(g, v, S)
                found = False
                for bottom in cube.elements(()):
                    reach = cube.above(bottom)
                    for top in cube.elements(cube.sites):
                        if top not in reach:
                            continue
                        P = cube.interval(bottom, top)
                        found = True
                        rep.faces += 1
                        rep.failures.extend(_cover_failures(cube, P))
                if not found:
                    rep.empty_faces += 1
    return rep


def _cover_failures(cube: FaceCube, P: ChainPoset) -> list[str]:
    desc = face_of(cube, P).describe()
    out = []
    for ch in P.maximal_chains:
        if sorted(chain_order(ch)) != list(cube.sites):
            out.append(f"{desc} chain is not a coordinate order")
    if len(cube.sites) == 2:
        try:
            pairs = _interval_pairs(cube, P)
        except FaceError as exc:
            return out + [f"{desc} {exc}"]
        for c1, c2 in pairs:
            if chain_order(c1) == chain_order(c2):
                out.append(f"{desc} paired chains share the order {chain_order(c1)}")
    elif len(cube.sites) == 3:
        try:
            bg = boundary_graph(cube, P)
        except FaceError as exc:
            return out + [f"{desc} {exc}"]
        if not bg.regular or not bg.covers_permutohedron():
            out.append(f"{desc} boundary does not cover the hexagon")
    return out


# ----- realization ------------------------------------------------------------------------------


@dataclass
class Cell:
    gen: str
    dim: int
    attach: tuple[tuple[str, int], ...]

    def line(self) -> str:
        return f"cell gen={self.gen} dim={self.dim} attach={','.join(f'{g}:{c}' for g, c in self.attach)}"


@dataclass
class RealizationReport:
    ring: str
    shift: int
    cells: dict[int, list[Cell]]
    blocks: dict[int, bool]

    @property
    def ok(self) -> bool:
        return all(self.blocks.values())

    def lines(self) -> list[str]:
        out = [f"realization ring={self.ring} N={self.shift} d0={self.shift}"]
        for j in sorted(self.cells, reverse=True):
            out.append(f"block j={j}")
            out += [c.line() for c in self.cells[j]]
            out.append(f"compare j={j} pass={int(self.blocks[j])}")
        out.append(f"realization pass={int(self.ok)}")
        return out


def realization_report(g: MatchedGraph, ring: str = "Z2", d0: int = 1) -> RealizationReport:
    """One cell per generator, attached along 0-dimensional moduli; compare with the complex.

    Cell dimension is the homological grading plus N = d0.  An attaching
    coefficient is the signed count of one-step chains (the cube sign over Z).
    """
    ring = normalize_ring(ring)
    C = build_complex(g, ring)
    gens = C.generators
    incoming: dict[int, dict[int, int]] = defaultdict(dict)
    for s, y in enumerate(gens):
        D0 = resolve(g, y.state)
        ly = {c.key: lab for c, lab in zip(D0.circles, y.labels)}
        for i in range(g.n):
            if y.state[i]:
                continue
            w = y.state[:i] + (1,) + y.state[i + 1:]
            D1 = resolve(g, w)
            for x in generators_of_state(g, w):
                lx = {c.key: lab for c, lab in zip(D1.circles, x.labels)}
                if covering_rule(ly, lx):
                    coef = cube_sign(y.state, i) if ring == "Z" else 1
                    t = C.index[x]
                    incoming[t][s] = incoming[t].get(s, 0) + coef
    cells: dict[int, list[Cell]] = defaultdict(list)
    for t, x in enumerate(gens):
        att = tuple((gens[s].name, c) for s, c in sorted(incoming[t].items()) if c)
        cells[x.gr_q].append(Cell(x.name, x.gr_h + d0, att))
    blocks = {}
    for j in cells:
        rebuilt = {s: {} for s in range(len(gens))}
        for t, srcs in incoming.items():
            if gens[t].gr_q != j:
                continue
            for s, c in srcs.items():
                c = c % 2 if ring == "Z2" else c
                if c:
                    rebuilt[s][t] = c
        want = {s: row for s, row in C.d.items() if gens[s].gr_q == j}
        got = {s: row for s, row in rebuilt.items() if row}
        blocks[j] = got == want
    return RealizationReport(ring, d0, dict(cells), blocks)
