"""Oriented link diagrams in PD notation and their flattenings into closed webs.

PD convention: ``X a b c d`` lists the four arcs at a crossing counterclockwise,
starting with the incoming under-strand, so the under-strand runs a -> c.  The
over-strand runs d -> b (positive crossing) or b -> d (negative crossing).

Each crossing is flattened in one of two ways.  The singular flattening joins
the two incoming strands at one trivalent vertex and the two outgoing strands
at another, with a matching edge between them.  The other flattening is the
oriented smoothing, which leaves no vertex.  Bit 0 is singular at a positive
crossing and bit 1 is singular at a negative one, so the all-singular state
("of") gives |M| = n and its dual ("dof") is the Seifert smoothing.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Sequence

from .plane_graph import GraphError, MatchedGraph, components, make_graph, validate
from .resolution import ArcKind, all_states, arc_kind, resolve, state_str
from .resolution import is_member as _is_member


class PDError(ValueError):
    pass


@dataclass(frozen=True)
class LinkDiagram:
    name: str
    crossings: tuple[tuple[int, int, int, int], ...]
    signs: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.crossings)

    def over_out(self, k: int) -> int:
        """Position (1 or 3) where the over-strand leaves crossing k."""
        return 1 if self.signs[k] > 0 else 3


def _solve_orientation(crossings: Sequence[tuple[int, ...]]) -> list[int]:
    """Return b_k (1 if the over-strand leaves at position 1) for every crossing.

    Each arc has one tail ("out") and one head ("in").  Position 0 is in, 2 is
    out, 1 is out iff b_k = 1, 3 is out iff b_k = 0.  These are parity
    constraints; components met only as over-strands stay free and are fixed
    by the arc numbering.
    """
    occ: dict[int, list[tuple[int, int]]] = {}
    for k, xs in enumerate(crossings):
        for p, lab in enumerate(xs):
            occ.setdefault(lab, []).append((k, p))
    for lab, places in occ.items():
        if len(places) != 2:
            raise PDError(f"arc label {lab} used {len(places)} times (must be 2)")
    n = len(crossings)
    parent = list(range(n + 1))  # node n is the constant 0
    parity = [0] * (n + 1)

    def find(x: int) -> tuple[int, int]:
        p = 0
        while parent[x] != x:
            p ^= parity[x]
            x = parent[x]
        return x, p

    def union(a: int, b: int, rel: int) -> None:
        ra, pa = find(a)
        rb, pb = find(b)
        if ra == rb:
            if pa ^ pb != rel:
                raise PDError("orientation inconsistency")
            return
        if ra == n:
            ra, rb, pa, pb = rb, ra, pb, pa
        parent[ra] = rb
        parity[ra] = pa ^ pb ^ rel

    # out(k,p) as (variable or None, constant): value = var ^ const
    def out(k: int, p: int) -> tuple[int, int]:
        return {0: (n, 0), 2: (n, 1), 1: (k, 0), 3: (k, 1)}[p]

    for lab, ((k1, p1), (k2, p2)) in sorted(occ.items()):
        a, ca = out(k1, p1)
        b, cb = out(k2, p2)
        union(a, b, 1 ^ ca ^ cb)
    labels = sorted(occ)
    N = len(labels)
    rank = {lab: r for r, lab in enumerate(labels)}
    b = [0] * n
    for k, xs in enumerate(crossings):
        r, p = find(k)
        if find(n)[0] != r:
            # free: follow the numbering, over-strand goes from d to the next label b
            guess = 1 if (rank[xs[1]] - rank[xs[3]]) % N == 1 else 0
            union(k, n, guess)
    for k in range(n):
        r, p = find(k)
        rn, pn = find(n)
        b[k] = p ^ pn
    return b


def parse_pd(text: str, name: str = "link") -> LinkDiagram:
    crossings = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"X\s*\[?\s*(-?\d+)[\s,]+(-?\d+)[\s,]+(-?\d+)[\s,]+(-?\d+)\s*\]?", line)
        if not m:
            raise PDError(f"line {lineno}: expected 'X a b c d'")
        crossings.append(tuple(int(t) for t in m.groups()))
    if not crossings:
        raise PDError("no crossings")
    b = _solve_orientation(crossings)
    signs = tuple(1 if bk else -1 for bk in b)
    return _renumber(LinkDiagram(name, tuple(crossings), signs))


def _follow(link: LinkDiagram) -> list[list[int]]:
    """Arc labels of each component in orientation order."""
    tail, head = {}, {}
    for k, xs in enumerate(link.crossings):
        oo = link.over_out(k)
        for p, lab in enumerate(xs):
            if p == 2 or p == oo:
                tail[lab] = (k, p)
            else:
                head[lab] = (k, p)
    nxt = {}
    for lab, (k, p) in head.items():
        q = {0: 2, 1: 3, 3: 1}[p]
        nxt[lab] = link.crossings[k][q]
    comps, seen = [], set()
    for lab in sorted(nxt):
        if lab in seen:
            continue
        comp, x = [], lab
        while x not in seen:
            seen.add(x)
            comp.append(x)
            x = nxt[x]
        comps.append(comp)
    return comps


def _renumber(link: LinkDiagram) -> LinkDiagram:
    new, c = {}, 1
    for comp in _follow(link):
        for lab in comp:
            new[lab] = c
            c += 1
    xs = tuple(tuple(new[t] for t in x) for x in link.crossings)
    return LinkDiagram(link.name, xs, link.signs)


def write_pd(link: LinkDiagram) -> str:
    return "".join(f"X {a} {b} {c} {d}\n" for a, b, c, d in link.crossings)


def load_pd(path) -> LinkDiagram:
    import os

    name = os.path.splitext(os.path.basename(str(path)))[0]
    with open(path, encoding="utf-8") as fh:
        return parse_pd(fh.read(), name)


def seifert_circle_count(link: LinkDiagram) -> int:
    """Circles of the oriented smoothing, straight from the PD code."""
    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    occ: dict[int, list] = {}
    for k, xs in enumerate(link.crossings):
        for p, lab in enumerate(xs):
            occ.setdefault(lab, []).append((k, p))
        oo = link.over_out(k)
        oi = 4 - oo  # incoming over position (1 <-> 3)
        union((k, 0), (k, oo))  # incoming under turns onto outgoing over
        union((k, oi), (k, 2))
    for a, b in occ.values():
        union(a, b)
    return len({find(x) for x in parent})


# ----- flattening ----------------------------------------------------------------

OF, DOF = "of", "dof"


def flattening_state(link: LinkDiagram, choice: str | Sequence[int]) -> tuple[int, ...]:
    if isinstance(choice, str):
        s = choice.lower()
        if s == OF:
            return tuple(0 if x > 0 else 1 for x in link.signs)
        if s == DOF:
            return tuple(1 if x > 0 else 0 for x in link.signs)
        if len(s) != link.n or set(s) - {"0", "1"}:
            raise ValueError(f"flattening state must be {link.n} bits, 'of' or 'dof'")
        return tuple(int(c) for c in s)
    bits = tuple(int(x) for x in choice)
    if len(bits) != link.n:
        raise ValueError("flattening state length must equal the crossing count")
    return bits


def is_singular(link: LinkDiagram, k: int, bit: int) -> bool:
    """Whether flattening bit ``bit`` turns crossing k into two vertices (the sl3 singular web)."""
    return (bit == 0) == (link.signs[k] > 0)


@dataclass(frozen=True)
class Flattening:
    graph: MatchedGraph | None  # None when every crossing is smoothed
    free_loops: int
    bits: tuple[int, ...]

    @property
    def parts(self) -> list[MatchedGraph]:
        """Connected components; a split diagram can give a disconnected web."""
        return [] if self.graph is None else components(self.graph)


def flatten_web(link: LinkDiagram, f: str | Sequence[int]) -> Flattening:
    """Closed web of a flattening state: singular web or oriented smoothing per crossing.

    Strands between vertices become non-matching edges; components that meet
    no vertex are closed loops with no vertices and are returned as a count.
    """
    bits = flattening_state(link, f)
    tail, head = {}, {}
    for k, xs in enumerate(link.crossings):
        oo = link.over_out(k)
        for p, lab in enumerate(xs):
            (tail if p in (2, oo) else head)[lab] = (k, p)
    sing = [is_singular(link, k, bits[k]) for k in range(link.n)]
    vertex_at: dict[tuple[int, int], str] = {}
    vertices: list[str] = []
    edges: list[tuple[str, str, str]] = []
    for k in range(link.n):
        if not sing[k]:
            continue
        oo = link.over_out(k)
        pin, pout = (0, 4 - oo), (2, oo)
        for suffix, ps in (("p", pin), ("q", pout)):
            vertices.append(f"c{k + 1}{suffix}")
            for p in ps:
                vertex_at[(k, p)] = f"c{k + 1}{suffix}"
        edges.append((f"m{k + 1}", f"c{k + 1}p", f"c{k + 1}q"))
    token_at: dict[tuple[int, int], str] = {}
    visited: set[int] = set()
    for (k, p), vname in sorted(vertex_at.items()):
        if vname.endswith("p"):
            continue
        lab = link.crossings[k][p]
        eid = f"s{lab}"
        token_at[(k, p)] = f"{eid}.0"
        while True:
            visited.add(lab)
            k2, p2 = head[lab]
            if sing[k2]:
                token_at[(k2, p2)] = f"{eid}.1"
                edges.append((eid, vname, vertex_at[(k2, p2)]))
                break
            # oriented smoothing: under-in continues as over-out, over-in as under-out
            q2 = link.over_out(k2) if p2 == 0 else 2
            lab = link.crossings[k2][q2]
    loops = 0
    rest = set(tail) - visited
    while rest:
        lab = min(rest)
        loops += 1
        while lab in rest:
            rest.discard(lab)
            k2, p2 = head[lab]
            q2 = link.over_out(k2) if p2 == 0 else 2
            lab = link.crossings[k2][q2]
    if not vertices:
        return Flattening(None, loops, bits)
    rotations = {}
    for k in range(link.n):
        if not sing[k]:
            continue
        oo = link.over_out(k)
        # counterclockwise-consecutive pairs, listed after the matching half-edge
        pin = (3, 0) if oo == 1 else (0, 1)
        pout = (1, 2) if oo == 1 else (2, 3)
        rotations[f"c{k + 1}p"] = [f"m{k + 1}.0"] + [token_at[(k, p)] for p in pin]
        rotations[f"c{k + 1}q"] = [f"m{k + 1}.1"] + [token_at[(k, p)] for p in pout]
    g = make_graph(f"{link.name}-{''.join(map(str, bits))}", edges, rotations,
                   [f"m{k + 1}" for k in range(link.n) if sing[k]], vertices)
    for part in components(g):
        _check_flat(part)
    return Flattening(g, loops, bits)


def flatten_split(link: LinkDiagram, f: str | Sequence[int]) -> MatchedGraph:
    """Every crossing becomes two vertices; the bit picks which strand pairs share a vertex.

    Bit 0 groups positions {d, a} and {b, c}; bit 1 groups {a, b} and {c, d}.
    Only the oriented state coincides with :func:`flatten_web`.
    """
    bits = flattening_state(link, f)
    vertex_at: dict[tuple[int, int], str] = {}
    rotations: dict[str, list[str]] = {}
    vertices: list[str] = []
    edges: list[tuple[str, str, str]] = []
    tail, head = {}, {}
    for k, xs in enumerate(link.crossings):
        oo = link.over_out(k)
        for p, lab in enumerate(xs):
            (tail if p in (2, oo) else head)[lab] = (k, p)
    for k in range(link.n):
        pairs = ((3, 0), (1, 2)) if bits[k] == 0 else ((0, 1), (2, 3))
        names = (f"c{k + 1}p", f"c{k + 1}q")
        for vname, pr in zip(names, pairs):
            vertices.append(vname)
            for p in pr:
                vertex_at[(k, p)] = vname
        edges.append((f"m{k + 1}", names[0], names[1]))
    for lab in sorted(tail):
        u, w = vertex_at[tail[lab]], vertex_at[head[lab]]
        if u == w:
            raise GraphError(f"flattening puts both ends of arc {lab} on vertex {u} (loop)")
        edges.append((f"s{lab}", u, w))
    for k in range(link.n):
        pairs = ((3, 0), (1, 2)) if bits[k] == 0 else ((0, 1), (2, 3))
        for side, pr in enumerate(pairs):
            vname = f"c{k + 1}{'pq'[side]}"
            toks = [f"m{k + 1}.{side}"]
            for p in pr:
                lab = link.crossings[k][p]
                toks.append(f"s{lab}.{0 if tail[lab] == (k, p) else 1}")
            rotations[vname] = toks
    g = make_graph(f"{link.name}-{''.join(map(str, bits))}", edges, rotations,
                   [f"m{k + 1}" for k in range(link.n)], vertices)
    _check_flat(g)
    return g


def _check_flat(g: MatchedGraph) -> None:
    rep = validate(g)
    if not rep.ok:
        if any("genus" in v for v in rep.violations):
            raise GraphError("non-planar flattening")
        raise GraphError("; ".join(rep.violations))


def flatten(link: LinkDiagram, f: str | Sequence[int], model: str = "web") -> MatchedGraph:
    """Matched graph of a flattening state.

    ``model="web"`` (default) uses the sl3 flattenings and requires at least one
    singular crossing; free loops are dropped.  ``model="split"`` always gives
    2n vertices.
    """
    if model == "split":
        return flatten_split(link, f)
    if model != "web":
        raise ValueError(f"unknown flattening model {model!r}")
    fl = flatten_web(link, f)
    if fl.graph is None:
        raise GraphError("no matching edges: every crossing is smoothed")
    if len(fl.parts) > 1:
        raise GraphError(f"graph not connected: the web has {len(fl.parts)} components")
    return fl.graph


# ----- audits ----------------------------------------------------------------------


@dataclass
class Orientability:
    bits: tuple[int, ...] | None
    witness: str = ""

    @property
    def exists(self) -> bool:
        return self.bits is not None


def orientability_certificate(g: MatchedGraph, v: tuple[int, ...] | None = None) -> Orientability:
    """Orient circles so both strands at every arc cross the site the same way.

    Bit 1 means the circle is reversed relative to its traced direction.
    """
    v = v or (0,) * g.n
    D = resolve(g, v)
    constraints = []
    for arc in D.arcs:
        (c0, p0), (c1, p1) = arc.ends
        d0 = D.circles[c0].tokens[p0][3]
        d1 = D.circles[c1].tokens[p1][3]
        constraints.append((arc.site, c0, c1, int(d0 != d1)))
    bits: list[int | None] = [None] * len(D.circles)
    adj: dict[int, list[tuple[int, int, int]]] = {}
    for site, a, b, rel in constraints:
        adj.setdefault(a, []).append((b, rel, site))
        adj.setdefault(b, []).append((a, rel, site))
    for start in range(len(bits)):
        if bits[start] is not None:
            continue
        bits[start] = 0
        stack = [start]
        while stack:
            a = stack.pop()
            for b, rel, site in adj.get(a, []):
                want = bits[a] ^ rel
                if bits[b] is None:
                    bits[b] = want
                    stack.append(b)
                elif bits[b] != want:
                    return Orientability(None, f"odd constraint cycle through site {site}")
    return Orientability(tuple(bits))


@dataclass
class AuditReport:
    all_m: bool
    orientable: bool
    circles: int
    seifert: int | None
    witness: str = ""
    free_loops: int = 0

    @property
    def ok(self) -> bool:
        return (self.all_m and self.orientable
                and (self.seifert is None or self.circles + self.free_loops == self.seifert))

    def line(self) -> str:
        s = "-" if self.seifert is None else str(self.seifert)
        loops = f" loops={self.free_loops}" if self.free_loops else ""
        return (f"all_m={int(self.all_m)} orientable={int(self.orientable)} "
                f"circles={self.circles}{loops} seifert={s} pass={int(self.ok)}")


def zero_state_audit(g: MatchedGraph, link: LinkDiagram | None = None, free_loops: int = 0) -> AuditReport:
    """All-zero state: every arc merges, circles orient coherently, circles match Seifert circles.

    ``free_loops`` counts closed strands of the web that carry no vertex; they
    are Seifert circles that the matched graph does not see.
    """
    zero = (0,) * g.n
    kinds = [arc_kind(g, zero, i) for i in range(g.n)]
    bad = [i for i, k in enumerate(kinds) if k is not ArcKind.M]
    cert = orientability_certificate(g, zero)
    return AuditReport(
        all_m=not bad,
        orientable=cert.exists,
        circles=len(resolve(g, zero).circles),
        seifert=seifert_circle_count(link) if link is not None else None,
        witness=(f"non-m arc at site {bad[0]}" if bad else "") or cert.witness,
        free_loops=free_loops,
    )


@dataclass
class WebFamilyReport:
    link: str
    checked: list[tuple[int, ...]] = field(default_factory=list)
    members: int = 0
    counterexamples: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    audits: dict[str, AuditReport] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def lines(self) -> list[str]:
        out = [f"link={self.link} flattenings={len(self.checked)} members={self.members} "
               f"skipped={len(self.skipped)} pass={int(self.ok)}"]
        out += [f"counterexample state={s}" for s in self.counterexamples]
        out += [f"skipped state={s}" for s in self.skipped]
        out += [f"audit state={s} {a.line()}" for s, a in sorted(self.audits.items())]
        return out


def web_family_check(link: LinkDiagram, cap: int = 12, samples: int = 256, seed: int = 0,
                     model: str = "web") -> WebFamilyReport:
    """Membership in 𝒢 of every flattening (sampled when n exceeds ``cap``)."""
    if link.n <= cap:
        states = list(all_states(link.n))
    else:
        rng = random.Random(seed)
        states = sorted({tuple(rng.randint(0, 1) for _ in range(link.n)) for _ in range(samples)})
    rep = WebFamilyReport(link.name)
    for f in states:
        try:
            if model == "web":
                fl = flatten_web(link, f)
                parts, loops = fl.parts, fl.free_loops
            else:
                parts, loops = [flatten_split(link, f)], 0
        except GraphError as exc:
            rep.skipped.append(f"{state_str(f)} ({exc})")
            continue
        if not parts:
            rep.skipped.append(f"{state_str(f)} (no vertices)")
            continue
        rep.checked.append(f)
        # a face with its two sites in different components is never bad
        if all(_is_member(p) for p in parts):
            rep.members += 1
        else:
            rep.counterexamples.append(state_str(f))
        audits = [zero_state_audit(p) for p in parts]
        rep.audits[state_str(f)] = AuditReport(
            all_m=all(a.all_m for a in audits),
            orientable=all(a.orientable for a in audits),
            circles=sum(a.circles for a in audits),
            seifert=seifert_circle_count(link),
            witness=next((a.witness for a in audits if a.witness), ""),
            free_loops=loops,
        )
    return rep
