import itertools

from hypothesis import given
from hypothesis import strategies as st
import pytest

from conftest import graph_file, matched_graphs
from twofactor.resolution import (
    ArcKind,
    all_states,
    arc_kind,
    circle_count,
    configuration_graph,
    face_report,
    in_family_G,
    is_member,
    local_arc_kind,
    parse_state,
    resolve,
    scan_faces,
)


def edge_names(g, key):
    return sorted(g.edges[e][0] for e in key)


def test_ladder_zero_state_circles():
    g = graph_file("L2")
    D = resolve(g, (0, 0))
    assert sorted(edge_names(g, k) for k in D.keys) == [["a", "c"], ["e", "f"]]
    assert [arc_kind(g, (0, 0), i) for i in range(2)] == [ArcKind.M, ArcKind.M]


def test_theta_circle_counts():
    g = graph_file("theta")
    assert [circle_count(g, v) for v in all_states(1)] == [2, 1]
    assert arc_kind(g, (0,), 0) is ArcKind.M


def test_parse_state():
    assert parse_state("010", 3) == (0, 1, 0)
    with pytest.raises(ValueError):
        parse_state("01", 3)
    with pytest.raises(ValueError):
        parse_state("0a1", 3)


def test_bad_face_graph_has_witness(data_dir):
    g = graph_file("badface")
    mem = in_family_G(g)
    assert not mem.member and mem.bad_faces >= 1
    assert mem.witness.line() == "v=001 face=(0,1) kinds=delta,m|eta,eta bad=1"
    assert not is_member(g)


def test_corpus_graphs_are_members(graphs):
    for name, g in graphs.items():
        assert in_family_G(g).member, name


def test_leaf_in_theta_configuration_graph():
    cg = configuration_graph(graph_file("theta"), (0,))
    assert len(cg.circles) == 2 and cg.has_leaf_or_coleaf


@given(matched_graphs())
def test_local_arc_kind_agrees_with_traversal(g):
    for v in all_states(g.n):
        for i in range(g.n):
            if v[i] == 0:
                assert local_arc_kind(g, v, i) == arc_kind(g, v, i)


@given(matched_graphs())
def test_circle_counts_change_by_one_along_edges(g):
    """A merge drops the count by one, a split raises it, an eta keeps it."""
    for v in all_states(g.n):
        for i in range(g.n):
            if v[i]:
                continue
            w = v[:i] + (1,) + v[i + 1:]
            delta = circle_count(g, w) - circle_count(g, v)
            kind = arc_kind(g, v, i)
            assert delta == {ArcKind.M: -1, ArcKind.DELTA: 1, ArcKind.ETA: 0}[kind]


@given(matched_graphs())
def test_parity_sum_rule(g):
    """Circle counts along the two routes of a face agree, so the kinds pair up."""
    for r in scan_faces(g):
        d = {ArcKind.M: -1, ArcKind.DELTA: 1, ArcKind.ETA: 0}
        k = r.kinds
        assert d[k[0]] + d[k[1]] == d[k[2]] + d[k[3]]


@given(matched_graphs())
def test_membership_scans_agree(g):
    assert in_family_G(g).member == is_member(g)
    mem = in_family_G(g)
    n_faces = sum(1 for v in all_states(g.n) for _ in itertools.combinations([k for k in range(g.n) if not v[k]], 2))
    assert mem.faces == n_faces
