from hypothesis import assume, given
from hypothesis import strategies as st
import pytest

from conftest import graph_file, link, matched_graphs
from twofactor.moduli import (
    DecoratedFace,
    FaceError,
    Index2Class,
    analyze_flips,
    butterfly_match,
    butterfly_segments,
    chain_order,
    classify_all_index2,
    classify_index2,
    cover_check,
    decorated_faces,
    dual_poset_check,
    face_of,
    face_poset,
    is_butterfly,
    realization_report,
    verify_six_cycles,
)
from twofactor.resolution import in_family_G
from twofactor.webs import flatten_web


def web(lk, bits):
    (g,) = flatten_web(link(lk), bits).parts
    return g


def butterflies(g):
    out = []
    for cube, P in decorated_faces(g, 2):
        f = face_of(cube, P)
        if is_butterfly(g, f.v, *f.sites):
            out.append(f)
    return out


def test_theta_index_one_faces_are_single_chains():
    faces = [(face_of(c, P), P) for c, P in decorated_faces(graph_file("theta"), 1)]
    assert sorted(f.describe() for f, _ in faces) == [
        "v=0 S=0 x=+ y=++", "v=0 S=0 x=- y=+-", "v=0 S=0 x=- y=-+"]
    assert all(len(P.maximal_chains) == 1 for _, P in faces)


def test_not_a_face_is_rejected():
    g = graph_file("theta")
    with pytest.raises(FaceError):
        face_poset(g, DecoratedFace((0,), (0,), (1, 1), (0,)))
    with pytest.raises(FaceError):
        face_poset(g, DecoratedFace((0,), (0,), (0,), (0,)))


def test_ladder_index_two_faces_are_two_circle_parallel():
    g = graph_file("L2")
    faces = [face_of(c, P) for c, P in decorated_faces(g, 2)]
    assert len(faces) == 4
    assert {classify_index2(g, f) for f in faces} == {Index2Class.TWO_CIRCLE_PARALLEL}


def test_trefoil_butterflies():
    g = web("trefoil", "111")
    bfs = butterflies(g)
    assert len(bfs) == 3
    for f in bfs:
        assert classify_index2(g, f) is Index2Class.BUTTERFLY
        assert len(face_poset(g, f).middle) == 4
        assert (f.y, f.x) == ((0,), (1,))


@pytest.mark.parametrize("lk,bits", [("trefoil", "111"), ("fig8", "0011"), ("5_2", "11111")])
def test_butterfly_pairing_is_a_perfect_matching_of_orders(lk, bits):
    g = web(lk, bits)
    for f in butterflies(g):
        P = face_poset(g, f)
        m = butterfly_match(g, f)
        used = [c for pair in m.pairs for c in pair]
        assert sorted(used) == sorted(P.maximal_chains)
        for c1, c2 in m.pairs:
            assert {chain_order(c1), chain_order(c2)} == {f.sites, f.sites[::-1]}
        flipped = butterfly_match(g, f, flip=True)
        assert set(map(frozenset, flipped.pairs)).isdisjoint(set(map(frozenset, m.pairs)))


@given(st.sampled_from([("trefoil", "111"), ("fig8", "0011"), ("5_2", "11111")]), st.integers(0, 200), st.data())
def test_run_choice_is_independent_of_the_root(case, shift, data):
    g = web(*case)
    f = data.draw(st.sampled_from(butterflies(g)))
    base = butterfly_segments(g, f.v, *f.sites)
    moved = butterfly_segments(g, f.v, *f.sites, shift=shift)
    assert (moved.p_edge, moved.q_edge) == (base.p_edge, base.q_edge)
    assert sorted(moved.crossings) == sorted(base.crossings)


def test_trefoil_six_cycles_and_negative_control():
    g = web("trefoil", "111")
    assert verify_six_cycles(g).ok
    wrong = verify_six_cycles(g, wrong=True)
    assert not wrong.ok and len(wrong.failures) == 1


def test_figure_eight_butterfly_obstruction():
    """No matching invariant under all web symmetries closes up; a chiral one does."""
    g = web("fig8", "0011")
    lit = verify_six_cycles(g)
    assert len(lit.failures) == 4
    a = analyze_flips(g)
    assert (len(a.butterflies), len(a.constraints), a.rank) == (4, 4, 3)
    assert not a.literal_ok and not a.symmetric_ok and a.chiral_ok
    assert a.solution is not None
    assert verify_six_cycles(g, flips=a.solution).ok
    assert a.lines()[-1] == ("flips butterflies=4 constraints=4 rank=3 literal=0 solvable=1 "
                             "symmetric=0 chiral=1")


def test_trefoil_flip_analysis_is_trivial():
    a = analyze_flips(web("trefoil", "111"))
    assert a.literal_ok and a.symmetric_ok and a.solution == frozenset()


@pytest.mark.parametrize("name", ["theta", "L2", "K4-af", "prism"])
def test_cover_check_on_hand_graphs(name):
    rep = cover_check(graph_file(name))
    assert rep.ok and rep.faces > 0


def test_dual_posets_on_trefoil():
    g = web("trefoil", "111")
    for index in (1, 2, 3):
        for cube, P in decorated_faces(g, index):
            assert dual_poset_check(g, face_of(cube, P))


@pytest.mark.parametrize("ring", ["Z2", "Z"])
def test_realization(ring):
    rep = realization_report(graph_file("theta"), ring)
    assert rep.ok
    lines = rep.lines()
    assert "cell gen=1/- dim=2 attach=0/+-:1,0/-+:1" in lines or ring == "Z"
    assert realization_report(web("trefoil", "111"), ring, d0=3).ok


@given(matched_graphs())
def test_index_two_classification_on_members(g):
    assume(in_family_G(g).member)
    rep = classify_all_index2(g)
    assert rep.ok, rep.failures
    for cube, P in decorated_faces(g, 2):
        assert len(P.middle) in (2, 4)


@given(matched_graphs())
def test_dual_poset_on_random_members(g):
    assume(in_family_G(g).member)
    for index in (1, 2):
        for cube, P in decorated_faces(g, index):
            assert dual_poset_check(g, face_of(cube, P))


@given(matched_graphs())
def test_solved_flips_close_every_face(g):
    assume(in_family_G(g).member)
    a = analyze_flips(g)
    if a.solution is not None:
        assert verify_six_cycles(g, flips=a.solution).ok
