import random

from hypothesis import given
from hypothesis import strategies as st
import pytest

from conftest import graph_file, matched_graphs
from twofactor.census import (
    CensusConfig,
    CensusError,
    cubic_multigraphs,
    exhaustive_census,
    map_form,
    run_census,
    sample_census,
)
from twofactor.plane_graph import make_graph, mirror, normalize


def test_small_exhaustive_counts():
    one = exhaustive_census(1)
    assert (one.embeddings, one.embedding_members, one.abstract) == (1, 1, 1)
    two = exhaustive_census(2)
    assert (two.embeddings, two.embedding_members) == (4, 4)
    assert (two.abstract, two.abstract_members) == (3, 3)


def test_three_pair_census():
    rep = exhaustive_census(3)
    assert (rep.embeddings, rep.embedding_members) == (15, 13)
    assert (rep.abstract, rep.abstract_members, rep.inconsistent) == (9, 7, 0)
    assert 0.70 <= rep.abstract_fraction <= 0.84
    assert len(rep.witnesses) == 2


def test_exhaustive_limit():
    with pytest.raises(CensusError, match="m <= 3"):
        run_census(CensusConfig(m=4))
    with pytest.raises(CensusError):
        run_census(CensusConfig(m=2, mode="nope"))


def test_sample_is_deterministic():
    a = sample_census(2, 30, seed=5)
    b = sample_census(2, 30, seed=5)
    assert a.lines() == b.lines()
    assert a.sample_fraction == 1.0  # every m=2 graph is a member


def test_cubic_multigraph_enumeration():
    assert cubic_multigraphs(2) == [((0, 1), (0, 1), (0, 1))]
    assert all(len(edges) == 6 for edges in cubic_multigraphs(4))


def test_bad_face_graph_is_a_census_witness():
    forms = {map_form(g) for g in exhaustive_census(3).witnesses}
    assert map_form(graph_file("badface")) in forms


def relabel(g, rng):
    vs = list(g.vertices)
    names = {v: f"x{k}" for k, v in enumerate(rng.sample(vs, len(vs)))}
    es = {e: f"f{k}" for k, (e, _, _) in enumerate(rng.sample(list(g.edges), len(g.edges)))}
    rot = {}
    for v, r in zip(g.vertices, g.rotations):
        k = rng.randrange(3)
        r = r[k:] + r[:k]
        rot[names[v]] = [f"{es[e]}.{end}" for e, end in r]
    edges = [(es[e], names[u], names[w]) for e, u, w in g.edges]
    return make_graph("relabeled", edges, rot, [es[e] for e in g.matching])


@given(matched_graphs(), st.integers(0, 1000))
def test_map_form_ignores_labels_and_mirroring(g, seed):
    key = map_form(g)
    assert map_form(relabel(g, random.Random(seed))) == key
    assert map_form(mirror(g)) == key
    assert map_form(normalize(g)) == key
