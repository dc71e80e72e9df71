from hypothesis import given
from hypothesis import strategies as st
import pytest

from conftest import link
from twofactor.plane_graph import GraphError, validate
from twofactor.resolution import all_states, in_family_G, state_str
from twofactor.webs import (
    PDError,
    flatten,
    flatten_split,
    flatten_web,
    flattening_state,
    is_singular,
    orientability_certificate,
    parse_pd,
    seifert_circle_count,
    web_family_check,
    write_pd,
    zero_state_audit,
)

LINKS = ["trefoil", "hopf", "fig8", "kink", "5_1", "5_2"]


def test_parse_trefoil_signs():
    L = parse_pd("X 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3\n", "trefoil")
    assert L.n == 3 and L.signs == (-1, -1, -1)
    assert seifert_circle_count(L) == 2


def test_parse_accepts_bracketed_form_and_comments():
    L = parse_pd("# hopf\nX[1,4,2,3]\nX[3,2,4,1]\n")
    assert L.n == 2 and L.signs == (-1, -1)


def test_figure_eight_signs():
    L = link("fig8")
    assert sorted(L.signs) == [-1, -1, 1, 1]
    assert flattening_state(L, "of") == (0, 0, 1, 1)
    assert flattening_state(L, "dof") == (1, 1, 0, 0)


def test_parse_errors():
    with pytest.raises(PDError, match="no crossings"):
        parse_pd("# nothing\n")
    with pytest.raises(PDError, match="line 2"):
        parse_pd("X 1 2 2 1\nX 1 2 3\n")


@pytest.mark.parametrize("name", LINKS)
def test_write_pd_round_trip(name):
    L = link(name)
    again = parse_pd(write_pd(L), L.name)
    assert again == L


def test_flattening_state_errors():
    with pytest.raises(ValueError):
        flattening_state(link("trefoil"), "01")
    with pytest.raises(ValueError):
        flattening_state(link("trefoil"), (0, 1))


def test_kink_flattenings():
    L = link("kink")
    (g,) = flatten_web(L, "1").parts
    assert (len(g.vertices), len(g.edges), g.n) == (2, 3, 1)  # a theta
    none = flatten_web(L, "0")
    assert none.graph is None and none.free_loops == 2


def test_all_smoothed_state_has_no_graph():
    with pytest.raises(GraphError, match="every crossing is smoothed"):
        flatten(link("trefoil"), "dof")
    assert flatten_split(link("trefoil"), "000").n == 3


@pytest.mark.parametrize("name", LINKS)
def test_singular_crossings_become_matching_edges(name):
    L = link(name)
    for f in all_states(L.n):
        fl = flatten_web(L, f)
        singular = sum(is_singular(L, k, b) for k, b in enumerate(f))
        assert sum(p.n for p in fl.parts) == singular
        for p in fl.parts:
            assert validate(p).ok


@pytest.mark.parametrize("name", LINKS)
def test_oriented_flattening_audit(name):
    L = link(name)
    fl = flatten_web(L, "of")
    (g,) = fl.parts
    audit = zero_state_audit(g, L, fl.free_loops)
    assert audit.all_m and audit.orientable
    assert audit.circles + audit.free_loops == seifert_circle_count(L)
    assert audit.ok


@pytest.mark.parametrize("name,count", [("trefoil", 7), ("hopf", 3), ("fig8", 15)])
def test_web_family(name, count):
    rep = web_family_check(link(name))
    assert rep.ok and rep.members == count == len(rep.checked)
    assert len(rep.skipped) == 1  # the all-smoothed state


@given(st.sampled_from(["trefoil", "fig8", "5_2"]), st.data())
def test_every_web_part_is_orientable_in_its_zero_state(name, data):
    L = link(name)
    f = data.draw(st.tuples(*[st.integers(0, 1)] * L.n))
    for p in flatten_web(L, f).parts:
        assert orientability_certificate(p).exists
        assert in_family_G(p).member, state_str(f)
