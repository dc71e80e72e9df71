from hypothesis import given
from hypothesis import strategies as st
import pytest

from conftest import graph_file, link, matched_graphs
from oracles import homology_oracle, polynomial_sympy, rank_gf2, smith_invariants
from twofactor.invariants import (
    ZLiftError,
    build_complex,
    check_differential,
    euler_check,
    homology,
    normalize_ring,
    two_factor_polynomial,
)
from twofactor.linalg import gf2_rank, gf2_solve, int_rank, smith_diagonal
from twofactor.plane_graph import two_factor_count
from twofactor.resolution import circle_count
from twofactor.webs import flatten_web

# Expected values computed with the sympy oracles in tests/oracles.py.
POLY = {
    "theta": "1 + q^-2",
    "L2": "q^4 + q^2 + 1 + q^-2",
    "K4-af": "q^4 + q - 1 + q^-1",
    "K4-bd": "q^4 + q - 1 + q^-1",
    "K4-ce": "q^4 + q - 1 + q^-1",
    "prism": "-q^4 + q^3 - q^2 + q^-3",
}

K4_H = {(2, 4): (1, ()), (1, 2): (1, ()), (2, 2): (1, ()), (0, 1): (1, ()), (1, 0): (1, ()), (0, -1): (1, ())}
L2_H = {(2, 4): (1, ()), (2, 2): (1, ()), (0, 0): (1, ()), (0, -2): (1, ())}
HOM = {
    ("theta", "Z2"): {(0, 0): (1, ()), (0, -2): (1, ())},
    ("theta", "Z"): {(0, 0): (1, ()), (0, -2): (1, ())},
    ("L2", "Z2"): L2_H,
    ("L2", "Z"): L2_H,
    ("K4-af", "Z"): K4_H,
    ("K4-bd", "Z2"): K4_H,
    ("K4-ce", "Z"): K4_H,
    ("prism", "Z2"): {(3, 4): (1, ()), (2, 3): (1, ()), (3, 2): (1, ()), (1, 1): (1, ()), (2, 1): (1, ()),
                      (0, -1): (1, ()), (1, -1): (1, ()), (0, -3): (1, ())},
    ("prism", "Z"): {(3, 4): (1, ()), (2, 3): (1, ()), (3, 2): (1, ()), (1, 1): (1, ()), (2, 1): (1, ()),
                     (1, -1): (0, (2,)), (0, -3): (1, ())},
}

WEB_HOM = {
    ("trefoil", "111", "Z2"): {(2, 4): (2, ()), (2, 2): (3, ()), (0, 0): (1, ()), (2, 0): (1, ()), (0, -2): (1, ())},
    ("fig8", "0011", "Z2"): {(3, 5): (1, ()), (2, 3): (1, ()), (3, 3): (1, ()), (2, 1): (1, ()),
                             (0, -1): (1, ()), (0, -3): (1, ())},
    ("fig8", "0011", "Z"): {(3, 5): (1, ()), (3, 3): (0, (2,)), (2, 1): (1, ()), (0, -1): (1, ()), (0, -3): (1, ())},
}


def test_theta_complex_table():
    C = build_complex(graph_file("theta"))
    gens = {x.name: (x.gr_h, x.gr_q) for x in C.generators}
    assert gens == {"0/++": (0, 2), "0/+-": (0, 0), "0/-+": (0, 0), "0/--": (0, -2),
                    "1/+": (1, 2), "1/-": (1, 0)}
    d = {C.generators[s].name: sorted(C.generators[t].name for t in row) for s, row in C.d.items()}
    assert d == {"0/++": ["1/+"], "0/+-": ["1/-"], "0/-+": ["1/-"]}


@pytest.mark.parametrize("name", sorted(POLY))
def test_polynomial_goldens(name):
    g = graph_file(name)
    assert str(two_factor_polynomial(g)) == POLY[name]


@pytest.mark.parametrize("name,ring", sorted(HOM))
def test_homology_goldens(name, ring):
    H = homology(build_complex(graph_file(name), ring))
    assert H.as_dict() == HOM[(name, ring)]


@pytest.mark.parametrize("lk,bits,ring", sorted(WEB_HOM))
def test_web_homology_goldens(lk, bits, ring):
    (g,) = flatten_web(link(lk), bits).parts
    assert homology(build_complex(g, ring)).as_dict() == WEB_HOM[(lk, bits, ring)]


def test_trefoil_and_fig8_polynomials():
    (t,) = flatten_web(link("trefoil"), "111").parts
    (f,) = flatten_web(link("fig8"), "0011").parts
    assert str(two_factor_polynomial(t)) == "2q^4 + 3q^2 + 2 + q^-2"
    assert two_factor_polynomial(f).as_dict() == {5: -1, 1: 1, -1: 1, -3: 1}


def test_z_lift_refused_outside_family():
    with pytest.raises(ZLiftError):
        build_complex(graph_file("badface"), "Z")
    C = build_complex(graph_file("badface"), "Z2")
    assert check_differential(C) == []


def test_ring_names():
    assert normalize_ring("z2") == "Z2" and normalize_ring("Z") == "Z"
    with pytest.raises(ValueError):
        normalize_ring("Q")


@given(matched_graphs())
def test_polynomial_matches_sympy_state_sum(g):
    want = polynomial_sympy(g, lambda v: circle_count(g, v))
    assert two_factor_polynomial(g).as_dict() == want


@given(matched_graphs())
def test_value_at_one_is_two_factor_count(g):
    assert two_factor_polynomial(g).at_one() == two_factor_count(g)


@given(matched_graphs(), st.sampled_from(["Z2", "Z"]))
def test_homology_matches_sympy_oracle(g, ring):
    try:
        C = build_complex(g, ring)
    except ZLiftError:
        return
    assert check_differential(C) == []
    assert homology(C).as_dict() == homology_oracle(C)
    assert euler_check(g, ring).ok


small_matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


@given(small_matrices)
def test_smith_diagonal_matches_sympy(M):
    assert sorted(abs(x) for x in smith_diagonal(M)) == smith_invariants(M)
    assert int_rank(M) == len(smith_invariants(M))


@given(small_matrices)
def test_gf2_rank_matches_domain_matrix(M):
    bits = [[x % 2 for x in row] for row in M]
    cols = [sum(bits[r][c] << r for r in range(len(bits))) for c in range(len(bits[0]))]
    assert gf2_rank(cols) == rank_gf2(bits)


@given(st.lists(st.tuples(st.integers(0, 63), st.integers(0, 1)), max_size=8))
def test_gf2_solve_solutions_satisfy_rows(rows):
    sol = gf2_solve(rows, 6)
    if sol is None:
        # inconsistent: rhs vector outside the row space
        ranks = gf2_rank(m for m, _ in rows), gf2_rank((m << 1) | r for m, r in rows)
        assert ranks[0] < ranks[1]
        return
    for mask, rhs in rows:
        assert sum(sol[k] for k in range(6) if mask >> k & 1) % 2 == rhs
