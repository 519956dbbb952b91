from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from splicekit.arith import det
from splicekit.plumbing import (MorrowForm, PlumbingError, PlumbingGraph, Point, ReductionFailure,
                                ReductionTrace, Role, Vertex, arrow_linking_matrix, blow_down,
                                blow_up, can_blow_down, chain_graph, det_minus,
                                fiber_multiplicities, intersection_matrix, is_morrow,
                                plumbing_to_dot, reduce_to_morrow, tree_det)
from splicekit.splice import SimpleTypeParams, build_plumbing


def weights(g):
    return [g.weight(v) for v in g.chain_order()]


@pytest.fixture
def worked():
    return build_plumbing(SimpleTypeParams("F1", 1, 1, 1, 2, (2,)))


# -- construction and validation ---------------------------------------------

def test_graph_rejects_cycles_and_bad_vertices():
    with pytest.raises(PlumbingError):
        PlumbingGraph([Vertex(0, -1), Vertex(1, -1), Vertex(2, -1)], [(0, 1), (1, 2), (2, 0)])
    with pytest.raises(PlumbingError):
        PlumbingGraph([Vertex(0, -1), Vertex(1, -1), Vertex(2, -1)], [(0, 1)])
    with pytest.raises(PlumbingError):
        PlumbingGraph([Vertex(0, -1, arrows=-1)], [])
    with pytest.raises(PlumbingError):
        PlumbingGraph([], [])
    with pytest.raises(PlumbingError):
        Role("Bogus")


def test_dict_round_trip(worked):
    assert PlumbingGraph.from_dict(worked.to_dict()) == worked


# -- blow-ups and blow-downs -------------------------------------------------

def test_first_blow_up_of_a_zero_curve():
    g = blow_up(chain_graph([0]), 0)
    assert weights(g) == [-1, -1]


def test_blow_up_on_an_edge():
    g = blow_up(chain_graph([-3, -4]), (0, 1))
    assert weights(g) == [-4, -1, -5]


def test_triple_point_blow_up():
    g = PlumbingGraph([Vertex(0, 0, role=Role("LInfty")), Vertex(1, -1, 1, Role("OneOne")),
                       Vertex(2, -1, 1, Role("OneZero", 0))], [(0, 1), (0, 2)])
    h = blow_up(g, Point(0, (1, 2)))
    e = len(g)
    assert h.weight(e) == -1
    assert sorted(h.neighbors(e)) == [0, 1, 2]
    assert [h.weight(v) for v in (0, 1, 2)] == [-1, -2, -2]
    assert h.valency(0) == 1


@pytest.mark.parametrize("chain, v, expected", [
    ([-3, -1, -5], 1, [-2, -4]),
    ([0, -1], 1, [1]),
    ([-2, -1, -2], 1, [-1, -1]),
])
def test_blow_down_examples(chain, v, expected):
    assert weights(blow_down(chain_graph(chain), v)) == expected


def test_double_blow_down_reaches_zero():
    g = blow_down(chain_graph([-2, -1, -2]), 1)
    assert weights(blow_down(g, g.ids[0])) == [0]


def test_blow_down_preconditions():
    with pytest.raises(PlumbingError):
        blow_down(chain_graph([-2, -2]), 0)
    with pytest.raises(PlumbingError):
        blow_down(chain_graph([-1, -2], [1, 0]), 0)
    star = PlumbingGraph([Vertex(0, -1)] + [Vertex(i, -2) for i in (1, 2, 3)],
                         [(0, 1), (0, 2), (0, 3)])
    assert not can_blow_down(star, 0)
    with pytest.raises(PlumbingError):
        blow_down(star, 0)


@st.composite
def trees(draw, max_size=7):
    n = draw(st.integers(1, max_size))
    vs = [Vertex(i, draw(st.integers(-4, 2)), draw(st.integers(0, 1))) for i in range(n)]
    es = [(draw(st.integers(0, i - 1)), i) for i in range(1, n)]
    return PlumbingGraph(vs, es)


@settings(max_examples=200, deadline=None)
@given(trees(), st.data())
def test_blow_up_then_down_is_identity(g, data):
    v = data.draw(st.sampled_from(g.ids))
    h = blow_up(g, v)
    assert blow_down(h, g.next_id()) == g
    if g.edges():
        e = data.draw(st.sampled_from(g.edges()))
        h = blow_up(g, e)
        assert blow_down(h, g.next_id()) == g


@settings(max_examples=200, deadline=None)
@given(trees(), st.data())
def test_abs_det_invariant_under_blow_up(g, data):
    d = abs(det(intersection_matrix(g)))
    v = data.draw(st.sampled_from(g.ids))
    assert abs(det(intersection_matrix(blow_up(g, v)))) == d
    if g.edges():
        e = data.draw(st.sampled_from(g.edges()))
        assert abs(det(intersection_matrix(blow_up(g, e)))) == d


@settings(max_examples=200, deadline=None)
@given(trees())
def test_tree_recursion_matches_elimination(g):
    assert tree_det(g) == det_minus(g) == det([[-x for x in row] for row in intersection_matrix(g)])


# -- Morrow configurations ---------------------------------------------------

def test_is_morrow_examples():
    assert is_morrow(chain_graph([1])) == MorrowForm("SinglePlusOne")
    assert is_morrow(chain_graph([0, 3])) == MorrowForm("ZeroL", l=3)
    # (L, n, 0, -n-1, T) is accepted when (L, -1, T) contracts to (-1)
    assert is_morrow(chain_graph([-2, 1, 0, -2])) == MorrowForm("Balanced", ls=(-2,), n=1)
    # here (0, -1) contracts to (+1), so the chain is rejected
    assert is_morrow(chain_graph([0, 5, 0, -6])) is None
    assert is_morrow(chain_graph([0])) is None
    assert is_morrow(chain_graph([-2, -2])) is None


def test_balanced_chain_shape():
    m = MorrowForm("Balanced", ls=(-2, -3), n=4, ts=(-5,))
    assert m.chain() == [-3, -2, 4, 0, -5, -5]


def test_reduce_simple_chain():
    res = reduce_to_morrow(chain_graph([0, -1]))
    assert isinstance(res, ReductionTrace)
    assert res.steps == ((1, 1),)
    assert res.final == MorrowForm("SinglePlusOne")


def test_reduce_negative_control():
    g = chain_graph([-2, -1, -2])
    assert det(intersection_matrix(g)) == 0
    res = reduce_to_morrow(g)
    assert isinstance(res, ReductionFailure)
    assert not res.ok


def test_reduce_worked_graph(worked):
    res = reduce_to_morrow(worked)
    assert isinstance(res, ReductionTrace)
    assert res.replay(worked).key() == res.graph.key()
    assert is_morrow(res.graph) == res.final


# -- the worked 7-vertex graph -------------------------------------------------

def test_worked_graph_shape(worked):
    desc = {str(worked.role(v)): (worked.weight(v), worked.arrows(v)) for v in worked.ids}
    assert desc == {
        "LInfty": (-1, 0), "E": (-1, 0), "OneOne": (-2, 1), "OneZero(0)": (-1, 1),
        "OneZero(1)": (-1, 1), "OneZero(2)": (-2, 1), "Tail": (-2, 0),
    }
    nb = lambda role: sorted(str(worked.role(w)) for w in worked.neighbors(worked.find(role)))
    assert nb("LInfty") == ["E", "OneZero(1)", "OneZero(2)"]
    assert nb("E") == ["LInfty", "OneOne", "OneZero(0)"]
    assert nb("OneZero(1)") == ["LInfty", "Tail"]


def test_worked_graph_det(worked):
    assert abs(det(intersection_matrix(worked))) == 1


def test_intersection_matrix_examples():
    assert intersection_matrix(chain_graph([-1])) == [[-1]]
    assert intersection_matrix(chain_graph([-2, -2])) == [[-2, 1], [1, -2]]


# -- multiplicities and linking ----------------------------------------------

def test_multiplicity_examples(worked):
    assert fiber_multiplicities(chain_graph([-1], [1])) == {0: 1}
    assert fiber_multiplicities(chain_graph([-1], [2])) == {0: 2}
    m = fiber_multiplicities(worked)
    for v in worked.ids:
        kind = worked.role(v).kind
        assert m[v] == (-1 if kind in ("LInfty", "E") else 0)


def test_multiplicities_need_unimodular_graph():
    with pytest.raises(Exception):
        fiber_multiplicities(chain_graph([-2, -1, -2], [1, 0, 0]))


def test_hopf_linking():
    labels, L = arrow_linking_matrix(chain_graph([-1], [2]))
    assert len(labels) == 2
    assert L[0][1] == L[1][0] == 1


def test_chain_end_linking():
    _, L = arrow_linking_matrix(chain_graph([-1, -2], [1, 1]))
    assert L[0][1] == 1


def test_worked_linking_row_sums_vanish(worked):
    labels, L = arrow_linking_matrix(worked)
    assert len(labels) == 4
    for i, row in enumerate(L):
        assert sum(row) == 0
        assert all(L[i][j] == L[j][i] for j in range(len(L)))


# -- DOT -----------------------------------------------------------------------

def test_dot_counts_and_determinism(worked):
    text = plumbing_to_dot(worked)
    assert text == plumbing_to_dot(PlumbingGraph.from_dict(worked.to_dict()))
    lines = text.splitlines()
    assert sum(1 for l in lines if "label=\"" in l and ":" in l and "shape=point" not in l) == 7
    assert sum(1 for l in lines if " -- " in l and "arrowhead" not in l) == 6
    assert sum(1 for l in lines if "arrowhead" in l) == 4


def test_dot_f3():
    g = build_plumbing(SimpleTypeParams("F3", a=(2,)))
    text = plumbing_to_dot(g)
    assert sum(1 for l in text.splitlines() if "shape=point" not in l and ":" in l
               and "label" in l) == 4
