from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from splicekit.plumbing import PlumbingGraph, Vertex, branch_det, chain_graph
from splicekit.splice import (SimpleTypeParams, SpliceDiagram, SpliceError, ValidationError,
                              build_plumbing, build_splice, canonical_edges, construction_record,
                              derive_invariants, edge_determinant, invariants_from_plumbing,
                              normal_form, plumbing_link_at_infinity, require_valid,
                              splice_from_plumbing, splice_linking, splice_linking_matrix,
                              splice_to_dot, total_linking, validate)
from splicekit.verify import pq_quadruples

WORKED = SimpleTypeParams("F1", 1, 1, 1, 2, (2,))


# -- validation ---------------------------------------------------------------

def test_validate_examples():
    assert validate(WORKED) == []
    assert validate(SimpleTypeParams("F1", 1, 1, 2, 1, (2,))) == ["Pq-pQ = -1 != 1"]
    assert any("r >= 2" in e for e in validate(SimpleTypeParams("F1", 1, 1, 1, 2, ())))
    assert validate(SimpleTypeParams("F2", 1, 1, 1, 2, ())) == []
    assert validate(SimpleTypeParams("F3", a=())) == []
    assert validate(SimpleTypeParams("F1", 2, 1, 3, 2, (0,)))
    with pytest.raises(ValidationError):
        require_valid(SimpleTypeParams("F1", 1, 1, 2, 1, (2,)))


# -- derived invariants ---------------------------------------------------------

def test_derive_invariants_worked():
    inv = derive_invariants(WORKED)
    assert (inv.A, inv.B, inv.C, inv.b, inv.k, inv.degree) == (2, 2, 3, (5,), 1, 8)
    assert inv.delta == 4
    assert inv.moduli_dimension == 1


def test_derive_invariants_second_instance():
    # B = AQ + P - Q = 1 + 2 - 1 = 2
    inv = derive_invariants(SimpleTypeParams("F1", 2, 1, 3, 2, (1,)))
    assert (inv.A, inv.B, inv.C, inv.b, inv.k, inv.degree) == (1, 2, 3, (3,), 1, 8)


@pytest.mark.parametrize("r", [2, 3, 6])
def test_all_ones_gives_A_equal_r_minus_1(r):
    assert derive_invariants(SimpleTypeParams("F1", 1, 1, 1, 2, (1,) * (r - 1))).A == r - 1


def test_exactly_one_case_on_all_quadruples():
    for P, Q, p, q in pq_quadruples(30):
        k = max(Q // q, p // P)
        case1 = k <= Fraction(p, P) < k + 1
        case2 = k <= Fraction(Q, q) < k + 1
        assert case1 != case2


# -- plumbing graphs ------------------------------------------------------------

def test_f3_plumbing():
    g = build_plumbing(SimpleTypeParams("F3", a=(2,)))
    assert [(str(g.role(v)), g.weight(v), g.arrows(v)) for v in g.ids] == [
        ("LInfty", 0, 0), ("OneZero(0)", 0, 1), ("OneZero(1)", -1, 1), ("Tail", -2, 0)]


@pytest.mark.parametrize("params", [
    WORKED,
    SimpleTypeParams("F1", 2, 1, 3, 2, (1,)),
    SimpleTypeParams("F1", 3, 2, 4, 3, (2, 2)),
    SimpleTypeParams("F1", 5, 2, 2, 1, (3, 1, 4)),
])
def test_f1_vertex_count_formula(params):
    rec = construction_record(params)
    n = (5 + (len(rec.left) - 1) + (len(rec.right) - 1)
         + sum(ai - 1 for ai in params.a) + (params.r - 1))
    assert len(build_plumbing(params)) == n == rec.blowups + 2


def test_invariants_read_off_the_graph():
    assert invariants_from_plumbing(build_plumbing(WORKED)) == {"B": 2, "C": 3, "b": (5,)}


# -- splice diagrams ------------------------------------------------------------

def _weights_at(d, node):
    return sorted(e.weight_at(node) for e in d.incident(node))


def test_f1_worked_diagram_weights():
    d = build_splice(WORKED)
    # (Q, B, C, b_1, a_1, q, P, p) = (1, 2, 3, 5, 2, 2, 1, 1)
    assert d.edge_between("LInfty", "OneZero(1)").weight_at("OneZero(1)") == -5
    assert d.edge_between("OneZero(1)", "leaf:OneZero(1)").weight_at("OneZero(1)") == 2
    assert _weights_at(d, "E") == [-3, 1, 2]
    assert _weights_at(d, "OneOne") == [-2, 1, 1]
    assert d.edge_between("LInfty", "OneZero(2)").weight_at("OneZero(2)") == -1  # -P
    assert d.edge_between("LInfty", "OneZero(2)").weight_at("LInfty") == 2      # q


def test_f2_diagram_weights():
    d = build_splice(SimpleTypeParams("F2", 2, 1, 3, 2, (1,)))
    assert d.edge_between("OneZero(0)", "leaf:OneZero(0)").weight_at("OneZero(0)") == 3
    assert d.edge_between("OneZero(0)", "bullet").weight_at("OneZero(0)") == -5
    assert d.edge_between("LInfty", "OneZero(1)").weight_at("OneZero(1)") == -3


def test_f3_diagram_weights():
    d = build_splice(SimpleTypeParams("F3", a=(2,)))
    assert _weights_at(d, "LInfty") == [0, 1]
    assert _weights_at(d, "OneZero(1)") == [-1, 1, 2]
    assert d.vertex("OneZero(0)").kind == "Marked"


def test_diagram_dict_round_trip():
    d = build_splice(WORKED)
    assert SpliceDiagram.from_dict(d.to_dict()) == d


def test_splice_from_plumbing_hopf():
    d = splice_from_plumbing(chain_graph([-1], [2]))
    assert len(d.nodes()) == 1
    assert len(d.arrows()) == 2
    assert all(e.weight_at(d.nodes()[0]) == 1 for e in d.edges())
    a, b = d.arrows()
    assert splice_linking(d, a, b) == 1


def test_branch_weight_of_a_single_leaf():
    g = PlumbingGraph([Vertex(0, -2, 1), Vertex(1, -2)], [(0, 1)])
    assert branch_det(g, 0, 1) == 2
    with pytest.raises(SpliceError):
        splice_from_plumbing(g)  # |det| = 3, not unimodular


def test_single_node_linking_is_off_path_weight():
    g = PlumbingGraph([Vertex(0, -1, 2), Vertex(1, -2)], [(0, 1)])
    d = splice_from_plumbing(g)
    a, b = d.arrows()
    assert splice_linking(d, a, b) == branch_det(g, 0, 1) == 2


def test_edge_determinants_worked():
    d = build_splice(WORKED)
    assert edge_determinant(d, "LInfty", "OneZero(2)") == 1
    assert edge_determinant(d, "LInfty", "OneZero(1)") == 1


def test_worked_linking_cross_check():
    g = build_plumbing(WORKED)
    la, La = plumbing_link_at_infinity(g)
    ls, Ls = splice_linking_matrix(build_splice(WORKED))
    assert la == ls
    for i in range(4):
        for j in range(4):
            if i != j:
                assert La[i][j] == Ls[i][j]
    # full rows of the plumbing linking matrix sum to zero
    assert all(sum(row) == 0 for row in La)


def test_total_linking_vanishes_worked():
    g = build_plumbing(WORKED)
    dg = splice_from_plumbing(g, arrow_vertices_as_nodes=True)
    assert all(total_linking(dg, a) == 0 for a in dg.arrows())
    d = build_splice(WORKED)
    for a in d.arrows():
        label = d.vertex(a).label
        if label == "arrow:OneZero(0)":
            # this arrow hangs off E, whose total linking is -m_E = 1
            assert total_linking(d, a) == 1
        else:
            assert total_linking(d, a) == 0


@pytest.mark.parametrize("params", [
    SimpleTypeParams("F1", 3, 2, 4, 3, (2, 2)),
    SimpleTypeParams("F1", 3, 4, 2, 3, (3,)),
    SimpleTypeParams("F1", 5, 2, 2, 1, (2, 3)),
    SimpleTypeParams("F2", 3, 2, 4, 3, (2,)),
    SimpleTypeParams("F3", a=(2, 3)),
])
def test_structural_isomorphism_on_curated_params(params):
    assert (canonical_edges(build_splice(params))
            == canonical_edges(splice_from_plumbing(build_plumbing(params))))


def test_splice_dot_is_deterministic():
    assert splice_to_dot(build_splice(WORKED)) == splice_to_dot(build_splice(WORKED))


# -- normal forms ----------------------------------------------------------------

def test_normal_form_examples():
    nf = normal_form(WORKED)
    assert (nf.k, nf.case, nf.q1, nf.p1, nf.q, nf.p) == (1, 1, 1, 0, 1, 1)
    assert nf.det == 1
    nf = normal_form(SimpleTypeParams("F1", 2, 1, 3, 2, (1,)))
    assert (nf.k, nf.case, nf.q1, nf.p1, nf.q, nf.p) == (1, 1, 1, 1, 1, 2)
    nf = normal_form(SimpleTypeParams("F3", a=(2, 3)))
    assert nf.form == "f3" and nf.h_degree_bound == 5


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(pq_quadruples(30)), st.lists(st.integers(1, 5), min_size=1, max_size=4))
def test_normal_form_bounds(quad, a):
    nf = normal_form(SimpleTypeParams("F1", *quad, a=tuple(a)))
    assert nf.satisfies_bounds()
    assert nf.det in (1, -1)
