"""Classification data, splice diagrams and the plumbing constructions.

The discrete data of a rational polynomial of simple type is a family tag
plus, for the two families built from four special horizontal curves,
positive integers ``P, Q, p, q`` with ``Pq - pQ = 1`` and a sequence of
positive integers ``a_1..a_{r-1}``:

``F1``
    non-isotrivial (``r >= 2``); ``r + 2`` horizontal curves.
``F2``
    isotrivial, with one vertical curve over a finite value; ``r + 1``
    horizontal curves.
``F3``
    isotrivial, no vertical curve (only ``a`` is used); ``r`` horizontal
    curves.

From these we build

* the plumbing graph of the divisor at infinity (:func:`build_plumbing`),
* the splice diagram of the link at infinity with closed-form weights
  (:func:`build_splice`),
* the splice diagram read off a plumbing graph through subgraph
  determinants (:func:`splice_from_plumbing`),

and compare them through edge determinants and linking numbers.

Splice weights are ``det(-A)`` of the branch a node sees through an edge.
With that convention the generated diagrams reproduce the signed closed
form weights (``-Q``, ``-P``, ``-C``, ``-b_i``) exactly.  Linking numbers in
the link at infinity are products of off-path weights; the plumbing side
computes the same numbers as entries of ``A^{-1}`` (the sphere at infinity
is the boundary of the neighbourhood of the divisor with its orientation
reversed, so ``A^{-1} = -(-A^{-1})``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .arith import ArithError, chain_fraction, det, hj_expand, inverse
from .plumbing import (
    PlumbingError,
    PlumbingGraph,
    Role,
    Vertex,
    branch_det,
    chain_contracts_to,
    intersection_matrix,
)

__all__ = [
    "FAMILIES",
    "SimpleTypeParams",
    "ValidationError",
    "validate",
    "require_valid",
    "DerivedInvariants",
    "derive_invariants",
    "ConstructionRecord",
    "construction_record",
    "extend_chain",
    "build_plumbing",
    "SVertex",
    "SEdge",
    "SpliceDiagram",
    "SpliceError",
    "build_splice",
    "splice_from_plumbing",
    "edge_determinant",
    "splice_linking",
    "total_linking",
    "splice_linking_matrix",
    "plumbing_link_at_infinity",
    "invariants_from_plumbing",
    "NormalFormDescriptor",
    "normal_form",
    "canonical_edges",
    "splice_to_dot",
]

FAMILIES = ("F1", "F2", "F3")


class ValidationError(ValueError):
    """Raised (with the full list of problems) for invalid parameters."""

    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class SpliceError(ValueError):
    """Raised for malformed splice diagrams or illegal queries."""


# ---------------------------------------------------------------------------
# Parameters and invariants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimpleTypeParams:
    family: str
    P: Optional[int] = None
    Q: Optional[int] = None
    p: Optional[int] = None
    q: Optional[int] = None
    a: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))

    @property
    def r(self) -> int:
        return len(self.a) + 1

    @property
    def A(self) -> int:
        return sum(self.a)

    def to_dict(self) -> dict:
        d = {"family": self.family, "a": list(self.a)}
        if self.family != "F3":
            d.update(P=self.P, Q=self.Q, p=self.p, q=self.q)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SimpleTypeParams":
        return cls(d["family"], d.get("P"), d.get("Q"), d.get("p"), d.get("q"),
                   tuple(d.get("a", ())))

    def __str__(self) -> str:
        if self.family == "F3":
            return f"F3 a={list(self.a)}"
        return f"{self.family} (P,Q,p,q)=({self.P},{self.Q},{self.p},{self.q}) a={list(self.a)}"


def validate(params: SimpleTypeParams) -> List[str]:
    """All violated constraints, one message each (empty list means valid)."""
    errs: List[str] = []
    if params.family not in FAMILIES:
        return [f"unknown family {params.family!r}"]
    for i, ai in enumerate(params.a, 1):
        if not isinstance(ai, int) or ai < 1:
            errs.append(f"a_{i} = {ai!r} must be a positive integer")
    if params.family == "F1" and params.r < 2:
        errs.append("r >= 2 required for F1 (a must be nonempty)")
    if params.family in ("F1", "F2"):
        vals = {"P": params.P, "Q": params.Q, "p": params.p, "q": params.q}
        bad = False
        for name, v in vals.items():
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                errs.append(f"{name} = {v!r} must be a positive integer")
                bad = True
        if not bad:
            d = params.P * params.q - params.p * params.Q
            if d != 1:
                errs.append(f"Pq-pQ = {d} != 1")
    return errs


def require_valid(params: SimpleTypeParams) -> None:
    errs = validate(params)
    if errs:
        raise ValidationError(errs)


@dataclass(frozen=True)
class DerivedInvariants:
    A: int
    B: Optional[int]
    C: Optional[int]
    b: Tuple[int, ...]
    k: Optional[int]
    degree: int
    delta: int
    moduli_dimension: Optional[int]
    case: Optional[int]

    def to_dict(self) -> dict:
        return {
            "A": self.A, "B": self.B, "C": self.C, "b": list(self.b), "k": self.k,
            "degree": self.degree, "delta": self.delta,
            "moduli_dimension": self.moduli_dimension, "case": self.case,
        }


def _k_and_case(P: int, Q: int, p: int, q: int) -> Tuple[int, int]:
    """``k = max(Q//q, p//P)`` and the polynomial case (1: p//P == k, 2: Q//q == k)."""
    k1, k2 = Q // q, p // P
    k = max(k1, k2)
    in1 = k2 == k
    in2 = k1 == k
    if in1 == in2:
        raise ArithError(f"case selection is ambiguous for {(P, Q, p, q)}")
    return k, (1 if in1 else 2)


def derive_invariants(params: SimpleTypeParams) -> DerivedInvariants:
    """Closed-form invariants (``A, B, C, b_i, k``, degree, ...)."""
    require_valid(params)
    A, r = params.A, params.r
    if params.family == "F3":
        return DerivedInvariants(A, None, None, (), None, A + 1, r, None, None)
    P, Q, p, q = params.P, params.Q, params.p, params.q
    k, case = _k_and_case(P, Q, p, q)
    B = A * Q + P - Q
    C = A * q + p - q
    b = tuple(q * Q * ai + 1 for ai in params.a)
    degree = A * (Q + q) + P + p
    if params.family == "F1":
        return DerivedInvariants(A, B, C, b, k, degree, r + 2, r + k - 2, case)
    return DerivedInvariants(A, B, C, b, k, degree, r + 1, None, case)


# ---------------------------------------------------------------------------
# The construction: chains and the blow-up recipe
# ---------------------------------------------------------------------------

def extend_chain(cs: Sequence[int], k: int) -> List[int]:
    """Effect of ``k`` generic blow-ups at the end of a chain (last blown-up
    curve left out of the divisor): the last entry grows by one and ``k-1``
    entries 2 are appended."""
    out = list(cs)
    out[-1] += 1
    return out + [2] * (k - 1)


@dataclass(frozen=True)
class ConstructionRecord:
    """How the chains of the F1/F2 divisor arise.

    ``side`` is ``"left"`` when the final (non-separating) blow-ups extend
    the chain at the ``(1,1)`` end (the branch with weights ``Q, -q``) and
    ``"right"`` when they extend the chain at ``(1,0)_r`` (weights
    ``p, -P``).
    """

    side: str
    k: int
    pre_left: Tuple[int, ...]
    pre_right: Tuple[int, ...]
    left: Tuple[int, ...]
    right: Tuple[int, ...]
    on_horizontal: bool
    blowups: int
    start_weights: Tuple[int, int]

    def to_dict(self) -> dict:
        return {
            "side": self.side, "k": self.k,
            "pre_left": list(self.pre_left), "pre_right": list(self.pre_right),
            "left": list(self.left), "right": list(self.right),
            "on_horizontal": self.on_horizontal, "blowups": self.blowups,
        }

    def separating_chain(self) -> List[int]:
        """Weights of the chain created between ``(1,1)`` and ``(1,0)_r``
        (resp. the vertical curve and ``(1,0)_r``) before the final
        blow-ups, with the left-behind curve as a (-1) in the middle."""
        return [-c for c in self.pre_left] + [-1] + [-c for c in reversed(self.pre_right)]


def construction_record(params: SimpleTypeParams) -> ConstructionRecord:
    """Chains before and after the final blow-up sequence, and the blow-up count."""
    require_valid(params)
    if params.family == "F3":
        raise ValidationError(["F3 has no (P,Q,p,q) chains"])
    P, Q, p, q = params.P, params.Q, params.p, params.q
    A, r = params.A, params.r
    k, _ = _k_and_case(P, Q, p, q)
    shift = A - 1 if params.family == "F1" else A
    left = tuple(hj_expand(shift + Fraction(P, Q)))
    right = tuple(hj_expand(Fraction(q, p)))
    if P > p:
        side = "left"
        pre_left = tuple(hj_expand(shift + Fraction(p, q)))
        pre_right = right
        on_h = len(pre_left) == 1
    elif q > Q:
        side = "right"
        pre_left = left
        pre_right = tuple(hj_expand(Fraction(Q, P)))
        on_h = len(pre_right) == 1
    else:  # impossible when Pq - pQ = 1
        raise ArithError("neither P > p nor q > Q")
    # blow-ups: arms (a_i each), the separating sequence between (1,1) and
    # (1,0)_r (every exceptional curve of both chains plus the left-behind
    # curve), the k final blow-ups, and for F1 the triple point.
    # (the heads of both chains, (1,1) resp. the vertical curve and
    # (1,0)_r, are not exceptional)
    sep = (len(pre_left) - 1) + (len(pre_right) - 1) + 1
    blowups = A + sep + k + (1 if params.family == "F1" else 0)
    start = (1 - A, 0) if params.family == "F1" else (-A, 0)
    return ConstructionRecord(side, k, pre_left, pre_right, left, right, on_h,
                              blowups, start)


def build_plumbing(params: SimpleTypeParams) -> PlumbingGraph:
    """Plumbing graph of the divisor at infinity for the given parameters.

    Vertex ids: 0 is ``L_inf``; the remaining ids follow the construction
    order below.

    F1
        ``L_inf(-1)`` joined to ``E(-1)``, to the chain of ``q/p`` whose first
        vertex is ``(1,0)_r`` (arrow), and to ``(1,0)_i(-1)`` (arrow) followed
        by ``a_i - 1`` vertices of weight -2.  ``E`` is joined to
        ``(1,0)_0(-1)`` (arrow) and to the chain of ``A-1+P/Q`` whose first
        vertex is ``(1,1)`` (arrow).
    F2
        ``L_inf(0)`` joined to ``(1,0)_0(0)`` (arrow), the chain of ``q/p``
        headed by ``(1,0)_r`` (arrow) and the arms; ``(1,0)_0`` is joined to
        the chain of ``A+P/Q`` headed by the vertical curve (no arrow).
    F3
        ``L_inf(0)`` joined to ``(1,0)_0(0)`` (arrow) and the arms.
    """
    require_valid(params)
    fam, r = params.family, params.r
    vs: List[Vertex] = []
    es: List[Tuple[int, int]] = []

    def add(weight, arrows=0, role=Role()):
        vid = len(vs)
        vs.append(Vertex(vid, weight, arrows, role))
        return vid

    def add_chain(cs, head_role, head_arrows, attach):
        prev = attach
        for j, c in enumerate(cs):
            v = add(-c, head_arrows if j == 0 else 0, head_role if j == 0 else Role("Chain"))
            es.append((prev, v))
            prev = v

    linf = add(-1 if fam == "F1" else 0, 0, Role("LInfty"))
    if fam == "F1":
        e = add(-1, 0, Role("E"))
        es.append((linf, e))
        h0 = add(-1, 1, Role("OneZero", 0))
        es.append((e, h0))
        add_chain(hj_expand(params.A - 1 + Fraction(params.P, params.Q)), Role("OneOne"), 1, e)
        add_chain(hj_expand(Fraction(params.q, params.p)), Role("OneZero", r), 1, linf)
    else:
        h0 = add(0, 1, Role("OneZero", 0))
        es.append((linf, h0))
        if fam == "F2":
            add_chain(hj_expand(params.A + Fraction(params.P, params.Q)), Role("Chain"), 0, h0)
            add_chain(hj_expand(Fraction(params.q, params.p)), Role("OneZero", r), 1, linf)
    for i, ai in enumerate(params.a, 1):
        arm = add(-1, 1, Role("OneZero", i))
        es.append((linf, arm))
        prev = arm
        for _ in range(ai - 1):
            t = add(-2, 0, Role("Tail"))
            es.append((prev, t))
            prev = t
    return PlumbingGraph(vs, es)


# ---------------------------------------------------------------------------
# Splice diagrams
# ---------------------------------------------------------------------------

KINDS = ("Node", "Leaf", "Arrow", "Marked")


@dataclass(frozen=True)
class SVertex:
    id: str
    kind: str
    label: str = ""


@dataclass(frozen=True)
class SEdge:
    u: str
    v: str
    wu: Optional[int] = None
    wv: Optional[int] = None

    def weight_at(self, x: str) -> Optional[int]:
        if x == self.u:
            return self.wu
        if x == self.v:
            return self.wv
        raise SpliceError(f"{x} is not an end of edge {self.u}-{self.v}")

    def other(self, x: str) -> str:
        return self.v if x == self.u else self.u


class SpliceDiagram:
    """Tree with integer weights at edge ends.

    Nodes carry a weight at each incident edge end; ``Marked`` vertices may
    carry decorative weights that never enter any computation; leaves and
    arrows carry none.
    """

    __slots__ = ("_v", "_e", "_inc")

    def __init__(self, vertices: Iterable[SVertex], edges: Iterable[SEdge]):
        self._v: Dict[str, SVertex] = {}
        for x in vertices:
            if x.kind not in KINDS:
                raise SpliceError(f"unknown vertex kind {x.kind!r}")
            if x.id in self._v:
                raise SpliceError(f"duplicate vertex {x.id}")
            self._v[x.id] = x
        self._e: List[SEdge] = list(edges)
        self._inc: Dict[str, List[int]] = {x: [] for x in self._v}
        for i, e in enumerate(self._e):
            for x in (e.u, e.v):
                if x not in self._v:
                    raise SpliceError(f"edge references unknown vertex {x}")
                self._inc[x].append(i)
        if len(self._e) != len(self._v) - 1:
            raise SpliceError("splice diagram is not a tree")
        for x in self._v.values():
            if x.kind == "Arrow" and len(self._inc[x.id]) != 1:
                raise SpliceError(f"arrow {x.id} must have valency 1")
        # connectivity
        if self._v:
            start = next(iter(self._v))
            seen = {start}
            stack = [start]
            while stack:
                u = stack.pop()
                for i in self._inc[u]:
                    w = self._e[i].other(u)
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != len(self._v):
                raise SpliceError("splice diagram is disconnected")

    # -- accessors -----------------------------------------------------------
    def vertex(self, x: str) -> SVertex:
        try:
            return self._v[x]
        except KeyError:
            raise SpliceError(f"unknown splice vertex {x!r}") from None

    def vertices(self) -> List[SVertex]:
        return sorted(self._v.values(), key=lambda s: s.id)

    def edges(self) -> List[SEdge]:
        return list(self._e)

    def incident(self, x: str) -> List[SEdge]:
        self.vertex(x)
        return [self._e[i] for i in self._inc[x]]

    def nodes(self) -> List[str]:
        return sorted(x for x, s in self._v.items() if s.kind == "Node")

    def arrows(self) -> List[str]:
        return sorted(x for x, s in self._v.items() if s.kind == "Arrow")

    def by_label(self, label: str, kind: Optional[str] = None) -> str:
        hits = [x for x, s in self._v.items()
                if s.label == label and (kind is None or s.kind == kind)]
        if len(hits) != 1:
            raise SpliceError(f"expected one vertex labelled {label!r}, found {len(hits)}")
        return hits[0]

    def edge_between(self, x: str, y: str) -> SEdge:
        for e in self.incident(x):
            if e.other(x) == y:
                return e
        raise SpliceError(f"no edge {x}-{y}")

    def path(self, x: str, y: str) -> List[str]:
        self.vertex(x), self.vertex(y)
        parent = {x: None}
        stack = [x]
        while stack:
            u = stack.pop()
            if u == y:
                break
            for e in self.incident(u):
                w = e.other(u)
                if w not in parent:
                    parent[w] = u
                    stack.append(w)
        out = [y]
        while out[-1] != x:
            out.append(parent[out[-1]])
        return out[::-1]

    # -- serialization -------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": s.id, "kind": s.kind, "label": s.label} for s in self.vertices()],
            "edges": [{"u": e.u, "v": e.v, "wu": e.wu, "wv": e.wv} for e in self._e],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SpliceDiagram":
        try:
            return cls([SVertex(x["id"], x["kind"], x.get("label", "")) for x in d["vertices"]],
                       [SEdge(e["u"], e["v"], e.get("wu"), e.get("wv")) for e in d["edges"]])
        except (KeyError, TypeError) as exc:
            raise SpliceError(f"malformed splice diagram data: {exc}") from None

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpliceDiagram):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self) -> str:
        return f"SpliceDiagram({len(self._v)} vertices, {len(self.nodes())} nodes)"


def arrow_label(role) -> str:
    return f"arrow:{role}"


def build_splice(params: SimpleTypeParams) -> SpliceDiagram:
    """The splice diagram with closed-form weights substituted.

    Node labels are the role names of the corresponding plumbing vertices
    (``OneOne``, ``E``, ``LInfty``, ``OneZero(i)``); arrows are labelled
    ``arrow:<role>``; the bullet of the figures is a ``Marked`` vertex.
    """
    inv = derive_invariants(params)
    r = params.r
    V: List[SVertex] = []
    E: List[SEdge] = []

    def node(i, kind, label):
        V.append(SVertex(i, kind, label))
        return i

    def leaf(at, w, name):
        node(name, "Leaf", "leaf")
        E.append(SEdge(at, name, w, None))

    def arrow(at, role, w=1):
        name = arrow_label(role)
        node(name, "Arrow", name)
        E.append(SEdge(at, name, w, None))

    linf = node("LInfty", "Node", "LInfty")
    if params.family == "F3":
        h0 = node("OneZero(0)", "Marked", "OneZero(0)")
        arrow(h0, "OneZero(0)", None)
        E.append(SEdge(h0, linf, 1, 0))
        for i, ai in enumerate(params.a, 1):
            arm = node(f"OneZero({i})", "Node", f"OneZero({i})")
            E.append(SEdge(linf, arm, 1, -1))
            leaf(arm, ai, f"leaf:OneZero({i})")
            arrow(arm, f"OneZero({i})")
        return SpliceDiagram(V, E)

    P, Q, p, q = params.P, params.Q, params.p, params.q
    A = params.A
    bullet = node("bullet", "Marked", "bullet")
    if params.family == "F1":
        n1 = node("OneOne", "Node", "OneOne")
        leaf(n1, Q, "leaf:OneOne")
        arrow(n1, "OneOne")
        n2 = node("E", "Node", "E")
        E.append(SEdge(n1, n2, -q, inv.B))
        arrow(n2, "OneZero(0)")
        E.append(SEdge(n2, bullet, -inv.C, 1))
    else:
        n2 = node("OneZero(0)", "Node", "OneZero(0)")
        leaf(n2, A * Q + P, "leaf:OneZero(0)")
        arrow(n2, "OneZero(0)")
        E.append(SEdge(n2, bullet, -A * q - p, 1))
    E.append(SEdge(bullet, linf, 1, -Q))
    n4 = node(f"OneZero({r})", "Node", f"OneZero({r})")
    E.append(SEdge(linf, n4, q, -P))
    leaf(n4, p, f"leaf:OneZero({r})")
    arrow(n4, f"OneZero({r})")
    for i, (ai, bi) in enumerate(zip(params.a, inv.b), 1):
        arm = node(f"OneZero({i})", "Node", f"OneZero({i})")
        E.append(SEdge(linf, arm, 1, -bi))
        leaf(arm, ai, f"leaf:OneZero({i})")
        arrow(arm, f"OneZero({i})")
    return SpliceDiagram(V, E)


def splice_from_plumbing(g: PlumbingGraph, arrow_vertices_as_nodes: bool = False) -> SpliceDiagram:
    """Read the splice diagram off a plumbing graph.

    Nodes are the vertices meeting at least three edges-or-arrows (if there
    are none, the arrowed vertices).  With ``arrow_vertices_as_nodes`` every
    arrowed vertex is kept as a node as well, so that each horizontal curve
    has a vertex of its own at which total linking can be evaluated.

    The weight at a node on an edge is ``det(-A)`` of the branch cut off through that edge (1 for an arrow).
    Strings of valency-2 vertices are absorbed; an arrowed vertex of
    valency 1 becomes the arrow itself.
    """
    A = intersection_matrix(g)
    d = det(A)
    if abs(d) != 1:
        raise SpliceError(f"intersection matrix determinant is {d}, expected +-1")

    def sval(v):
        return g.valency(v) + g.arrows(v)

    nodes = [v for v in g.ids if sval(v) >= 3 or (arrow_vertices_as_nodes and g.arrows(v))]
    if not nodes:
        nodes = [v for v in g.ids if g.arrows(v) > 0]
    if not nodes:
        raise SpliceError("graph has neither nodes nor arrows")
    node_set = set(nodes)
    V: Dict[str, SVertex] = {}
    E: List[SEdge] = []
    for v in nodes:
        V[f"v{v}"] = SVertex(f"v{v}", "Node", str(g.role(v)))
    done_pairs = set()
    for v in nodes:
        for k in range(g.arrows(v)):
            name = f"a{v}_{k}"
            V[name] = SVertex(name, "Arrow", arrow_label(g.role(v)))
            E.append(SEdge(f"v{v}", name, 1, None))
        for w in sorted(g.neighbors(v)):
            wv = branch_det(g, v, w)
            prev, cur = v, w
            while cur not in node_set and g.valency(cur) == 2 and g.arrows(cur) == 0:
                nxt = next(x for x in g.neighbors(cur) if x != prev)
                prev, cur = cur, nxt
            if cur in node_set:
                pair = frozenset((v, cur))
                if pair in done_pairs:
                    continue
                done_pairs.add(pair)
                E.append(SEdge(f"v{v}", f"v{cur}", wv, branch_det(g, cur, prev)))
            elif g.arrows(cur) > 0:
                name = f"a{cur}_0"
                V[name] = SVertex(name, "Arrow", arrow_label(g.role(cur)))
                E.append(SEdge(f"v{v}", name, wv, None))
            else:
                name = f"l{cur}"
                V[name] = SVertex(name, "Leaf", "leaf")
                E.append(SEdge(f"v{v}", name, wv, None))
    return SpliceDiagram(V.values(), E)


def _weighted(d: SpliceDiagram, x: str) -> bool:
    return d.vertex(x).kind == "Node"


def _node_neighbours(d: SpliceDiagram, x: str) -> List[Tuple[SEdge, str, SEdge]]:
    """For node ``x``: (edge at x, far node, edge at far node) through Marked
    valency-2 vertices."""
    out = []
    for e in d.incident(x):
        prev, cur, last = x, e.other(x), e
        while d.vertex(cur).kind == "Marked" and len(d.incident(cur)) == 2:
            nxt_e = next(f for f in d.incident(cur) if f is not last)
            prev, cur, last = cur, nxt_e.other(cur), nxt_e
        if d.vertex(cur).kind == "Node":
            out.append((e, cur, last))
    return out


def edge_determinant(d: SpliceDiagram, x: str, y: str) -> int:
    """Edge determinant between two nodes.

    ``(prod of the other weights at x)(prod of the other weights at y)``
    minus the product of the two weights on the joining edge.  Marked
    valency-2 vertices on the joining edge are passed through.
    """
    for v in (x, y):
        if d.vertex(v).kind != "Node":
            raise SpliceError(f"{v} is not a node")
    for ex, far, ey in _node_neighbours(d, x):
        if far == y:
            break
    else:
        raise SpliceError(f"nodes {x} and {y} are not adjacent")

    def others(v, skip):
        prod = 1
        for e in d.incident(v):
            if e is not skip:
                w = e.weight_at(v)
                prod *= 1 if w is None else w
        return prod

    wx, wy = ex.weight_at(x), ey.weight_at(y)
    return others(x, ex) * others(y, ey) - wx * wy


def _path_product(d: SpliceDiagram, path: List[str], start_is_virtual: bool) -> int:
    prod = 1
    for i, x in enumerate(path):
        if d.vertex(x).kind != "Node":
            continue
        on = set()
        if i > 0:
            on.add(id(d.edge_between(path[i - 1], x)))
        if i + 1 < len(path):
            on.add(id(d.edge_between(x, path[i + 1])))
        for e in d.incident(x):
            if id(e) in on:
                continue
            w = e.weight_at(x)
            prod *= 1 if w is None else w
    return prod


def splice_linking(d: SpliceDiagram, alpha: str, beta: str) -> int:
    """Linking number of two arrows: product of off-path node weights.

    For ``alpha == beta`` the value returned is the linking of ``alpha``
    with the virtual component of the node it hangs from (every weight at
    that node except the arrow's own edge).
    """
    for x in (alpha, beta):
        if d.vertex(x).kind != "Arrow":
            raise SpliceError(f"{x} is not an arrow")
    if alpha == beta:
        e = d.incident(alpha)[0]
        node = e.other(alpha)
        prod = 1
        if d.vertex(node).kind == "Node":
            for f in d.incident(node):
                if f is not e:
                    w = f.weight_at(node)
                    prod *= 1 if w is None else w
        return prod
    return _path_product(d, d.path(alpha, beta), False)


def total_linking(d: SpliceDiagram, v: str) -> int:
    """Total linking of the virtual component at node ``v`` with the link.

    For every arrow the off-path weights along the path from ``v`` are
    multiplied (at ``v`` only the edge leaving towards the arrow is
    skipped) and the products are summed.  For an arrow, the node it hangs
    from is used.
    """
    kind = d.vertex(v).kind
    if kind == "Arrow":
        v = d.incident(v)[0].other(v)
        kind = d.vertex(v).kind
    if kind != "Node":
        raise SpliceError("total linking is defined for arrows and nodes")
    total = 0
    for b in d.arrows():
        total += _path_product(d, d.path(v, b), True)
    return total


def splice_linking_matrix(d: SpliceDiagram) -> Tuple[List[str], List[List[int]]]:
    """Arrow labels and the full linking matrix (diagonal included)."""
    arrows = sorted(d.arrows(), key=lambda a: d.vertex(a).label)
    return ([d.vertex(a).label for a in arrows],
            [[splice_linking(d, a, b) for b in arrows] for a in arrows])


def plumbing_link_at_infinity(g: PlumbingGraph) -> Tuple[List[str], List[List[Fraction]]]:
    """Arrow labels and ``(A^{-1})`` restricted to arrows, ordered like
    :func:`splice_linking_matrix`.

    These are the linking numbers of the link at infinity, i.e. the
    :func:`~splicekit.plumbing.arrow_linking_matrix` entries with the
    orientation of the ambient sphere reversed.
    """
    A = intersection_matrix(g)
    if abs(det(A)) != 1:
        raise SpliceError("intersection matrix is not unimodular")
    Ainv = inverse(A)
    idx = {v: i for i, v in enumerate(g.ids)}
    arrows = []
    for v, k in g.arrow_list():
        label = arrow_label(g.role(v))
        arrows.append((label if g.arrows(v) == 1 else f"{label}#{k}", v))
    arrows.sort()
    return ([a for a, _ in arrows],
            [[Ainv[idx[v]][idx[w]] for _, w in arrows] for _, v in arrows])


def invariants_from_plumbing(g: PlumbingGraph) -> Dict[str, object]:
    """``B``, ``C`` and ``b_i`` read off a generated F1 graph via branch
    determinants: ``B`` at ``E`` towards ``(1,1)``, ``-C`` at ``E`` towards
    ``L_inf`` and ``-b_i`` at ``(1,0)_i`` towards ``L_inf``."""
    linf = g.find("LInfty")
    e = g.find("E")
    oneone = g.find("OneOne")
    B = branch_det(g, e, oneone)
    C = -branch_det(g, e, linf)
    r = max(g.role(v).index for v in g.ids if g.role(v).kind == "OneZero")
    arms = sorted((g.role(v).index, v) for v in g.ids
                  if g.role(v).kind == "OneZero" and 0 < g.role(v).index < r)
    b = tuple(-branch_det(g, v, linf) for _, v in arms)
    return {"B": B, "C": C, "b": b}


# ---------------------------------------------------------------------------
# Normal forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalFormDescriptor:
    """Exponent data of the normal form.

    ``form`` is ``f1``, ``f2`` or ``f3``.  For ``f1``/``f2`` the normal form
    is ``x^{q1} s^q + x^{p1} s^p prod(beta_i - x^{q1} s^q)^{a_i}`` (the first
    term omitted for ``f2``) with ``s = y x^k + (degree < k in x)``;
    ``swap_xy`` records that the family polynomial has ``x`` and ``y``
    exchanged relative to it.
    """

    form: str
    q1: Optional[int]
    p1: Optional[int]
    q: Optional[int]
    p: Optional[int]
    k: Optional[int]
    case: Optional[int]
    swap_xy: bool
    h_degree_bound: Optional[int]

    @property
    def det(self) -> Optional[int]:
        if self.q is None:
            return None
        return self.p * self.q1 - self.p1 * self.q

    def satisfies_bounds(self) -> bool:
        """``0 <= q1 <= q``, ``0 <= p1 <= p``, not both at the upper end,
        and unit determinant."""
        if self.form == "f3":
            return self.h_degree_bound is not None and self.h_degree_bound >= 0
        return (0 <= self.q1 <= self.q and 0 <= self.p1 <= self.p
                and (self.q1 < self.q or self.p1 < self.p) and abs(self.det) == 1)

    def to_dict(self) -> dict:
        return {
            "form": self.form, "q1": self.q1, "p1": self.p1, "q": self.q, "p": self.p,
            "k": self.k, "case": self.case, "swap_xy": self.swap_xy,
            "h_degree_bound": self.h_degree_bound,
            "s_shape": None if self.form == "f3" else f"y*x^{self.k} + (polynomial in x of degree < {self.k})",
        }


def normal_form(params: SimpleTypeParams) -> NormalFormDescriptor:
    """Rename the family exponents into the normal-form exponents."""
    require_valid(params)
    if params.family == "F3":
        return NormalFormDescriptor("f3", None, None, None, None, None, None, False, params.A)
    P, Q, p, q = params.P, params.Q, params.p, params.q
    k, case = _k_and_case(P, Q, p, q)
    form = "f1" if params.family == "F1" else "f2"
    if case == 1:
        return NormalFormDescriptor(form, q - Q * k, p - P * k, Q, P, k, 1, False, None)
    return NormalFormDescriptor(form, Q - q * k, P - p * k, q, p, k, 2, True, None)


# ---------------------------------------------------------------------------
# Comparison and DOT
# ---------------------------------------------------------------------------

def canonical_edges(d: SpliceDiagram) -> List[Tuple]:
    """Label-based canonical form used for structural comparison.

    Marked valency-2 vertices are contracted away; each edge becomes an
    unordered pair of ends ``(end key, weight at that end)`` where the key
    is the node label, ``"leaf"``, or the arrow label.
    """
    out = []
    for x in d.nodes():
        for e in d.incident(x):
            prev, cur, last = x, e.other(x), e
            while d.vertex(cur).kind == "Marked" and len(d.incident(cur)) == 2:
                nxt = next(f for f in d.incident(cur) if f is not last)
                prev, cur, last = cur, nxt.other(cur), nxt
            a = (d.vertex(x).label, e.weight_at(x))
            s = d.vertex(cur)
            if s.kind == "Node":
                b = (s.label, last.weight_at(cur))
                if a > b:
                    continue  # record node-node edges once
                if a == b and x > cur:
                    continue
            else:
                b = (s.label, None)
            out.append((a, b))
    return sorted(out, key=repr)


def splice_to_dot(d: SpliceDiagram, name: str = "splice") -> str:
    """Deterministic Graphviz text; edge labels are ``near/far`` weights."""
    def fmt(w):
        return "" if w is None else str(w)

    lines = [f"graph {name} {{"]
    for s in d.vertices():
        if s.kind == "Arrow":
            lines.append(f'  "{s.id}" [shape=point, label=""];')
        elif s.kind == "Marked":
            lines.append(f'  "{s.id}" [shape=circle, style=filled, fillcolor=black, label=""];')
        elif s.kind == "Leaf":
            lines.append(f'  "{s.id}" [shape=circle, label=""];')
        else:
            lines.append(f'  "{s.id}" [shape=circle, label="{s.label}"];')
    for e in sorted(d.edges(), key=lambda e: (e.u, e.v)):
        attrs = [f'label="{fmt(e.wu)}/{fmt(e.wv)}"']
        if d.vertex(e.v).kind == "Arrow":
            attrs.append("dir=forward, arrowhead=normal")
        lines.append(f'  "{e.u}" -- "{e.v}" [{", ".join(attrs)}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
