"""Plumbing graphs of a divisor at infinity.

A :class:`PlumbingGraph` is a weighted tree: one vertex per rational curve
of the divisor, weight = self-intersection number, an edge for every
transverse intersection point, and a count of *arrowheads* on a vertex for
each horizontal curve component of the link at infinity that it carries.

The module implements the two elementary moves (blow-up and blow-down),
recognition of the three linear Morrow configurations, a backtracking
reducer that searches for a blow-down sequence ending in one of them, and
the lattice data attached to a graph: the intersection matrix, the fibre
multiplicity vector ``m = -A^{-1} a`` and the pairwise linking of arrows.

Graphs are immutable; every move returns a new graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .arith import ArithError, SingularMatrixError, det, inverse, solve

__all__ = [
    "Role",
    "Vertex",
    "PlumbingGraph",
    "PlumbingError",
    "MorrowForm",
    "ReductionTrace",
    "ReductionFailure",
    "Point",
    "blow_up",
    "blow_down",
    "can_blow_down",
    "is_morrow",
    "reduce_to_morrow",
    "chain_contracts_to",
    "intersection_matrix",
    "tree_det",
    "det_minus",
    "branch_det",
    "fiber_multiplicities",
    "arrow_linking_matrix",
    "plumbing_to_dot",
    "chain_graph",
]


class PlumbingError(ValueError):
    """Raised for malformed graphs and illegal moves."""


@dataclass(frozen=True, order=True)
class Role:
    """What a vertex stands for in the constructions.

    ``kind`` is one of ``LInfty``, ``E``, ``OneOne``, ``OneZero``, ``Chain``,
    ``Tail`` or ``Plain``; ``index`` is used by ``OneZero`` (the label ``i``
    of the horizontal curve ``(1,0)_i``).
    """

    kind: str = "Plain"
    index: Optional[int] = None

    KINDS = ("LInfty", "E", "OneOne", "OneZero", "Chain", "Tail", "Plain")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise PlumbingError(f"unknown role kind {self.kind!r}")
        if (self.kind == "OneZero") != (self.index is not None):
            raise PlumbingError("only OneZero roles carry an index")

    def __str__(self) -> str:
        return f"OneZero({self.index})" if self.kind == "OneZero" else self.kind

    @classmethod
    def parse(cls, text: str) -> "Role":
        if text.startswith("OneZero(") and text.endswith(")"):
            return cls("OneZero", int(text[8:-1]))
        return cls(text)


PLAIN = Role()


@dataclass(frozen=True)
class Vertex:
    id: int
    weight: int
    arrows: int = 0
    role: Role = PLAIN


class PlumbingGraph:
    """Immutable weighted tree with arrowheads.

    >>> g = chain_graph([-2, -1, -2])
    >>> [g.weight(v) for v in g.ids]
    [-2, -1, -2]
    """

    __slots__ = ("_v", "_adj", "_ids")

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[Tuple[int, int]]):
        vs: Dict[int, Vertex] = {}
        for v in vertices:
            if v.id in vs:
                raise PlumbingError(f"duplicate vertex id {v.id}")
            if not isinstance(v.weight, int) or isinstance(v.weight, bool):
                raise PlumbingError(f"vertex {v.id}: weight must be an integer")
            if v.arrows < 0:
                raise PlumbingError(f"vertex {v.id}: negative arrow count")
            vs[v.id] = v
        if not vs:
            raise PlumbingError("a plumbing graph needs at least one vertex")
        adj: Dict[int, set] = {i: set() for i in vs}
        n_edges = 0
        for a, b in edges:
            if a not in vs or b not in vs:
                raise PlumbingError(f"edge ({a},{b}) references an unknown vertex")
            if a == b:
                raise PlumbingError(f"self-loop at {a}")
            if b in adj[a]:
                raise PlumbingError(f"duplicate edge ({a},{b})")
            adj[a].add(b)
            adj[b].add(a)
            n_edges += 1
        if n_edges != len(vs) - 1:
            raise PlumbingError("graph is not a tree (wrong edge count)")
        start = next(iter(vs))
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(vs):
            raise PlumbingError("graph is not a tree (disconnected)")
        self._v = vs
        self._adj = {k: frozenset(s) for k, s in adj.items()}
        self._ids = tuple(sorted(vs))

    # -- accessors -----------------------------------------------------------
    @property
    def ids(self) -> Tuple[int, ...]:
        return self._ids

    def __len__(self) -> int:
        return len(self._ids)

    def __contains__(self, v) -> bool:
        return v in self._v

    def vertex(self, v: int) -> Vertex:
        try:
            return self._v[v]
        except KeyError:
            raise PlumbingError(f"unknown vertex {v}") from None

    def vertices(self) -> List[Vertex]:
        return [self._v[i] for i in self._ids]

    def weight(self, v: int) -> int:
        return self.vertex(v).weight

    def arrows(self, v: int) -> int:
        return self.vertex(v).arrows

    def role(self, v: int) -> Role:
        return self.vertex(v).role

    def neighbors(self, v: int) -> FrozenSet[int]:
        self.vertex(v)
        return self._adj[v]

    def valency(self, v: int) -> int:
        """Number of adjacent vertices (arrows are not counted)."""
        return len(self.neighbors(v))

    def edges(self) -> List[Tuple[int, int]]:
        return sorted((a, b) for a in self._ids for b in self._adj[a] if a < b)

    def has_edge(self, a: int, b: int) -> bool:
        return a in self._v and b in self._adj[a]

    def find(self, role: Union[Role, str]) -> int:
        """The unique vertex with the given role."""
        if isinstance(role, str):
            role = Role.parse(role)
        hits = [i for i in self._ids if self._v[i].role == role]
        if len(hits) != 1:
            raise PlumbingError(f"expected exactly one vertex with role {role}, found {len(hits)}")
        return hits[0]

    def arrow_list(self) -> List[Tuple[int, int]]:
        """All arrowheads as ``(vertex id, k)`` pairs in a fixed order."""
        return [(i, k) for i in self._ids for k in range(self._v[i].arrows)]

    def total_arrows(self) -> int:
        return sum(v.arrows for v in self._v.values())

    def is_chain(self) -> bool:
        return all(len(self._adj[i]) <= 2 for i in self._ids)

    def chain_order(self) -> List[int]:
        """Vertex ids along the path, starting from the end with smaller id."""
        if not self.is_chain():
            raise PlumbingError("graph is not a chain")
        if len(self) == 1:
            return list(self._ids)
        ends = [i for i in self._ids if len(self._adj[i]) == 1]
        order = [min(ends)]
        prev = None
        while len(order) < len(self):
            cur = order[-1]
            nxt = [w for w in self._adj[cur] if w != prev]
            prev = cur
            order.append(nxt[0])
        return order

    # -- derived graphs ------------------------------------------------------
    def without_arrows(self) -> "PlumbingGraph":
        return PlumbingGraph([replace(v, arrows=0) for v in self.vertices()], self.edges())

    def with_vertex(self, v: int, **changes) -> "PlumbingGraph":
        vs = [replace(x, **changes) if x.id == v else x for x in self.vertices()]
        return PlumbingGraph(vs, self.edges())

    def next_id(self) -> int:
        return self._ids[-1] + 1

    def key(self):
        """Hashable description (ids, weights, arrows, edges; roles ignored)."""
        return (
            tuple((v.id, v.weight, v.arrows) for v in self.vertices()),
            tuple(self.edges()),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, PlumbingGraph):
            return NotImplemented
        return self.vertices() == other.vertices() and self.edges() == other.edges()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        vs = ", ".join(
            f"{v.id}:{v.weight}" + ("*" * v.arrows) for v in self.vertices()
        )
        return f"PlumbingGraph([{vs}], edges={self.edges()})"

    # -- serialization -------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "vertices": [
                {"id": v.id, "weight": v.weight, "arrows": v.arrows, "role": str(v.role)}
                for v in self.vertices()
            ],
            "edges": [list(e) for e in self.edges()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PlumbingGraph":
        try:
            vs = [
                Vertex(int(d["id"]), int(d["weight"]), int(d.get("arrows", 0)),
                       Role.parse(d.get("role", "Plain")))
                for d in data["vertices"]
            ]
            es = [(int(a), int(b)) for a, b in data["edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise PlumbingError(f"malformed plumbing graph data: {exc}") from None
        return cls(vs, es)


def chain_graph(weights: Sequence[int], arrows: Optional[Sequence[int]] = None) -> PlumbingGraph:
    """A linear graph with ids ``0..n-1`` in order."""
    arrows = list(arrows) if arrows is not None else [0] * len(weights)
    vs = [Vertex(i, int(w), int(a)) for i, (w, a) in enumerate(zip(weights, arrows))]
    return PlumbingGraph(vs, [(i, i + 1) for i in range(len(weights) - 1)])


# ---------------------------------------------------------------------------
# Moves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Point:
    """A point on curve ``on`` through which the curves ``through`` also pass.

    ``through`` must be neighbours of ``on``.  Zero extra curves is a generic
    point of ``on``; one is the intersection point with that neighbour; more
    than one models several curves meeting ``on`` at the same point (for
    instance the triple point of three horizontal curves).
    """

    on: int
    through: Tuple[int, ...] = ()


Site = Union[int, Tuple[int, int], Point]


def blow_up(g: PlumbingGraph, site: Site) -> PlumbingGraph:
    """Blow up a point.

    ``site`` is a vertex id (generic point of that curve), an edge ``(u, v)``
    (the intersection point) or a :class:`Point`.  The new exceptional curve
    has weight -1 and every curve through the point loses 1.
    """
    if isinstance(site, Point):
        pt = site
    elif isinstance(site, tuple):
        if len(site) != 2:
            raise PlumbingError(f"bad blow-up site {site!r}")
        u, v = site
        if not g.has_edge(u, v):
            raise PlumbingError(f"unknown edge {site!r}")
        pt = Point(u, (v,))
    else:
        pt = Point(int(site), ())
    if pt.on not in g:
        raise PlumbingError(f"unknown vertex {pt.on}")
    for t in pt.through:
        if not g.has_edge(pt.on, t):
            raise PlumbingError(f"{t} is not adjacent to {pt.on}")
    if len(set(pt.through)) != len(pt.through):
        raise PlumbingError("repeated curve in blow-up site")
    touched = {pt.on, *pt.through}
    new = g.next_id()
    vs = [replace(v, weight=v.weight - 1) if v.id in touched else v for v in g.vertices()]
    vs.append(Vertex(new, -1))
    cut = {frozenset((pt.on, t)) for t in pt.through}
    es = [e for e in g.edges() if frozenset(e) not in cut]
    es += [(c, new) for c in sorted(touched)]
    return PlumbingGraph(vs, es)


def can_blow_down(g: PlumbingGraph, v: int) -> bool:
    x = g.vertex(v)
    return x.weight == -1 and x.arrows == 0 and g.valency(v) <= 2 and len(g) > 1


def blow_down(g: PlumbingGraph, v: int) -> PlumbingGraph:
    """Contract a (-1) curve of valency at most 2 carrying no arrows."""
    x = g.vertex(v)
    if x.weight != -1:
        raise PlumbingError(f"vertex {v} has weight {x.weight}, not -1")
    if x.arrows:
        raise PlumbingError(f"vertex {v} carries an arrow")
    nbrs = sorted(g.neighbors(v))
    if len(nbrs) > 2:
        raise PlumbingError(f"vertex {v} has valency {len(nbrs)} > 2")
    if len(g) == 1:
        raise PlumbingError("cannot blow down the only vertex")
    vs = [replace(y, weight=y.weight + 1) if y.id in nbrs else y
          for y in g.vertices() if y.id != v]
    es = [e for e in g.edges() if v not in e]
    if len(nbrs) == 2:
        es.append((nbrs[0], nbrs[1]))
    return PlumbingGraph(vs, es)


# ---------------------------------------------------------------------------
# Morrow configurations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MorrowForm:
    """One of the three minimal linear shapes.

    ``kind`` is ``SinglePlusOne``, ``ZeroL`` (field ``l``) or ``Balanced``
    (fields ``ls``, ``n``, ``ts``).  For ``Balanced`` the chain reads
    ``l_m .. l_1, n, 0, -n-1, t_1 .. t_k``; ``ls`` and ``ts`` are listed
    outward from the centre.
    """

    kind: str
    l: Optional[int] = None
    ls: Tuple[int, ...] = ()
    n: Optional[int] = None
    ts: Tuple[int, ...] = ()

    def chain(self) -> List[int]:
        if self.kind == "SinglePlusOne":
            return [1]
        if self.kind == "ZeroL":
            return [0, self.l]
        return list(reversed(self.ls)) + [self.n, 0, -self.n - 1] + list(self.ts)

    def to_dict(self) -> dict:
        if self.kind == "SinglePlusOne":
            return {"kind": self.kind}
        if self.kind == "ZeroL":
            return {"kind": self.kind, "l": self.l}
        return {"kind": self.kind, "ls": list(self.ls), "n": self.n, "ts": list(self.ts)}


def chain_contracts_to(weights: Sequence[int], target) -> bool:
    """Whether a weighted chain blows down to ``target``.

    ``target`` is a single weight (a one-vertex chain) or a sequence of
    weights.  All blow-down orders are searched, with memoisation.
    """
    goal = (target,) if isinstance(target, int) else tuple(target)
    seen = set()
    stack = [tuple(weights)]
    while stack:
        c = stack.pop()
        if c == goal:
            return True
        if c in seen or len(c) <= len(goal):
            continue
        seen.add(c)
        for i, w in enumerate(c):
            if w == -1:
                nxt = list(c)
                if i > 0:
                    nxt[i - 1] += 1
                if i + 1 < len(c):
                    nxt[i + 1] += 1
                del nxt[i]
                stack.append(tuple(nxt))
    return False


def _balanced(chain: List[int]) -> Optional[MorrowForm]:
    found = []
    for c in (chain, chain[::-1]):
        for i in range(1, len(c) - 1):
            n = c[i - 1]
            if c[i] == 0 and c[i + 1] == -n - 1:
                ls = tuple(reversed(c[: i - 1]))
                ts = tuple(c[i + 2:])
                replaced = list(reversed(ls)) + [-1] + list(ts)
                if chain_contracts_to(replaced, -1):
                    found.append(MorrowForm("Balanced", ls=ls, n=n, ts=ts))
    if not found:
        return None
    # deterministic choice: larger neighbour of the 0 vertex plays ``n``
    found.sort(key=lambda m: (-m.n, len(m.ls), m.ls, m.ts))
    return found[0]


def is_morrow(g: PlumbingGraph) -> Optional[MorrowForm]:
    """Recognise a Morrow configuration (arrows are ignored).

    The third shape ``(.., n, 0, -n-1, ..)`` is accepted when replacing the
    central three vertices by a single (-1) vertex gives a chain that
    contracts completely, i.e. blows down to a single (-1) vertex.  This is
    the determinant-consistent form of the rule: for any such chain ``X``,
    ``det(-A(X)) = -det(-A(replaced))``, and every compactification of C^2
    has ``det(-A) = -1``.
    """
    if not g.is_chain():
        return None
    chain = [g.weight(v) for v in g.chain_order()]
    if chain == [1]:
        return MorrowForm("SinglePlusOne")
    if len(chain) == 2 and 0 in chain:
        other = chain[1] if chain[0] == 0 else chain[0]
        return MorrowForm("ZeroL", l=other)
    if len(chain) >= 3:
        return _balanced(chain)
    return None


@dataclass(frozen=True)
class ReductionTrace:
    """A successful blow-down sequence: ``(vertex id, valency)`` per step."""

    steps: Tuple[Tuple[int, int], ...]
    final: MorrowForm
    graph: PlumbingGraph

    ok = True

    def replay(self, g: PlumbingGraph) -> PlumbingGraph:
        h = g.without_arrows()
        for v, val in self.steps:
            if h.valency(v) != val:
                raise PlumbingError(f"replay mismatch at vertex {v}")
            h = blow_down(h, v)
        return h

    def to_dict(self) -> dict:
        return {
            "ok": True,
            "steps": [list(s) for s in self.steps],
            "final": self.final.to_dict(),
            "final_chain": [self.graph.weight(v) for v in self.graph.chain_order()],
        }


@dataclass(frozen=True)
class ReductionFailure:
    """No blow-down sequence reaches a Morrow form; ``stuck`` lists terminal states."""

    stuck: Tuple[PlumbingGraph, ...]
    reason: str

    ok = False

    def to_dict(self) -> dict:
        return {"ok": False, "reason": self.reason,
                "stuck": [s.to_dict() for s in self.stuck[:5]]}


def reduce_to_morrow(g: PlumbingGraph, max_states: int = 200_000):
    """Search for a blow-down sequence ending in a Morrow configuration.

    Arrows are stripped first: they mark horizontal curves, which belong to
    the divisor like any other curve, so they may be contracted.  The
    search is depth-first over the choice of (-1) vertex with memoisation
    on visited states.  Fully reduced (minimal) end states are preferred;
    an intermediate Morrow state is returned only if no minimal one exists.
    """
    start = g.without_arrows()
    seen = set()
    fallback = None
    stuck: List[PlumbingGraph] = []
    stack: List[Tuple[PlumbingGraph, Tuple[Tuple[int, int], ...]]] = [(start, ())]
    while stack:
        h, steps = stack.pop()
        k = h.key()
        if k in seen:
            continue
        seen.add(k)
        if len(seen) > max_states:
            break
        moves = [v for v in h.ids if can_blow_down(h, v)]
        if not moves:
            m = is_morrow(h)
            if m is not None:
                return ReductionTrace(steps, m, h)
            stuck.append(h)
            continue
        if fallback is None:
            m = is_morrow(h)
            if m is not None:
                fallback = ReductionTrace(steps, m, h)
        for v in reversed(moves):
            stack.append((blow_down(h, v), steps + ((v, h.valency(v)),)))
    if fallback is not None:
        return fallback
    if not stuck:
        return ReductionFailure((), "search budget exhausted")
    return ReductionFailure(tuple(stuck), "every minimal state is non-Morrow")


# ---------------------------------------------------------------------------
# Lattice data
# ---------------------------------------------------------------------------

def intersection_matrix(g: PlumbingGraph) -> List[List[int]]:
    """``A`` with weights on the diagonal and 1 for each edge (order: ``g.ids``)."""
    idx = {v: i for i, v in enumerate(g.ids)}
    n = len(idx)
    A = [[0] * n for _ in range(n)]
    for v in g.ids:
        A[idx[v]][idx[v]] = g.weight(v)
    for a, b in g.edges():
        A[idx[a]][idx[b]] = A[idx[b]][idx[a]] = 1
    return A


def tree_det(g: PlumbingGraph, vertices: Optional[Iterable[int]] = None) -> int:
    """``det(-A)`` of the induced subforest on ``vertices`` (default: all).

    Uses the tree recursion ``F(v) = -w_v prod F(c) - sum_c G(c) prod_{c'!=c} F(c')``
    where ``G(c)`` is the product of ``F`` over the children of ``c``; the
    empty graph has determinant 1.  Linear time, and independent of the
    elimination routine in :mod:`splicekit.arith`.
    """
    keep = set(g.ids if vertices is None else vertices)
    result = 1
    done = set()
    for root in sorted(keep):
        if root in done:
            continue
        order = []
        parent = {root: None}
        stack = [root]
        while stack:
            u = stack.pop()
            order.append(u)
            for w in g.neighbors(u):
                if w in keep and w != parent[u]:
                    parent[w] = u
                    stack.append(w)
        done.update(order)
        F: Dict[int, int] = {}
        G: Dict[int, int] = {}
        for u in reversed(order):
            kids = [w for w in g.neighbors(u) if w in keep and parent.get(w) == u and w != parent[u]]
            prod = 1
            for c in kids:
                prod *= F[c]
            G[u] = prod
            total = -g.weight(u) * prod
            for c in kids:
                rest = 1
                for c2 in kids:
                    if c2 != c:
                        rest *= F[c2]
                total -= G[c] * rest
            F[u] = total
        result *= F[root]
    return result


def det_minus(g: PlumbingGraph) -> int:
    """``det(-A)`` computed by Bareiss elimination."""
    A = intersection_matrix(g)
    return det([[-x for x in row] for row in A])


def branch_det(g: PlumbingGraph, v: int, w: int) -> int:
    """``det(-A)`` of the branch through neighbour ``w`` when ``v`` is cut out."""
    if not g.has_edge(v, w):
        raise PlumbingError(f"{w} is not adjacent to {v}")
    comp = {w}
    stack = [w]
    while stack:
        u = stack.pop()
        for x in g.neighbors(u):
            if x != v and x not in comp:
                comp.add(x)
                stack.append(x)
    return tree_det(g, comp)


def _require_unimodular(g: PlumbingGraph) -> List[List[int]]:
    A = intersection_matrix(g)
    d = det(A)
    if d == 0:
        raise SingularMatrixError("intersection matrix is singular")
    if abs(d) != 1:
        raise ArithError(f"intersection matrix has determinant {d}, expected +-1")
    return A


def fiber_multiplicities(g: PlumbingGraph) -> Dict[int, Fraction]:
    """``m = -A^{-1} a`` where ``a`` counts arrows per vertex."""
    A = _require_unimodular(g)
    a = [-g.arrows(v) for v in g.ids]
    m = solve(A, a)
    return dict(zip(g.ids, m))


def arrow_linking_matrix(g: PlumbingGraph) -> Tuple[List[Tuple[int, int]], List[List[Fraction]]]:
    """Pairwise linking ``-(A^{-1})_{v,w}`` of arrowheads at ``v`` and ``w``.

    Returns the arrow labels (as in :meth:`PlumbingGraph.arrow_list`) and
    the symmetric matrix, diagonal included.
    """
    A = _require_unimodular(g)
    Ainv = inverse(A)
    idx = {v: i for i, v in enumerate(g.ids)}
    arrows = g.arrow_list()
    M = [[-Ainv[idx[a]][idx[b]] for (b, _) in arrows] for (a, _) in arrows]
    return arrows, M


# ---------------------------------------------------------------------------
# DOT
# ---------------------------------------------------------------------------

def plumbing_to_dot(g: PlumbingGraph, name: str = "plumbing") -> str:
    """Deterministic Graphviz text: nodes labelled ``id:weight``."""
    lines = [f"graph {name} {{", "  node [shape=circle];"]
    for v in g.vertices():
        lines.append(f'  v{v.id} [label="{v.id}:{v.weight}", role="{v.role}"];')
    for a, b in g.edges():
        lines.append(f"  v{a} -- v{b};")
    for v in g.vertices():
        for k in range(v.arrows):
            lines.append(f'  a{v.id}_{k} [shape=point, label=""];')
            lines.append(f"  v{v.id} -- a{v.id}_{k} [dir=forward, arrowhead=normal];")
    lines.append("}")
    return "\n".join(lines) + "\n"
