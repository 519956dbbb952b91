"""Property checks and seeded parameter sweeps.

Every ``check_*`` function returns a list of failure messages; an empty
list means the property holds.  :func:`run_sweep` samples parameters with
a seeded :class:`random.Random` so reports are reproducible byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .arith import cf_eval, chain_fraction, det
from .fibres import (GENERIC, SPECIAL, classify_irregular_fibres, euler_balance_check,
                     extra_fibre_expected, suzuki_check)
from .monodromy import braids_equal, h_infinity, local_monodromies, permutation, product_of_local
from .plumbing import (PlumbingGraph, ReductionTrace, chain_contracts_to, det_minus,
                       fiber_multiplicities, intersection_matrix, is_morrow, reduce_to_morrow,
                       tree_det)
from .poly import (FamilyInstance, degree_check, expected_degree, family_degree,
                   fiber_inverse_sweep, irregular_values, rescale_check)
from .splice import (SimpleTypeParams, _k_and_case, build_plumbing, build_splice,
                     canonical_edges, construction_record, derive_invariants, edge_determinant,
                     extend_chain, invariants_from_plumbing, normal_form,
                     plumbing_link_at_infinity, splice_from_plumbing, splice_linking_matrix,
                     total_linking, validate)

__all__ = [
    "SweepBounds",
    "pq_quadruples",
    "branch_class",
    "sample_params",
    "sample_instance",
    "PROPERTIES",
    "run_properties",
    "run_sweep",
]


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepBounds:
    max_pq: int = 30
    max_r: int = 6
    max_a: int = 5

    def to_dict(self) -> dict:
        return {"max_pq": self.max_pq, "max_r": self.max_r, "max_a": self.max_a}


_QUADS: Dict[int, List[Tuple[int, int, int, int]]] = {}


def pq_quadruples(bound: int) -> List[Tuple[int, int, int, int]]:
    """All ``(P, Q, p, q)`` with entries in ``1..bound`` and ``Pq - pQ = 1``."""
    if bound not in _QUADS:
        out = []
        for P in range(1, bound + 1):
            for Q in range(1, bound + 1):
                for p in range(1, bound + 1):
                    # q = (1 + pQ) / P must be an integer in range
                    num = 1 + p * Q
                    if num % P == 0 and 1 <= num // P <= bound:
                        out.append((P, Q, p, num // P))
        _QUADS[bound] = out
    return _QUADS[bound]


def branch_class(quad: Tuple[int, int, int, int]) -> Tuple:
    """Which construction branches a quadruple exercises."""
    P, Q, p, q = quad
    return ("left" if P > p else "right", P == 1, q == 1, Q == 1, p == 1)


def sample_params(count: int, seed: int, family: str = "F1",
                  bounds: SweepBounds = SweepBounds()) -> List[SimpleTypeParams]:
    """Seeded sample, cycling through branch classes so every one is hit."""
    rng = random.Random(f"{seed}:{family}:{bounds.max_pq}:{bounds.max_r}:{bounds.max_a}")
    out: List[SimpleTypeParams] = []
    if family == "F3":
        for _ in range(count):
            r = rng.randint(1, bounds.max_r)
            out.append(SimpleTypeParams("F3", a=tuple(rng.randint(1, bounds.max_a)
                                                     for _ in range(r - 1))))
        return out
    classes: Dict[Tuple, List] = {}
    for quad in pq_quadruples(bounds.max_pq):
        classes.setdefault(branch_class(quad), []).append(quad)
    keys = sorted(classes)
    rng.shuffle(keys)
    rmin = 2 if family == "F1" else 1
    for n in range(count):
        P, Q, p, q = rng.choice(classes[keys[n % len(keys)]])
        r = rng.randint(rmin, max(rmin, bounds.max_r))
        a = tuple(rng.randint(1, bounds.max_a) for _ in range(r - 1))
        out.append(SimpleTypeParams(family, P, Q, p, q, a))
    return out


def _nonzero(rng: random.Random, bound: int = 7) -> Fraction:
    while True:
        v = Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
        if v:
            return v


def sample_instance(params: SimpleTypeParams, rng: random.Random) -> FamilyInstance:
    """Random coefficients; F1/F2 instances are resampled until generic."""
    r = params.r
    for _ in range(1000):
        betas: List[Fraction] = []
        while len(betas) < r - 1:
            b = _nonzero(rng)
            if b not in betas:
                betas.append(b)
        if params.family == "F3":
            h = tuple(Fraction(rng.randint(-5, 5)) for _ in range(params.A))
            return FamilyInstance(params, (), tuple(betas), h)
        k = _k_and_case(params.P, params.Q, params.p, params.q)[0]
        inst = FamilyInstance(params, tuple(_nonzero(rng) for _ in range(k)), tuple(betas))
        if not irregular_values(inst).non_generic:
            return inst
    raise RuntimeError("could not sample a generic instance")


# ---------------------------------------------------------------------------
# Properties on parameters
# ---------------------------------------------------------------------------

def check_validation(params: SimpleTypeParams) -> List[str]:
    return validate(params)


def check_formulas(params: SimpleTypeParams, inst: Optional[FamilyInstance] = None) -> List[str]:
    """Closed forms against the plumbing graph, and the degree of ``f``."""
    errs = []
    inv = derive_invariants(params)
    if inv.A != sum(params.a):
        errs.append("A != sum a_i")
    if params.family == "F1":
        P, Q, p, q = params.P, params.Q, params.p, params.q
        got = invariants_from_plumbing(build_plumbing(params))
        if got["B"] != inv.B or inv.B != inv.A * Q + P - Q:
            errs.append(f"B: graph {got['B']} vs formula {inv.B}")
        if got["C"] != inv.C or inv.C != inv.A * q + p - q:
            errs.append(f"C: graph {got['C']} vs formula {inv.C}")
        if got["b"] != inv.b or inv.b != tuple(q * Q * ai + 1 for ai in params.a):
            errs.append(f"b: graph {got['b']} vs formula {inv.b}")
    if inst is not None:
        d = family_degree(inst)
        if d != expected_degree(params) or d != inv.degree:
            errs.append(f"deg f = {d}, expected {inv.degree}")
    return errs


def check_morrow(params: SimpleTypeParams, g: Optional[PlumbingGraph] = None) -> List[str]:
    g = g or build_plumbing(params)
    errs = []
    d = det(intersection_matrix(g))
    if abs(d) != 1:
        errs.append(f"det = {d}")
    if det_minus(g) != tree_det(g):
        errs.append("elimination and tree recursion disagree on det(-A)")
    res = reduce_to_morrow(g)
    if not isinstance(res, ReductionTrace):
        errs.append(f"no reduction to a Morrow form: {res.reason}")
    elif res.replay(g).key() != res.graph.key() or is_morrow(res.graph) != res.final:
        errs.append("reduction trace does not replay")
    if params.family == "F3":
        blowups = params.A
    else:
        blowups = construction_record(params).blowups
    if len(g) != blowups + 2:
        errs.append(f"{len(g)} vertices for {blowups} blow-ups")
    return errs


def check_cf_identity(params: SimpleTypeParams) -> List[str]:
    if params.family == "F3":
        return []
    P, Q, p, q, A = params.P, params.Q, params.p, params.q, params.A
    v = cf_eval([Fraction(q, p), 1 - A, 0, A - 1 + Fraction(P, Q)])
    if v != Fraction(1, P * p):
        return [f"chain value {v} != 1/{P * p}"]
    return []


def check_multiplicities(params: SimpleTypeParams, g: Optional[PlumbingGraph] = None) -> List[str]:
    g = g or build_plumbing(params)
    m = fiber_multiplicities(g)
    errs = []
    negative_roles = {"LInfty", "E"} if params.family == "F1" else {"LInfty"}
    for v in g.ids:
        role = g.role(v)
        if m[v].denominator != 1:
            errs.append(f"m[{role}] = {m[v]} not integral")
        if g.arrows(v) or role.kind in ("Tail", "Chain"):
            if m[v] != 0:
                errs.append(f"m[{role}] = {m[v]}, expected 0")
        elif role.kind in negative_roles:
            if m[v] >= 0:
                errs.append(f"m[{role}] = {m[v]}, expected < 0")
        elif m[v] != 0 and role.kind not in negative_roles:
            errs.append(f"m[{role}] = {m[v]} on an unexpected vertex")
    return errs


def check_linking(params: SimpleTypeParams, g: Optional[PlumbingGraph] = None) -> List[str]:
    """Pairwise arrow linking: plumbing vs the closed-form splice diagram.

    The plumbing side is ``A^{-1}`` (link at infinity, i.e. the
    orientation-reversed ``-A^{-1}``).  Also checks that total linking
    vanishes at every horizontal curve on both routes.
    """
    g = g or build_plumbing(params)
    errs = []
    la, La = plumbing_link_at_infinity(g)
    d = build_splice(params)
    ls, Ls = splice_linking_matrix(d)
    if la != ls:
        return [f"arrow labels differ: {la} vs {ls}"]
    n = len(la)
    for i in range(n):
        for j in range(n):
            if i != j and La[i][j] != Ls[i][j]:
                errs.append(f"lk({la[i]},{la[j]}): plumbing {La[i][j]} vs splice {Ls[i][j]}")
            if La[i][j] != La[j][i] or Ls[i][j] != Ls[j][i]:
                errs.append("linking matrix not symmetric")
    dg = splice_from_plumbing(g, arrow_vertices_as_nodes=True)
    for a in dg.arrows():
        t = total_linking(dg, a)
        if t != 0:
            errs.append(f"total linking {t} at {dg.vertex(a).label} (plumbing route)")
    for a in d.arrows():
        node = d.incident(a)[0].other(a)
        if d.vertex(node).kind == "Node" and d.vertex(a).label == f"arrow:{d.vertex(node).label}":
            t = total_linking(d, a)
            if t != 0:
                errs.append(f"total linking {t} at {d.vertex(a).label} (splice route)")
    return errs


def check_edge_determinants(params: SimpleTypeParams) -> List[str]:
    d = build_splice(params)
    errs = []
    if params.family != "F3":
        v = edge_determinant(d, "LInfty", f"OneZero({params.r})")
        if v != 1:
            errs.append(f"edge determinant LInfty-OneZero(r) = {v}")
    for i in range(1, params.r):
        v = edge_determinant(d, "LInfty", f"OneZero({i})")
        if v != 1:
            errs.append(f"edge determinant on arm {i} = {v}")
    return errs


def check_construction(params: SimpleTypeParams, g: Optional[PlumbingGraph] = None) -> List[str]:
    """Chain values, the non-separating side and where it lands."""
    if params.family == "F3":
        return []
    g = g or build_plumbing(params)
    P, Q, p, q, A = params.P, params.Q, params.p, params.q, params.A
    rec = construction_record(params)
    k, case = _k_and_case(P, Q, p, q)
    errs = []
    if (Q // q == k) == (p // P == k):
        errs.append("not exactly one case applies")
    if (rec.side == "left") != (case == 2):
        errs.append(f"side {rec.side} inconsistent with case {case}")
    if rec.side == "left":
        if extend_chain(rec.pre_left, k) != list(rec.left) or rec.pre_right != rec.right:
            errs.append("left chain is not the k-fold extension")
        if rec.on_horizontal != (q == 1):
            errs.append("on-horizontal rule fails on the left side")
    else:
        if extend_chain(rec.pre_right, k) != list(rec.right) or rec.pre_left != rec.left:
            errs.append("right chain is not the k-fold extension")
        if rec.on_horizontal != (P == 1):
            errs.append("on-horizontal rule fails on the right side")
    if not chain_contracts_to(rec.separating_chain(), rec.start_weights):
        errs.append("separating chain does not contract to the starting pair")
    # chains read back off the graph
    shift = A - 1 if params.family == "F1" else A
    left_head = g.find("OneOne") if params.family == "F1" else None
    right_head = g.find(f"OneZero({params.r})")
    right = _chain_from(g, right_head, g.find("LInfty"))
    if chain_fraction(right) != Fraction(q, p):
        errs.append("right chain value != q/p")
    if left_head is not None:
        left = _chain_from(g, left_head, g.find("E"))
    else:
        start = next(v for v in g.ids if g.role(v).kind == "Chain"
                     and g.find("OneZero(0)") in g.neighbors(v))
        left = _chain_from(g, start, g.find("OneZero(0)"))
    if chain_fraction(left) != shift + Fraction(P, Q):
        errs.append("left chain value != shift + P/Q")
    return errs


def _chain_from(g: PlumbingGraph, head: int, avoid: int) -> List[int]:
    """Weights along the chain starting at ``head``, away from ``avoid``."""
    out = [g.weight(head)]
    prev, cur = avoid, head
    while True:
        nxt = [w for w in g.neighbors(cur) if w != prev
               and g.role(w).kind in ("Chain", "Plain")]
        if not nxt:
            return out
        prev, cur = cur, nxt[0]
        out.append(g.weight(cur))


def check_normal_form(params: SimpleTypeParams) -> List[str]:
    nf = normal_form(params)
    return [] if nf.satisfies_bounds() else [f"normal form out of bounds: {nf.to_dict()}"]


def check_fibres(params: SimpleTypeParams) -> List[str]:
    if params.family != "F1":
        return []
    errs = []
    for locus in (GENERIC, SPECIAL):
        fib = classify_irregular_fibres(params, locus)
        if not suzuki_check(params, locus, fib):
            errs.append(f"component count identity fails ({locus})")
        if not euler_balance_check(params, locus, fib):
            errs.append(f"Euler balance fails ({locus})")
    n_extra = len(classify_irregular_fibres(params)) - params.r
    if n_extra != (1 if extra_fibre_expected(params) else 0):
        errs.append("extra fibre rule fails")
    return errs


def check_monodromy(r: int) -> List[str]:
    errs = []
    if not braids_equal(product_of_local(r), h_infinity(r)):
        errs.append(f"h_r...h_1 != h_inf for r = {r}")
    for i, h in enumerate(local_monodromies(r), 1):
        if permutation(h) != tuple(range(r + 1)):
            errs.append(f"h_{i} is not pure")
    return errs


# ---------------------------------------------------------------------------
# Properties on instances
# ---------------------------------------------------------------------------

def check_degree(inst: FamilyInstance) -> List[str]:
    return [] if degree_check(inst) else ["total degree differs from the closed form"]


def check_fiber_inverse(inst: FamilyInstance, samples: int = 50, seed: int = 0) -> List[str]:
    res = fiber_inverse_sweep(inst, samples, seed)
    if res["failed"] or res["ok"] < samples:
        return [f"fibre inverse: {res}"]
    return []


def check_rescale(inst: FamilyInstance, lams: Sequence = (-1, 2, Fraction(3, 2))) -> List[str]:
    if inst.params.family == "F3":
        return []
    return [f"rescaling fails at lambda = {l}" for l in lams if not rescale_check(inst, l)]


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------

PARAM_PROPERTIES: Dict[str, Callable[[SimpleTypeParams], List[str]]] = {
    "formulas": check_formulas,
    "morrow_and_det": check_morrow,
    "cf_identity": check_cf_identity,
    "multiplicities": check_multiplicities,
    "linking": check_linking,
    "edge_determinants": check_edge_determinants,
    "construction": check_construction,
    "normal_form": check_normal_form,
    "fibres": check_fibres,
}

INSTANCE_PROPERTIES: Dict[str, Callable[[FamilyInstance], List[str]]] = {
    "degree": check_degree,
    "fiber_inverse": check_fiber_inverse,
    "rescale": check_rescale,
}

PROPERTIES = tuple(PARAM_PROPERTIES) + tuple(INSTANCE_PROPERTIES) + ("monodromy",)

#: Instance properties that expand polynomials and may be skipped on large parameters.
HEAVY_PROPERTIES = ("fiber_inverse", "rescale")


def run_properties(inst: FamilyInstance, names: Optional[Iterable[str]] = None,
                   polynomial: bool = True) -> Dict[str, dict]:
    """Run the named properties (default: all) on one instance."""
    names = list(names) if names is not None else list(PROPERTIES)
    out: Dict[str, dict] = {}
    params = inst.params
    for name in names:
        try:
            if name in PARAM_PROPERTIES:
                errs = PARAM_PROPERTIES[name](params)
            elif name in INSTANCE_PROPERTIES:
                if not polynomial and name in HEAVY_PROPERTIES:
                    out[name] = {"status": "skipped", "failures": []}
                    continue
                errs = INSTANCE_PROPERTIES[name](inst)
            elif name == "monodromy":
                errs = check_monodromy(params.r) if params.family == "F1" else []
            else:
                raise KeyError(name)
        except KeyError:
            raise
        except Exception as exc:  # a crash is a failure of the property
            errs = [f"{type(exc).__name__}: {exc}"]
        out[name] = {"status": "fail" if errs else "pass", "failures": errs}
    return out


def run_sweep(count: int = 200, seed: int = 42, families: Sequence[str] = ("F1", "F2", "F3"),
              bounds: SweepBounds = SweepBounds(), names: Optional[Iterable[str]] = None,
              polynomial_bounds: Optional[SweepBounds] = None) -> dict:
    """Seeded sweep; a deterministic, JSON-ready report.

    The expanding instance properties (:data:`HEAVY_PROPERTIES`) run only
    on parameters within ``polynomial_bounds`` when given, since full
    expansion grows quickly; the degree property always runs.
    """
    names = list(names) if names is not None else list(PROPERTIES)
    rows = []
    summary = {n: {"pass": 0, "fail": 0, "skipped": 0} for n in names}
    for family in families:
        rng = random.Random(f"{seed}:{family}:coefficients")
        for idx, params in enumerate(sample_params(count, seed, family, bounds)):
            inst = sample_instance(params, rng)
            poly_ok = polynomial_bounds is None or _within(params, polynomial_bounds)
            res = run_properties(inst, names, polynomial=poly_ok)
            for n, v in res.items():
                summary[n][{"pass": "pass", "fail": "fail", "skipped": "skipped"}[v["status"]]] += 1
            rows.append({"family": family, "index": idx, "instance": inst.to_dict(),
                         "results": res})
    ok = all(v["fail"] == 0 for v in summary.values())
    return {
        "seed": seed, "count": count, "families": list(families),
        "bounds": bounds.to_dict(),
        "polynomial_bounds": None if polynomial_bounds is None else polynomial_bounds.to_dict(),
        "ok": ok, "summary": summary, "instances": rows,
    }


def _within(params: SimpleTypeParams, b: SweepBounds) -> bool:
    vals = [v for v in (params.P, params.Q, params.p, params.q) if v is not None]
    return (all(v <= b.max_pq for v in vals) and params.r <= b.max_r
            and all(ai <= b.max_a for ai in params.a))
