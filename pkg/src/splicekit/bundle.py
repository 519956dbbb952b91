"""The bundle: every representation of one family instance in one JSON object.

Field names are lower_snake_case and every rational is a ``"num/den"``
string.  :meth:`Bundle.to_json` is deterministic (sorted keys), and
``Bundle.from_json(b.to_json()) == b``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

from .arith import det
from .fibres import FibreTopology, GENERIC, attach_values, classify_irregular_fibres
from .monodromy import h_infinity, local_monodromies
from .plumbing import (PlumbingGraph, ReductionTrace, fiber_multiplicities, intersection_matrix,
                       reduce_to_morrow)
from .poly import FamilyInstance, FamilyPolys, MultiPoly, build_family, irregular_values
from .splice import (SimpleTypeParams, SpliceDiagram, build_plumbing, build_splice,
                     derive_invariants, normal_form, plumbing_link_at_infinity,
                     splice_linking_matrix, total_linking, splice_from_plumbing)
from .verify import run_properties

__all__ = ["Bundle", "generate_bundle", "verify_bundle", "BUNDLE_VERSION"]

BUNDLE_VERSION = 1


@dataclass
class Bundle:
    instance: FamilyInstance
    invariants: dict
    plumbing: PlumbingGraph
    splice: SpliceDiagram
    polynomials: FamilyPolys
    irregular_values: Optional[dict]
    fibres: Optional[List[FibreTopology]]
    monodromy: Optional[dict]
    normal_form: dict
    report: dict

    def to_dict(self) -> dict:
        return {
            "version": BUNDLE_VERSION,
            "instance": self.instance.to_dict(),
            "invariants": self.invariants,
            "plumbing": self.plumbing.to_dict(),
            "splice": self.splice.to_dict(),
            "polynomials": self.polynomials.to_dict(),
            "irregular_values": self.irregular_values,
            "fibres": None if self.fibres is None else [f.to_dict() for f in self.fibres],
            "monodromy": self.monodromy,
            "normal_form": self.normal_form,
            "report": self.report,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Bundle":
        if d.get("version") != BUNDLE_VERSION:
            raise ValueError(f"unsupported bundle version {d.get('version')!r}")
        fib = d.get("fibres")
        return cls(
            FamilyInstance.from_dict(d["instance"]),
            d["invariants"],
            PlumbingGraph.from_dict(d["plumbing"]),
            SpliceDiagram.from_dict(d["splice"]),
            FamilyPolys.from_dict(d["polynomials"]),
            d.get("irregular_values"),
            None if fib is None else [FibreTopology.from_dict(f) for f in fib],
            d.get("monodromy"),
            d["normal_form"],
            d["report"],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Bundle":
        return cls.from_dict(json.loads(text))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Bundle):
            return NotImplemented
        return self.to_dict() == other.to_dict()


def _monodromy_section(r: int) -> dict:
    return {
        "strands": r + 1,
        "local": [h.to_list() for h in local_monodromies(r)],
        "h_infinity": h_infinity(r).to_list(),
        "extra_fibre_trivial": True,
    }


def generate_bundle(inst: FamilyInstance, polynomial_checks: bool = True) -> Bundle:
    """Build every representation and run the property suite on it."""
    inst.require_valid()
    params = inst.params
    inv = derive_invariants(params).to_dict()
    g = build_plumbing(params)
    d = build_splice(params)
    polys = build_family(inst)
    iv = None if params.family == "F3" else irregular_values(inst).to_dict()
    fibres = None
    mono = None
    if params.family == "F1":
        fibres = attach_values(classify_irregular_fibres(params, GENERIC), inst)
        mono = _monodromy_section(params.r)
    report = {"properties": run_properties(inst, polynomial=polynomial_checks)}
    report["ok"] = all(v["status"] != "fail" for v in report["properties"].values())
    return Bundle(inst, inv, g, d, polys, iv, fibres, mono, normal_form(params).to_dict(), report)


def verify_bundle(b: Bundle) -> Dict[str, dict]:
    """Re-check a (possibly edited) bundle against itself and its parameters.

    The stored plumbing graph must still be unimodular, reduce to a Morrow
    form and have the right multiplicities; its linking numbers must agree
    with the stored splice diagram; the stored polynomial must have the
    closed-form degree; and every stored section must coincide with what
    the parameters generate.
    """
    out: Dict[str, dict] = {}

    def record(name, errs):
        out[name] = {"status": "fail" if errs else "pass", "failures": list(errs)}

    params = b.instance.params
    g = b.plumbing
    errs = []
    dval = det(intersection_matrix(g))
    if abs(dval) != 1:
        errs.append(f"det = {dval}")
    else:
        res = reduce_to_morrow(g)
        if not isinstance(res, ReductionTrace):
            errs.append(f"no Morrow reduction: {res.reason}")
    record("morrow_and_det", errs)

    errs = []
    if abs(dval) == 1:
        m = fiber_multiplicities(g)
        for v in g.ids:
            if g.arrows(v) and m[v] != 0:
                errs.append(f"multiplicity {m[v]} at arrowed vertex {v}")
    else:
        errs.append("skipped: singular or non-unimodular graph")
    record("multiplicities", errs)

    errs = []
    if abs(dval) == 1:
        la, La = plumbing_link_at_infinity(g)
        ls, Ls = splice_linking_matrix(b.splice)
        if la != ls:
            errs.append("arrow labels differ")
        else:
            for i in range(len(la)):
                for j in range(len(la)):
                    if i != j and La[i][j] != Ls[i][j]:
                        errs.append(f"lk({la[i]},{la[j]}) {La[i][j]} vs {Ls[i][j]}")
    else:
        errs.append("skipped: singular or non-unimodular graph")
    record("linking", errs)

    want = derive_invariants(params).degree
    got = b.polynomials.f.total_degree()
    record("degree", [] if got == want else [f"deg f = {got}, expected {want}"])

    errs = []
    if g != build_plumbing(params):
        errs.append("plumbing graph differs from the generated one")
    if b.splice != build_splice(params):
        errs.append("splice diagram differs from the generated one")
    if b.polynomials != build_family(b.instance):
        errs.append("polynomials differ from the generated ones")
    if b.invariants != derive_invariants(params).to_dict():
        errs.append("invariants differ from the closed forms")
    record("consistency", errs)
    return out


def fixture_report(name: str, poly: MultiPoly, expected_degree: int) -> Dict[str, dict]:
    """Report for a stand-alone polynomial fixture."""
    got = poly.total_degree()
    out = {"degree": {"status": "pass" if got == expected_degree else "fail",
                      "failures": [] if got == expected_degree else
                      [f"deg = {got}, expected {expected_degree}"],
                      "value": got if isinstance(got, int) else str(got)}}
    for n in ("morrow_and_det", "multiplicities", "linking", "edge_determinants"):
        out[n] = {"status": "not_applicable", "failures": []}
    return out
