"""Topology of the irregular fibres of the non-isotrivial family (F1).

Notation: ``C(n)`` is the affine line with ``n`` punctures (``C* = C(1)``,
``C = C(0)``).  A fibre is a list of such components, some pairs of which
meet in one normal crossing; the rest are disjoint.  The regular fibre is
``C(r+1)``.

The classifier is a rule table.  Two identities are checked on its output:

* the component count identity ``sum_c (components(F_c) - 1) = delta - 1``
  with ``delta = r + 2`` horizontal curves;
* the Euler characteristic balance ``sum_c (chi(F_c) - chi(F_gen)) =
  chi(C^2) - chi(C) chi(F_gen)``, i.e. ``sum_c (chi(F_c) + r) = r + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .arith import format_rational
from .splice import SimpleTypeParams, ValidationError, require_valid

__all__ = [
    "Component",
    "FibreTopology",
    "GENERIC",
    "SPECIAL",
    "UNKNOWN",
    "classify_irregular_fibres",
    "suzuki_check",
    "euler_balance_check",
    "extra_fibre_expected",
    "attach_values",
    "fibres_to_json",
]

GENERIC = "Generic"
SPECIAL = "Special"
UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Component:
    """``C(n)``: a line with ``n`` punctures."""

    punctures: int

    @property
    def euler(self) -> int:
        return 1 - self.punctures

    def __str__(self) -> str:
        return {0: "C", 1: "C*"}.get(self.punctures, f"C({self.punctures})")

    def to_dict(self) -> dict:
        return {"type": "C", "punctures": self.punctures}


@dataclass(frozen=True)
class FibreTopology:
    """One irregular fibre.

    ``value`` names the fibre's f-value symbolically (``beta_i``, ``0``,
    ``alpha_0*prod(beta_i^a_i)``, ``alpha_0``); ``crossings`` lists pairs
    of component indices meeting in a normal crossing (empty means all
    components are disjoint).
    """

    index: int
    value: str
    components: Tuple[Component, ...]
    crossings: Tuple[Tuple[int, int], ...]
    reduced: bool
    locus: str
    notes: Tuple[str, ...] = ()
    numeric_value: Optional[Fraction] = None

    @property
    def count(self) -> int:
        return len(self.components)

    @property
    def euler(self) -> int:
        return sum(c.euler for c in self.components) - len(self.crossings)

    @property
    def gluing(self) -> str:
        return "NormalCrossing" if self.crossings else "AllDisjoint"

    def describe(self) -> str:
        parts = [str(c) for c in self.components]
        if not self.crossings:
            return " u ".join(parts)
        (i, j), = self.crossings
        rest = [p for n, p in enumerate(parts) if n not in (i, j)]
        glued = f"{parts[i]} + {parts[j]}"
        if rest:
            return " u ".join(rest + [f"({glued})"])
        return glued

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "value": self.value,
            "numeric_value": None if self.numeric_value is None else format_rational(self.numeric_value),
            "components": [c.to_dict() for c in self.components],
            "gluing": self.gluing,
            "crossings": [list(p) for p in self.crossings],
            "reduced": self.reduced,
            "locus": self.locus,
            "notes": list(self.notes),
            "shape": self.describe(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FibreTopology":
        nv = d.get("numeric_value")
        return cls(d["index"], d["value"],
                   tuple(Component(c["punctures"]) for c in d["components"]),
                   tuple(tuple(p) for p in d["crossings"]), d["reduced"], d["locus"],
                   tuple(d.get("notes", ())), None if nv is None else Fraction(nv))


def _fib(index, value, punct, crossing, reduced, locus, notes=()):
    comps = tuple(Component(n) for n in punct)
    return FibreTopology(index, value, comps, (crossing,) if crossing else (), reduced, locus,
                         tuple(notes))


def extra_fibre_expected(params: SimpleTypeParams) -> bool:
    """An additional (r+1)-st irregular fibre appears iff ``P = 1`` or ``q = 1``."""
    return params.P == 1 or params.q == 1


def _a_k(params: SimpleTypeParams) -> Tuple[int, int]:
    """Write ``{P/Q, q/p}`` as ``{1/a, (ak+1)/k}``."""
    if params.P == 1:
        return params.Q, params.p
    return params.p, params.Q


def classify_irregular_fibres(params: SimpleTypeParams, locus: str = GENERIC) -> List[FibreTopology]:
    """Irregular fibres of an F1 polynomial on the given locus."""
    require_valid(params)
    if params.family != "F1":
        raise ValidationError(["fibre topology is tabulated for F1 only"])
    if locus not in (GENERIC, SPECIAL):
        raise ValueError(f"locus must be {GENERIC!r} or {SPECIAL!r}")
    r = params.r
    out: List[FibreTopology] = []
    for i, ai in enumerate(params.a, 1):
        if ai == 1:
            out.append(_fib(i, f"beta_{i}", (r - 1, 1), (0, 1), True, GENERIC))
        else:
            out.append(_fib(i, f"beta_{i}", (r, 1), None, True, GENERIC))
    if not extra_fibre_expected(params):
        if locus == GENERIC:
            reduced = params.Q == 1 or params.p == 1
            out.append(_fib(r, "0", (r, 1, 0), None, reduced, GENERIC))
        else:
            out.append(_fib(r, "0", (r, 0, 0), (1, 2), False, SPECIAL))
        return out
    a, kk = _a_k(params)
    extra_value = "alpha_0*prod(beta_i^a_i)" if params.P == 1 else "alpha_0"
    fl = GENERIC if locus == GENERIC else UNKNOWN
    notes = () if locus == GENERIC else (
        "topology on special loci is not tabulated for P = 1 or q = 1; generic shape shown",)
    if a > 1:
        out.append(_fib(r, "0", (r, 1), None, True, fl, notes))
    else:
        out.append(_fib(r, "0", (r - 1, 1), (0, 1), True, fl, notes))
    if kk > 1:
        out.append(_fib(r + 1, extra_value, (r + 1, 0), None, True, fl, notes))
    else:
        out.append(_fib(r + 1, extra_value, (r, 0), (0, 1), True, fl, notes))
    return out


def suzuki_check(params: SimpleTypeParams, locus: str = GENERIC,
                 fibres: Optional[Sequence[FibreTopology]] = None) -> bool:
    """``sum (components - 1) == delta - 1`` with ``delta = r + 2``."""
    if fibres is None:
        fibres = classify_irregular_fibres(params, locus)
    return sum(f.count - 1 for f in fibres) == params.r + 1


def euler_balance_check(params: SimpleTypeParams, locus: str = GENERIC,
                        fibres: Optional[Sequence[FibreTopology]] = None) -> bool:
    """``sum (chi(F_c) + r) == r + 1`` (Euler characteristic of the plane)."""
    if fibres is None:
        fibres = classify_irregular_fibres(params, locus)
    r = params.r
    return sum(f.euler + r for f in fibres) == r + 1


def attach_values(fibres: Sequence[FibreTopology], inst) -> List[FibreTopology]:
    """Fill in ``numeric_value`` from a :class:`~splicekit.poly.FamilyInstance`."""
    out = []
    a0 = inst.alphas[0] if inst.alphas else None
    for f in fibres:
        if f.value == "0":
            v = Fraction(0)
        elif f.value.startswith("beta_"):
            v = inst.betas[int(f.value[5:]) - 1]
        elif f.value == "alpha_0":
            v = a0
        else:
            v = a0
            for b, ai in zip(inst.betas, inst.params.a):
                v *= b ** ai
        out.append(FibreTopology(f.index, f.value, f.components, f.crossings, f.reduced,
                                 f.locus, f.notes, v))
    return out


def fibres_to_json(fibres: Sequence[FibreTopology]) -> List[dict]:
    return [f.to_dict() for f in fibres]
