"""Sparse bivariate polynomials over Q and the explicit polynomial families.

:class:`MultiPoly` is a small immutable dictionary-of-monomials type.  The
family builders write the three normal forms with exact rational
coefficients::

    Case 1:  s = a_0 + a_1 x + ... + a_{k-1} x^{k-1} + x^k y
             u = x^(q-Qk) s^Q,   w = x^(p-Pk) s^P
    Case 2:  s = a_0 + a_1 y + ... + a_{k-1} y^{k-1} + x y^k
             u = y^(Q-qk) s^q,   w = y^(P-pk) s^p

    F1:  f = u + w * prod (b_i - u)^{a_i}       g = u
    F2:  f =     w * prod (b_i - u)^{a_i}       g = u
    F3:  f = y * prod (x - b_i)^{a_i} + h(x)    g = x

Degrees of large instances are computed with :class:`TopBand`, which keeps
only the homogeneous components near the top degree.  That is enough to
determine the total degree exactly, and when a cancellation eats the whole
band the computation is redone with a wider one.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .arith import as_fraction, format_rational
from .splice import SimpleTypeParams, ValidationError, _k_and_case, validate

__all__ = [
    "MultiPoly",
    "ZERO_DEGREE",
    "TopBand",
    "BandExhausted",
    "FamilyInstance",
    "FamilyPolys",
    "DegenerateSample",
    "IrregularValues",
    "build_family",
    "family_degree",
    "degree_check",
    "fiber_inverse_check",
    "fiber_inverse_sweep",
    "irregular_values",
    "rescaled_instance",
    "rescale_check",
    "add_horizontal",
    "strip_horizontal_check",
    "russell",
    "x_plus_s_squared",
    "fixtures",
]

Mono = Tuple[int, int]
Coeff = Union[int, Fraction]


class _ZeroDegree:
    """Degree of the zero polynomial (compares below every integer)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ZERO_DEGREE"

    def __str__(self) -> str:
        return "zero"

    def __lt__(self, other):
        return other is not self

    def __gt__(self, other):
        return False

    def __le__(self, other):
        return True

    def __ge__(self, other):
        return other is self


ZERO_DEGREE = _ZeroDegree()


class MultiPoly:
    """Immutable polynomial in ``x, y`` with Fraction coefficients."""

    __slots__ = ("_t", "_hash")

    def __init__(self, terms: Optional[Dict[Mono, Coeff]] = None):
        t: Dict[Mono, Fraction] = {}
        if terms:
            for (i, j), c in terms.items():
                if i < 0 or j < 0:
                    raise ValueError(f"negative exponent in monomial {(i, j)}")
                c = as_fraction(c)
                if c:
                    t[(int(i), int(j))] = c
        self._t = t
        self._hash = None

    @classmethod
    def _raw(cls, t: Dict[Mono, Fraction]) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj._t = t
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def constant(cls, c: Coeff) -> "MultiPoly":
        return cls({(0, 0): c})

    @classmethod
    def x(cls) -> "MultiPoly":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "MultiPoly":
        return cls({(0, 1): 1})

    @classmethod
    def monomial(cls, i: int, j: int, c: Coeff = 1) -> "MultiPoly":
        return cls({(i, j): c})

    @classmethod
    def univariate(cls, coeffs: Sequence[Coeff], var: str = "x") -> "MultiPoly":
        """``sum coeffs[i] * var^i``."""
        if var == "x":
            return cls({(i, 0): c for i, c in enumerate(coeffs)})
        return cls({(0, i): c for i, c in enumerate(coeffs)})

    # container protocol
    @property
    def terms(self) -> Dict[Mono, Fraction]:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def coeff(self, i: int, j: int) -> Fraction:
        return self._t.get((i, j), Fraction(0))

    def is_zero(self) -> bool:
        return not self._t

    # arithmetic
    @staticmethod
    def _lift(other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            return other
        return MultiPoly.constant(other)

    def __add__(self, other) -> "MultiPoly":
        other = self._lift(other)
        t = dict(self._t)
        for m, c in other._t.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return MultiPoly._raw(t)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw({m: -c for m, c in self._t.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            c = as_fraction(other)
            if not c:
                return MultiPoly()
            return MultiPoly._raw({m: v * c for m, v in self._t.items()})
        t: Dict[Mono, Fraction] = {}
        for (i1, j1), c1 in self._t.items():
            for (i2, j2), c2 in other._t.items():
                m = (i1 + i2, j1 + j2)
                t[m] = t.get(m, 0) + c1 * c2
        return MultiPoly._raw({m: c for m, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = MultiPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self._t == other._t
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # queries
    def total_degree(self):
        """Largest ``i + j`` over the support; :data:`ZERO_DEGREE` for 0."""
        if not self._t:
            return ZERO_DEGREE
        return max(i + j for i, j in self._t)

    def degree_in(self, var: str):
        if not self._t:
            return ZERO_DEGREE
        k = 0 if var == "x" else 1
        return max(m[k] for m in self._t)

    def homogeneous_part(self, d: int) -> "MultiPoly":
        return MultiPoly._raw({m: c for m, c in self._t.items() if m[0] + m[1] == d})

    def evaluate(self, x: Coeff, y: Coeff) -> Fraction:
        x, y = as_fraction(x), as_fraction(y)
        xp: Dict[int, Fraction] = {}
        yp: Dict[int, Fraction] = {}
        total = Fraction(0)
        for (i, j), c in self._t.items():
            if i not in xp:
                xp[i] = x ** i
            if j not in yp:
                yp[j] = y ** j
            total += c * xp[i] * yp[j]
        return total

    def scale_variables(self, cx: Coeff, cy: Coeff) -> "MultiPoly":
        """``f(cx * x, cy * y)``."""
        cx, cy = as_fraction(cx), as_fraction(cy)
        return MultiPoly._raw({(i, j): c * cx ** i * cy ** j for (i, j), c in self._t.items()})

    def substitute(self, gx: "MultiPoly", gy: "MultiPoly") -> "MultiPoly":
        """Exact composition ``f(gx, gy)``."""
        gx, gy = self._lift(gx), self._lift(gy)
        xs: Dict[int, MultiPoly] = {0: MultiPoly.constant(1)}
        ys: Dict[int, MultiPoly] = {0: MultiPoly.constant(1)}

        def pw(cache, base, n):
            if n not in cache:
                # build from the largest cached power below n
                m = max(e for e in cache if e <= n)
                cache[n] = cache[m] * base ** (n - m)
            return cache[n]

        out = MultiPoly()
        for (i, j), c in sorted(self._t.items()):
            out = out + pw(xs, gx, i) * pw(ys, gy, j) * c
        return out

    # text form
    def sorted_terms(self) -> List[Tuple[Mono, Fraction]]:
        """Canonical order: total degree descending, then x-degree descending."""
        return sorted(self._t.items(), key=lambda mc: (-(mc[0][0] + mc[0][1]), -mc[0][0]))

    def to_text(self) -> str:
        """``"c x^i y^j + ..."``; coefficients are ``num/den`` (``/1`` kept)."""
        if not self._t:
            return "0"
        return " + ".join(f"{format_rational(c)} x^{i} y^{j}" for (i, j), c in self.sorted_terms())

    @classmethod
    def parse(cls, text: str) -> "MultiPoly":
        """Parse :meth:`to_text` output.  Also accepts the shorthand forms
        ``x``, ``y^2``, ``3/2 x y`` and bare constants in each term."""
        s = text.strip()
        if not s:
            raise ValueError("empty polynomial text")
        if s == "0":
            return cls()
        out: Dict[Mono, Fraction] = {}
        for term in s.split(" + "):
            toks = term.split()
            if not toks:
                raise ValueError(f"empty term in {text!r}")
            coef = Fraction(1)
            i = j = 0
            for n, tok in enumerate(toks):
                m = _VAR_RE.fullmatch(tok)
                if m:
                    e = int(m.group(2)) if m.group(2) is not None else 1
                    if m.group(1) == "x":
                        i += e
                    else:
                        j += e
                elif n == 0:
                    sign = -1 if tok.startswith("-") and tok[1:] in ("x", "y") else None
                    if sign:
                        coef = Fraction(-1)
                        if tok[1:] == "x":
                            i += 1
                        else:
                            j += 1
                    else:
                        coef = as_fraction(tok)
                else:
                    raise ValueError(f"bad token {tok!r} in {text!r}")
            out[(i, j)] = out.get((i, j), 0) + coef
        return cls(out)

    def __repr__(self) -> str:
        return f"MultiPoly({self.to_text()!r})"

    def __str__(self) -> str:
        return self.to_text()


_VAR_RE = re.compile(r"([xy])(?:\^(\d+))?")


# ---------------------------------------------------------------------------
# Top-degree bands
# ---------------------------------------------------------------------------

class BandExhausted(ArithmeticError):
    """A cancellation removed every term the band knew about."""


class TopBand:
    """A polynomial known exactly in total degrees ``>= floor``.

    ``floor`` is ``None`` when the polynomial is known completely.  The
    degree ``>= floor`` part of a product depends only on the bands of
    the factors, so ``floor`` is propagated as ``max(f1 + d2, f2 + d1)``
    and everything below it is discarded.
    """

    __slots__ = ("poly", "floor")

    def __init__(self, poly: MultiPoly, floor: Optional[int] = None):
        if floor is not None:
            poly = MultiPoly._raw({m: c for m, c in poly.items() if m[0] + m[1] >= floor})
            if poly.is_zero():
                raise BandExhausted("no known terms left in band")
        self.poly = poly
        self.floor = floor

    @classmethod
    def of(cls, poly: MultiPoly, width: int) -> "TopBand":
        d = poly.total_degree()
        if d is ZERO_DEGREE:
            return cls(poly, None)
        return cls(poly, d - width)

    @property
    def degree(self):
        return self.poly.total_degree()

    def _lift(self, other) -> "TopBand":
        if isinstance(other, TopBand):
            return other
        return TopBand(MultiPoly.constant(other), None)

    def __add__(self, other) -> "TopBand":
        other = self._lift(other)
        floors = [f for f in (self.floor, other.floor) if f is not None]
        floor = max(floors) if floors else None
        return TopBand(self.poly + other.poly, floor)

    __radd__ = __add__

    def __neg__(self) -> "TopBand":
        return TopBand(-self.poly, self.floor)

    def __sub__(self, other) -> "TopBand":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "TopBand":
        return self._lift(other) - self

    def __mul__(self, other) -> "TopBand":
        other = self._lift(other)
        if self.poly.is_zero() or other.poly.is_zero():
            return TopBand(MultiPoly(), None)
        d1, d2 = self.degree, other.degree
        cands = []
        if self.floor is not None:
            cands.append(self.floor + d2)
        if other.floor is not None:
            cands.append(other.floor + d1)
        floor = max(cands) if cands else None
        if floor is None:
            return TopBand(self.poly * other.poly, None)
        a = _truncate(self.poly, floor - d2)
        b = _truncate(other.poly, floor - d1)
        return TopBand(_truncated_product(a, b, floor), floor)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "TopBand":
        result = TopBand(MultiPoly.constant(1), None)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result


def _truncate(p: MultiPoly, floor: int) -> MultiPoly:
    return MultiPoly._raw({m: c for m, c in p.items() if m[0] + m[1] >= floor})


def _truncated_product(a: MultiPoly, b: MultiPoly, floor: int) -> MultiPoly:
    t: Dict[Mono, Fraction] = {}
    bl = list(b.items())
    for (i1, j1), c1 in a.items():
        d1 = i1 + j1
        for (i2, j2), c2 in bl:
            if d1 + i2 + j2 < floor:
                continue
            m = (i1 + i2, j1 + j2)
            t[m] = t.get(m, 0) + c1 * c2
    return MultiPoly._raw({m: c for m, c in t.items() if c})


# ---------------------------------------------------------------------------
# Family instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyInstance:
    """Discrete parameters plus rational coefficient choices.

    ``alphas`` are ``a_0..a_{k-1}`` of ``s`` (F1/F2), ``betas`` the r-1
    distinct nonzero values, ``hcoeffs`` the coefficients of ``h(x)``
    (F3 only, lowest degree first, fewer than ``A`` of them).
    """

    params: SimpleTypeParams
    alphas: Tuple[Fraction, ...] = ()
    betas: Tuple[Fraction, ...] = ()
    hcoeffs: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        for name in ("alphas", "betas", "hcoeffs"):
            object.__setattr__(self, name, tuple(as_fraction(v) for v in getattr(self, name)))

    @property
    def k(self) -> Optional[int]:
        if self.params.family == "F3":
            return None
        return _k_and_case(self.params.P, self.params.Q, self.params.p, self.params.q)[0]

    @property
    def case(self) -> Optional[int]:
        if self.params.family == "F3":
            return None
        return _k_and_case(self.params.P, self.params.Q, self.params.p, self.params.q)[1]

    def errors(self) -> List[str]:
        errs = validate(self.params)
        if errs:
            return errs
        r = self.params.r
        if len(self.betas) != r - 1:
            errs.append(f"expected {r - 1} betas, got {len(self.betas)}")
        if any(b == 0 for b in self.betas):
            errs.append("betas must be nonzero")
        if len(set(self.betas)) != len(self.betas):
            errs.append("betas must be distinct")
        if self.params.family == "F3":
            if self.alphas:
                errs.append("F3 takes no alphas")
            h = list(self.hcoeffs)
            while h and h[-1] == 0:
                h.pop()
            if len(h) > self.params.A:
                errs.append(f"deg h = {len(h) - 1} must be < A = {self.params.A}")
        else:
            if self.hcoeffs:
                errs.append(f"{self.params.family} takes no h coefficients")
            if len(self.alphas) != self.k:
                errs.append(f"expected k = {self.k} alphas, got {len(self.alphas)}")
        return errs

    def require_valid(self) -> None:
        errs = self.errors()
        if errs:
            raise ValidationError(errs)

    def to_dict(self) -> dict:
        return {
            "params": self.params.to_dict(),
            "alphas": [format_rational(v) for v in self.alphas],
            "betas": [format_rational(v) for v in self.betas],
            "hcoeffs": [format_rational(v) for v in self.hcoeffs],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FamilyInstance":
        return cls(SimpleTypeParams.from_dict(d["params"]), tuple(d.get("alphas", ())),
                   tuple(d.get("betas", ())), tuple(d.get("hcoeffs", ())))


@dataclass(frozen=True)
class FamilyPolys:
    s: Optional[MultiPoly]
    f: MultiPoly
    g: MultiPoly

    def to_dict(self) -> dict:
        return {"s": None if self.s is None else self.s.to_text(),
                "f": self.f.to_text(), "g": self.g.to_text()}

    @classmethod
    def from_dict(cls, d: dict) -> "FamilyPolys":
        return cls(None if d["s"] is None else MultiPoly.parse(d["s"]),
                   MultiPoly.parse(d["f"]), MultiPoly.parse(d["g"]))


def _exponents(inst: FamilyInstance) -> Tuple[int, int, int, int]:
    """``(e_u, S_u, e_w, S_w)`` with ``u = v^e_u s^S_u``, ``w = v^e_w s^S_w``
    where ``v`` is ``x`` in Case 1 and ``y`` in Case 2."""
    pr = inst.params
    k = inst.k
    if inst.case == 1:
        return pr.q - pr.Q * k, pr.Q, pr.p - pr.P * k, pr.P
    return pr.Q - pr.q * k, pr.q, pr.P - pr.p * k, pr.p


def _expressions(inst: FamilyInstance, X, Y, const: Callable):
    """Evaluate the family formulas in any ring supplied by ``X, Y, const``."""
    pr = inst.params
    one = const(1)
    if pr.family == "F3":
        prod = one
        for b, ai in zip(inst.betas, pr.a):
            prod = prod * (X - const(b)) ** ai
        h = const(0)
        for i, c in enumerate(inst.hcoeffs):
            if c:
                h = h + const(c) * X ** i
        return None, Y * prod + h, X
    k = inst.k
    v, other = (X, Y) if inst.case == 1 else (Y, X)
    s = other * v ** k
    for j, aj in enumerate(inst.alphas):
        if aj:
            s = s + const(aj) * v ** j
    eu, su, ew, sw = _exponents(inst)
    u = v ** eu * s ** su
    w = v ** ew * s ** sw
    prod = one
    for b, ai in zip(inst.betas, pr.a):
        prod = prod * (const(b) - u) ** ai
    f = w * prod
    if pr.family == "F1":
        f = u + f
    return s, f, u


def build_family(inst: FamilyInstance) -> FamilyPolys:
    """Expanded ``s, f, g`` of the instance."""
    inst.require_valid()
    s, f, g = _expressions(inst, MultiPoly.x(), MultiPoly.y(), MultiPoly.constant)
    return FamilyPolys(s, f, g)


def expected_degree(params: SimpleTypeParams) -> int:
    if params.family == "F3":
        return params.A + 1
    return params.A * (params.Q + params.q) + params.P + params.p


def family_degree(inst: FamilyInstance, width: int = 2, max_width: int = 64) -> int:
    """Exact total degree of ``f`` from its top homogeneous band.

    The band starts ``width`` degrees deep and is doubled whenever a
    cancellation exhausts it; past ``max_width`` the polynomial is
    expanded in full.
    """
    inst.require_valid()
    while width <= max_width:
        try:
            X = TopBand.of(MultiPoly.x(), width)
            Y = TopBand.of(MultiPoly.y(), width)
            _, f, _ = _expressions(inst, X, Y, lambda c: TopBand.of(MultiPoly.constant(c), width))
            return f.degree
        except BandExhausted:
            width *= 2
    return build_family(inst).f.total_degree()


def degree_check(inst: FamilyInstance, expand: Optional[bool] = None) -> bool:
    """Compare the total degree of ``f`` with the closed form.

    ``expand`` forces full expansion (True) or the band method (False);
    by default full expansion is used when the expected degree is small.
    """
    want = expected_degree(inst.params)
    if expand is None:
        expand = want <= 40
    got = build_family(inst).f.total_degree() if expand else family_degree(inst)
    return got == want


# ---------------------------------------------------------------------------
# Fibre inverse
# ---------------------------------------------------------------------------

class DegenerateSample(ArithmeticError):
    """The sample point hits a zero denominator of the reconstruction."""


def _pow(base: Fraction, e: int) -> Fraction:
    if e < 0 and base == 0:
        raise DegenerateSample("negative power of zero")
    return base ** e


def fiber_inverse_check(inst: FamilyInstance, point: Tuple[Coeff, Coeff],
                        polys: Optional[FamilyPolys] = None) -> bool:
    """Reconstruct ``point`` from ``t = f(point)`` and ``u = g(point)``.

    Returns whether the reconstruction is exact; raises
    :class:`DegenerateSample` if a denominator vanishes.
    """
    if polys is None:
        polys = build_family(inst)
    x0, y0 = as_fraction(point[0]), as_fraction(point[1])
    pr = inst.params
    t = polys.f.evaluate(x0, y0)
    u = polys.g.evaluate(x0, y0)
    if pr.family == "F3":
        prod = Fraction(1)
        for b, ai in zip(inst.betas, pr.a):
            prod *= (u - b) ** ai
        if prod == 0:
            raise DegenerateSample("x hits a root of the product")
        h = sum((c * u ** i for i, c in enumerate(inst.hcoeffs)), Fraction(0))
        return (u, (t - h) / prod) == (x0, y0)
    prod = Fraction(1)
    for b, ai in zip(inst.betas, pr.a):
        prod *= (b - u) ** ai
    if prod == 0:
        raise DegenerateSample("u equals some beta")
    w = ((t - u) if pr.family == "F1" else t) / prod
    eu, su, ew, sw = _exponents(inst)
    d = eu * sw - su * ew  # +1 in Case 1, -1 in Case 2
    if abs(d) != 1:
        raise ArithmeticError(f"exponent matrix has determinant {d}")
    # inverse of [[eu, su], [ew, sw]] applied to (log u, log w)
    v = _pow(u, sw * d) * _pow(w, -su * d)
    s = _pow(u, -ew * d) * _pow(w, eu * d)
    if v == 0:
        raise DegenerateSample("reconstructed coordinate is zero")
    lower = sum((a * v ** j for j, a in enumerate(inst.alphas)), Fraction(0))
    other = (s - lower) / v ** inst.k
    rec = (v, other) if inst.case == 1 else (other, v)
    return rec == (x0, y0)


def random_rational(rng: random.Random, bound: int = 9, den: int = 5) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, den))


def fiber_inverse_sweep(inst: FamilyInstance, samples: int = 50, seed: int = 0,
                        max_tries: int = 10_000) -> Dict[str, int]:
    """Check ``samples`` non-degenerate random points; count everything."""
    polys = build_family(inst)
    rng = random.Random(seed)
    ok = bad = degenerate = 0
    tries = 0
    while ok + bad < samples and tries < max_tries:
        tries += 1
        pt = (random_rational(rng), random_rational(rng))
        try:
            if fiber_inverse_check(inst, pt, polys):
                ok += 1
            else:
                bad += 1
        except DegenerateSample:
            degenerate += 1
    return {"ok": ok, "failed": bad, "degenerate": degenerate}


# ---------------------------------------------------------------------------
# Irregular values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IrregularValues:
    values: Tuple[Fraction, ...]
    sources: Tuple[Tuple[str, Fraction], ...]
    non_generic: bool
    notes: Tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "values": [format_rational(v) for v in self.values],
            "sources": [[name, format_rational(v)] for name, v in self.sources],
            "non_generic": self.non_generic,
            "notes": list(self.notes),
        }


def irregular_values(inst: FamilyInstance) -> IrregularValues:
    """Irregular values of ``f`` for F1/F2 instances.

    F1: ``0`` and every ``beta_i``; if ``P = 1`` also
    ``alpha_0 * prod beta_i^{a_i}``; if ``q = 1`` also ``alpha_0``.
    F2: ``0``, plus ``alpha_0 * prod beta_i^{a_i}`` if ``P = 1``.
    Coincident values are merged and flag the instance as non-generic, as
    does ``alpha_0 = 0``.
    """
    inst.require_valid()
    pr = inst.params
    if pr.family == "F3":
        raise ValidationError(["irregular values are only tabulated for F1/F2"])
    src: List[Tuple[str, Fraction]] = [("zero", Fraction(0))]
    if pr.family == "F1":
        src += [(f"beta_{i}", b) for i, b in enumerate(inst.betas, 1)]
    a0 = inst.alphas[0]
    notes = []
    if pr.P == 1:
        extra = a0
        for b, ai in zip(inst.betas, pr.a):
            extra *= b ** ai
        src.append(("alpha_0*prod(beta_i^a_i)", extra))
    if pr.family == "F1" and pr.q == 1:
        src.append(("alpha_0", a0))
    vals = sorted({v for _, v in src})
    non_generic = len(vals) < len(src) or a0 == 0
    if len(vals) < len(src):
        notes.append("irregular values coincide")
    if a0 == 0:
        notes.append("alpha_0 = 0")
    return IrregularValues(tuple(vals), tuple(src), non_generic, tuple(notes))


# ---------------------------------------------------------------------------
# Rescaling
# ---------------------------------------------------------------------------

def rescale_weights(params: SimpleTypeParams) -> Tuple[int, int]:
    """``(B, C)`` with ``B = AQ+P-Q`` and ``C = Aq+p-q``."""
    A = params.A
    return A * params.Q + params.P - params.Q, A * params.q + params.p - params.q


def rescaled_instance(inst: FamilyInstance, lam: Coeff) -> FamilyInstance:
    """The instance whose polynomial is ``lam^-1 f(lam^B x, lam^-C y)``.

    ``beta_j`` becomes ``beta_j / lam``; ``alpha_j`` is multiplied by
    ``lam^((j-k)B + C)`` in Case 1 and by ``lam^((k-j)C - B)`` in Case 2.
    """
    lam = as_fraction(lam)
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    B, C = rescale_weights(inst.params)
    k = inst.k
    if inst.case == 1:
        alphas = tuple(a * lam ** ((j - k) * B + C) for j, a in enumerate(inst.alphas))
    else:
        alphas = tuple(a * lam ** ((k - j) * C - B) for j, a in enumerate(inst.alphas))
    return FamilyInstance(inst.params, alphas, tuple(b / lam for b in inst.betas), ())


def rescale_check(inst: FamilyInstance, lam: Coeff) -> bool:
    """``lam^-1 f(lam^B x, lam^-C y)`` equals the rescaled family member."""
    inst.require_valid()
    if inst.params.family == "F3":
        raise ValidationError(["rescaling is defined for F1/F2 only"])
    lam = as_fraction(lam)
    B, C = rescale_weights(inst.params)
    f = build_family(inst).f
    lhs = f.scale_variables(lam ** B, lam ** (-C)) * (1 / lam)
    return lhs == build_family(rescaled_instance(inst, lam)).f


# ---------------------------------------------------------------------------
# Adding a horizontal curve, fixtures
# ---------------------------------------------------------------------------

def add_horizontal(f: MultiPoly, coeffs: Sequence[Coeff]) -> MultiPoly:
    """``f(x, s)`` with ``s = c_0 + c_1 x + ... + c_{k-1} x^{k-1} + x^k y``."""
    k = len(coeffs)
    if k < 1:
        raise ValueError("need k >= 1 coefficients")
    s = MultiPoly.univariate(list(coeffs)) + MultiPoly.monomial(k, 1)
    return f.substitute(MultiPoly.x(), s)


def strip_horizontal_check(f: MultiPoly, coeffs: Sequence[Coeff],
                           point: Tuple[Coeff, Coeff]) -> bool:
    """Undo :func:`add_horizontal` at a point with ``x != 0``:
    ``add_horizontal(f)(x, (y - c(x)) / x^k) == f(x, y)``."""
    x0, y0 = as_fraction(point[0]), as_fraction(point[1])
    if x0 == 0:
        raise DegenerateSample("x = 0 is not in the localization")
    k = len(coeffs)
    low = sum((as_fraction(c) * x0 ** i for i, c in enumerate(coeffs)), Fraction(0))
    y1 = (y0 - low) / x0 ** k
    return add_horizontal(f, coeffs).evaluate(x0, y1) == f.evaluate(x0, y0)


def russell() -> MultiPoly:
    """``(y^2 s^4 + y (s + x y) s + 1)(y s^5 + 2 x y s^2 + x)`` with ``s = xy + 1``."""
    x, y = MultiPoly.x(), MultiPoly.y()
    s = x * y + 1
    return (y ** 2 * s ** 4 + y * (s + x * y) * s + 1) * (y * s ** 5 + 2 * x * y * s ** 2 + x)


def x_plus_s_squared(coeffs: Sequence[Coeff]) -> MultiPoly:
    """``x + s^2`` with ``s = c_0 + ... + c_{k-1} x^{k-1} + x^k y``."""
    x, y = MultiPoly.x(), MultiPoly.y()
    return add_horizontal(x + y ** 2, coeffs)


def fixtures() -> Dict[str, object]:
    """Named fixtures: the Russell polynomial and the ``x + s^2`` constructor."""
    return {"russell": russell(), "x_plus_s_squared": x_plus_s_squared}
