"""Exact arithmetic kernel.

Everything here works over :class:`fractions.Fraction` and Python's
arbitrary-precision integers; no floating point is ever involved.

Three groups of helpers live in this module:

* Hirzebruch--Jung continued fractions (:func:`hj_expand`, :func:`cf_eval`).
  A chain of weighted vertices ``-c0, -c1, ..., -ct`` has continued fraction
  ``c0 - 1/(c1 - 1/(... - 1/ct))``.  Evaluation is done right-to-left on the
  projective line over Q so that chains containing a zero entry evaluate
  without special cases; the point at infinity is the sentinel :data:`INF`.
* Integer determinants by Bareiss fraction-free elimination (:func:`det`).
* Exact linear solves over Q (:func:`solve`, :func:`inverse`).
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, List, Sequence, Union

__all__ = [
    "INF",
    "Infinity",
    "ProjRational",
    "ArithError",
    "SingularMatrixError",
    "as_fraction",
    "parse_rational",
    "format_rational",
    "hj_expand",
    "cf_eval",
    "chain_fraction",
    "det",
    "solve",
    "inverse",
    "matmul_vec",
]


class ArithError(ValueError):
    """Raised for invalid arithmetic input (e.g. an expansion of x <= 0)."""


class SingularMatrixError(ArithError):
    """Raised when a linear system has no unique solution."""


class Infinity:
    """The point at infinity of the projective rational line (a singleton)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (Infinity, ())


INF = Infinity()

ProjRational = Union[Fraction, Infinity]


def as_fraction(x) -> Fraction:
    """Coerce an int, Fraction or ``"num/den"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ArithError(f"not a rational number: {x!r}")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise ArithError(f"not a rational number: {x!r}")


def parse_rational(text: str) -> Fraction:
    """Parse ``"7"``, ``"-3/4"`` (no floats, no exponents)."""
    s = text.strip()
    if not s:
        raise ArithError("empty rational")
    num, sep, den = s.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ArithError(f"malformed rational {text!r}") from None
    if d == 0:
        raise ArithError(f"zero denominator in {text!r}")
    return Fraction(n, d)


def format_rational(x: Fraction) -> str:
    """Canonical ``"num/den"`` text; integers keep the ``/1`` suffix."""
    x = as_fraction(x)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Continued fractions
# ---------------------------------------------------------------------------

def hj_expand(x) -> List[int]:
    """Hirzebruch--Jung expansion ``[c0, c1, ..., ct]`` of a positive rational.

    Uses the ceiling recurrence: ``c = ceil(x)`` and, while ``x`` is not an
    integer, ``x <- 1/(c - x)``.  Every tail entry is therefore at least 2,
    which pins the expansion down uniquely.

    >>> hj_expand(Fraction(7, 5))
    [2, 2, 3]
    """
    x = as_fraction(x)
    if x <= 0:
        raise ArithError(f"hj_expand needs a positive rational, got {x}")
    out: List[int] = []
    while True:
        if x.denominator == 1:
            out.append(x.numerator)
            return out
        c = -((-x.numerator) // x.denominator)  # ceiling
        out.append(c)
        x = 1 / (c - x)


def cf_eval(cs: Sequence) -> ProjRational:
    """Evaluate ``c0 - 1/(c1 - 1/(... - 1/ct))`` in projective rationals.

    Conventions: ``x - 1/INF = x`` and ``x - 1/0 = INF``.  An entry equal to
    :data:`INF` is accepted; ``INF - 1/0`` has no value and raises
    :class:`ArithError` (it signals an invalid chain).
    """
    if len(cs) == 0:
        raise ArithError("cf_eval needs a nonempty sequence")
    vals = [c if isinstance(c, Infinity) else as_fraction(c) for c in cs]
    acc: ProjRational = vals[-1]
    for c in reversed(vals[:-1]):
        if isinstance(acc, Infinity):
            acc = c
        elif acc == 0:
            if isinstance(c, Infinity):
                raise ArithError("indeterminate form INF - 1/0 in chain")
            acc = INF
        elif isinstance(c, Infinity):
            acc = INF
        else:
            acc = c - 1 / acc
    return acc


def chain_fraction(weights: Sequence[int]) -> ProjRational:
    """Continued fraction of a weighted chain, based at its first vertex.

    A chain with weights ``w0, w1, ...`` has value ``cf_eval([-w0, -w1, ...])``.
    """
    return cf_eval([-as_fraction(w) for w in weights])


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

def _check_square(M) -> int:
    n = len(M)
    if n == 0:
        raise ArithError("matrix must have dimension >= 1")
    for row in M:
        if len(row) != n:
            raise ArithError("matrix is not square")
    return n


def det(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix (Bareiss elimination).

    All intermediate quantities are integers; the division at each step is
    exact by Sylvester's identity.
    """
    n = _check_square(M)
    a = [[int(v) for v in row] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (akk * rowi[j] - aik * rowk[j]) // prev
            rowi[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def solve(M: Sequence[Sequence], b: Sequence) -> List[Fraction]:
    """Exact solution of ``M x = b`` over Q by Gauss--Jordan elimination."""
    n = _check_square(M)
    if len(b) != n:
        raise ArithError("right-hand side has the wrong length")
    a = [[as_fraction(v) for v in row] + [as_fraction(bv)] for row, bv in zip(M, b)]
    _eliminate(a, n)
    return [a[i][n] for i in range(n)]


def inverse(M: Sequence[Sequence]) -> List[List[Fraction]]:
    """Exact inverse of a nonsingular square matrix over Q."""
    n = _check_square(M)
    a = [
        [as_fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
        for i, row in enumerate(M)
    ]
    _eliminate(a, n)
    return [row[n:] for row in a]


def _eliminate(a: List[List[Fraction]], n: int) -> None:
    """Reduce the augmented matrix ``a`` in place to ``[I | X]``."""
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        pivot_row = a[col]
        inv = 1 / pivot_row[col]
        if inv != 1:
            pivot_row[:] = [v * inv for v in pivot_row]
        for r in range(n):
            if r != col:
                f = a[r][col]
                if f:
                    row = a[r]
                    for j in range(col, len(row)):
                        if pivot_row[j]:
                            row[j] -= f * pivot_row[j]


def matmul_vec(M: Sequence[Sequence], x: Iterable) -> List[Fraction]:
    """Matrix-vector product with exact arithmetic."""
    xs = list(x)
    return [sum((as_fraction(m) * v for m, v in zip(row, xs)), Fraction(0)) for row in M]


def gcd_all(values: Iterable[int]) -> int:
    """gcd of a collection of integers (0 for an empty collection)."""
    g = 0
    for v in values:
        g = math.gcd(g, int(v))
    return g
