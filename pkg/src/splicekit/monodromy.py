"""Braid monodromy and the Artin action on the free group.

Conventions, fixed here once:

* strands/punctures are ``0..n-1`` and the free generators ``x_1..x_n``
  (``x_{j+1}`` loops around puncture ``j``);
* ``sigma_i`` (``1 <= i <= n-1``) exchanges punctures ``i-1`` and ``i`` and
  acts by ``x_i -> x_i x_{i+1} x_i^-1``, ``x_{i+1} -> x_i``;
* a braid word acts letter by letter from the left end: the endomorphism
  of ``w1 w2`` is ``action(w2) o action(w1)``.

The Artin representation is faithful, so two braid words are equal exactly
when their endomorphisms agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

from . import kernels

__all__ = [
    "BraidWord",
    "FreeGroupEndo",
    "artin_action",
    "braids_equal",
    "permutation",
    "local_monodromies",
    "h_infinity",
    "product_of_local",
    "free_probe_detail",
    "free_probe",
    "ProbeResult",
]

Word = Tuple[int, ...]


def _inv(word: Sequence[int]) -> Word:
    return tuple(-l for l in reversed(word))


@dataclass(frozen=True)
class BraidWord:
    """A word in ``sigma_i^{±1}`` on ``n`` strands; letters are signed
    indices (``2`` is ``sigma_2``, ``-1`` is ``sigma_1^-1``)."""

    n: int
    letters: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(l) for l in self.letters))
        if self.n < 1:
            raise ValueError("a braid needs at least one strand")
        for l in self.letters:
            if l == 0 or abs(l) > self.n - 1:
                raise ValueError(f"generator index {l} out of range for {self.n} strands")

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.n != other.n:
            raise ValueError("strand counts differ")
        return BraidWord(self.n, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.n, _inv(self.letters))

    def to_list(self) -> List[int]:
        return list(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"s{abs(l)}" + ("^-1" if l < 0 else "") for l in self.letters)


@dataclass(frozen=True)
class FreeGroupEndo:
    """Images of ``x_1..x_n`` as freely reduced words."""

    n: int
    images: Tuple[Word, ...]

    @classmethod
    def identity(cls, n: int) -> "FreeGroupEndo":
        return cls(n, tuple((j,) for j in range(1, n + 1)))

    def table(self) -> List[Word]:
        """Substitution table in the kernel layout (``tab[n + l]``)."""
        tab: List[Word] = [()] * (2 * self.n + 1)
        for j, w in enumerate(self.images, 1):
            tab[self.n + j] = w
            tab[self.n - j] = _inv(w)
        return tab

    def apply(self, word: Sequence[int]) -> Word:
        return tuple(kernels.substitute(list(word), self.table(), self.n))

    def then(self, other: "FreeGroupEndo") -> "FreeGroupEndo":
        """``other o self``: first ``self``, then ``other``."""
        tab = other.table()
        return FreeGroupEndo(self.n, tuple(
            tuple(kernels.substitute(list(w), tab, self.n)) for w in self.images))

    def is_identity(self) -> bool:
        return self == FreeGroupEndo.identity(self.n)

    def to_dict(self) -> dict:
        return {"n": self.n, "images": [list(w) for w in self.images]}


def _sigma(n: int, letter: int) -> FreeGroupEndo:
    i = abs(letter)
    im = [(j,) for j in range(1, n + 1)]
    if letter > 0:
        im[i - 1] = (i, i + 1, -i)
        im[i] = (i,)
    else:
        im[i - 1] = (i + 1,)
        im[i] = (-(i + 1), i, i + 1)
    return FreeGroupEndo(n, tuple(im))


def artin_action(w: BraidWord) -> FreeGroupEndo:
    """Endomorphism of the free group of rank ``n`` induced by ``w``."""
    e = FreeGroupEndo.identity(w.n)
    for l in w.letters:
        e = e.then(_sigma(w.n, l))
    return e


def braids_equal(w1: BraidWord, w2: BraidWord) -> bool:
    if w1.n != w2.n:
        raise ValueError("strand counts differ")
    return artin_action(w1) == artin_action(w2)


def permutation(w: BraidWord) -> Tuple[int, ...]:
    """``perm[j]`` is the final position of the strand starting at ``j``."""
    pos = list(range(w.n))  # pos[j] = current position of strand j
    for l in w.letters:
        i = abs(l)
        for j in range(w.n):
            if pos[j] == i - 1:
                pos[j] = i
            elif pos[j] == i:
                pos[j] = i - 1
    return tuple(pos)


def _h(r: int, i: int) -> BraidWord:
    up = tuple(range(1, i))
    return BraidWord(r + 1, up + (i, i) + tuple(-j for j in reversed(up)))


def local_monodromies(r: int) -> List[BraidWord]:
    """``h_i = s1 ... s_{i-1} s_i^2 s_{i-1}^-1 ... s1^-1`` on ``r+1`` strands."""
    if r < 1:
        raise ValueError("r >= 1 required")
    return [_h(r, i) for i in range(1, r + 1)]


def h_infinity(r: int) -> BraidWord:
    """``s1 s2 ... s_r s_r ... s1``."""
    if r < 1:
        raise ValueError("r >= 1 required")
    up = tuple(range(1, r + 1))
    return BraidWord(r + 1, up + tuple(reversed(up)))


def product_of_local(r: int) -> BraidWord:
    """The concatenation ``h_r h_{r-1} ... h_1``."""
    out = BraidWord(r + 1)
    for h in reversed(local_monodromies(r)):
        out = out * h
    return out


@dataclass(frozen=True)
class ProbeResult:
    ok: bool
    words_checked: int
    candidates: int
    backend: str
    counterexample: Tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {"ok": self.ok, "words_checked": self.words_checked,
                "candidates": self.candidates, "backend": self.backend,
                "counterexample": list(self.counterexample)}


def free_probe_detail(r: int, maxlen: int, backend=None) -> ProbeResult:
    """Check every freely reduced word of length ``1..maxlen`` in the
    ``h_i^{±1}`` for a nontrivial Artin action.

    The walk tracks only the image of ``x_1`` along shared prefixes; words
    that fix ``x_1`` are re-checked with the full endomorphism.
    """
    if r < 2 or maxlen < 1:
        raise ValueError("need r >= 2 and maxlen >= 1")
    kern = backend or kernels
    n = r + 1
    ends = [artin_action(h) for h in local_monodromies(r)]
    tables = [None] * (2 * r + 1)
    tables[r] = FreeGroupEndo.identity(n).table()
    for i, e in enumerate(ends, 1):
        tables[r + i] = e.table()
        tables[r - i] = artin_action(local_monodromies(r)[i - 1].inverse()).table()
    count, cands = kern.probe(tables, r, n, maxlen, [1])
    for word in cands:
        e = FreeGroupEndo.identity(n)
        for g in word:
            h = local_monodromies(r)[abs(g) - 1]
            e = e.then(artin_action(h if g > 0 else h.inverse()))
        if e.is_identity():
            return ProbeResult(False, count, len(cands), kern.BACKEND, tuple(word))
    return ProbeResult(True, count, len(cands), kern.BACKEND)


def free_probe(r: int, maxlen: int) -> bool:
    return free_probe_detail(r, maxlen).ok
