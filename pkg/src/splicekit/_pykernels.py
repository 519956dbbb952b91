"""Pure-Python free-group kernels (reference implementation).

Words are sequences of nonzero ints: ``j`` is the generator ``x_j`` and
``-j`` its inverse.  A substitution table ``tab`` for rank ``n`` is a list
of length ``2n + 1`` with ``tab[n + l]`` the image word of the letter
``l`` (``tab[n]`` is unused).
"""

from typing import List, Sequence, Tuple

BACKEND = "python"


def free_reduce(word: Sequence[int]) -> List[int]:
    out: List[int] = []
    for l in word:
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(l)
    return out


def substitute(word: Sequence[int], tab: Sequence[Sequence[int]], n: int) -> List[int]:
    """Freely reduced image of ``word`` under the letter substitution ``tab``."""
    out: List[int] = []
    push = out.append
    pop = out.pop
    for l in word:
        for m in tab[n + l]:
            if out and out[-1] == -m:
                pop()
            else:
                push(m)
    return out


def probe(tables: Sequence[Sequence[Sequence[int]]], m: int, n: int,
          maxlen: int, start: Sequence[int]) -> Tuple[int, List[Tuple[int, ...]]]:
    """Depth-first walk over freely reduced words in ``m`` letters.

    ``tables[m + g]`` is the substitution of letter ``g`` (``g = ±1..±m``).
    The image of ``start`` is carried along each prefix; the words whose
    image equals ``start`` are returned together with the number of words
    visited.
    """
    start = list(start)
    found: List[Tuple[int, ...]] = []
    count = 0
    letters = [g for g in range(1, m + 1)] + [-g for g in range(1, m + 1)]
    stack = [(start, 0, ())]
    while stack:
        word, last, prefix = stack.pop()
        if len(prefix) == maxlen:
            continue
        for g in letters:
            if g == -last:
                continue
            img = substitute(word, tables[m + g], n)
            count += 1
            w = prefix + (g,)
            if img == start:
                found.append(w)
            stack.append((img, g, w))
    found.sort(key=lambda w: (len(w), w))
    return count, found
