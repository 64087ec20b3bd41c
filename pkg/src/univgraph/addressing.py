"""Addresses in the perfect d-ary tree and the eating order on them.

An address is a tuple of digits in ``1..d``; the empty tuple is the root.
The eating order visits subtrees in post-order with children taken from the
largest digit down to ``1``, so leaf ``d...d`` is eaten first and the root last.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Tuple

Address = Tuple[int, ...]

ROOT: Address = ()

BEFORE = -1
EQUAL = 0
AFTER = 1


@lru_cache(maxsize=None)
def vertex_count(h: int, d: int) -> int:
    """Number of vertices of the perfect d-ary tree of height ``h`` (0 for h < 0)."""
    if h < 0:
        return 0
    return (d ** (h + 1) - 1) // (d - 1)


def check_address(v: Address, d: int, h: int) -> None:
    if len(v) > h:
        raise ValueError(f"address {render(v)} deeper than height {h}")
    for digit in v:
        if not 1 <= digit <= d:
            raise ValueError(f"digit {digit} out of range 1..{d}")


def children(v: Address, d: int, h: int) -> list[Address]:
    if len(v) >= h:
        return []
    return [v + (i,) for i in range(1, d + 1)]


def iter_subtree(v: Address, d: int, h: int) -> Iterator[Address]:
    """``v`` and all its descendants, in eating order."""
    if len(v) < h:
        for i in range(d, 0, -1):
            yield from iter_subtree(v + (i,), d, h)
    yield v


def descendants(v: Address, d: int, h: int) -> set[Address]:
    out = set(iter_subtree(v, d, h))
    out.discard(v)
    return out


def level_rank(v: Address, d: int) -> int:
    """Lexicographic rank of ``v`` among the addresses of its level (0-based)."""
    r = 0
    for digit in v:
        r = r * d + (digit - 1)
    return r


def from_rank(rank: int, level: int, d: int) -> Address:
    digits = []
    for _ in range(level):
        rank, rem = divmod(rank, d)
        digits.append(rem + 1)
    return tuple(reversed(digits))


def shift(v: Address, a: int, d: int) -> Address:
    """Cyclic successor (a > 0) or predecessor (a < 0) within the level of ``v``.

    The root level has a single element, so the root is fixed by every shift.
    """
    level = len(v)
    return from_rank((level_rank(v, d) + a) % (d ** level), level, d)


def eat_cmp(x: Address, y: Address) -> int:
    """BEFORE if ``x`` is eaten before ``y``, AFTER if after, EQUAL if same.

    Shorter addresses are right-padded with 0; the lexicographically larger
    padded string is eaten first.
    """
    if x == y:
        return EQUAL
    n = max(len(x), len(y))
    px = x + (0,) * (n - len(x))
    py = y + (0,) * (n - len(y))
    return BEFORE if px > py else AFTER


def eat_index(v: Address, d: int, h: int) -> int:
    """1-based position of ``v`` in the eating order of the height-``h`` tree."""
    check_address(v, d, h)
    pos = 0
    for i, digit in enumerate(v, start=1):
        pos += (d - digit) * vertex_count(h - i, d)
    return pos + vertex_count(h - len(v), d)


def eat_at(p: int, d: int, h: int) -> Address:
    """Inverse of :func:`eat_index`."""
    total = vertex_count(h, d)
    if not 1 <= p <= total:
        raise IndexError("index out of range")
    digits: list[int] = []
    size = total
    while p != size:
        child = vertex_count(h - len(digits) - 1, d)
        k = (p - 1) // child
        digits.append(d - k)
        p -= k * child
        size = child
    return tuple(digits)


def subtree_span(v: Address, d: int, h: int) -> tuple[int, int]:
    """Eating positions ``(first, last)`` covered by ``v`` and its descendants."""
    last = eat_index(v, d, h)
    return last - vertex_count(h - len(v), d) + 1, last


def render(v: Address) -> str:
    return "".join(map(str, v)) if v else "e"


def parse(text: str) -> Address:
    text = text.strip()
    if text == "e":
        return ROOT
    if not text.isdigit():
        raise ValueError(f"bad address {text!r}")
    return tuple(int(c) for c in text)
