"""The folding operation on words and the permutation it induces."""

from __future__ import annotations

from collections import deque
from typing import Sequence

from .errors import LengthMismatch, ParseError

UP = "u"
DOWN = "d"
DIRECTIONS = (DOWN, UP)


def parse_directions(text: str) -> str:
    """Validate a direction word; only ``u`` and ``d`` are allowed."""
    for i, ch in enumerate(text):
        if ch not in (UP, DOWN):
            raise ParseError(f"direction must be 'u' or 'd', got {ch!r}", i)
    return text


def _check_lengths(w, v):
    if len(w) != len(v):
        raise LengthMismatch(f"fold undefined: |w|={len(w)} but |v|={len(v)}")


def fold_step(x: str, a: str, b: str) -> str:
    """One folding step: prepend ``a`` on ``u``, append on ``d``."""
    return a + x if b == UP else x + a


def fold_recursive(w: str, v: str) -> str:
    """Reference evaluation peeling the last symbol of both words.

    Kept as an oracle; :func:`fold` is the linear-time implementation.
    """
    _check_lengths(w, v)
    if not w:
        return ""
    return fold_step(fold_recursive(w[:-1], v[:-1]), w[-1], v[-1])


def fold(w: str, v: str) -> str:
    """Fold ``w`` under direction word ``v``.

    Scanning left to right, ``u`` puts the symbol in front of what has been
    folded so far and ``d`` puts it at the back.

    >>> fold("abcabc", "uddudd")
    'aabcbc'
    """
    _check_lengths(w, v)
    out = deque()
    for a, b in zip(w, v):
        if b == UP:
            out.appendleft(a)
        elif b == DOWN:
            out.append(a)
        else:
            raise ParseError(f"direction must be 'u' or 'd', got {b!r}")
    return "".join(out)


def fold_permutation(v: str) -> tuple:
    """1-based output position of every input position under ``v``."""
    parse_directions(v)
    ups = v.count(UP)
    seen_up = 0
    seen_down = 0
    target = []
    for b in v:
        if b == UP:
            seen_up += 1
            # the k-th u ends up at position ups - k + 1
            target.append(ups - seen_up + 1)
        else:
            seen_down += 1
            target.append(ups + seen_down)
    return tuple(target)


def apply_permutation(w: Sequence, target: Sequence[int]) -> str:
    _check_lengths(w, target)
    out = [None] * len(w)
    for a, t in zip(w, target):
        out[t - 1] = a
    return "".join(out)


def invert_permutation(target: Sequence[int]) -> tuple:
    inv = [0] * len(target)
    for i, t in enumerate(target, 1):
        inv[t - 1] = i
    return tuple(inv)


def unfold(s: str, v: str) -> str:
    """The unique ``w`` with ``fold(w, v) == s``."""
    _check_lengths(s, v)
    target = fold_permutation(v)
    return "".join(s[t - 1] for t in target)
