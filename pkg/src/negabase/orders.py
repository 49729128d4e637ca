"""Lexicographic and alternate orders on eventually periodic words, and the
admissibility conditions of the two numeration systems."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .expansions import EPWord
from .number_field import Relation

__all__ = [
    "OrderVerdict",
    "Admissibility",
    "horizon",
    "lex_compare",
    "alt_compare",
    "lex_compare_finite",
    "alt_compare_finite",
    "is_admissible_pos",
    "is_admissible_neg",
]


@dataclass(frozen=True)
class OrderVerdict:
    relation: Relation
    index: int | None  # first differing position, 1-based; None iff EQ


@dataclass(frozen=True)
class Admissibility:
    admissible: bool
    shift: int | None = None  # first violating tail start (1-based)
    bound: str | None = None  # "lower" or "upper"

    def __bool__(self) -> bool:
        return self.admissible


def horizon(u: EPWord, v: EPWord) -> int:
    # Past max(m_u, m_v) both words repeat with period lcm(p_u, p_v); two
    # such words that agree on one joint period agree forever.
    return u.m + v.m + 2 * math.lcm(u.p, v.p)


def _first_difference(u: EPWord, v: EPWord) -> int | None:
    for j in range(1, horizon(u, v) + 1):
        if u.digit(j) != v.digit(j):
            return j
    return None


def lex_compare(u: EPWord, v: EPWord) -> OrderVerdict:
    j = _first_difference(u, v)
    if j is None:
        return OrderVerdict(Relation.EQ, None)
    return OrderVerdict(Relation.of(u.digit(j) - v.digit(j)), j)


def alt_compare(u: EPWord, v: EPWord) -> OrderVerdict:
    """``u < v`` iff at the first difference ``j``, ``u_j (-1)^j < v_j (-1)^j``."""
    j = _first_difference(u, v)
    if j is None:
        return OrderVerdict(Relation.EQ, None)
    s = 1 if j % 2 == 0 else -1
    return OrderVerdict(Relation.of(s * (u.digit(j) - v.digit(j))), j)


def lex_compare_finite(a: Sequence[int], b: Sequence[int]) -> Relation:
    """Compare equal-length finite words lexicographically."""
    for x, y in zip(a, b):
        if x != y:
            return Relation.of(x - y)
    return Relation.EQ


def alt_compare_finite(a: Sequence[int], b: Sequence[int]) -> Relation:
    """Alternate order on equal-length finite words (positions 1-based)."""
    for j, (x, y) in enumerate(zip(a, b), start=1):
        if x != y:
            return Relation.of((x - y) if j % 2 == 0 else (y - x))
    return Relation.EQ


def _shifts(word: EPWord):
    # tails starting at 1..m+p exhaust every distinct suffix
    for i in range(1, word.m + word.p + 1):
        yield i, word.tail(i)


def is_admissible_pos(word: EPWord, dstar1: EPWord) -> Admissibility:
    """Every tail strictly below ``d*(1)`` lexicographically."""
    for i, t in _shifts(word):
        if lex_compare(t, dstar1).relation != Relation.LT:
            return Admissibility(False, i, "upper")
    return Admissibility(True)


def is_admissible_neg(word: EPWord, dl: EPWord, dstar_r: EPWord) -> Admissibility:
    """Every tail satisfies ``d(l) <=_alt tail <_alt d*(r)``."""
    for i, t in _shifts(word):
        if alt_compare(dl, t).relation == Relation.GT:
            return Admissibility(False, i, "lower")
        if alt_compare(t, dstar_r).relation != Relation.LT:
            return Admissibility(False, i, "upper")
    return Admissibility(True)
