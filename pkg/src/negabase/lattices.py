"""beta-integers, (-beta)-integers, their gaps, and Fin(-beta)."""

from __future__ import annotations

import enum
import functools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .expansions import (
    DEFAULT_CAP,
    EPWord,
    Inconclusive,
    System,
    d_neg_l,
    d_star_neg_r,
    d_star_pos_one,
    expand_any,
)
from .number_field import BaseSpec, FieldElem, Relation, compare
from .orders import (
    alt_compare_finite,
    is_admissible_neg,
    is_admissible_pos,
    lex_compare_finite,
)

__all__ = [
    "LatticeError",
    "LatticePoint",
    "FinVerdict",
    "ClosureReport",
    "enumerate_pos",
    "enumerate_neg",
    "gap_alphabet",
    "fin_membership",
    "closure_sample",
    "word_length_bound_neg",
]


class LatticeError(ValueError):
    """The base data needed for enumeration is unavailable (inconclusive)."""


@dataclass(frozen=True)
class LatticePoint:
    """``value = sum(word[k-j] * (+-beta)**j)``; ``word`` is most significant first."""

    value: FieldElem
    word: tuple[int, ...]
    system: System = System.POS


def _sort(points: list[LatticePoint]) -> list[LatticePoint]:
    return sorted(points, key=functools.cmp_to_key(lambda a, b: int(compare(a.value, b.value))))


def _horner(word: Sequence[int], scale: FieldElem) -> FieldElem:
    acc = scale.base.zero
    for d in word:
        acc = acc * scale + d
    return acc


def _generate(length: int, alphabet: int, viable: Callable[[list[int]], bool]):
    """Words of exactly ``length`` digits, first digit nonzero, extended
    most-significant first while ``viable`` holds for every prefix."""
    word: list[int] = []

    def rec():
        if len(word) == length:
            yield tuple(word)
            return
        start = 1 if not word else 0
        for d in range(start, alphabet + 1):
            word.append(d)
            if viable(word):
                yield from rec()
            word.pop()

    yield from rec()


def enumerate_pos(base: BaseSpec, bound, cap: int = DEFAULT_CAP) -> list[LatticePoint]:
    """All beta-integers in ``[0, bound]``, ascending.

    A beta-integer is ``sum(y_j beta**j)`` with ``y_k...y_0 0^omega``
    admissible (every tail strictly below ``d*(1)``).
    """
    R = Fraction(bound)
    dstar = d_star_pos_one(base, cap)
    if isinstance(dstar, Inconclusive):
        raise LatticeError(f"d*(1) inconclusive for {base}")
    b = base.beta
    alphabet = -(-b).floor() - 1  # ceil(beta) - 1
    beta_f = float(b)
    # a word of length L with a nonzero lead is worth at least beta^(L-1)
    L = 0
    while (b ** L - R).sign() <= 0:
        L += 1
    slack = float(R) * (1 + 1e-9) + 1e-9

    def viable_for(length):
        def viable(word):
            n = len(word)
            for s in range(n):
                f = word[s:]
                if lex_compare_finite(f, dstar.prefix(len(f))) == Relation.GT:
                    return False
            lead = 0.0
            for d in word:
                lead = lead * beta_f + d
            return lead * beta_f ** (length - n) <= slack
        return viable

    points = {base.zero.coords: LatticePoint(base.zero, (0,), System.POS)}
    for length in range(1, L + 1):
        for w in _generate(length, alphabet, viable_for(length)):
            if not is_admissible_pos(EPWord(w, (0,)), dstar):
                continue
            v = _horner(w, b)
            if (v - R).sign() <= 0:
                points.setdefault(v.coords, LatticePoint(v, w, System.POS))
    return _sort(list(points.values()))


def word_length_bound_neg(base: BaseSpec, bound) -> int:
    """Longest digit string ``y_k...y_0`` (with ``y_k != 0``) whose value can
    have modulus at most ``bound``.

    ``y / (-beta)^(k+1)`` has an expansion starting with a nonzero digit, so
    its modulus is at least ``1/(beta (beta+1))``; hence
    ``|y| >= beta^k / (beta+1)`` and ``beta^k <= bound * (beta+1)``.
    """
    R = Fraction(bound)
    lim = (base.beta + 1) * R
    k = 0
    while (base.beta ** (k + 1) - lim).sign() <= 0:
        k += 1
    return k + 1


def enumerate_neg(base: BaseSpec, bound, cap: int = DEFAULT_CAP,
                  max_length: int | None = None) -> list[LatticePoint]:
    """All (-beta)-integers in ``[-bound, bound]``, ascending."""
    R = Fraction(bound)
    dl = d_neg_l(base, cap)
    if isinstance(dl, Inconclusive):
        raise LatticeError(f"d(l) inconclusive for {base}")
    dstar = d_star_neg_r(dl)
    alphabet = base.beta.floor()
    L = word_length_bound_neg(base, R)
    if max_length is not None:
        L = min(L, max_length)
    mb = -base.beta

    def viable(word):
        for s in range(len(word)):
            f = word[s:]
            n = len(f)
            if alt_compare_finite(f, dl.prefix(n)) == Relation.LT:
                return False
            if alt_compare_finite(f, dstar.prefix(n)) == Relation.GT:
                return False
        return True

    points = {base.zero.coords: LatticePoint(base.zero, (0,), System.NEG)}
    for length in range(1, L + 1):
        for w in _generate(length, alphabet, viable):
            if not is_admissible_neg(EPWord(w, (0,)), dl, dstar):
                continue
            v = _horner(w, mb)
            if (v - R).sign() <= 0 and (v + R).sign() >= 0:
                points.setdefault(v.coords, LatticePoint(v, w, System.NEG))
    return _sort(list(points.values()))


def gap_alphabet(points: Sequence[LatticePoint]) -> list[FieldElem]:
    """Distinct consecutive differences, ascending."""
    gaps = {}
    for a, b in zip(points, points[1:]):
        g = b.value - a.value
        gaps.setdefault(g.coords, g)
    return sorted(gaps.values(), key=functools.cmp_to_key(lambda a, b: int(compare(a, b))))


class FinVerdict(str, enum.Enum):
    IN_FIN = "in_Fin"
    NOT_IN_FIN = "not_in_Fin"
    INCONCLUSIVE = "inconclusive"


def fin_membership(base: BaseSpec, x: FieldElem, cap: int = DEFAULT_CAP) -> FinVerdict:
    """Is the (-beta)-expansion of ``x`` finite? ``x`` is first scaled by a
    power of ``-beta`` into ``[l, r)``."""
    _, out = expand_any(System.NEG, base, x, cap)
    if isinstance(out, Inconclusive):
        return FinVerdict.INCONCLUSIVE
    return FinVerdict.IN_FIN if out.is_finite() else FinVerdict.NOT_IN_FIN


@dataclass
class ClosureReport:
    pool_size: int
    additions_tested: int = 0
    products_tested: int = 0
    finite: int = 0
    infinite: int = 0
    inconclusive: int = 0
    infinite_examples: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "pool_size": self.pool_size,
            "additions_tested": self.additions_tested,
            "products_tested": self.products_tested,
            "finite": self.finite,
            "infinite": self.infinite,
            "inconclusive": self.inconclusive,
            "infinite_examples": self.infinite_examples,
        }


def closure_sample(base: BaseSpec, n: int, cap: int = DEFAULT_CAP, *, seed: int = 0,
                   bound=5, shifts: int = 2) -> ClosureReport:
    """Sample ``n`` pairs from ``{z / (-beta)^k : z in Z_{-beta}, |z| <= bound,
    k <= shifts}`` and test the sum and the product of each for membership
    in Fin(-beta). Sums and products are formed exactly in Q(beta)."""
    ints = enumerate_neg(base, bound, cap)
    inv = (-base.beta).inverse()
    pool, seen = [], set()
    for k in range(shifts + 1):
        s = inv ** k
        for pt in ints:
            v = pt.value * s
            if v.coords not in seen:
                seen.add(v.coords)
                pool.append(v)
    rng = random.Random(seed)
    rep = ClosureReport(pool_size=len(pool))
    for _ in range(n):
        a, b = rng.choice(pool), rng.choice(pool)
        for op, val in (("+", a + b), ("*", a * b)):
            if op == "+":
                rep.additions_tested += 1
            else:
                rep.products_tested += 1
            verdict = fin_membership(base, val, cap)
            if verdict == FinVerdict.IN_FIN:
                rep.finite += 1
            elif verdict == FinVerdict.NOT_IN_FIN:
                rep.infinite += 1
                if len(rep.infinite_examples) < 10:
                    rep.infinite_examples.append(
                        {"a": a.coord_string(), "b": b.coord_string(), "op": op})
            else:
                rep.inconclusive += 1
    return rep
