import itertools
from fractions import Fraction

import pytest

from negabase.expansions import (
    EPWord,
    System,
    d_neg_l,
    d_star_neg_r,
    d_star_pos_one,
    expand,
    expand_any,
    word_value,
)
from negabase.lattices import (
    FinVerdict,
    LatticeError,
    closure_sample,
    enumerate_neg,
    enumerate_pos,
    fin_membership,
    gap_alphabet,
    word_length_bound_neg,
)
from negabase.number_field import BaseSpec, Relation

SUB_GOLDEN = ["x^3-x-1", "x^3-x^2-1", "x^4-x^3-1", "x^4-x-1"]


def _values(points):
    return [p.value for p in points]


def _prefix_rel(u, v, alt, n=120):
    for j in range(1, n + 1):
        a, b = u.digit(j), v.digit(j)
        if a != b:
            s = -1 if (alt and j % 2 == 1) else 1
            return Relation.of(s * (a - b))
    return Relation.EQ


def _oracle_admissible(word, system, base):
    """Tail conditions checked on long prefixes, independent of orders.py."""
    w = EPWord(tuple(word), (0,))
    if system == System.POS:
        ds = d_star_pos_one(base)
        return all(_prefix_rel(w.tail(i), ds, False) == Relation.LT for i in range(1, len(word) + 2))
    dl = d_neg_l(base)
    ds = d_star_neg_r(dl)
    return all(_prefix_rel(dl, w.tail(i), True) != Relation.GT
               and _prefix_rel(w.tail(i), ds, True) == Relation.LT for i in range(1, len(word) + 2))


def _brute(base, system, R, length):
    top = (-(-base.beta).floor() - 1) if system == System.POS else base.beta.floor()
    scale = base.beta if system == System.POS else -base.beta
    found = {}
    for n in range(1, length + 1):
        for word in itertools.product(range(top + 1), repeat=n):
            if not _oracle_admissible(word, system, base):
                continue
            v = base.zero
            for d in word:
                v = v * scale + d
            if (v - R).sign() <= 0 and (v + R).sign() >= 0:
                found[v.coords] = v
    return sorted(found.values(), key=float)


def test_golden_pos_examples(golden):
    b = golden.beta
    assert _values(enumerate_pos(golden, 5)) == [golden.zero, golden.one, b, b**2, b**2 + 1, b**3]
    assert _values(enumerate_pos(golden, Fraction(1, 2))) == [golden.zero]


def test_integer_base(two):
    assert [int(p.value.coords[0]) for p in enumerate_pos(two, 5)] == [0, 1, 2, 3, 4, 5]
    assert gap_alphabet(enumerate_pos(two, 5)) == [two.one]
    neg = {int(p.value.coords[0]) for p in enumerate_neg(two, 3)}
    assert {-2, -1, 0, 1, 2, 3} <= neg


def test_golden_gaps(golden):
    assert gap_alphabet(enumerate_pos(golden, 5)) == [golden.beta - 1, golden.one]
    assert gap_alphabet(enumerate_pos(golden, 50)) == [golden.beta - 1, golden.one]


@pytest.mark.parametrize("poly", ["x^2-x-1", "2", "x^2-2*x-1", "x^3-x^2-1"])
@pytest.mark.parametrize("system", [System.POS, System.NEG])
def test_matches_brute_force(poly, system):
    base = BaseSpec.parse(poly)
    R = Fraction(3)
    if system == System.POS:
        got = _values(enumerate_pos(base, R))
        length = 1
        while (base.beta ** length - R).sign() <= 0:
            length += 1
    else:
        got = _values(enumerate_neg(base, R))
        length = word_length_bound_neg(base, R)
    expect = _brute(base, system, R, length + 1)
    if system == System.POS:
        expect = [v for v in expect if v.sign() >= 0]
    assert got == expect


def test_golden_neg_small(golden):
    got = _values(enumerate_neg(golden, 1))
    assert got == _brute(golden, System.NEG, Fraction(1), word_length_bound_neg(golden, 1) + 1)
    assert got == [1 - golden.beta, golden.zero, golden.one]


@pytest.mark.parametrize("poly", SUB_GOLDEN)
def test_triviality_below_golden_ratio(poly):
    base = BaseSpec.parse(poly)
    pts = enumerate_neg(base, 10, max_length=12)
    assert [p.word for p in pts] == [(0,)]
    assert gap_alphabet(pts) == []


@pytest.mark.parametrize("poly", ["x^2-x-1", "x^2-2*x-1", "x^2-3*x+1", "2", "x^3-x^2-1"])
def test_neg_points_re_expand(poly):
    base = BaseSpec.parse(poly)
    inv = (-base.beta).inverse()
    for pt in enumerate_neg(base, 6):
        n = len(pt.word)
        w = expand(System.NEG, base, pt.value * inv**n)
        assert w == EPWord(pt.word, (0,))
        # the least-exponent expansion may differ by leading zeros (or, when
        # the value itself lies in [l, r), be a fractional one); it still
        # reconstructs the value
        k, w2 = expand_any(System.NEG, base, pt.value)
        assert word_value(w2, System.NEG, base) * (-base.beta) ** k == pt.value


def test_least_exponent_can_be_fractional(golden):
    # 1 - beta = l has the integer word "1 1" and the expansion "1 0^w" at k = 0
    (pt,) = [p for p in enumerate_neg(golden, 1) if p.value == golden.l]
    assert pt.word == (1, 1)
    assert expand_any(System.NEG, golden, pt.value) == (0, EPWord((1,), (0,)))


@pytest.mark.parametrize("poly", ["x^2-x-1", "x^3-x-1", "2"])
def test_pos_points_re_expand(poly):
    base = BaseSpec.parse(poly)
    for pt in enumerate_pos(base, 10):
        k, w = expand_any(System.POS, base, pt.value)
        word = tuple(pt.word) if pt.word != (0,) else ()
        assert w == EPWord((0,) * (k - len(word)) + word, (0,))


def test_inconclusive_base_raises():
    with pytest.raises(LatticeError):
        enumerate_neg(BaseSpec.parse("x^2-2"), 3, cap=50)


def test_fin_examples(plastic, silver):
    assert fin_membership(plastic, plastic.zero) == FinVerdict.IN_FIN
    assert fin_membership(plastic, plastic.from_rational(Fraction(1, 2))) == FinVerdict.NOT_IN_FIN
    assert fin_membership(silver, silver.one) == FinVerdict.IN_FIN
    assert fin_membership(silver, silver.from_rational(17)) == FinVerdict.IN_FIN


def test_closure_examples(silver, two):
    assert closure_sample(silver, 50, seed=7).infinite == 0
    assert closure_sample(two, 50, seed=7).infinite == 0
    rep = closure_sample(BaseSpec.parse("x^2-3*x+1"), 20, seed=7)
    assert rep.finite + rep.infinite + rep.inconclusive == 40


def test_closure_reproducible(silver):
    a = closure_sample(silver, 10, seed=3).to_dict()
    b = closure_sample(silver, 10, seed=3).to_dict()
    assert a == b
