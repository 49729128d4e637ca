"""End-to-end acceptance checks, one per criterion, each with its time limit.

Every test prints a single ``PASS``/``FAIL`` line (visible with ``-v``).
"""

import itertools
import random
from fractions import Fraction
from time import perf_counter

import pytest

from negabase.exact_numbers import parse_poly, poly_divmod
from negabase.expansions import (
    EPWord,
    System,
    d_neg_l,
    d_star_neg_r,
    d_star_pos_one,
    expand,
    in_domain,
)
from negabase.lattices import closure_sample, enumerate_neg, enumerate_pos, gap_alphabet
from negabase.number_field import BaseSpec, Relation, compare
from negabase.orders import alt_compare, is_admissible_neg, lex_compare
from negabase.spectra import (
    Verdict,
    build_is_poly,
    check_coefficient_ranges,
    classify,
    conjugates_in_disc,
    eval_in_field,
    is_orbit,
    quotient_poly,
    verify_root_bound,
)

FAMILY = [f"x^2-{a}*x-{b}" for a in range(1, 7) for b in range(1, a + 1)] + ["x^3-x-1", "x^3-x^2-1"]
QUADRATIC_PISOT = [f"x^2-{a}*x-{b}" for a in range(1, 5) for b in range(1, a + 1)][:9]
FL_BASES = QUADRATIC_PISOT + ["x^3-x-1"]
MONO_BASES = ["x^2-x-1", "x^3-x-1", "x^2-2*x-1", "x^2-3*x-2", "x^3-x^2-1"]
LEHMER = "x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1"
SEED = 20240601
MAX_DEN = 30


@pytest.fixture
def criterion(capsys):
    def run(number, title, limit, body):
        t0 = perf_counter()
        failure = None
        try:
            body()
        except AssertionError as exc:
            failure = exc
        dt = perf_counter() - t0
        ok = failure is None and dt < limit
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} [{number:>2}] {title} ({dt:.2f}s, limit {limit}s)")
        if failure is not None:
            raise failure
        assert dt < limit, f"took {dt:.2f}s, limit {limit}s"
    return run


def random_points(base, system, count, rng):
    """Seeded rationals in the domain of ``system`` (denominators up to MAX_DEN)."""
    if system == System.NEG:
        lo, hi = float(base.l), float(base.r)
    else:
        lo, hi = 0.0, 1.0
    out = []
    while len(out) < count:
        q = rng.randint(1, MAX_DEN)
        x = base.from_rational(Fraction(rng.randint(int(lo * q) - 1, int(hi * q) + 1), q))
        if in_domain(system, x):
            out.append(x)
    return out


def fl_expansions():
    rng = random.Random(SEED)
    for poly in FL_BASES:
        base = BaseSpec.parse(poly)
        for x in random_points(base, System.NEG, 50, rng):
            yield base, x, expand(System.NEG, base, x)


# independent long-prefix oracle for the alternate order
def _alt_rel(u, v):
    n = u.m + v.m + 2 * u.p * v.p
    for j in range(1, n + 1):
        a, b = u.digit(j), v.digit(j)
        if a != b:
            return Relation.of((a - b) if j % 2 == 0 else (b - a))
    return Relation.EQ


def _first_violation(word, dl, ds):
    for i in range(1, word.m + word.p + 1):
        t = word.tail(i)
        if _alt_rel(dl, t) == Relation.GT:
            return i, "lower"
        if _alt_rel(t, ds) != Relation.LT:
            return i, "upper"
    return None


def test_ac01_plastic_pipeline(criterion):
    def body():
        base = BaseSpec.parse("x^3-x-1")
        w = d_neg_l(base)
        assert w == EPWord((1, 0, 0), (1,))
        P = build_is_poly(w).polynomial
        assert P == parse_poly("x^4-x^3-x^2+1")
        q, r = poly_divmod(P, base.min_poly)
        assert q == parse_poly("x-1") and r.is_zero()
        assert base.degree <= w.m + w.p == 4
    criterion(1, "plastic-number pipeline", 1, body)


def test_ac02_is_poly_vanishes(criterion):
    def body():
        for poly in FAMILY:
            base = BaseSpec.parse(poly)
            assert eval_in_field(build_is_poly(d_neg_l(base)).polynomial, base).is_zero(), poly
    criterion(2, "Ito-Sadahiro polynomial vanishes at beta", 10, body)


def test_ac03_root_bound(criterion):
    def body():
        for poly in FAMILY:
            base = BaseSpec.parse(poly)
            assert verify_root_bound(build_is_poly(d_neg_l(base)), base), poly
            assert conjugates_in_disc(base, Fraction(2)), poly
    criterion(3, "other roots of P certified below modulus 2", 30, body)


def test_ac04_quotient_ranges(criterion):
    def body():
        for poly in FAMILY:
            base = BaseSpec.parse(poly)
            orb = is_orbit(base)
            word = orb.word()
            q = quotient_poly(base, word, orb)
            assert check_coefficient_ranges(q, orb), poly
            P = build_is_poly(word).polynomial
            assert q.times_x_minus_beta() == [base.from_rational(c) for c in P.coeffs], poly
    criterion(4, "quotient coefficient ranges and (x-beta)Q = P", 10, body)


def test_ac05_pisot_rationals_periodic(criterion):
    def body():
        words = list(fl_expansions())
        assert len(words) == 500
        assert all(isinstance(w, EPWord) for _, _, w in words)
    criterion(5, "rationals in Pisot bases have periodic expansions", 60, body)


def test_ac06_monotonicity(criterion):
    def body():
        rng = random.Random(SEED + 6)
        for poly in MONO_BASES:
            base = BaseSpec.parse(poly)
            for system, cmp in ((System.NEG, alt_compare), (System.POS, lex_compare)):
                xs = random_points(base, system, 200, rng)
                ys = random_points(base, system, 200, rng)
                for x, y in zip(xs, ys):
                    if compare(x, y) == Relation.GT:
                        x, y = y, x
                    rel = cmp(expand(system, base, x), expand(system, base, y)).relation
                    assert rel == (Relation.EQ if x == y else Relation.LT), (poly, system, x, y)
    criterion(6, "expansion order matches real order", 30, body)


def test_ac07_admissibility_round_trip(criterion):
    def body():
        rng = random.Random(SEED + 7)
        rejected_upper = 0
        specials = {}
        for base, _, w in fl_expansions():
            if base not in specials:
                dl = d_neg_l(base)
                specials[base] = (dl, d_star_neg_r(dl))
            dl, ds = specials[base]
            assert is_admissible_neg(w, dl, ds)
            digits = w.preperiod + w.period
            for k in rng.sample(range(len(digits)), min(3, len(digits))):
                mutated = list(digits)
                mutated[k] += 1
                mw = EPWord(tuple(mutated[: w.m]), tuple(mutated[w.m:]))
                res = is_admissible_neg(mw, dl, ds)
                oracle = _first_violation(mw, dl, ds)
                if oracle is None:
                    assert res.admissible
                else:
                    assert not res.admissible and (res.shift, res.bound) == oracle
                    rejected_upper += oracle[1] == "upper"
        assert rejected_upper > 0
    criterion(7, "admissibility round-trip and mutation witnesses", 30, body)


def test_ac08_triviality_below_golden(criterion):
    def body():
        base = BaseSpec.parse("x^3-x-1")
        dl = d_neg_l(base)
        ds = d_star_neg_r(dl)
        found = [word for n in range(1, 13) for word in itertools.product((0, 1), repeat=n)
                 if is_admissible_neg(EPWord(word, (0,)), dl, ds)]
        assert {EPWord(w, (0,)) for w in found} == {EPWord((), (0,))}
        pts = enumerate_neg(base, 10)
        assert [p.value for p in pts] == [base.zero]
    criterion(8, "only zero is a (-beta)-integer for the plastic number", 30, body)


def test_ac09_golden_gaps(criterion):
    def body():
        base = BaseSpec.parse("x^2-x-1")
        assert gap_alphabet(enumerate_pos(base, 50)) == [base.beta - 1, base.one]
    criterion(9, "golden-mean beta-integer gaps are {1, beta-1}", 10, body)


def test_ac10_classification(criterion):
    def body():
        golden = classify(BaseSpec.parse("x^2-x-1"))
        assert golden.is_pisot == Verdict.YES
        silver = classify(BaseSpec.parse("x^2-2*x-1"))
        assert silver.is_pisot == Verdict.YES
        assert silver.ito_sadahiro == EPWord((2,), (1,))
        assert silver.is_poly.monic() == parse_poly("x^2-2*x-1")
        lehmer = classify(BaseSpec.parse(LEHMER))
        assert lehmer.is_salem == Verdict.YES
        two = classify(BaseSpec.parse("x-2"))
        assert two.parry_periodic and two.is_periodic
    criterion(10, "classification regression", 10, body)


def test_ac11_ring_closure(criterion):
    def body():
        rep = closure_sample(BaseSpec.parse("x^2-2*x-1"), 50, seed=SEED)
        assert rep.additions_tested == rep.products_tested == 50
        assert rep.finite == 100 and rep.infinite == 0 and rep.inconclusive == 0
    criterion(11, "ring-closure sample for 1+sqrt(2)", 60, body)
