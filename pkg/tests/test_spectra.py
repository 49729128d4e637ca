import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from negabase import spectra
from negabase.exact_numbers import Poly, PolyParseError, parse_poly, poly_divmod
from negabase.expansions import EPWord, d_neg_l
from negabase.number_field import BaseSpec
from negabase.spectra import (
    Verdict,
    build_is_poly,
    build_is_poly_simple,
    check_coefficient_ranges,
    classify,
    conjugates_in_disc,
    eval_in_field,
    is_orbit,
    parse_family,
    quotient_poly,
    scan,
    scan_flags,
    verify_root_bound,
)

W = EPWord.parse
LEHMER = "x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1"


def test_is_poly_examples():
    assert build_is_poly(W("1 0 0 | 1")).polynomial == parse_poly("x^4-x^3-x^2+1")
    assert build_is_poly(W("1 | 0")).polynomial == parse_poly("x^2-x-1")
    r = build_is_poly(W("| 2"))
    assert r.polynomial == parse_poly("-x+2") and (r.m, r.p) == (0, 1)
    assert r.monic() == parse_poly("x-2")


def test_is_poly_simple_examples():
    assert build_is_poly_simple(W("1 | 0")) == parse_poly("x^2-x-1")
    assert build_is_poly_simple(W("1 1 | 0")) == parse_poly("-x^3+x^2-1")
    assert build_is_poly_simple(W("2 | 0")) == parse_poly("x^2-2*x-2")
    with pytest.raises(ValueError):
        build_is_poly_simple(W("| 1"))


@given(st.lists(st.integers(0, 4), min_size=1, max_size=8).filter(lambda d: d[-1] != 0))
def test_simple_form_agrees_with_general(d):
    w = EPWord(tuple(d), (0,))
    assert build_is_poly_simple(w) == build_is_poly(w).polynomial


def test_simple_form_root(golden):
    w = d_neg_l(golden)
    assert eval_in_field(build_is_poly_simple(w), golden).is_zero()


def _divide_by_x_minus_beta(P, base):
    # synthetic division in Q(beta)[x]: independent oracle for Q
    coeffs = [base.from_rational(c) for c in P.coeffs]
    n = len(coeffs) - 1
    q = [base.zero] * n
    acc = base.zero
    for i in range(n, 0, -1):
        acc = acc * base.beta + coeffs[i]
        q[i - 1] = acc
    rem = acc * base.beta + coeffs[0]
    return q, rem


@pytest.mark.parametrize("poly", ["x^3-x-1", "x^2-x-1", "2", "x^2-2*x-1", "x^3-x^2-1", "x^2-3*x-3"])
def test_quotient(poly):
    base = BaseSpec.parse(poly)
    orb = is_orbit(base)
    word = orb.word()
    isp = build_is_poly(word)
    q = quotient_poly(base, word, orb)
    assert q.degree == word.m + word.p - 1
    oracle, rem = _divide_by_x_minus_beta(isp.polynomial, base)
    assert rem.is_zero()
    assert list(q.coefficients) == oracle
    prod = q.times_x_minus_beta()
    assert prod == [base.from_rational(c) for c in isp.polynomial.coeffs]
    lead = q.coefficients[-1]
    assert lead == base.from_rational(-(-1) ** (word.m + word.p - 1))
    assert check_coefficient_ranges(q, orb)


def test_quotient_linear(two):
    orb = is_orbit(two)
    q = quotient_poly(two, orb.word(), orb)
    assert q.coefficients == (two.from_rational(-1),)


@pytest.mark.parametrize("poly", ["x^3-x-1", "x^2-x-1", "x^2-2*x-1"])
def test_root_bound_examples(poly):
    base = BaseSpec.parse(poly)
    isp = build_is_poly(d_neg_l(base))
    assert verify_root_bound(isp, base)
    assert conjugates_in_disc(base)


def test_classify_plastic(plastic):
    r = classify(plastic)
    assert (r.is_pisot, r.is_perron, r.is_salem) == (Verdict.YES, Verdict.YES, Verdict.NO)
    assert r.parry_periodic
    assert (r.ito_sadahiro.m, r.ito_sadahiro.p) == (3, 1)
    assert r.degree_bound_ok and r.minpoly_divides_isp and r.root_bound_ok and r.is_poly_vanishes
    lo, hi = r.conjugate_max_modulus
    assert lo <= Fraction(8688369618, 10**10) + Fraction(1, 10**9) and hi >= Fraction(8688369618, 10**10)


def test_classify_golden(golden):
    r = classify(golden)
    assert r.is_pisot == Verdict.YES
    assert (r.ito_sadahiro.m, r.ito_sadahiro.p) == (1, 1)
    assert r.is_poly.polynomial == golden.min_poly


def test_classify_lehmer():
    base = BaseSpec.parse(LEHMER)
    r = classify(base, cap=2000)
    assert r.is_salem == Verdict.YES and r.is_pisot == Verdict.NO and r.is_perron == Verdict.YES
    lo, hi = base.interval(40)
    assert Fraction(117628, 10**5) < lo < hi < Fraction(117629, 10**5)


def test_classify_non_perron():
    r = classify(BaseSpec.parse("x^2-2"))
    assert r.is_perron == Verdict.NO and r.is_pisot == Verdict.NO
    d = r.to_dict()
    assert d["ito_sadahiro"]["word"] is None and d["ito_sadahiro"]["inconclusive_reason"] == "growth"


def test_report_dict_field_order(plastic):
    d = classify(plastic).to_dict()
    assert list(d)[:11] == ["base_poly", "beta_enclosure", "perron", "pisot", "salem", "parry",
                            "ito_sadahiro", "is_poly", "degree_bound_ok", "minpoly_divides_isp",
                            "root_bound_ok"]
    assert d["is_poly"]["coeffs"] == "1,0,-1,-1,1"
    json.dumps(d)


def test_verdict_invariants():
    for params, poly in parse_family("x^3-a*x^2-b*x-1; a=-1..2; b=-1..2"):
        if poly(1) == 0 or poly(-1) == 0:
            continue  # reducible: only +-1 can be rational roots
        try:
            base = BaseSpec(poly)
        except ValueError:
            continue
        r = classify(base, cap=5000)
        assert not (r.is_pisot == Verdict.YES and r.is_salem == Verdict.YES)
        if r.is_pisot == Verdict.YES:
            assert r.is_perron == Verdict.YES


def test_parse_family():
    fam = parse_family("x^2-a*x-b; a=1..3; b=1..a")
    assert [tuple(p.values()) for p, _ in fam] == [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)]
    assert fam[-1][1] == parse_poly("x^2-3*x-3")
    assert len(parse_family("x^3-x-1")) == 1
    with pytest.raises(PolyParseError):
        parse_family("x^2-a; a=1..")
    with pytest.raises(PolyParseError):
        parse_family("x^2-a; a=1..1/2")


def test_scan_quadratic_family():
    reports, summary = scan("x^2-a*x-b; a=1..5; b=1..a")
    assert len(reports) == 15 and summary.parry_and_is == 15
    assert not summary.flagged
    assert [r["family_index"] for r in reports] == list(range(15))


def test_scan_integers_and_single():
    reports, summary = scan("x-n; n=2..5")
    assert summary.parry_and_is == 4
    (rep,), _ = scan("x^3-x-1")
    assert rep["ito_sadahiro"]["word"] == "1 0 0 | 1"
    assert rep["is_poly"]["text"] == "x^4-x^3-x^2+1"


def test_scan_skips_invalid():
    reports, summary = scan("x^2+a; a=1..2")
    assert summary.skipped == 2 and all("skipped" in r for r in reports)
    # (x+1)(x^2-x-1): beta+1 is a zero divisor, so l is undefined
    reports, summary = scan("(x+1)*(x^2-x-1)")
    assert summary.skipped == 1 and "zero divisor" in reports[0]["skipped"]


def test_scan_parallel_matches_serial():
    fam = "x^2-a*x-b; a=1..4; b=1..a"
    serial, _ = scan(fam)
    par, _ = scan(fam, jobs=2)
    assert json.dumps(serial) == json.dumps(par)


def test_scan_cache(tmp_path, monkeypatch):
    fam = "x^2-a*x-1; a=1..3"
    first, _ = scan(fam, use_cache=True, cache_dir=tmp_path)
    path = tmp_path / "scan_cache.jsonl"
    assert len(path.read_text().splitlines()) == 3

    def boom(item):
        raise AssertionError("cached base recomputed")

    monkeypatch.setattr(spectra, "_scan_one", boom)
    again, _ = scan(fam, use_cache=True, cache_dir=tmp_path)
    assert json.dumps(again) == json.dumps(first)
    with pytest.raises(AssertionError):
        scan(fam, use_cache=True, cache_dir=tmp_path, fresh=True)


def test_scan_cache_env(tmp_path, monkeypatch):
    monkeypatch.setenv("NEGABASE_CACHE_DIR", str(tmp_path / "env"))
    scan("x^2-x-1", use_cache=True)
    assert (tmp_path / "env" / "scan_cache.jsonl").exists()


def test_scan_flags():
    rep = {"parry": {"word": "| 1 0"}, "ito_sadahiro": {"word": None}, "root_bound_ok": False,
           "minpoly_divides_isp": None, "degree_bound_ok": None, "beta_enclosure": ["3", "3"],
           "perron": "no"}
    assert scan_flags(rep) == ["parry_vs_ito_sadahiro_mismatch", "is_poly_root_of_modulus_>=_2"]
    rep = {"parry": {"word": "| 1"}, "ito_sadahiro": {"word": "| 2"}, "root_bound_ok": True,
           "minpoly_divides_isp": True, "degree_bound_ok": True, "beta_enclosure": ["2", "2"],
           "perron": "no"}
    assert scan_flags(rep) == ["is_number_>=2_not_perron"]


def test_scan_flags_loud(capsys, monkeypatch):
    monkeypatch.setattr(spectra, "scan_flags", lambda rep: ["parry_vs_ito_sadahiro_mismatch"])
    _, summary = scan("x^2-x-1")
    assert "COUNTEREXAMPLE CANDIDATE" in capsys.readouterr().err
    assert summary.flagged


def test_eval_in_field_matches_poly(plastic):
    P = Poly([3, -2, 5, 7, 1])
    v = eval_in_field(P, plastic)
    b = plastic.beta
    assert v == 3 - 2 * b + 5 * b**2 + 7 * b**3 + b**4
    q, r = poly_divmod(P, plastic.min_poly)
    assert eval_in_field(r, plastic) == v
