"""Command-line front end.

Verbs: expand, classify, ispoly, admissible, integers, fin, scan. JSON goes
to stdout (``--plain`` for text). Exit codes: 0 ok, 2 usage or input error,
3 an inconclusive verdict under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Sequence

from .exact_numbers import PolyParseError, parse_rational
from .expansions import (
    DEFAULT_CAP,
    DomainError,
    EPWord,
    Inconclusive,
    System,
    d_neg_l,
    d_star_neg_r,
    d_star_pos_one,
    expand,
    expand_any,
)
from .lattices import (
    FinVerdict,
    LatticeError,
    closure_sample,
    enumerate_neg,
    enumerate_pos,
    fin_membership,
    gap_alphabet,
)
from .number_field import BaseError, BaseSpec, FieldElem
from .orders import is_admissible_neg, is_admissible_pos
from .spectra import build_is_poly, classify, scan

EXIT_OK, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 2, 3


class UsageError(Exception):
    pass


def decimal_approx(x: FieldElem, digits: int = 20) -> str:
    lo, hi = x.interval(4 * digits + 16)
    mid = (lo + hi) / 2
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(mid.numerator) / Decimal(mid.denominator))


def _emit(args, obj: dict, plain: str) -> None:
    if args.plain:
        print(plain)
    else:
        print(json.dumps(obj))


def _word_dict(w) -> dict:
    if isinstance(w, EPWord):
        return {"word": str(w), "m": w.m, "p": w.p, "inconclusive": False}
    return {"word": None, "m": None, "p": None, "inconclusive": True,
            "inconclusive_steps": w.steps_taken, "inconclusive_reason": w.reason}


def _word_text(w) -> str:
    if isinstance(w, EPWord):
        return str(w)
    return f"inconclusive after {w.steps_taken} steps ({w.reason})"


def _base(args) -> BaseSpec:
    if not args.base:
        raise UsageError("--base is required")
    return BaseSpec.parse(args.base, args.root)


def _element(base: BaseSpec, token: str) -> FieldElem:
    t = token.strip()
    if t == "l":
        return base.l
    if t == "0":
        return base.zero
    return base.parse_elem(t)


# ---------------------------------------------------------------------------
# verbs

def cmd_expand(args) -> int:
    base = _base(args)
    system = System(args.system)
    tok = args.x.strip()
    if tok == "r-":
        if args.any:
            raise UsageError("'r-' names a left limit; it cannot be combined with --any")
        if system == System.POS:
            out = d_star_pos_one(base, args.cap)
        else:
            dl = d_neg_l(base, args.cap)
            out = dl if isinstance(dl, Inconclusive) else d_star_neg_r(dl)
        k = None
    else:
        x = base.zero if (tok == "l" and system == System.POS) else _element(base, tok)
        if args.any:
            k, out = expand_any(system, base, x, args.cap)
        else:
            k, out = None, expand(system, base, x, args.cap, backend=args.backend)
    obj = {"system": system.value, "base": str(base.min_poly), "x": tok}
    if k is not None:
        obj["k"] = k
    obj.update(_word_dict(out))
    _emit(args, obj, _word_text(out) if k is None else f"k={k} {_word_text(out)}")
    return _inconclusive_exit(args, isinstance(out, Inconclusive))


def cmd_classify(args) -> int:
    base = _base(args)
    rep = classify(base, args.cap)
    d = rep.to_dict()
    lines = [f"{k}: {json.dumps(v) if isinstance(v, (dict, list)) else v}" for k, v in d.items()]
    _emit(args, d, "\n".join(lines))
    return _inconclusive_exit(args, not (rep.parry_periodic and rep.is_periodic))


def cmd_ispoly(args) -> int:
    if args.word:
        word = EPWord.parse(args.word)
    else:
        out = d_neg_l(_base(args), args.cap)
        if isinstance(out, Inconclusive):
            _emit(args, _word_dict(out), _word_text(out))
            return _inconclusive_exit(args, True)
        word = out
    isp = build_is_poly(word)
    P = isp.polynomial
    obj = {"word": str(word), "m": isp.m, "p": isp.p, "coeffs": P.coeff_string(),
           "text": str(P), "monic": str(isp.monic())}
    _emit(args, obj, f"{P}\ncoeffs (ascending) {P.coeff_string()}")
    return EXIT_OK


def cmd_admissible(args) -> int:
    base = _base(args)
    word = EPWord.parse(args.word)
    system = System(args.system)
    if system == System.POS:
        dstar = d_star_pos_one(base, args.cap)
        if isinstance(dstar, Inconclusive):
            _emit(args, _word_dict(dstar), _word_text(dstar))
            return _inconclusive_exit(args, True)
        res = is_admissible_pos(word, dstar)
        bounds = {"dstar_one": str(dstar)}
    else:
        dl = d_neg_l(base, args.cap)
        if isinstance(dl, Inconclusive):
            _emit(args, _word_dict(dl), _word_text(dl))
            return _inconclusive_exit(args, True)
        dstar = d_star_neg_r(dl)
        res = is_admissible_neg(word, dl, dstar)
        bounds = {"d_l": str(dl), "dstar_r": str(dstar)}
    obj = {"system": system.value, "base": str(base.min_poly), "word": str(word),
           "admissible": res.admissible, "shift": res.shift, "bound": res.bound, **bounds}
    plain = "admissible" if res.admissible else f"not admissible: shift {res.shift} violates {res.bound} bound"
    _emit(args, obj, plain)
    return EXIT_OK


def cmd_integers(args) -> int:
    base = _base(args)
    R = parse_rational(args.bound)
    if R <= 0:
        raise UsageError("--bound must be positive")
    system = System(args.system)
    try:
        pts = enumerate_pos(base, R, args.cap) if system == System.POS else enumerate_neg(base, R, args.cap)
    except LatticeError as exc:
        print(f"negabase: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE if args.strict else EXIT_OK
    if args.gaps:
        gaps = gap_alphabet(pts)
        obj = {"gaps": [g.coord_string() for g in gaps],
               "decimal_approx": [decimal_approx(g) for g in gaps]}
        _emit(args, obj, " ".join(str(g) for g in gaps))
        return EXIT_OK
    for pt in pts:
        word = " ".join(map(str, pt.word))
        obj = {"word": word, "coords": pt.value.coord_string(), "decimal_approx": decimal_approx(pt.value)}
        _emit(args, obj, f"{pt.value}\t{word}")
    return EXIT_OK


def cmd_fin(args) -> int:
    base = _base(args)
    if args.sample is not None:
        rep = closure_sample(base, args.sample, args.cap, seed=args.seed)
        d = rep.to_dict()
        _emit(args, d, " ".join(f"{k}={v}" for k, v in d.items() if k != "infinite_examples"))
        return _inconclusive_exit(args, rep.inconclusive > 0)
    if args.x is None:
        raise UsageError("fin needs --x or --sample")
    x = _element(base, args.x)
    verdict = fin_membership(base, x, args.cap)
    _emit(args, {"base": str(base.min_poly), "x": args.x, "verdict": verdict.value}, verdict.value)
    return _inconclusive_exit(args, verdict == FinVerdict.INCONCLUSIVE)


def cmd_scan(args) -> int:
    def sink(rep):
        if args.plain:
            if "skipped" in rep:
                print(f"{rep['family_index']}\t{rep['base_poly']}\tskipped")
            else:
                print(f"{rep['family_index']}\t{rep['base_poly']}\t"
                      f"parry={_short(rep['parry'])}\tis={_short(rep['ito_sadahiro'])}")
        else:
            print(json.dumps(rep))

    reports, summary = scan(args.family, args.cap, sink, jobs=args.jobs, cache_dir=args.cache_dir,
                            use_cache=not args.no_cache, fresh=args.fresh)
    _emit(args, {"summary": summary.to_dict()},
          " ".join(f"{k}={v}" for k, v in summary.to_dict().items() if k != "flagged"))
    return _inconclusive_exit(args, summary.inconclusive > 0)


def _short(w: dict) -> str:
    return w["word"] if w["word"] is not None else "inconclusive"


def _inconclusive_exit(args, inconclusive: bool) -> int:
    return EXIT_INCONCLUSIVE if (inconclusive and args.strict) else EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="step cap for orbit iteration")
    common.add_argument("--plain", action="store_true", help="plain text instead of JSON")
    common.add_argument("--strict", action="store_true", help="exit 3 on inconclusive verdicts")

    based = argparse.ArgumentParser(add_help=False)
    based.add_argument("--base", help='minimal polynomial ("x^3-x-1" or "-1,-1,0,1") or a rational; '
                       "irreducibility is assumed, not checked (arithmetic is modulo the given polynomial)")
    based.add_argument("--root", type=int, default=None, help="index of the real root (default: largest)")

    p = argparse.ArgumentParser(prog="negabase", description="Exact positive- and negative-base numeration.")
    sub = p.add_subparsers(dest="verb", required=True)

    e = sub.add_parser("expand", parents=[common, based], help="expansion of a point")
    e.add_argument("system", choices=["pos", "neg"])
    e.add_argument("--x", required=True, help='"l", "r-", "0", a rational, or coordinates "c0,c1,..."')
    e.add_argument("--any", action="store_true", help="scale x into the domain first")
    e.add_argument("--backend", choices=["cython", "python", "exact"], default=None)
    e.set_defaults(func=cmd_expand)

    c = sub.add_parser("classify", parents=[common, based], help="full base report")
    c.set_defaults(func=cmd_classify)

    i = sub.add_parser("ispoly", parents=[common, based], help="Ito-Sadahiro polynomial")
    i.add_argument("--word", help='expansion of l, e.g. "1 0 0 | 1"; computed from --base if omitted')
    i.set_defaults(func=cmd_ispoly)

    a = sub.add_parser("admissible", parents=[common, based], help="admissibility of a word")
    a.add_argument("system", choices=["pos", "neg"])
    a.add_argument("--word", required=True)
    a.set_defaults(func=cmd_admissible)

    z = sub.add_parser("integers", parents=[common, based], help="enumerate (+-beta)-integers")
    z.add_argument("system", choices=["pos", "neg"])
    z.add_argument("--bound", required=True, help="enumerate values with modulus at most this rational")
    z.add_argument("--gaps", action="store_true", help="print the gap alphabet instead")
    z.set_defaults(func=cmd_integers)

    f = sub.add_parser("fin", parents=[common, based], help="membership in Fin(-beta)")
    f.add_argument("--x")
    f.add_argument("--sample", type=int, default=None, help="ring-closure experiment with N pairs")
    f.add_argument("--seed", type=int, default=0)
    f.set_defaults(func=cmd_fin)

    s = sub.add_parser("scan", parents=[common], help="classify a family of bases")
    s.add_argument("--family", required=True, help='e.g. "x^2-a*x-b; a=1..10; b=1..a"')
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--fresh", action="store_true", help="recompute cached bases")
    s.add_argument("--cache-dir", default=None)
    s.add_argument("--no-cache", action="store_true")
    s.set_defaults(func=cmd_scan)
    return p


_VALUE_FLAGS = ("--x", "--base", "--bound", "--word", "--family")


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    # argparse reads "-1/5,0,1" as an option; glue such values to their flag
    out: list[str] = []
    it = iter(argv)
    for a in it:
        if a in _VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and not nxt.startswith("--"):
                out.append(f"{a}={nxt}")
                continue
            out.append(a)
            if nxt is not None:
                out.append(nxt)
        else:
            out.append(a)
    return out


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = _join_negative_values(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.cap < 0:
        print("negabase: --cap must be non-negative", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, PolyParseError, BaseError, DomainError, ValueError, ZeroDivisionError) as exc:
        print(f"negabase: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
