"""Ito-Sadahiro polynomials, their root bounds, and base classification.

The Ito-Sadahiro polynomial of beta is built from the preperiod ``d1..dm``
and period ``d(m+1)..d(m+p)`` of the (-beta)-expansion of ``l``::

    P(x) = (-x)^(m+1) * sum_{i<p} (-x)^i
         + ((-x)^p - 1) * sum_{i=1..m} d_i (-x)^(m-i)
         + sum_{i=m+1..m+p} d_i (-x)^(m+p-i)

and has beta as a root. ``P(x) = (x - beta) Q(x)`` where the coefficients
of ``Q`` (in powers of ``-x``) are differences of orbit points of ``l``.
"""

from __future__ import annotations

import enum
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Iterator

from .exact_numbers import (
    NoConjugates,
    Poly,
    PolyParseError,
    RootDisc,
    eval_expression,
    other_root_discs,
    poly_divmod,
)
from .expansions import (
    DEFAULT_CAP,
    EPWord,
    Inconclusive,
    Orbit,
    System,
    d_neg_l,
    d_star_pos_one,
    orbit as compute_orbit,
)
from .number_field import BaseError, BaseSpec, FieldElem

__all__ = [
    "Verdict",
    "Undecided",
    "ISPolyResult",
    "QuotientPoly",
    "ClassificationReport",
    "build_is_poly",
    "build_is_poly_simple",
    "is_orbit",
    "quotient_poly",
    "check_coefficient_ranges",
    "eval_in_field",
    "verify_root_bound",
    "conjugates_in_disc",
    "classify",
    "parse_family",
    "scan",
    "ScanSummary",
]

_MINUS_X = Poly((0, -1))
_PRECISIONS = (Fraction(1, 10**15), Fraction(1, 10**40), Fraction(1, 10**120))


class Verdict(str, enum.Enum):
    YES = "yes"
    NO = "no"
    BORDERLINE = "borderline"


class Undecided(ArithmeticError):
    """A certified enclosure still straddles the threshold at maximal precision."""


# ---------------------------------------------------------------------------
# the polynomial and its quotient

@dataclass(frozen=True)
class ISPolyResult:
    polynomial: Poly
    m: int
    p: int
    digits: tuple[int, ...]

    def monic(self) -> Poly:
        """``+-P`` with leading coefficient 1 (display form)."""
        return self.polynomial if self.polynomial.lc > 0 else -self.polynomial


def build_is_poly(word: EPWord) -> ISPolyResult:
    """Ito-Sadahiro polynomial of a (canonical) expansion of ``l``.

    The sign convention is kept literally: the leading coefficient is
    ``(-1)^(m+p)``.
    """
    m, p = word.m, word.p
    d = (None,) + word.preperiod + word.period
    geo = sum((_MINUS_X ** i for i in range(p)), Poly())
    head = sum((d[i] * _MINUS_X ** (m - i) for i in range(1, m + 1)), Poly())
    tail = sum((d[i] * _MINUS_X ** (m + p - i) for i in range(m + 1, m + p + 1)), Poly())
    P = _MINUS_X ** (m + 1) * geo + (_MINUS_X ** p - 1) * head + tail
    return ISPolyResult(P, m, p, word.preperiod + word.period)


def build_is_poly_simple(word: EPWord) -> Poly:
    """Short form for words ``d1...dm 0^omega``::

        (-x)^(m+1) + d1 (-x)^m + (d2-d1) (-x)^(m-1) + ... + (dm-d(m-1)) (-x) - dm
    """
    if word.period != (0,):
        raise ValueError(f"{word} does not end in 0^omega")
    d = word.preperiod
    m = len(d)
    if m == 0:
        return _MINUS_X
    P = _MINUS_X ** (m + 1) + d[0] * _MINUS_X ** m
    for j in range(1, m):
        P = P + (d[j] - d[j - 1]) * _MINUS_X ** (m - j)
    return P - d[-1]


def is_orbit(base: BaseSpec, cap: int = DEFAULT_CAP) -> Orbit:
    """Orbit of ``l`` under the negative-base map."""
    return compute_orbit(System.NEG, base.l, cap)


@dataclass(frozen=True)
class QuotientPoly:
    """``Q`` with ``P(x) = (x - beta) Q(x)``.

    ``neg_coeffs[i]`` multiplies ``(-x)^i``; ``kinds[i]`` is ``"lead"``,
    ``"first"`` (``T_{m+p-1-i} - T_0 - 1``) or ``"second"``
    (``T_{m+p-1-i} - T_{m-1-i}``).
    """

    neg_coeffs: tuple[FieldElem, ...]
    kinds: tuple[str, ...]

    @property
    def coefficients(self) -> tuple[FieldElem, ...]:
        """Ascending coefficients in powers of ``x``."""
        return tuple(c if i % 2 == 0 else -c for i, c in enumerate(self.neg_coeffs))

    @property
    def degree(self) -> int:
        return len(self.neg_coeffs) - 1

    def times_x_minus_beta(self) -> list[FieldElem]:
        q = self.coefficients
        beta = q[0].base.beta
        zero = q[0].base.zero
        out = []
        for i in range(len(q) + 1):
            hi = q[i - 1] if i >= 1 else zero
            lo = q[i] * beta if i < len(q) else zero
            out.append(hi - lo)
        return out


def quotient_poly(base: BaseSpec, word: EPWord, orbit: Orbit) -> QuotientPoly:
    """Build ``Q`` directly from the orbit points ``T_i = T^i(l)``."""
    m, p = word.m, word.p
    if not orbit.periodic:
        raise ValueError("orbit of l is not periodic")
    if len(orbit.states) < min(m + p, orbit.preperiod_len + orbit.period_len):
        raise ValueError("orbit too short")
    T = orbit.state
    coeffs: list[FieldElem] = [base.zero] * (m + p)
    kinds = [""] * (m + p)
    coeffs[m + p - 1] = -base.one
    kinds[m + p - 1] = "lead"
    for i in range(m, m + p - 1):
        coeffs[i] = T(m + p - 1 - i) - T(0) - 1
        kinds[i] = "first"
    for i in range(0, m):
        coeffs[i] = T(m + p - 1 - i) - T(m - 1 - i)
        kinds[i] = "second"
    return QuotientPoly(tuple(coeffs), tuple(kinds))


def check_coefficient_ranges(q: QuotientPoly, orbit: Orbit | None = None) -> bool:
    """First-type coefficients lie in ``[-1, 0)``, second-type in ``(-1, 1)``."""
    for c, kind in zip(q.neg_coeffs, q.kinds):
        if kind == "first" and not ((c + 1).sign() >= 0 and c.sign() < 0):
            return False
        if kind == "second" and not ((c + 1).sign() > 0 and (c - 1).sign() < 0):
            return False
    return True


def eval_in_field(P: Poly, base: BaseSpec) -> FieldElem:
    """``P(beta)`` computed exactly in Q(beta)."""
    acc = base.zero
    for c in reversed(P.coeffs):
        acc = acc.times_beta() + c
    return acc


def _certified_below(discs: list[RootDisc], bound: Fraction, strict: bool) -> bool | None:
    """All moduli below ``bound``? None if some enclosure straddles it."""
    ok = True
    for d in discs:
        if d.mod_hi < bound or (not strict and d.mod_hi <= bound):
            continue
        if d.mod_lo > bound or (strict and d.mod_lo >= bound):
            ok = False
            continue
        return None
    return ok


def verify_root_bound(isp: ISPolyResult, base: BaseSpec) -> bool:
    """Every root of ``P`` other than beta has modulus < 2 (certified).

    Raises :class:`Undecided` if an enclosure still contains 2 at the
    finest working precision.
    """
    for prec in _PRECISIONS:
        others = other_root_discs(isp.polynomial, base.root, prec)
        verdict = _certified_below(others, Fraction(2), strict=True)
        if verdict is not None:
            return verdict
    raise Undecided("root modulus enclosure still contains 2")


def conjugates_in_disc(base: BaseSpec, radius: Fraction = Fraction(2)) -> bool:
    """Every conjugate of beta has modulus <= radius (certified)."""
    if base.degree == 1:
        return True
    for prec in _PRECISIONS:
        verdict = _certified_below(other_root_discs(base.min_poly, base.root, prec), radius, strict=False)
        if verdict is not None:
            return verdict
    raise Undecided(f"conjugate modulus enclosure still contains {radius}")


# ---------------------------------------------------------------------------
# classification

@dataclass
class ClassificationReport:
    base_poly: str
    beta_enclosure: tuple[Fraction, Fraction]
    is_perron: Verdict
    is_pisot: Verdict
    is_salem: Verdict
    parry: EPWord | Inconclusive
    ito_sadahiro: EPWord | Inconclusive
    is_poly: ISPolyResult | None
    degree_bound_ok: bool | None
    minpoly_divides_isp: bool | None
    root_bound_ok: bool | None
    conjugate_max_modulus: tuple[Fraction, Fraction] | None
    is_poly_vanishes: bool | None = None

    @property
    def parry_periodic(self) -> bool:
        return isinstance(self.parry, EPWord)

    @property
    def is_periodic(self) -> bool:
        return isinstance(self.ito_sadahiro, EPWord)

    def to_dict(self) -> dict:
        def word(w):
            if isinstance(w, EPWord):
                return {"m": w.m, "p": w.p, "word": str(w)}
            return {"m": None, "p": None, "word": None, "inconclusive_steps": w.steps_taken,
                    "inconclusive_reason": w.reason}

        isp = None
        if self.is_poly is not None:
            P = self.is_poly.polynomial
            isp = {"coeffs": P.coeff_string(), "text": str(P), "monic": str(self.is_poly.monic())}
        cm = self.conjugate_max_modulus
        return {
            "base_poly": self.base_poly,
            "beta_enclosure": [str(self.beta_enclosure[0]), str(self.beta_enclosure[1])],
            "perron": self.is_perron.value,
            "pisot": self.is_pisot.value,
            "salem": self.is_salem.value,
            "parry": word(self.parry),
            "ito_sadahiro": word(self.ito_sadahiro),
            "is_poly": isp,
            "degree_bound_ok": self.degree_bound_ok,
            "minpoly_divides_isp": self.minpoly_divides_isp,
            "root_bound_ok": self.root_bound_ok,
            "conjugate_max_modulus": None if cm is None else [str(cm[0]), str(cm[1])],
        }


def _conjugate_verdicts(base: BaseSpec):
    p = base.min_poly
    if base.degree == 1:
        integral = p.is_monic()
        v = Verdict.YES if integral else Verdict.NO
        return v, v, Verdict.NO, None
    blo, bhi = base.interval(64)
    salem_shape = p.is_self_reciprocal() and p.degree >= 4
    minus_beta_root = eval_in_field(p.compose_neg(), base).is_zero()
    perron = pisot = None
    salem = Verdict.NO
    for prec in _PRECISIONS:
        others = other_root_discs(p, base.root, prec)
        mlo = max(d.mod_lo for d in others)
        mhi = max(d.mod_hi for d in others)
        if minus_beta_root or mlo > bhi:
            perron = Verdict.NO
        elif mhi < blo:
            perron = Verdict.YES
        if mhi < 1:
            pisot, salem = Verdict.YES, Verdict.NO
        elif any(d.mod_lo > 1 for d in others):
            pisot, salem = Verdict.NO, Verdict.NO
        elif salem_shape:
            inside = [d for d in others if d.mod_hi < 1]
            touching = [d for d in others if d.mod_lo <= 1 <= d.mod_hi]
            if len(inside) == 1 and len(inside) + len(touching) == len(others):
                pisot, salem = Verdict.NO, Verdict.YES
        if perron is not None and pisot is not None:
            break
    cm = (mlo, mhi)
    pisot = pisot or Verdict.BORDERLINE
    if pisot == Verdict.BORDERLINE:
        salem = Verdict.BORDERLINE
    if pisot == Verdict.YES or salem == Verdict.YES:
        perron = Verdict.YES
    return perron or Verdict.BORDERLINE, pisot, salem, cm


def classify(base: BaseSpec, cap: int = DEFAULT_CAP) -> ClassificationReport:
    """Full report: Perron/Pisot/Salem verdicts, Parry and Ito-Sadahiro
    words, and the Ito-Sadahiro polynomial facts when ``d(l)`` is periodic."""
    perron, pisot, salem, cm = _conjugate_verdicts(base)
    parry = d_star_pos_one(base, cap)
    orb = is_orbit(base, cap)
    dl = orb.word()
    isp = degree_ok = divides = root_ok = vanishes = None
    if isinstance(dl, EPWord):
        isp = build_is_poly(dl)
        vanishes = eval_in_field(isp.polynomial, base).is_zero()
        degree_ok = base.degree <= dl.m + dl.p
        divides = poly_divmod(isp.polynomial, base.min_poly)[1].is_zero()
        try:
            root_ok = verify_root_bound(isp, base)
        except Undecided:
            root_ok = None
    return ClassificationReport(
        base_poly=str(base.min_poly),
        beta_enclosure=base.interval(64),
        is_perron=perron,
        is_pisot=pisot,
        is_salem=salem,
        parry=parry,
        ito_sadahiro=dl,
        is_poly=isp,
        degree_bound_ok=degree_ok,
        minpoly_divides_isp=divides,
        root_bound_ok=root_ok,
        conjugate_max_modulus=cm,
        is_poly_vanishes=vanishes,
    )


# ---------------------------------------------------------------------------
# family scans

_RANGE = re.compile(r"^\s*([A-Za-z_]\w*)\s*=\s*(.+?)\s*\.\.\s*(.+?)\s*$")


def _int_expr(text: str, env: dict) -> int:
    val = eval_expression(text, env)
    if val.degree > 0 or (val.coeffs and val.coeffs[0].denominator != 1):
        raise PolyParseError(f"range bound {text!r} is not an integer")
    return int(val.coeffs[0]) if val.coeffs else 0


def parse_family(text: str) -> list[tuple[dict, Poly]]:
    """Expand ``"x^2-a*x-b; a=1..10; b=1..a"`` into ``(params, poly)`` pairs.

    Ranges are inclusive; later bounds may use earlier variables.
    """
    parts = [s for s in text.split(";")]
    template = parts[0].strip()
    ranges = []
    for part in parts[1:]:
        if not part.strip():
            continue
        mt = _RANGE.match(part)
        if not mt:
            raise PolyParseError(f"malformed range {part.strip()!r}")
        ranges.append(mt.groups())

    out: list[tuple[dict, Poly]] = []

    def rec(i: int, env: dict):
        if i == len(ranges):
            out.append((dict(env), eval_expression(template, env)))
            return
        name, lo, hi = ranges[i]
        for v in range(_int_expr(lo, env), _int_expr(hi, env) + 1):
            env[name] = v
            rec(i + 1, env)
        env.pop(name, None)

    rec(0, {})
    return out


@dataclass
class ScanSummary:
    parry_and_is: int = 0
    parry_not_is_observed: int = 0
    is_not_parry_observed: int = 0
    inconclusive: int = 0
    skipped: int = 0
    flagged: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "parry_and_is": self.parry_and_is,
            "parry_not_is_observed": self.parry_not_is_observed,
            "is_not_parry_observed": self.is_not_parry_observed,
            "inconclusive": self.inconclusive,
            "skipped": self.skipped,
            "flagged": self.flagged,
        }


def scan_flags(rep: dict) -> list[str]:
    """Observations that would contradict known results or the conjectured
    coincidence of Parry and Ito-Sadahiro numbers."""
    flags = []
    parry_ok = rep["parry"]["word"] is not None
    is_ok = rep["ito_sadahiro"]["word"] is not None
    if parry_ok != is_ok:
        flags.append("parry_vs_ito_sadahiro_mismatch")
    if rep["root_bound_ok"] is False:
        flags.append("is_poly_root_of_modulus_>=_2")
    if rep["minpoly_divides_isp"] is False:
        flags.append("minpoly_does_not_divide_is_poly")
    if rep["degree_bound_ok"] is False:
        flags.append("degree_exceeds_m_plus_p")
    if is_ok and Fraction(rep["beta_enclosure"][0]) >= 2 and rep["perron"] == "no":
        flags.append("is_number_>=2_not_perron")
    return flags


def _scan_one(item):
    index, params, coeffs, cap = item
    poly = Poly(coeffs)
    try:
        base = BaseSpec(poly)
        rep = classify(base, cap).to_dict()
    except (BaseError, ZeroDivisionError) as exc:
        # ZeroDivisionError: a reducible input made beta + 1 a zero divisor
        return {"family_index": index, "params": params, "base_poly": str(poly), "skipped": str(exc)}
    rep = {"family_index": index, "params": params, **rep}
    rep["flags"] = scan_flags(rep)
    return rep


def _cache_path(cache_dir: str | os.PathLike | None) -> Path:
    root = cache_dir or os.environ.get("NEGABASE_CACHE_DIR") or Path.home() / ".cache" / "negabase"
    return Path(root) / "scan_cache.jsonl"


def _cache_key(poly: Poly, cap: int) -> str:
    return f"{poly}|cap={cap}"


def scan(family: str | Iterable[tuple[dict, Poly]], cap: int = DEFAULT_CAP,
         sink: Callable[[dict], None] | None = None, *, jobs: int = 1,
         cache_dir: str | os.PathLike | None = None, use_cache: bool = False,
         fresh: bool = False) -> tuple[list[dict], ScanSummary]:
    """Classify every base of a family.

    Reports are emitted to ``sink`` in family order regardless of
    completion order. Mismatches between the Parry and Ito-Sadahiro
    verdicts (and violations of the proven bounds) are flagged on stderr.
    """
    members = parse_family(family) if isinstance(family, str) else list(family)
    path = _cache_path(cache_dir) if use_cache else None
    stored: dict[str, dict] = {}
    if path is not None and path.exists():
        for line in path.read_text().splitlines():
            if line.strip():
                rec = json.loads(line)
                stored[rec["key"]] = rec["report"]
    cache = {} if fresh else stored

    todo, results = [], {}
    for i, (params, poly) in enumerate(members):
        key = _cache_key(poly, cap)
        if key in cache:
            results[i] = {"family_index": i, "params": params, **{k: v for k, v in cache[key].items()
                                                                   if k not in ("family_index", "params")}}
        else:
            todo.append((i, params, poly.coeffs, cap))

    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for rep in pool.map(_scan_one, todo):
                results[rep["family_index"]] = rep
    else:
        for item in todo:
            rep = _scan_one(item)
            results[rep["family_index"]] = rep

    if path is not None and todo:
        for i, params, coeffs, _ in todo:
            stored[_cache_key(Poly(coeffs), cap)] = results[i]
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w") as fh:
            for key, rep in stored.items():
                fh.write(json.dumps({"key": key, "report": rep}) + "\n")

    summary = ScanSummary()
    reports = [results[i] for i in sorted(results)]
    for rep in reports:
        if "skipped" in rep:
            summary.skipped += 1
        else:
            parry_ok = rep["parry"]["word"] is not None
            is_ok = rep["ito_sadahiro"]["word"] is not None
            if parry_ok and is_ok:
                summary.parry_and_is += 1
            elif parry_ok:
                summary.parry_not_is_observed += 1
            elif is_ok:
                summary.is_not_parry_observed += 1
            else:
                summary.inconclusive += 1
            if rep.get("flags"):
                summary.flagged.append({"base_poly": rep["base_poly"], "flags": rep["flags"]})
                print(f"!!! COUNTEREXAMPLE CANDIDATE {rep['base_poly']}: {', '.join(rep['flags'])}",
                      file=sys.stderr)
        if sink is not None:
            sink(rep)
    return reports, summary
