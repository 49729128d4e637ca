"""Exact rationals, polynomials over Q, real-root isolation and certified
complex-root moduli.

Rationals are :class:`fractions.Fraction`. Polynomials are immutable
:class:`Poly` objects with ascending coefficients.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

__all__ = [
    "Poly",
    "PolyParseError",
    "NoConjugates",
    "RootIsolation",
    "RootDisc",
    "parse_poly",
    "parse_rational",
    "poly_eval",
    "poly_divmod",
    "poly_gcd",
    "squarefree_part",
    "sturm_sequence",
    "count_real_roots",
    "isolate_real_roots",
    "root_discs",
    "max_other_root_modulus",
    "other_root_discs",
    "sqrt_bounds",
]


class PolyParseError(ValueError):
    """Raised for malformed polynomial or rational text."""


class NoConjugates(ValueError):
    """Raised when a polynomial has no roots besides the excluded one."""


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise TypeError("floats are not accepted as exact coefficients")
    return Fraction(c)


class Poly:
    """Univariate polynomial with rational coefficients, ascending order.

    Trailing zero coefficients are stripped, so ``degree == len(coeffs) - 1``
    and the zero polynomial has no coefficients (degree -1).
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def int_coeffs(self) -> list[int]:
        if not self.is_integral():
            raise ValueError(f"{self} has non-integer coefficients")
        return [int(c) for c in self.coeffs]

    def is_self_reciprocal(self) -> bool:
        """True when the coefficient list is a palindrome (up to global sign)."""
        cs = self.coeffs
        return bool(cs) and (cs == cs[::-1] or cs == tuple(-c for c in cs[::-1]))

    def primitive(self) -> "Poly":
        """Integer polynomial with content stripped and positive leading coefficient."""
        if self.is_zero():
            return self
        den = math.lcm(*(c.denominator for c in self.coeffs))
        ints = [int(c * den) for c in self.coeffs]
        g = math.gcd(*ints)
        if ints[-1] < 0:
            g = -g
        return Poly(i // g for i in ints)

    def monic(self) -> "Poly":
        lc = self.lc
        return Poly(c / lc for c in self.coeffs)

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def compose_neg(self) -> "Poly":
        """p(-x)."""
        return Poly(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly((other,))

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative exponent")
        result, base = Poly((1,)), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other) -> tuple["Poly", "Poly"]:
        return poly_divmod(self, self._coerce(other))

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def __call__(self, x):
        return poly_eval(self, x)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly((other,)).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({self.coeff_string()!r})"

    def coeff_string(self) -> str:
        """Ascending comma-separated coefficients, e.g. ``"-1,-1,0,1"``."""
        if not self.coeffs:
            return "0"
        return ",".join(str(c) for c in self.coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if i == 0:
                body = str(a)
            else:
                mono = "x" if i == 1 else f"x^{i}"
                if a == 1:
                    body = mono
                elif a.denominator == 1:
                    body = f"{a}*{mono}"
                else:
                    body = f"({a})*{mono}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += sign + body
        return out


# ---------------------------------------------------------------------------
# parsing

_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Pow)


def _eval_node(node, env: dict):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body, env)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Poly((node.value,))
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise PolyParseError(f"unknown symbol {node.id!r}")
        return env[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        val = _eval_node(node.operand, env)
        return -val if isinstance(node.op, ast.USub) else val
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Div):
            left, right = _eval_node(node.left, env), _eval_node(node.right, env)
            if right.degree != 0:
                raise PolyParseError("division only by nonzero constants")
            return left * Poly((1 / right.coeffs[0],))
        if not isinstance(node.op, _ALLOWED_BINOPS):
            raise PolyParseError(f"operator {type(node.op).__name__} not allowed")
        left = _eval_node(node.left, env)
        right = _eval_node(node.right, env)
        if isinstance(node.op, ast.Pow):
            if right.degree > 0 or (right.coeffs and right.coeffs[0].denominator != 1):
                raise PolyParseError("exponents must be integer constants")
            k = int(right.coeffs[0]) if right.coeffs else 0
            if k < 0 or k > 10_000:
                raise PolyParseError("exponent out of range")
            return left ** k
        if isinstance(node.op, ast.Add):
            return left + right
        if isinstance(node.op, ast.Sub):
            return left - right
        return left * right
    raise PolyParseError(f"unsupported syntax: {ast.dump(node)}")


def eval_expression(text: str, env: dict | None = None) -> Poly:
    """Evaluate an arithmetic expression in ``x`` (and optional integer
    variables from ``env``) to a :class:`Poly`. ``^`` means power."""
    scope = {"x": Poly.x()}
    for name, value in (env or {}).items():
        scope[name] = value if isinstance(value, Poly) else Poly((value,))
    src = text.strip().replace("^", "**")
    if not src:
        raise PolyParseError("empty polynomial")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise PolyParseError(f"cannot parse {text!r}: {exc.msg}") from None
    return _eval_node(tree, scope)


def parse_poly(text: str) -> Poly:
    """Parse ``"c0,c1,...,cn"`` (ascending) or a symbolic form like ``"x^3-x-1"``."""
    s = text.strip()
    if "," in s or ("x" not in s and s.lstrip("+-").replace("/", "").isdigit()):
        try:
            return Poly(parse_rational(tok) for tok in s.split(","))
        except PolyParseError:
            raise PolyParseError(f"malformed coefficient list {text!r}") from None
    return eval_expression(s)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or an integer literal."""
    s = text.strip()
    try:
        if "/" in s:
            num, den = s.split("/")
            value = Fraction(int(num), int(den))
        else:
            value = Fraction(int(s))
    except (ValueError, ZeroDivisionError):
        raise PolyParseError(f"malformed rational {text!r}") from None
    return value


# ---------------------------------------------------------------------------
# core algebra

def poly_eval(p: Poly, x):
    """Horner evaluation; exact when ``x`` is an int or Fraction."""
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc if not isinstance(acc, int) else Fraction(acc)


def poly_divmod(a, b) -> tuple[Poly, Poly]:
    """Euclidean division over Q: ``a = b*q + r`` with ``deg r < deg b``."""
    a = a if isinstance(a, Poly) else Poly(a)
    b = b if isinstance(b, Poly) else Poly(b)
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a.coeffs)
    db, lc = b.degree, b.lc
    if len(rem) - 1 < db:
        return Poly(), a
    quot = [Fraction(0)] * (len(rem) - db)
    for k in range(len(rem) - 1 - db, -1, -1):
        c = rem[k + db] / lc
        quot[k] = c
        if c:
            for j, bc in enumerate(b.coeffs):
                rem[k + j] -= c * bc
    return Poly(quot), Poly(rem[:db])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, poly_divmod(a, b)[1]
    return a.monic() if not a.is_zero() else a


def squarefree_part(p: Poly) -> Poly:
    """p / gcd(p, p'), made primitive."""
    if p.degree <= 0:
        return p
    g = poly_gcd(p, p.derivative())
    return poly_divmod(p, g)[0].primitive()


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-poly_divmod(seq[-2], seq[-1])[1])
    return seq[:-1]


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _variations(seq: Sequence[Poly], x: Fraction) -> int:
    signs = [s for s in (_sign(poly_eval(q, x)) for q in seq) if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def count_real_roots(p: Poly, lo: Fraction, hi: Fraction, seq=None) -> int:
    """Number of distinct real roots in ``(lo, hi]`` (Sturm's theorem)."""
    seq = seq if seq is not None else sturm_sequence(squarefree_part(p))
    return _variations(seq, lo) - _variations(seq, hi)


def cauchy_bound(p: Poly) -> Fraction:
    lc = abs(p.lc)
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


# ---------------------------------------------------------------------------
# real-root isolation

@dataclass(frozen=True)
class RootIsolation:
    """Half-open interval ``(lo, hi]`` holding exactly one real root of
    ``polynomial``; ``squarefree`` records whether the input polynomial had
    no repeated roots. Sign tests use the squarefree part."""

    polynomial: Poly
    lo: Fraction
    hi: Fraction
    squarefree: bool = True

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def _core(self) -> Poly:
        return self.polynomial if self.squarefree else squarefree_part(self.polynomial)

    def bisect(self) -> "RootIsolation":
        core = self._core()
        lo, hi = self.lo, self.hi
        mid = (lo + hi) / 2
        s_hi = _sign(poly_eval(core, hi))
        s_mid = _sign(poly_eval(core, mid))
        if s_hi == 0:
            return RootIsolation(self.polynomial, mid, hi, self.squarefree)
        if s_mid == 0:
            return RootIsolation(self.polynomial, (lo + mid) / 2, mid, self.squarefree)
        if s_mid == s_hi:
            return RootIsolation(self.polynomial, lo, mid, self.squarefree)
        return RootIsolation(self.polynomial, mid, hi, self.squarefree)

    def refine(self, width: Fraction) -> "RootIsolation":
        """Narrowed copy with ``hi - lo <= width``."""
        iso = self
        while iso.width > width:
            iso = iso.bisect()
        return iso

    def contains(self, value: Fraction) -> bool:
        return self.lo < value <= self.hi

    def approx(self, dps: int = 30):
        iso = self.refine(Fraction(1, 10 ** (dps + 2)))
        with mpmath.workdps(dps):
            return mpmath.mpf(iso.lo.numerator) / iso.lo.denominator


def _dyadic_bound(b: Fraction) -> Fraction:
    k = max(0, math.ceil(b).bit_length())
    return Fraction(2**k)


def isolate_real_roots(p: Poly) -> list[RootIsolation]:
    """Isolate every distinct real root of ``p`` in disjoint dyadic
    intervals ``(lo, hi]``, sorted ascending."""
    if p.is_zero():
        raise ValueError("cannot isolate the roots of the zero polynomial")
    core = squarefree_part(p)
    flag = core.degree == p.degree
    if core.degree <= 0:
        return []
    seq = sturm_sequence(core)
    bound = _dyadic_bound(cauchy_bound(core))
    out: list[RootIsolation] = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = count_real_roots(core, lo, hi, seq)
        if n == 0:
            continue
        if n == 1:
            out.append(RootIsolation(p, lo, hi, flag))
            continue
        mid = (lo + hi) / 2
        # keep split points off the roots so every endpoint has a nonzero sign
        step = (hi - lo) / 4
        while poly_eval(core, mid) == 0:
            step /= 2
            mid = (lo + hi) / 2 + step
        stack.append((mid, hi))
        stack.append((lo, mid))
    out.sort(key=lambda r: r.lo)
    return out


# ---------------------------------------------------------------------------
# certified complex-root enclosures

def sqrt_bounds(q: Fraction, bits: int = 96) -> tuple[Fraction, Fraction]:
    """Rational ``(lo, hi)`` with ``lo <= sqrt(q) <= hi`` and ``hi - lo <= 2**-bits``."""
    if q < 0:
        raise ValueError("negative argument")
    scale = 1 << (2 * bits)
    s = math.isqrt(q.numerator * scale // q.denominator)
    lo = Fraction(s, 1 << bits)
    hi = Fraction(s + 1, 1 << bits)
    if lo * lo == q:
        hi = lo
    return lo, hi


def _to_fraction(x: mpmath.mpf, bits: int) -> Fraction:
    return Fraction(int(mpmath.nint(x * mpmath.mpf(2) ** bits)), 1 << bits)


def _eval_gaussian(p: Poly, re: Fraction, im: Fraction) -> tuple[Fraction, Fraction]:
    ar, ai = Fraction(0), Fraction(0)
    for c in reversed(p.coeffs):
        ar, ai = ar * re - ai * im + c, ar * im + ai * re
    return ar, ai


@dataclass(frozen=True)
class RootDisc:
    """Closed disc certified to contain exactly one root of a squarefree
    polynomial, plus a rational enclosure of that root's modulus."""

    re: Fraction
    im: Fraction
    radius: Fraction
    mod_lo: Fraction
    mod_hi: Fraction

    def meets_interval(self, lo: Fraction, hi: Fraction) -> bool:
        """Does the disc intersect the real segment ``[lo, hi]``?"""
        nearest = min(max(self.re, lo), hi)
        dx = self.re - nearest
        return dx * dx + self.im * self.im <= self.radius * self.radius

    def center(self) -> complex:
        return complex(float(self.re), float(self.im))


def _try_discs(core: Poly, dps: int) -> list[RootDisc] | None:
    n = core.degree
    bits = int(dps * 3.33) + 8
    deriv = core.derivative()
    with mpmath.workdps(dps):
        coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(core.coeffs)]
        try:
            approx = mpmath.polyroots(coeffs, maxsteps=50 + 10 * dps, extraprec=2 * dps)
        except mpmath.libmp.NoConvergence:
            return None
        centers = [(_to_fraction(mpmath.re(z), bits), _to_fraction(mpmath.im(z), bits)) for z in approx]
    discs = []
    for re, im in centers:
        pr, pi = _eval_gaussian(core, re, im)
        dr, di = _eval_gaussian(deriv, re, im)
        dmod2 = dr * dr + di * di
        if dmod2 == 0:
            return None
        # Some root lies within n*|p(z)/p'(z)| of any z.
        r2 = Fraction(n * n) * (pr * pr + pi * pi) / dmod2
        radius = sqrt_bounds(r2, bits)[1] if r2 else Fraction(0)
        m_lo, m_hi = sqrt_bounds(re * re + im * im, bits)
        discs.append(RootDisc(re, im, radius, max(Fraction(0), m_lo - radius), m_hi + radius))
    for i in range(len(discs)):
        for j in range(i + 1, len(discs)):
            a, b = discs[i], discs[j]
            d2 = (a.re - b.re) ** 2 + (a.im - b.im) ** 2
            if d2 <= (a.radius + b.radius) ** 2:
                return None
    return discs


def root_discs(p: Poly, precision: Fraction = Fraction(1, 10**15)) -> list[RootDisc]:
    """Certified, pairwise disjoint discs, one per distinct complex root of ``p``.

    Roots are approximated numerically and then validated exactly: each disc
    is centred at a rational approximation ``z`` with radius
    ``deg * |p(z)/p'(z)|`` (computed in exact rationals), which always contains
    a root; pairwise disjointness of ``deg`` such discs pins one root in each.
    The working precision doubles until every modulus enclosure is narrower
    than ``precision``.
    """
    core = squarefree_part(p)
    if core.degree <= 0:
        return []
    dps = 30
    while dps <= 4000:
        discs = _try_discs(core, dps)
        if discs is not None and all(d.mod_hi - d.mod_lo <= precision for d in discs):
            return discs
        dps *= 2
    raise ArithmeticError(f"could not certify the roots of {p}")


def other_root_discs(p: Poly, exclude: RootIsolation,
                     precision: Fraction = Fraction(1, 10**15)) -> list[RootDisc]:
    """Certified discs for every distinct root of ``p`` except the real
    root isolated by ``exclude``."""
    discs = root_discs(p, precision)
    iso = exclude
    for _ in range(400):
        hits = [d for d in discs if d.meets_interval(iso.lo, iso.hi)]
        if len(hits) == 1:
            return [d for d in discs if d is not hits[0]]
        iso = iso.bisect()
    raise ArithmeticError("could not match the excluded root to a disc")


def max_other_root_modulus(p: Poly, exclude: RootIsolation,
                           precision: Fraction = Fraction(1, 10**15)) -> tuple[Fraction, Fraction]:
    """Enclosure ``(lower, upper)`` of the largest modulus among the roots of
    ``p`` other than the excluded real root, with ``upper - lower <= precision``.

    Raises :class:`NoConjugates` when no other root exists.
    """
    others = other_root_discs(p, exclude, precision)
    if not others:
        raise NoConjugates(f"{p} has no roots besides the excluded one")
    return max(d.mod_lo for d in others), max(d.mod_hi for d in others)
