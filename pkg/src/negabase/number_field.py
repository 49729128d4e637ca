"""Exact arithmetic in Q(beta) for a real algebraic base beta > 1.

Elements are coordinate vectors in the power basis ``1, beta, ...,
beta**(n-1)``. Zero is decided algebraically (all coordinates vanish);
the sign of a nonzero element is decided by evaluating it on ever
narrower rational intervals around beta.
"""

from __future__ import annotations

import enum
import functools
import math
from fractions import Fraction
from typing import Iterable, Sequence

from .exact_numbers import (
    Poly,
    PolyParseError,
    RootIsolation,
    count_real_roots,
    isolate_real_roots,
    parse_poly,
    parse_rational,
    poly_eval,
    poly_gcd,
)

__all__ = [
    "Relation",
    "BaseError",
    "BaseSpec",
    "FieldElem",
    "field_add",
    "field_mul",
    "field_neg",
    "field_inv",
    "field_sign",
    "field_floor",
    "compare",
]

# Extra refinement beyond the coordinate size; only exhausted if the
# minimal polynomial is reducible.
EXTRA_BITS = 1 << 14


class Relation(enum.IntEnum):
    LT = -1
    EQ = 0
    GT = 1

    @classmethod
    def of(cls, s: int) -> "Relation":
        return cls((s > 0) - (s < 0))


class BaseError(ValueError):
    """Invalid base specification (no root > 1, not an algebraic integer...)."""


@functools.lru_cache(maxsize=4096)
def _refined(poly: Poly, lo: Fraction, hi: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    iso = RootIsolation(poly, lo, hi).refine(Fraction(1, 1 << bits))
    return iso.lo, iso.hi


class BaseSpec:
    """The base beta: a root > 1 of an irreducible polynomial.

    For degree >= 2 the polynomial must be monic with integer coefficients
    (beta an algebraic integer). Degree 1 encodes a rational beta.
    Irreducibility is assumed, not checked.
    """

    __slots__ = ("min_poly", "root", "root_index", "degree", "_mulrows", "__dict__")

    def __init__(self, min_poly: Poly, root_index: int | None = None):
        p = min_poly.primitive()
        if p.degree < 1:
            raise BaseError("base polynomial must have degree >= 1")
        if p.degree >= 2 and not p.is_monic():
            raise BaseError(f"{p} is not monic: beta must be an algebraic integer")
        roots = isolate_real_roots(p)
        if not roots:
            raise BaseError(f"{p} has no real roots")
        if not roots[0].squarefree:
            raise BaseError(f"{p} has repeated roots; supply the minimal polynomial")
        if root_index is None:
            root_index = len(roots) - 1
        if not -len(roots) <= root_index < len(roots):
            raise BaseError(f"root index {root_index} out of range ({len(roots)} real roots)")
        root_index %= len(roots)
        iso = roots[root_index]
        if poly_eval(p, Fraction(1)) == 0 and iso.contains(Fraction(1)):
            raise BaseError("selected root equals 1")
        while not (iso.lo >= 1 or iso.hi <= 1):
            iso = iso.bisect()
        if iso.hi <= 1:
            raise BaseError(f"selected root of {p} is not > 1")
        self.min_poly = p
        self.root = iso
        self.root_index = root_index
        self.degree = p.degree
        # beta * beta**(n-1) = -sum(a_i beta**i) / a_n
        lc = p.lc
        self._mulrows = tuple(-c / lc for c in p.coeffs[:-1])

    @classmethod
    def parse(cls, text: str, root_index: int | None = None) -> "BaseSpec":
        """``"x^3-x-1"``, ``"-1,-1,0,1"`` or a rational literal such as ``"5/2"``."""
        t = text.strip()
        if "x" not in t and "," not in t:
            q = parse_rational(t)
            return cls(Poly((-q, 1)), root_index)
        return cls(parse_poly(t), root_index)

    @classmethod
    def rational(cls, q) -> "BaseSpec":
        return cls(Poly((-Fraction(q), 1)))

    def __eq__(self, other) -> bool:
        return (isinstance(other, BaseSpec) and self.min_poly == other.min_poly
                and self.root_index == other.root_index)

    def __hash__(self) -> int:
        return hash((self.min_poly, self.root_index))

    def __repr__(self) -> str:
        return f"BaseSpec({str(self.min_poly)!r}, root_index={self.root_index})"

    def __str__(self) -> str:
        return str(self.min_poly)

    @property
    def is_integer_base(self) -> bool:
        """beta is an algebraic integer (monic integer minimal polynomial)."""
        return self.min_poly.is_monic() and self.min_poly.is_integral()

    def interval(self, bits: int) -> tuple[Fraction, Fraction]:
        """Rational ``(lo, hi)`` around beta with width at most ``2**-bits``.

        Returns narrowed copies; the stored isolation is never mutated.
        """
        if self.degree == 1:
            b = -self.min_poly.coeffs[0] / self.min_poly.coeffs[1]
            return b, b
        return _refined(self.min_poly, self.root.lo, self.root.hi, bits)

    def approx(self) -> float:
        lo, hi = self.interval(60)
        return float((lo + hi) / 2)

    # distinguished elements --------------------------------------------

    def elem(self, coords: Iterable) -> "FieldElem":
        return FieldElem(self, coords)

    def from_rational(self, q) -> "FieldElem":
        return FieldElem(self, [q])

    @functools.cached_property
    def zero(self) -> "FieldElem":
        return FieldElem(self, ())

    @functools.cached_property
    def one(self) -> "FieldElem":
        return FieldElem(self, (1,))

    @functools.cached_property
    def beta(self) -> "FieldElem":
        if self.degree == 1:
            return FieldElem(self, (-self.min_poly.coeffs[0] / self.min_poly.coeffs[1],))
        return FieldElem(self, (0, 1))

    @functools.cached_property
    def l(self) -> "FieldElem":
        """Left end of the negative-base interval, ``-beta/(beta+1)``."""
        return -self.beta / (self.beta + 1)

    @functools.cached_property
    def r(self) -> "FieldElem":
        """Right end (excluded), ``1/(beta+1)``."""
        return self.one / (self.beta + 1)

    def power(self, k: int) -> "FieldElem":
        return self.beta ** k

    def parse_elem(self, text: str) -> "FieldElem":
        """Comma-separated coordinates ``"c0,c1,..."`` or a single rational."""
        parts = [p for p in text.split(",")]
        coords = [parse_rational(p) for p in parts]
        if len(coords) > self.degree:
            raise PolyParseError(f"{len(coords)} coordinates for a degree-{self.degree} base")
        return FieldElem(self, coords)


def _reduce(base: BaseSpec, coeffs: list[Fraction]) -> tuple[Fraction, ...]:
    n = base.degree
    rows = base._mulrows
    for k in range(len(coeffs) - 1, n - 1, -1):
        c = coeffs[k]
        if c:
            coeffs[k] = Fraction(0)
            off = k - n
            for i, a in enumerate(rows):
                if a:
                    coeffs[off + i] += c * a
    del coeffs[n:]
    return tuple(coeffs)


class FieldElem:
    """Immutable element of Q(beta): ``sum(coords[i] * beta**i)``."""

    __slots__ = ("base", "coords", "_hash")

    def __init__(self, base: BaseSpec, coords: Iterable = ()):
        cs = [c if isinstance(c, Fraction) else Fraction(c) for c in coords]
        n = base.degree
        if len(cs) > n:
            cs = list(_reduce(base, cs))
        cs.extend([Fraction(0)] * (n - len(cs)))
        self.base = base
        self.coords: tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    @classmethod
    def _raw(cls, base: BaseSpec, coords: tuple[Fraction, ...]) -> "FieldElem":
        obj = cls.__new__(cls)
        obj.base = base
        obj.coords = coords
        obj._hash = None
        return obj

    # predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElem):
            return self.coords == other.coords and self.base == other.base
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coords)
        return self._hash

    def __repr__(self) -> str:
        return f"FieldElem({self.coord_string()!r}, base={str(self.base)!r})"

    def coord_string(self) -> str:
        return ",".join(str(c) for c in self.coords)

    def __str__(self) -> str:
        return str(Poly(self.coords)).replace("x", "b") if any(self.coords) else "0"

    # arithmetic ---------------------------------------------------------

    def _lift(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.base is not self.base and other.base != self.base:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElem(self.base, (other,))
        return NotImplemented

    def __add__(self, other) -> "FieldElem":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return FieldElem._raw(self.base, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self) -> "FieldElem":
        return FieldElem._raw(self.base, tuple(-a for a in self.coords))

    def __sub__(self, other) -> "FieldElem":
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return FieldElem._raw(self.base, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other) -> "FieldElem":
        return (-self) + other

    def __mul__(self, other) -> "FieldElem":
        if isinstance(other, (int, Fraction)):
            return FieldElem._raw(self.base, tuple(a * other for a in self.coords))
        other = self._lift(other)
        if other is NotImplemented:
            return other
        a, b = self.coords, other.coords
        n = len(a)
        prod = [Fraction(0)] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return FieldElem._raw(self.base, _reduce(self.base, prod))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        """Multiplicative inverse via the extended Euclidean algorithm in Q[x]."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(beta)")
        if self.is_rational():
            return FieldElem(self.base, (1 / self.coords[0],))
        # s*a + t*m = g, track s only
        r0, r1 = self.base.min_poly, Poly(self.coords)
        s0, s1 = Poly(), Poly((1,))
        while not r1.is_zero():
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r0.degree != 0:
            raise ZeroDivisionError("element is a zero divisor: minimal polynomial is reducible")
        inv = s0 * Poly((1 / r0.coeffs[0],))
        return FieldElem(self.base, inv.coeffs)

    def __truediv__(self, other) -> "FieldElem":
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> "FieldElem":
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int) -> "FieldElem":
        if k < 0:
            return self.inverse() ** (-k)
        result, b = self.base.one, self
        while k:
            if k & 1:
                result = result * b
            b = b * b
            k >>= 1
        return result

    def times_beta(self) -> "FieldElem":
        """beta * self, via the companion shift (no general multiplication)."""
        cs = self.coords
        n = len(cs)
        if n == 1:
            return self * self.base.beta
        top = cs[-1]
        out = [Fraction(0)] + list(cs[:-1])
        if top:
            for i, a in enumerate(self.base._mulrows):
                out[i] += top * a
        return FieldElem._raw(self.base, tuple(out))

    # order --------------------------------------------------------------

    def interval(self, bits: int) -> tuple[Fraction, Fraction]:
        """Rational enclosure of the real value from a beta interval of width ``2**-bits``."""
        lo, hi = self.base.interval(bits)
        vlo = vhi = self.coords[0]
        plo = phi = Fraction(1)
        for c in self.coords[1:]:
            plo *= lo
            phi *= hi
            if c > 0:
                vlo += c * plo
                vhi += c * phi
            elif c < 0:
                vlo += c * phi
                vhi += c * plo
        return vlo, vhi

    def _start_bits(self) -> int:
        size = max(c.numerator.bit_length() + c.denominator.bit_length() for c in self.coords)
        return 1 << max(6, (size + 64).bit_length())

    def sign(self) -> int:
        if self.is_rational():
            c = self.coords[0]
            return (c > 0) - (c < 0)
        bits = self._start_bits()
        limit = bits + EXTRA_BITS
        checked = False
        while bits <= limit:
            lo, hi = self.interval(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            if not checked:
                checked = True
                if self._equals_integer(0):
                    return 0
            bits *= 2
        raise ArithmeticError("sign undecided")

    def floor(self) -> int:
        if self.is_rational():
            return math.floor(self.coords[0])
        # Irrational values are never integers, so a narrow enough
        # enclosure contains none.
        bits = self._start_bits()
        limit = bits + EXTRA_BITS
        checked = False
        while bits <= limit:
            lo, hi = self.interval(bits)
            f = math.floor(lo)
            if hi < f + 1:
                return f
            if not checked and hi - lo < 1:
                # only reachable through a reducible polynomial
                checked = True
                if self._equals_integer(f + 1):
                    return f + 1
            bits *= 2
        raise ArithmeticError("floor undecided")

    def _equals_integer(self, k: int) -> bool:
        """Exact test ``self == k`` at the selected root, valid even when
        the defining polynomial is reducible."""
        base = self.base
        c = Poly(self.coords) - k
        g = poly_gcd(base.min_poly, c)
        return g.degree >= 1 and count_real_roots(g, base.root.lo, base.root.hi) > 0

    def __float__(self) -> float:
        lo, hi = self.interval(80)
        return float((lo + hi) / 2)

    def _cmp(self, other) -> int:
        other = self._lift(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare FieldElem with {type(other).__name__}")
        return (self - other).sign()

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0


def field_add(a: FieldElem, b: FieldElem) -> FieldElem:
    return a + b


def field_mul(a: FieldElem, b: FieldElem) -> FieldElem:
    return a * b


def field_neg(a: FieldElem) -> FieldElem:
    return -a


def field_inv(a: FieldElem) -> FieldElem:
    return a.inverse()


def field_sign(a: FieldElem) -> int:
    return a.sign()


def field_floor(a: FieldElem) -> int:
    return a.floor()


def compare(a: FieldElem, b: FieldElem) -> Relation:
    if a.coords == b.coords:
        return Relation.EQ
    return Relation.of((a - b).sign())


def common_denominator(coords: Sequence[Fraction]) -> int:
    return math.lcm(1, *(c.denominator for c in coords))
