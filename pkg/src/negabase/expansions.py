"""Digit expansions in base beta (Renyi) and base -beta (Ito-Sadahiro).

Both systems iterate a piecewise-affine map on Q(beta) and read off one
digit per step. Orbits are computed exactly, so eventual periodicity is
detected by the first repeated state.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from . import kernels
from .number_field import BaseSpec, FieldElem

__all__ = [
    "System",
    "DomainError",
    "EPWord",
    "Inconclusive",
    "Orbit",
    "Finiteness",
    "DEFAULT_CAP",
    "step_pos",
    "step_neg",
    "orbit",
    "expand",
    "d_neg_l",
    "d_star_neg_r",
    "d_star_pos_one",
    "expand_any",
    "is_finite_neg",
    "word_value",
]

DEFAULT_CAP = 100_000
# Coordinates of a periodic orbit stay bounded; past this size the exact
# floor becomes the bottleneck and the run is reported as inconclusive.
MAX_STATE_BITS = 2048


class System(str, enum.Enum):
    POS = "pos"
    NEG = "neg"


class DomainError(ValueError):
    """Argument outside the domain of the active transformation."""


def _primitive_root(word: tuple[int, ...]) -> tuple[int, ...]:
    p = len(word)
    for d in range(1, p + 1):
        if p % d == 0 and word[:d] * (p // d) == word:
            return word[:d]
    return word


@dataclass(frozen=True)
class EPWord:
    """Eventually periodic infinite word ``preperiod (period)^omega``.

    Stored in canonical form: the period is primitive and the preperiod as
    short as possible, so equal infinite words compare equal.
    """

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        pre = tuple(int(d) for d in self.preperiod)
        per = tuple(int(d) for d in self.period)
        if not per:
            raise ValueError("period must be nonempty")
        if any(d < 0 for d in pre + per):
            raise ValueError("digits must be non-negative")
        per = _primitive_root(per)
        while pre and pre[-1] == per[-1]:
            per = per[-1:] + per[:-1]
            pre = pre[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @property
    def m(self) -> int:
        return len(self.preperiod)

    @property
    def p(self) -> int:
        return len(self.period)

    @property
    def alphabet_bound(self) -> int:
        return max(self.preperiod + self.period)

    def is_finite(self) -> bool:
        """Suffix ``0^omega``."""
        return self.period == (0,)

    def digit(self, i: int) -> int:
        """The ``i``-th digit, 1-based."""
        if i <= self.m:
            return self.preperiod[i - 1]
        return self.period[(i - self.m - 1) % self.p]

    def prefix(self, k: int) -> tuple[int, ...]:
        return tuple(self.digit(i) for i in range(1, k + 1))

    def tail(self, i: int) -> "EPWord":
        """Suffix starting at position ``i`` (1-based), i.e. ``i - 1`` digits dropped."""
        drop = i - 1
        if drop <= self.m:
            return EPWord(self.preperiod[drop:], self.period)
        r = (drop - self.m) % self.p
        return EPWord((), self.period[r:] + self.period[:r])

    @classmethod
    def parse(cls, text: str) -> "EPWord":
        """``"d1 d2 ... dm | p1 ... pp"``; the bar is mandatory."""
        if text.count("|") != 1:
            raise ValueError(f"word {text!r} needs exactly one '|'")
        left, right = text.split("|")
        try:
            pre = [int(t) for t in left.split()]
            per = [int(t) for t in right.split()]
        except ValueError:
            raise ValueError(f"malformed digits in {text!r}") from None
        return cls(tuple(pre), tuple(per))

    def __str__(self) -> str:
        pre = " ".join(map(str, self.preperiod))
        per = " ".join(map(str, self.period))
        return f"{pre} | {per}" if pre else f"| {per}"


@dataclass(frozen=True)
class Inconclusive:
    """No state repeated within the step cap (``reason="cap"``), or the
    orbit coordinates outgrew the size guard first (``reason="growth"``)."""

    steps_taken: int
    reason: str = "cap"


ExpansionOutcome = Union[EPWord, Inconclusive]


class Finiteness(str, enum.Enum):
    FINITE = "finite"
    INFINITE_PERIODIC = "infinite-periodic"
    INCONCLUSIVE = "inconclusive"


# ---------------------------------------------------------------------------
# single steps

def in_domain(system: System, x: FieldElem) -> bool:
    base = x.base
    if system == System.POS:
        return x.sign() >= 0 and (x - 1).sign() < 0
    return (x - base.l).sign() >= 0 and (x - base.r).sign() < 0


def _check(system: System, x: FieldElem) -> None:
    if not in_domain(system, x):
        dom = "[0, 1)" if system == System.POS else "[l, r)"
        raise DomainError(f"{x} is outside {dom}")


def step_pos(x: FieldElem) -> tuple[int, FieldElem]:
    """One Renyi step: digit ``floor(beta*x)``, image ``beta*x - digit``."""
    _check(System.POS, x)
    bx = x.times_beta()
    d = bx.floor()
    return d, bx - d


def step_neg(x: FieldElem) -> tuple[int, FieldElem]:
    """One Ito-Sadahiro step: digit ``floor(-beta*x - l)``, image ``-beta*x - digit``."""
    _check(System.NEG, x)
    mbx = -x.times_beta()
    d = (mbx - x.base.l).floor()
    return d, mbx - d


# ---------------------------------------------------------------------------
# orbits

@functools.lru_cache(maxsize=256)
def _float_powers(base: BaseSpec) -> tuple[tuple[float, ...], tuple[float, ...]]:
    lo, hi = base.interval(160)
    mid = (lo + hi) / 2
    bpow, berr = [], []
    plo = phi = pm = Fraction(1)
    for _ in range(base.degree):
        b = float(pm)
        bf = Fraction(b)
        e = max(abs(phi - bf), abs(plo - bf))
        bpow.append(b)
        berr.append(float(e) * (1 + 2.0**-40) + 1e-300)
        plo, phi, pm = plo * lo, phi * hi, pm * mid
    return tuple(bpow), tuple(berr)


class Orbit:
    """Exact orbit ``x, T(x), T^2(x), ...`` with its digits.

    When ``period_len`` is set, ``states[preperiod_len + period_len]`` (not
    stored) equals ``states[preperiod_len]``.
    """

    def __init__(self, system, base, digits, preperiod_len, period_len, *, elems=None, raw=None, denom=1,
                 stop_reason="cap"):
        self.stop_reason = stop_reason
        self.system = system
        self.base = base
        self.digits = digits
        self.preperiod_len = preperiod_len
        self.period_len = period_len
        self._elems = elems
        self._raw = raw
        self._denom = denom

    @property
    def periodic(self) -> bool:
        return self.period_len is not None

    @functools.cached_property
    def states(self) -> list[FieldElem]:
        if self._elems is not None:
            return self._elems
        D = self._denom
        return [FieldElem(self.base, [Fraction(c, D) for c in v]) for v in self._raw]

    def state(self, i: int) -> FieldElem:
        """``T^i(x)`` for any ``i >= 0`` (wrapping around the cycle)."""
        if i < len(self.states):
            return self.states[i]
        if not self.periodic:
            raise IndexError(i)
        m, p = self.preperiod_len, self.period_len
        return self.states[m + (i - m) % p]

    def word(self) -> ExpansionOutcome:
        if not self.periodic:
            return Inconclusive(len(self.digits), self.stop_reason)
        m, p = self.preperiod_len, self.period_len
        return EPWord(tuple(self.digits[:m]), tuple(self.digits[m:m + p]))


def _kernel_orbit(system: System, x: FieldElem, cap: int, backend: str | None) -> Orbit:
    base = x.base
    rows = [int(c) for c in base._mulrows]
    D = math.lcm(1, *(c.denominator for c in x.coords))
    if system == System.NEG:
        D = math.lcm(D, *(c.denominator for c in base.l.coords))
        shift = [int(-c * D) for c in base.l.coords]
        sign = -1
    else:
        shift = [0] * base.degree
        sign = 1
    v0 = [int(c * D) for c in x.coords]
    bpow, berr = _float_powers(base)

    def exact_floor(u):
        return FieldElem(base, [Fraction(c, D) for c in u]).floor()

    args = (rows, sign, shift, D, v0, cap, bpow, berr, exact_floor, MAX_STATE_BITS)
    status, digits, states, mu, lam = kernels.run_orbit(*args, backend=backend)
    digits = [int(d) for d in digits]
    if status == kernels.CYCLE:
        return Orbit(system, base, digits, mu, lam, raw=states, denom=D)
    reason = "growth" if status == kernels.GROWTH else "cap"
    return Orbit(system, base, digits, None, None, raw=states, denom=D, stop_reason=reason)


def _exact_orbit(system: System, x: FieldElem, cap: int) -> Orbit:
    step = step_pos if system == System.POS else step_neg
    seen = {x.coords: 0}
    states = [x]
    digits: list[int] = []
    while len(digits) < cap:
        d, x = step(x)
        digits.append(d)
        if max(c.numerator.bit_length() + c.denominator.bit_length() for c in x.coords) > MAX_STATE_BITS:
            return Orbit(system, x.base, digits, None, None, elems=states, stop_reason="growth")
        j = seen.get(x.coords)
        if j is not None:
            return Orbit(system, x.base, digits, j, len(digits) - j, elems=states)
        seen[x.coords] = len(states)
        states.append(x)
    return Orbit(system, x.base, digits, None, None, elems=states)


def orbit(system: System | str, x: FieldElem, cap: int = DEFAULT_CAP, *, backend: str | None = None) -> Orbit:
    """Iterate the transformation from ``x`` until a state repeats or ``cap``
    steps elapse.

    ``backend`` is ``"cython"``, ``"python"`` (integer-vector kernels),
    ``"exact"`` (step-by-step :class:`FieldElem` arithmetic) or None for
    the default kernel. Bases that are not algebraic integers always use
    the exact path.
    """
    system = System(system)
    _check(system, x)
    if backend == "exact" or not x.base.is_integer_base:
        return _exact_orbit(system, x, cap)
    return _kernel_orbit(system, x, cap, backend)


def expand(system: System | str, base: BaseSpec, x: FieldElem, cap: int = DEFAULT_CAP,
           *, backend: str | None = None) -> ExpansionOutcome:
    """Eventually periodic expansion of ``x``, or :class:`Inconclusive`."""
    if x.base != base:
        raise ValueError("element does not belong to the given base")
    return orbit(system, x, cap, backend=backend).word()


def d_neg_l(base: BaseSpec, cap: int = DEFAULT_CAP) -> ExpansionOutcome:
    """Expansion of the left endpoint ``l = -beta/(beta+1)`` in base -beta.

    A periodic outcome means beta is an Ito-Sadahiro number.
    """
    return expand(System.NEG, base, base.l, cap)


def d_star_neg_r(word: EPWord) -> EPWord:
    """The left limit at the right endpoint, derived from ``d(l)``.

    Purely periodic odd-length ``(d1...dk)^w`` maps to
    ``(0 d1 ... d(k-1) (dk - 1))^w``; anything else gets a ``0`` prepended.
    """
    if word.m == 0 and word.p % 2 == 1:
        last = word.period[-1]
        if last == 0:
            raise ValueError(f"{word} cannot be the expansion of l: last period digit is 0")
        return EPWord((), (0,) + word.period[:-1] + (last - 1,))
    return EPWord((0,) + word.preperiod, word.period)


def d_star_pos_one(base: BaseSpec, cap: int = DEFAULT_CAP) -> ExpansionOutcome:
    """Quasi-greedy expansion of 1 in base beta.

    The greedy expansion ``d(1)`` starts with ``floor(beta)`` and continues
    with the orbit of ``beta - floor(beta)``; a finite ``t1...tm 0^w``
    becomes ``(t1 ... t(m-1) (tm - 1))^w``.
    """
    t1 = base.beta.floor()
    frac = base.beta - t1
    rest = expand(System.POS, base, frac, max(cap - 1, 0)) if cap > 0 else Inconclusive(0)
    if isinstance(rest, Inconclusive):
        return Inconclusive(rest.steps_taken + 1, rest.reason)
    if rest.is_finite():
        t = (t1,) + rest.preperiod
        return EPWord((), t[:-1] + (t[-1] - 1,))
    return EPWord((t1,) + rest.preperiod, rest.period)


def expand_any(system: System | str, base: BaseSpec, y: FieldElem,
               cap: int = DEFAULT_CAP) -> tuple[int, ExpansionOutcome]:
    """Expansion of an arbitrary element (non-negative for the positive base).

    Returns the least ``k >= 0`` with ``y / beta**k`` in ``[0, 1)``
    (resp. ``y / (-beta)**k`` in ``[l, r)``) and the expansion of that
    scaled value, so ``y = sum(x_i * (+-beta)**(k - i))``. Leading zeros are
    kept.
    """
    system = System(system)
    if system == System.POS and y.sign() < 0:
        raise DomainError("positive-base expansions need y >= 0")
    scale = base.beta if system == System.POS else -base.beta
    inv = scale.inverse()
    z, k = y, 0
    while not in_domain(system, z):
        z, k = z * inv, k + 1
    return k, expand(system, base, z, cap)


def is_finite_neg(base: BaseSpec, x: FieldElem, cap: int = DEFAULT_CAP) -> Finiteness:
    """Does the (-beta)-expansion of ``x`` end in ``0^omega``?"""
    out = expand(System.NEG, base, x, cap)
    if isinstance(out, Inconclusive):
        return Finiteness.INCONCLUSIVE
    return Finiteness.FINITE if out.is_finite() else Finiteness.INFINITE_PERIODIC


def word_value(word: EPWord, system: System | str, base: BaseSpec) -> FieldElem:
    """Exact value ``sum(x_i * q**i)`` with ``q = 1/beta`` (pos) or ``-1/beta`` (neg),
    the periodic part summed as a geometric series."""
    system = System(system)
    q = base.beta.inverse()
    if system == System.NEG:
        q = -q
    head = base.zero
    qi = base.one
    for d in word.preperiod:
        qi = qi * q
        head = head + qi * d
    per = base.zero
    qj = base.one
    for d in word.period:
        qj = qj * q
        per = per + qj * d
    return head + qi * per / (1 - qj)
