"""Pure-Python orbit kernel; reference twin of ``_orbit_ext.pyx``.

States are integer vectors ``v`` with a fixed denominator ``D``: the state
stands for ``sum(v[i] * beta**i) / D``. One step computes
``w = sign * beta * v`` (a companion shift using ``rows``, where
``beta**n == sum(rows[i] * beta**i)``), the digit ``floor((w + shift) / D)``
and the next state ``w - digit * D * e0``.
"""

from __future__ import annotations

import math

CYCLE, CAP, BAIL, GROWTH = 0, 1, 2, 3

_EPS = 2.0 ** -50


def float_floor(u, D, bpow, berr):
    """Certified ``floor(sum(u[i]*beta**i) / D)`` from floats, or None."""
    s = 0.0
    mag = 0.0
    slack = 0.0
    for ui, b, e in zip(u, bpow, berr):
        t = ui * b
        s += t
        mag += abs(t)
        slack += abs(ui) * e
    err = (len(u) + 3) * _EPS * mag + slack
    f = math.floor(s / D)
    fd = f * D
    err += _EPS * (abs(s) + abs(fd) + D)
    if s - fd > err and fd + D - s > err:
        return f
    k = round(s / D)
    if u[0] == k * D and not any(u[1:]):
        return k
    return None


def run_orbit(rows, sign, shift, D, v0, cap, bpow, berr, exact_floor, max_bits=2048):
    """Iterate until a state repeats or ``cap`` steps elapse.

    Returns ``(status, digits, states, mu, lam)``: on CYCLE the state at
    index ``mu + lam`` equals the state at index ``mu`` (the repeated state
    is not appended); on CAP ``mu = lam = -1``. GROWTH means a coordinate
    exceeded ``max_bits`` bits before either happened.
    """
    n = len(rows)
    v = tuple(v0)
    seen = {v: 0}
    states = [v]
    digits = []
    top = n - 1
    while len(digits) < cap:
        t = v[top]
        w = [rows[0] * t]
        for i in range(1, n):
            w.append(v[i - 1] + rows[i] * t)
        if sign < 0:
            w = [-x for x in w]
        u = [x + y for x, y in zip(w, shift)]
        d = float_floor(u, D, bpow, berr) if max(map(abs, u)) < 2**53 else None
        if d is None:
            d = exact_floor(tuple(u))
        w[0] -= d * D
        digits.append(d)
        v = tuple(w)
        if max(map(abs, v)).bit_length() > max_bits:
            return GROWTH, digits, states, -1, -1
        j = seen.get(v)
        if j is not None:
            return CYCLE, digits, states, j, len(digits) - j
        seen[v] = len(states)
        states.append(v)
    return CAP, digits, states, -1, -1
