import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from negabase import _orbit_py, kernels
from negabase.expansions import System, _float_powers, orbit
from negabase.number_field import BaseSpec

needs_ext = pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernel not built")


@given(st.sampled_from(["x^2-x-1", "x^3-x-1", "x^4-x^3-x^2-x-1"]),
       st.lists(st.integers(-10**6, 10**6), min_size=4, max_size=4), st.integers(1, 1000))
def test_float_floor_is_certified(poly, u, D):
    base = BaseSpec.parse(poly)
    u = u[: base.degree]
    bpow, berr = _float_powers(base)
    f = _orbit_py.float_floor(u, D, bpow, berr)
    exact = base.elem([Fraction(c, D) for c in u]).floor()
    assert f is None or f == exact


def test_float_floor_exact_integer():
    base = BaseSpec.parse("x^2-x-1")
    bpow, berr = _float_powers(base)
    assert _orbit_py.float_floor([6, 0], 3, bpow, berr) == 2


@needs_ext
def test_bail_falls_back():
    from negabase import _orbit_ext

    base = BaseSpec.parse("x^2-x-1")
    D = 2**45 + 1
    x = base.elem([Fraction(1, D), Fraction(2, D)])
    rows = [int(c) for c in base._mulrows]
    bpow, berr = _float_powers(base)
    args = ([1, 1], 1, [0, 0], D, [1, 2], 50, bpow, berr,
            lambda u: base.elem([Fraction(c, D) for c in u]).floor(), 2048)
    assert rows == [1, 1]
    assert _orbit_ext.run_orbit(*args)[0] == kernels.BAIL
    assert kernels.run_orbit(*args, backend="cython") == _orbit_py.run_orbit(*args)
    assert orbit(System.POS, x, 50, backend="cython").digits == orbit(System.POS, x, 50, backend="exact").digits


@needs_ext
@pytest.mark.parametrize("poly", ["x^2-x-1", "x^3-x-1", "x^2-3*x+1", "2"])
def test_kernels_identical_raw_output(poly):
    base = BaseSpec.parse(poly)
    for q in range(1, 30):
        x = base.from_rational(Fraction(q % 7 - 3, q + 1))
        x = x - (x - base.l).floor()
        a = orbit(System.NEG, x, backend="cython")
        b = orbit(System.NEG, x, backend="python")
        assert a.digits == b.digits and a.states == b.states


def test_pure_python_switch():
    env = dict(os.environ, NEGABASE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import negabase.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_unknown_backend_unavailable(monkeypatch):
    monkeypatch.setattr(kernels, "_ext", None)
    with pytest.raises(RuntimeError):
        kernels.run_orbit([1, 1], 1, [0, 0], 1, [0, 0], 5, (1.0, 1.6), (0.0, 0.0), None, backend="cython")
