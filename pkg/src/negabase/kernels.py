"""Backend selection for the orbit kernel.

The compiled extension is used when importable; set
``NEGABASE_PURE_PYTHON=1`` to force the pure-Python kernel.
"""

from __future__ import annotations

import os

from . import _orbit_py

CYCLE, CAP, BAIL, GROWTH = _orbit_py.CYCLE, _orbit_py.CAP, _orbit_py.BAIL, _orbit_py.GROWTH

_ext = None
if not os.environ.get("NEGABASE_PURE_PYTHON"):
    try:
        from . import _orbit_ext as _ext
    except ImportError:
        _ext = None

BACKEND = "cython" if _ext is not None else "python"


def run_orbit(*args, backend: str | None = None):
    """Dispatch to the selected kernel; a compiled BAIL (int64 range exceeded)
    falls back to the pure-Python kernel."""
    use = backend or BACKEND
    if use == "cython":
        if _ext is None:
            raise RuntimeError("compiled kernel not available")
        out = _ext.run_orbit(*args)
        if out[0] != BAIL:
            return out
    return _orbit_py.run_orbit(*args)
