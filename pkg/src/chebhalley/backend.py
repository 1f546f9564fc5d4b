"""Backend selection: compiled orbit kernels with a pure-Python fallback.

The compiled extension is preferred when importable; set the environment
variable ``CHEBHALLEY_PURE_PY=1`` to force the fallback (used by the backend
parity tests and the benchmark).  Both backends produce bit-identical output.
"""

from __future__ import annotations

import os


def _load():
    if os.environ.get("CHEBHALLEY_PURE_PY") == "1":
        from . import _orbits_py

        return _orbits_py
    try:
        from . import _orbits  # type: ignore[attr-defined]

        return _orbits
    except ImportError:
        from . import _orbits_py

        return _orbits_py


_impl = _load()

BACKEND = _impl.BACKEND_NAME
KIND_UNDECIDED = _impl.KIND_UNDECIDED
KIND_ROOT = _impl.KIND_ROOT
KIND_CYCLE = _impl.KIND_CYCLE
KIND_ESCAPED = _impl.KIND_ESCAPED

classify_point = _impl.classify_point
classify_tile = _impl.classify_tile
param_tile = _impl.param_tile


def using_compiled() -> bool:
    return BACKEND == "cython"


def load_backend(name: str):
    """Load a backend module by name ("cython" or "python"); for benchmarks."""
    if name == "python":
        from . import _orbits_py

        return _orbits_py
    if name == "cython":
        from . import _orbits  # type: ignore[attr-defined]

        return _orbits
    raise ValueError(f"unknown backend {name!r}")
