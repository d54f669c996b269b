"""Kernel backend selection.

Two interchangeable kernel sets exist: numba-compiled loops (default when
numba is importable) and a pure-numpy fallback. The environment selects one:

``BIPREC_BACKEND``
    ``auto`` (default), ``numba``, or ``numpy``.

``BIPREC_THREADS``
    Caps the thread count of the numba batch evaluator. ``0`` or unset
    means numba's automatic default. Ignored by the numpy backend.
"""
from __future__ import annotations

import os

from . import _numpy_backend

try:
    from . import _numba_backend
    _NUMBA_IMPORT_ERROR: Exception | None = None
except ImportError as exc:  # pragma: no cover - exercised only without numba
    _numba_backend = None
    _NUMBA_IMPORT_ERROR = exc


def get_backend():
    """Resolve the kernel module named by ``BIPREC_BACKEND``."""
    name = os.environ.get("BIPREC_BACKEND", "auto").strip().lower()
    if name in ("", "auto"):
        return _numba_backend if _numba_backend is not None else _numpy_backend
    if name == "numba":
        if _numba_backend is None:
            raise RuntimeError(
                f"BIPREC_BACKEND=numba but numba is unavailable: {_NUMBA_IMPORT_ERROR}")
        return _numba_backend
    if name == "numpy":
        return _numpy_backend
    raise ValueError(f"unknown BIPREC_BACKEND value {name!r}")


def backend_name() -> str:
    """Name of the backend ``get_backend`` resolves to right now."""
    return "numba" if get_backend() is _numba_backend else "numpy"


def apply_thread_cap() -> None:
    """Honor ``BIPREC_THREADS`` before running the parallel evaluator."""
    if get_backend() is not _numba_backend:
        return
    raw = os.environ.get("BIPREC_THREADS", "").strip()
    if not raw:
        return
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"BIPREC_THREADS must be an integer, got {raw!r}") from None
    if cap <= 0:
        return
    import numba

    numba.set_num_threads(min(cap, numba.config.NUMBA_NUM_THREADS))
