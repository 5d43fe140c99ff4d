"""Kernel backend selection.

Hot loops ship in two interchangeable implementations: numba-jitted scalar
loops (``_kern_nb``) and vectorised numpy (``_kern_np``).  The environment
variable ``LAMBDAHULL_BACKEND`` picks one:

* ``auto`` (default): numba if it imports, numpy otherwise
* ``numba``: require numba, raise if unavailable
* ``numpy``: force the pure-numpy path

``LAMBDAHULL_THREADS`` caps numba's thread pool.  On the numpy path it is
accepted and ignored (numpy kernels are single-threaded).
"""

from __future__ import annotations

import os


def _threads_cap() -> int | None:
    raw = os.environ.get("LAMBDAHULL_THREADS", "").strip()
    if not raw:
        return None
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"LAMBDAHULL_THREADS must be an integer, got {raw!r}")
    if cap < 1:
        raise ValueError("LAMBDAHULL_THREADS must be >= 1")
    return cap


def _resolve() -> str:
    choice = os.environ.get("LAMBDAHULL_BACKEND", "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise ValueError(
            f"LAMBDAHULL_BACKEND must be auto|numba|numpy, got {choice!r}"
        )
    if choice == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if choice == "numba":
            raise
        return "numpy"
    cap = _threads_cap()
    if cap is not None:
        import numba

        numba.set_num_threads(min(cap, numba.config.NUMBA_NUM_THREADS))
    return "numba"


BACKEND = _resolve()


def get_kernels():
    """Return the active kernel module (taken once at import)."""
    if BACKEND == "numba":
        from lambdahull import _kern_nb as kern
    else:
        from lambdahull import _kern_np as kern
    return kern
