"""Runtime switches for the compiled kernels.

Set ``DTMRISK_DISABLE_NUMBA=1`` to force the pure-numpy kernels even when
numba is importable. The flag is read once, at import time.
"""

import os

_FALSY = {"", "0", "false", "no", "off"}

NUMBA_REQUESTED = os.getenv("DTMRISK_DISABLE_NUMBA", "").strip().lower() in _FALSY

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba ships in the dev environment
    HAVE_NUMBA = False

USE_NUMBA = NUMBA_REQUESTED and HAVE_NUMBA

NUMBA_OPTS = {"nogil": True, "cache": False}
