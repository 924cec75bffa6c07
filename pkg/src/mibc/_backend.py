"""Select the compiled kernel module, falling back to pure numpy.

Set ``MIBC_PURE_PYTHON=1`` to force the fallback.
"""

import logging
import os

from . import _kernels_py

log = logging.getLogger(__name__)

if os.environ.get("MIBC_PURE_PYTHON", "") not in ("", "0"):
    kernels = _kernels_py
    COMPILED = False
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
        COMPILED = True
    except ImportError:  # extension not built
        log.debug("compiled kernels unavailable; using numpy fallback")
        kernels = _kernels_py
        COMPILED = False

BACKEND = "cython" if COMPILED else "python"
