"""Backend selection for the hot loops.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
numpy implementation in ``_pykernels`` is used. Set ``REVRAM_PURE_PYTHON=1``
to force the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("REVRAM_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

matmul_shift = _impl.matmul_shift
run_program = _impl.run_program
run_program_single = _impl.run_program_single


def backends() -> dict:
    """Every importable backend by name, for benchmarks and cross-checks."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels

        found["cython"] = _ckernels
    except ImportError:
        pass
    return found
