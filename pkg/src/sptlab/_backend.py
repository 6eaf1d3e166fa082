"""Kernel backend selection.

Prefers the compiled extension; falls back to the pure-Python twin when the
extension is missing or when SPTLAB_PURE_PYTHON=1 is set.  Both backends are
bit-identical by construction.
"""

import os

from . import _kernels_py

if os.environ.get("SPTLAB_PURE_PYTHON") == "1":
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py

BACKEND: str = kernels.BACKEND

KIND_FIXED: int = _kernels_py.KIND_FIXED
KIND_MARKET: int = _kernels_py.KIND_MARKET
KIND_ENTROPY: int = _kernels_py.KIND_ENTROPY
KIND_DIVERSITY: int = _kernels_py.KIND_DIVERSITY
KIND_RANK: int = _kernels_py.KIND_RANK
