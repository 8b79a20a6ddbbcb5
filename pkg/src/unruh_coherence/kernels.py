"""Kernel backend selection.

The compiled extension is preferred; the numpy implementation is the
fallback. ``UNRUH_COHERENCE_KERNELS=python|compiled`` forces a choice
(``compiled`` raises if the extension is missing).
"""

import os

from . import _kernels_py

_FORCED = os.environ.get("UNRUH_COHERENCE_KERNELS", "").strip().lower()

if _FORCED == "python":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
        BACKEND = "compiled"
    except ImportError:
        if _FORCED == "compiled":
            raise ImportError(
                "UNRUH_COHERENCE_KERNELS=compiled but the _kernels extension "
                "is not built; run `pip install -e . --no-build-isolation`"
            )
        _impl = _kernels_py
        BACKEND = "python"

block_outer = _impl.block_outer
coalesce_pairs = _impl.coalesce_pairs
sqrt_geometric_series = _impl.sqrt_geometric_series


def backend():
    """Name of the active kernel backend ('compiled' or 'python')."""
    return BACKEND
