"""Kernel backend selection.

The hot inner loops (block-response sums over the binomial support) exist
twice: a compiled Cython extension (``rabicav.kernels._core``) and a NumPy
reference (``rabicav.kernels.reference``).  The compiled backend is preferred
when importable; set ``RABICAV_KERNELS=python`` to force the reference
implementation or ``RABICAV_KERNELS=compiled`` to require the extension.

Both backends share one reduction-tree contract, so results are deterministic
for a given backend and agree across backends to a few ULP (the only
difference is the libm vs NumPy implementations of exp/cos).
"""

from __future__ import annotations

import os

from . import reference

_FORCED = os.environ.get("RABICAV_KERNELS", "auto").lower()

if _FORCED not in ("auto", "compiled", "python"):
    raise ValueError(
        f"RABICAV_KERNELS must be 'auto', 'compiled' or 'python', got {_FORCED!r}"
    )

_impl = None
if _FORCED in ("auto", "compiled"):
    try:
        from . import _core as _impl
    except ImportError:
        if _FORCED == "compiled":
            raise
        _impl = None

if _impl is None:
    _impl = reference

BACKEND = "compiled" if _impl is not reference else "python"

pg_block_sum = _impl.pg_block_sum
energy_block_sum = _impl.energy_block_sum
pairwise_sum = _impl.pairwise_sum


def backend_name() -> str:
    """Name of the active kernel backend ('compiled' or 'python')."""
    return BACKEND


def available_backends() -> dict:
    """Importable backend modules keyed by name (for benchmarks and tests)."""
    found = {"python": reference}
    try:
        from . import _core

        found["compiled"] = _core
    except ImportError:
        pass
    return found
