"""Kernel backend selection.

Prefers the compiled extension and falls back to the numpy kernels when it
is unavailable.  Set NEURODIM_PURE=1 to force the fallback (used by the
backend benchmark and for debugging); both backends produce bit-identical
results.
"""

from __future__ import annotations

import os

if os.environ.get("NEURODIM_PURE", "").strip() not in ("", "0"):
    from . import _purekernels as _impl

    BACKEND = "python"
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from . import _purekernels as _impl  # type: ignore[no-redef]

        BACKEND = "python"

MAX_KERNEL_PRIME = 2**31 - 1

conv_acc = _impl.conv_acc
conv_table_acc = _impl.conv_table_acc
conv_many_acc = _impl.conv_many_acc
conv_table_many_acc = _impl.conv_table_many_acc
axpy_acc = _impl.axpy_acc
axpy2_acc = _impl.axpy2_acc
rank_mod = _impl.rank_mod


def check_modulus(p: int) -> None:
    """Reject moduli too large for the int64 kernel arithmetic."""
    if p > MAX_KERNEL_PRIME:
        raise ValueError(
            f"modulus {p} exceeds {MAX_KERNEL_PRIME}; the int64 kernels require p < 2**31"
        )
