"""Gate-kernel backend selection.

The compiled Cython kernels are preferred when the extension built;
otherwise the numpy fallback is used.  Set QEMBED_KERNELS=python (or
=cython) to force a backend, e.g. for benchmarking the two against
each other.
"""

import os

_requested = os.environ.get("QEMBED_KERNELS", "auto").lower()
if _requested not in ("auto", "cython", "python"):
    raise ImportError(
        f"QEMBED_KERNELS must be 'auto', 'cython' or 'python', got {_requested!r}"
    )

if _requested == "python":
    from . import _gates_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _gates_cy as _impl

        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        from . import _gates_py as _impl

        BACKEND = "python"

rx = _impl.rx
ry = _impl.ry
h = _impl.h
zz = _impl.zz
cswap = _impl.cswap

__all__ = ["BACKEND", "rx", "ry", "h", "zz", "cswap"]
