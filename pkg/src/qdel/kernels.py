"""Kernel dispatch: compiled extension when available, numpy fallback otherwise.

Set ``QDEL_KERNELS=python`` in the environment to force the fallback (used by
the benchmark and the backend-equivalence tests).  ``BACKEND`` records which
implementation is active.
"""

import ctypes
import ctypes.util
import os

import numpy as np

if os.environ.get("QDEL_KERNELS") == "python":
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"


def _c128(a: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.complex128)


def partial_trace_dense(rho: np.ndarray, left: int, mid: int, right: int) -> np.ndarray:
    """Trace out the middle slot of a square matrix over a (left, mid, right) basis."""
    return _impl.partial_trace_dense(_c128(rho), left, mid, right)


def branch_outer_sum(branches: np.ndarray) -> np.ndarray:
    """sum_b v_b v_b^dagger over the rows of ``branches``."""
    return _impl.branch_outer_sum(_c128(branches))


def enable_heap_reuse() -> bool:
    """Tune glibc so freed multi-megabyte buffers are reused, not unmapped.

    Verification sweeps at 12 qubits allocate and drop a 64 MB density
    matrix per deletion position; with default malloc thresholds each one
    is returned to the kernel and the next allocation pays the page-fault
    cost again.  Raising the mmap and trim thresholds keeps the block on
    the heap.  No-op (returns False) on platforms without mallopt.
    """
    try:
        libc = ctypes.CDLL(ctypes.util.find_library("c") or "libc.so.6")
        mallopt = libc.mallopt
    except (OSError, AttributeError):
        return False
    M_TRIM_THRESHOLD = -1
    M_MMAP_THRESHOLD = -3
    size = 512 * 1024 * 1024
    return bool(mallopt(M_MMAP_THRESHOLD, size)) and bool(mallopt(M_TRIM_THRESHOLD, size))
