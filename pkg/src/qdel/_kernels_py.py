"""Pure-numpy implementations of the dense hot kernels.

Used as the import-time fallback when the compiled extension
(``qdel._kernels_cy``) is unavailable.  Both backends expose the same two
functions with identical semantics; ``tests/test_kernels.py`` checks them
against each other whenever the compiled one is present.
"""

import numpy as np


def partial_trace_dense(rho: np.ndarray, left: int, mid: int, right: int) -> np.ndarray:
    """Trace out the middle tensor slot of a dense square matrix.

    ``rho`` has shape ``(left*mid*right, left*mid*right)`` and is read as a
    matrix over the product basis (left, mid, right) with C ordering.  The
    result is the ``(left*right, left*right)`` matrix obtained by summing the
    ``mid`` diagonal blocks of the middle slot; the remaining slots keep
    their relative order.
    """
    d = left * right
    r6 = rho.reshape(left, mid, right, left, mid, right)
    out = r6[:, 0, :, :, 0, :].astype(np.complex128, copy=True)
    for b in range(1, mid):
        out += r6[:, b, :, :, b, :]
    return np.ascontiguousarray(out.reshape(d, d))


def branch_outer_sum(branches: np.ndarray) -> np.ndarray:
    """Sum of outer products sum_b v_b v_b^dagger for rows v_b of ``branches``.

    ``branches`` has shape ``(num_branches, d)``; the result is ``(d, d)``.
    """
    return branches.T @ branches.conj()
