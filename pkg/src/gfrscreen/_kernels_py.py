"""NumPy implementations of the screening hot kernels.

This module is the import-time fallback for the compiled extension built
from ``_kernels.pyx``. Both expose the same two operations with identical
semantics and are cross-checked in the test suite; accumulation order (BLAS
vs. plain loops) may differ at roundoff level.

``append_columns`` is the whole add-step primitive: gather the chosen
residualized columns, orthonormalize them against the current basis (one
batched drift correction, in-block Gram-Schmidt with degeneracy floors,
then one full reorthogonalization pass), and apply the resulting block to
the candidate matrix, the norm cache, the residual, and the basis buffer.
Dependent columns contribute no basis vector.
"""

import math

import numpy as np


def candidate_gains(resid_columns, residual, resid_norms_sq, norm_floor, out):
    """Fill ``out`` with the SSR drop each candidate column would produce.

    ``out[j]`` becomes ``(resid_columns[:, j] @ residual)**2 / resid_norms_sq[j]``,
    or ``-inf`` when the column is consumed or numerically degenerate
    (``resid_norms_sq[j] <= norm_floor[j]``).
    """
    dots = residual @ resid_columns
    alive = resid_norms_sq > norm_floor
    out.fill(-np.inf)
    np.divide(dots * dots, resid_norms_sq, out=out, where=alive)


def append_columns(resid_columns, resid_norms_sq, residual, basis_buf,
                   n_basis, indices, norm_floors, orig_norms_sq):
    """Append the given columns to the active set, updating all state arrays.

    Parameters
    ----------
    resid_columns : ndarray, shape (n, p), C-contiguous
        Candidate columns residualized against the current basis; updated
        in place.
    resid_norms_sq : ndarray, shape (p,)
        Cached squared norms of ``resid_columns``; updated in place and
        clamped at zero.
    residual : ndarray, shape (n,)
        Current response residual; updated in place.
    basis_buf : ndarray, shape (n, kmax), Fortran-contiguous
        Orthonormal basis storage; new vectors land in columns
        ``n_basis:n_basis + kept``.
    n_basis : int
        Number of valid basis columns on entry.
    indices : ndarray of intp
        Columns to append, in order.
    norm_floors, orig_norms_sq : ndarray, shape (len(indices),)
        Per-column degeneracy floors and original squared norms.

    Returns
    -------
    kept : int
        Number of new basis vectors (non-degenerate appended columns).
    """
    n = resid_columns.shape[0]
    basis = basis_buf[:, :n_basis]
    cols = resid_columns[:, indices]
    if n_basis:
        cols -= basis @ (basis.T @ cols)

    buf = np.empty((n, len(indices)), order="F")
    t = 0
    for pos in range(len(indices)):
        v = cols[:, pos]
        if t:
            head = buf[:, :t]
            v = v - head @ (head.T @ v)
        nv = float(v @ v)
        if nv > norm_floors[pos] and orig_norms_sq[pos] > 0.0:
            buf[:, t] = v / math.sqrt(nv)
            t += 1
    if t == 0:
        return 0

    raw = buf[:, :t]
    if n_basis:
        raw -= basis @ (basis.T @ raw)
    kept = 0
    for s in range(t):
        v = raw[:, s]
        if kept:
            head = raw[:, :kept]
            v = v - head @ (head.T @ v)
        nv = float(v @ v)
        # A unit vector losing most of its mass here was dependent after all.
        if nv > 0.25:
            raw[:, kept] = v / math.sqrt(nv)
            kept += 1
    if kept == 0:
        return 0

    block = np.ascontiguousarray(raw[:, :kept])
    coefs = block.T @ resid_columns
    resid_columns -= block @ coefs
    resid_norms_sq -= np.einsum("tj,tj->j", coefs, coefs)
    np.maximum(resid_norms_sq, 0.0, out=resid_norms_sq)
    residual -= block @ (block.T @ residual)
    basis_buf[:, n_basis:n_basis + kept] = block
    return kept
