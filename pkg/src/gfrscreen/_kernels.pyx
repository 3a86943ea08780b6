# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled screening hot kernels.

See ``_kernels_py`` for the contract. The gain sweep and the rank-one
append are fully fused C loops (one pass over the candidate matrix, no
temporaries); the block append drives the two large matrix products through
BLAS directly so a whole add-step is a single call from Python regardless
of how many columns it appends.
"""

import numpy as np

from libc.math cimport INFINITY, sqrt
from scipy.linalg.cython_blas cimport dgemm, dgemv


def candidate_gains(const double[:, ::1] resid_columns,
                    const double[::1] residual,
                    const double[::1] resid_norms_sq,
                    const double[::1] norm_floor,
                    double[::1] out):
    cdef Py_ssize_t n = resid_columns.shape[0]
    cdef Py_ssize_t p = resid_columns.shape[1]
    if (residual.shape[0] != n or resid_norms_sq.shape[0] != p
            or norm_floor.shape[0] != p or out.shape[0] != p):
        raise ValueError("candidate_gains: shape mismatch")

    dots_arr = np.zeros(p, dtype=np.float64)
    cdef double[::1] dots = dots_arr
    cdef Py_ssize_t i, j
    cdef double ri

    with nogil:
        for i in range(n):
            ri = residual[i]
            if ri != 0.0:
                for j in range(p):
                    dots[j] += ri * resid_columns[i, j]
        for j in range(p):
            if resid_norms_sq[j] > norm_floor[j]:
                out[j] = dots[j] * dots[j] / resid_norms_sq[j]
            else:
                out[j] = -INFINITY


def append_columns(double[:, ::1] resid_columns,
                   double[::1] resid_norms_sq,
                   double[::1] residual,
                   double[::1, :] basis_buf,
                   Py_ssize_t n_basis,
                   const Py_ssize_t[::1] indices,
                   const double[::1] norm_floors,
                   const double[::1] orig_norms_sq):
    cdef Py_ssize_t n = resid_columns.shape[0]
    cdef Py_ssize_t p = resid_columns.shape[1]
    cdef Py_ssize_t t0 = indices.shape[0]
    if (residual.shape[0] != n or resid_norms_sq.shape[0] != p
            or basis_buf.shape[0] != n or norm_floors.shape[0] != t0
            or orig_norms_sq.shape[0] != t0):
        raise ValueError("append_columns: shape mismatch")
    if t0 == 1:
        return _append_single(resid_columns, resid_norms_sq, residual,
                              basis_buf, n_basis, indices[0],
                              norm_floors[0], orig_norms_sq[0])
    return _append_block(resid_columns, resid_norms_sq, residual,
                         basis_buf, n_basis, indices, norm_floors,
                         orig_norms_sq)


cdef Py_ssize_t _append_single(double[:, ::1] R, double[::1] norms,
                               double[::1] residual, double[::1, :] basis,
                               Py_ssize_t k, Py_ssize_t col,
                               double floor, double orig):
    """Fused rank-one append: drift-correct, reorthogonalize, update."""
    cdef Py_ssize_t n = R.shape[0]
    cdef Py_ssize_t p = R.shape[1]
    v_arr = np.empty(n, dtype=np.float64)
    coef_arr = np.zeros(p, dtype=np.float64)
    w_arr = np.empty(max(k, 1), dtype=np.float64)
    cdef double[::1] v = v_arr
    cdef double[::1] coefs = coef_arr
    cdef double[::1] w = w_arr
    cdef Py_ssize_t i, j
    cdef double nv, q, g

    with nogil:
        for i in range(n):
            v[i] = R[i, col]
        if k:
            _project_out(basis, k, v, w)
        nv = 0.0
        for i in range(n):
            nv += v[i] * v[i]
        if nv <= floor or orig <= 0.0:
            return 0
        nv = sqrt(nv)
        for i in range(n):
            v[i] /= nv
        if k:
            _project_out(basis, k, v, w)
            nv = 0.0
            for i in range(n):
                nv += v[i] * v[i]
            nv = sqrt(nv)
            for i in range(n):
                v[i] /= nv

        for i in range(n):
            q = v[i]
            if q != 0.0:
                for j in range(p):
                    coefs[j] += q * R[i, j]
        for i in range(n):
            q = v[i]
            if q != 0.0:
                for j in range(p):
                    R[i, j] -= q * coefs[j]
        for j in range(p):
            norms[j] -= coefs[j] * coefs[j]
            if norms[j] < 0.0:
                norms[j] = 0.0
        g = 0.0
        for i in range(n):
            g += v[i] * residual[i]
        for i in range(n):
            residual[i] -= g * v[i]
            basis[i, k] = v[i]
    return 1


cdef void _project_out(double[::1, :] basis, Py_ssize_t k,
                       double[::1] v, double[::1] w) noexcept nogil:
    """v -= B (B' v) for the leading k basis columns."""
    cdef int mi = <int>basis.shape[0]
    cdef int ki = <int>k
    cdef int one = 1
    cdef double plus = 1.0, minus = -1.0, zero = 0.0
    dgemv(b"T", &mi, &ki, &plus, &basis[0, 0], &mi, &v[0], &one, &zero, &w[0], &one)
    dgemv(b"N", &mi, &ki, &minus, &basis[0, 0], &mi, &w[0], &one, &plus, &v[0], &one)


cdef Py_ssize_t _append_block(double[:, ::1] R, double[::1] norms,
                              double[::1] residual, double[::1, :] basis,
                              Py_ssize_t k, const Py_ssize_t[::1] indices,
                              const double[::1] floors,
                              const double[::1] origs):
    cdef Py_ssize_t n = R.shape[0]
    cdef Py_ssize_t p = R.shape[1]
    cdef Py_ssize_t t0 = indices.shape[0]
    V_arr = np.empty((n, t0), dtype=np.float64, order="F")
    W_arr = np.empty((max(k, 1), t0), dtype=np.float64, order="F")
    g_arr = np.empty(t0, dtype=np.float64)
    coef_arr = np.empty((t0, p), dtype=np.float64)
    cdef double[::1, :] V = V_arr
    cdef double[::1, :] W = W_arr
    cdef double[::1] g = g_arr
    cdef double[:, ::1] coefs = coef_arr
    cdef Py_ssize_t i, j, c, pos, t, kept
    cdef double nv, acc
    cdef int ni = <int>n, pi = <int>p, ki, ti
    cdef double plus = 1.0, minus = -1.0, zero = 0.0

    with nogil:
        for pos in range(t0):
            j = indices[pos]
            for i in range(n):
                V[i, pos] = R[i, j]
        if k:
            ki = <int>k
            ti = <int>t0
            dgemm(b"T", b"N", &ki, &ti, &ni, &plus, &basis[0, 0], &ni,
                  &V[0, 0], &ni, &zero, &W[0, 0], &ki)
            dgemm(b"N", b"N", &ni, &ti, &ki, &minus, &basis[0, 0], &ni,
                  &W[0, 0], &ki, &plus, &V[0, 0], &ni)
        # In-block Gram-Schmidt with the degeneracy floors; accepted columns
        # compact to the left (the source column is never left of the slot).
        t = 0
        for pos in range(t0):
            for c in range(t):
                acc = 0.0
                for i in range(n):
                    acc += V[i, c] * V[i, pos]
                for i in range(n):
                    V[i, pos] -= acc * V[i, c]
            nv = 0.0
            for i in range(n):
                nv += V[i, pos] * V[i, pos]
            if nv > floors[pos] and origs[pos] > 0.0:
                nv = sqrt(nv)
                for i in range(n):
                    V[i, t] = V[i, pos] / nv
                t += 1
        if t == 0:
            return 0
        # One full reorthogonalization pass: drift against the basis, then
        # in-block again. Unit vectors losing most of their mass here were
        # dependent after all and are dropped (they stay selected).
        if k:
            ki = <int>k
            ti = <int>t
            dgemm(b"T", b"N", &ki, &ti, &ni, &plus, &basis[0, 0], &ni,
                  &V[0, 0], &ni, &zero, &W[0, 0], &ki)
            dgemm(b"N", b"N", &ni, &ti, &ki, &minus, &basis[0, 0], &ni,
                  &W[0, 0], &ki, &plus, &V[0, 0], &ni)
        kept = 0
        for pos in range(t):
            for c in range(kept):
                acc = 0.0
                for i in range(n):
                    acc += V[i, c] * V[i, pos]
                for i in range(n):
                    V[i, pos] -= acc * V[i, c]
            nv = 0.0
            for i in range(n):
                nv += V[i, pos] * V[i, pos]
            if nv > 0.25:
                nv = sqrt(nv)
                for i in range(n):
                    V[i, kept] = V[i, pos] / nv
                kept += 1
        if kept == 0:
            return 0

        ti = <int>kept
        # R (C order, n x p) is handled as its Fortran-order transpose with
        # leading dimension p: coefs' = R' V, then R' -= coefs' V'.
        dgemm(b"N", b"N", &pi, &ti, &ni, &plus, &R[0, 0], &pi,
              &V[0, 0], &ni, &zero, &coefs[0, 0], &pi)
        dgemm(b"N", b"T", &pi, &ni, &ti, &minus, &coefs[0, 0], &pi,
              &V[0, 0], &ni, &plus, &R[0, 0], &pi)
        for c in range(kept):
            for j in range(p):
                norms[j] -= coefs[c, j] * coefs[c, j]
        for j in range(p):
            if norms[j] < 0.0:
                norms[j] = 0.0
        for c in range(kept):
            acc = 0.0
            for i in range(n):
                acc += V[i, c] * residual[i]
            g[c] = acc
        for i in range(n):
            acc = 0.0
            for c in range(kept):
                acc += V[i, c] * g[c]
            residual[i] -= acc
        for c in range(kept):
            for i in range(n):
                basis[i, k + c] = V[i, c]
    return kept
