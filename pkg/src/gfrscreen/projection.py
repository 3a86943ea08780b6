"""Incremental orthogonal-projection engine for stepwise screening.

For a growing active set M the state keeps an orthonormal basis of
span{X_M}, the residual of the response against that span, and every
candidate column residualized against it. Evaluating a candidate is then a
single dot product and adding columns is a rank-t update, so no step of a
screening path ever redoes a least-squares fit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ValidationError

#: A residualized column whose squared norm falls at or below this fraction
#: of its original squared norm counts as linearly dependent on the active
#: set. Such columns can be recorded as selected but never contribute a
#: basis vector, and screening never picks them.
DEGENERACY_RTOL = 1e-10


@dataclass(frozen=True)
class CandidateGain:
    """Drop in the sum of squared residuals if one column joined the model."""

    index: int
    gain: float
    degenerate: bool


class ActiveSetState:
    """Mutable screening state for one (X, y) problem.

    Attributes
    ----------
    selected : list of int
        Column indices currently in the model, in selection order.
    residual : ndarray, shape (n,)
        The response with the span of the selected columns projected out.
    resid_columns : ndarray, shape (n, p)
        Column j holds X_j with the same span projected out; consumed
        columns (j already selected) are numerically zero.
    resid_norms_sq : ndarray, shape (p,)
        Cached squared norms of ``resid_columns``; exactly 0.0 once a
        column is consumed.
    ssr : float
        Squared norm of ``residual``.

    Use :func:`init_state` to construct one; do not mutate fields directly.
    """

    def __init__(self, X, y):
        X = np.array(X, dtype=np.float64, order="C", copy=True)
        y = np.asarray(y, dtype=np.float64)
        if X.ndim != 2:
            raise ValidationError(f"design matrix must be 2-D, got ndim={X.ndim}")
        n, p = X.shape
        if n < 1 or p < 1:
            raise ValidationError(f"design matrix must be at least 1x1, got {n}x{p}")
        if y.ndim != 1 or y.shape[0] != n:
            raise ValidationError(
                f"response must be a vector of length {n}, got shape {y.shape}"
            )
        if not np.all(np.isfinite(X)):
            raise ValidationError("design matrix contains non-finite entries")
        if not np.all(np.isfinite(y)):
            raise ValidationError("response contains non-finite entries")

        self.n = n
        self.p = p
        self.selected: list[int] = []
        self.residual = y.copy()
        self.resid_columns = X
        self.resid_norms_sq = np.einsum("ij,ij->j", X, X)
        self.orig_norms_sq = self.resid_norms_sq.copy()
        self.ssr = float(self.residual @ self.residual)
        self._norm_floor = DEGENERACY_RTOL * self.orig_norms_sq
        # Fortran order keeps the leading-columns view contiguous for GEMM.
        self._basis_buf = np.zeros((n, min(n, p)), order="F")
        self._n_basis = 0
        self._selected_mask = np.zeros(p, dtype=bool)

    @property
    def basis(self) -> np.ndarray:
        """Orthonormal columns spanning the selected design columns, (n, k)."""
        return self._basis_buf[:, :self._n_basis]

    def copy(self) -> "ActiveSetState":
        new = object.__new__(ActiveSetState)
        new.n = self.n
        new.p = self.p
        new.selected = list(self.selected)
        new.residual = self.residual.copy()
        new.resid_columns = self.resid_columns.copy()
        new.resid_norms_sq = self.resid_norms_sq.copy()
        new.orig_norms_sq = self.orig_norms_sq
        new.ssr = self.ssr
        new._norm_floor = self._norm_floor
        new._basis_buf = self._basis_buf.copy(order="F")
        new._n_basis = self._n_basis
        new._selected_mask = self._selected_mask.copy()
        return new


def init_state(X, y) -> ActiveSetState:
    """State for the null model: residual = y, no column projected out."""
    return ActiveSetState(X, y)


def candidate_gain(state: ActiveSetState, j: int) -> CandidateGain:
    """Gain of adding column ``j`` to the current model.

    The gain equals the SSR drop a full refit on the enlarged model would
    realize. Columns (numerically) inside the span of the selected ones are
    flagged degenerate with gain 0.
    """
    j = int(j)
    if j < 0 or j >= state.p:
        raise ValidationError(f"column index {j} out of range for p={state.p}")
    if state._selected_mask[j]:
        raise ValidationError(f"column {j} is already in the model")
    nj = state.resid_norms_sq[j]
    if nj <= state._norm_floor[j] or state.orig_norms_sq[j] == 0.0:
        return CandidateGain(index=j, gain=0.0, degenerate=True)
    dot = float(state.resid_columns[:, j] @ state.residual)
    return CandidateGain(index=j, gain=dot * dot / nj, degenerate=False)


def all_candidate_gains(state: ActiveSetState) -> np.ndarray:
    """Gains of every column at once; consumed/degenerate entries are -inf."""
    out = np.empty(state.p)
    kernels.candidate_gains(
        state.resid_columns, state.residual, state.resid_norms_sq,
        state._norm_floor, out,
    )
    return out


def add_columns(state: ActiveSetState, indices) -> ActiveSetState:
    """Add ``indices`` to the model, in order, updating the state in place.

    Each index's residualized column is orthonormalized against the basis
    (Gram-Schmidt over the block plus one full reorthogonalization pass)
    and appended; degenerate columns are recorded as selected without a
    basis vector. The candidate matrix, norm cache, residual and SSR are
    refreshed with one blocked update, which is algebraically identical to
    updating after every single index because the new basis vectors are
    mutually orthonormal.
    """
    indices = [int(j) for j in indices]
    if len(set(indices)) != len(indices):
        raise ValidationError("duplicate indices in add_columns")
    for j in indices:
        if j < 0 or j >= state.p:
            raise ValidationError(f"column index {j} out of range for p={state.p}")
        if state._selected_mask[j]:
            raise ValidationError(f"column {j} is already in the model")
    if len(state.selected) + len(indices) > state.n:
        raise ValidationError(
            f"model size {len(state.selected)}+{len(indices)} would exceed n={state.n}"
        )
    if not indices:
        return state

    idx = np.asarray(indices, dtype=np.intp)
    kept = kernels.append_columns(
        state.resid_columns, state.resid_norms_sq, state.residual,
        state._basis_buf, state._n_basis, idx,
        state._norm_floor[idx], state.orig_norms_sq[idx])
    state._n_basis += kept
    state.selected.extend(indices)
    state._selected_mask[idx] = True
    state.resid_norms_sq[idx] = 0.0
    state.ssr = float(state.residual @ state.residual)
    return state


def sum_squared_residuals(state: ActiveSetState) -> float:
    """Current SSR, i.e. the squared norm of the residual."""
    return state.ssr
