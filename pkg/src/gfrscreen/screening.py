"""Solution-path construction: stepwise (FR/GFR) and marginal (SIS/ISIS) screening.

Forward regression is greedy forward regression with one pick per step, so
``fr_path`` is a thin wrapper over ``gfr_path``. All tie-breaking is by
ascending column index, which makes every path deterministic.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import projection
from .errors import ValidationError

#: Stop extending a path once the SSR falls to this fraction of ||y||^2.
SSR_STOP_RTOL = 1e-12


@dataclass
class StepRecord:
    """One step of a solution path."""

    chosen: list[int]
    ssr_after: float
    gains: list[float]
    elapsed: float


@dataclass
class ScreeningPath:
    """Nested model sequence produced by a screening run."""

    method: str
    J: int
    n: int
    p: int
    steps: list[StepRecord] = field(default_factory=list)

    def model(self, k: int | None = None) -> list[int]:
        """Cumulative model after step ``k`` (all steps when ``k`` is None)."""
        if k is None:
            k = len(self.steps)
        if not 0 <= k <= len(self.steps):
            raise ValidationError(f"step {k} out of range for a {len(self.steps)}-step path")
        out: list[int] = []
        for rec in self.steps[:k]:
            out.extend(rec.chosen)
        return out

    def ssr_path(self) -> list[float]:
        return [rec.ssr_after for rec in self.steps]

    def model_sizes(self) -> list[int]:
        """Cumulative model size after each step, starting at step 1."""
        sizes = []
        total = 0
        for rec in self.steps:
            total += len(rec.chosen)
            sizes.append(total)
        return sizes


def _ranked(scores: np.ndarray) -> np.ndarray:
    """Indices sorted by descending score, ties by ascending index."""
    return np.lexsort((np.arange(scores.shape[0]), -scores))


def gfr_path(X, y, J: int, max_steps: int | None = None,
             method: str = "gfr") -> ScreeningPath:
    """Greedy forward regression: add the J best candidates per step.

    Each step ranks every unselected, non-degenerate column by the SSR drop
    it alone would produce against the current model and incorporates the J
    largest (ties by ascending index). The path stops when at least
    ``n - J + 1`` columns are in, after ``max_steps`` steps (default
    ``n // J``), when the SSR is numerically zero, or when no usable
    candidate remains; if fewer than J candidates remain the final step
    takes all of them.

    Parameters
    ----------
    X : array_like, shape (n, p)
        Design matrix.
    y : array_like, shape (n,)
        Response vector.
    J : int
        Number of columns incorporated per step; ``J = 1`` is plain forward
        regression.
    max_steps : int, optional
        Cap on the number of steps.

    Returns
    -------
    ScreeningPath
    """
    state = projection.init_state(X, y)
    n, p = state.n, state.p
    J = int(J)
    if not 1 <= J <= n:
        raise ValidationError(f"J must be between 1 and n={n}, got {J}")
    if max_steps is None:
        max_steps = n // J
    y_norm_sq = state.ssr

    path = ScreeningPath(method=method, J=J, n=n, p=p)
    column_ids = np.arange(p)
    for _ in range(max_steps):
        if len(state.selected) >= n - J + 1:
            break
        if state.ssr <= SSR_STOP_RTOL * y_norm_sq:
            break
        t0 = time.perf_counter()
        gains = projection.all_candidate_gains(state)
        eligible = int(np.isfinite(gains).sum())
        if eligible == 0:
            break
        take = min(J, eligible, n - len(state.selected))
        order = np.lexsort((column_ids, -gains))
        chosen = [int(j) for j in order[:take]]
        projection.add_columns(state, chosen)
        path.steps.append(StepRecord(
            chosen=chosen,
            ssr_after=state.ssr,
            gains=[float(gains[j]) for j in chosen],
            elapsed=time.perf_counter() - t0,
        ))
    return path


def fr_path(X, y, max_steps: int | None = None) -> ScreeningPath:
    """Forward regression: one column per step."""
    return gfr_path(X, y, 1, max_steps=max_steps, method="fr")


def sis_rank(X, y) -> np.ndarray:
    """All columns ranked by the marginal score |X_j'y|, descending.

    Ties (including the all-zero-score case) are broken by ascending index,
    so the result is always a permutation of ``0..p-1``.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise ValidationError(
            f"incompatible shapes for ranking: X {X.shape}, y {y.shape}"
        )
    scores = np.abs(X.T @ y)
    return _ranked(scores)


def default_sis_size(n: int) -> int:
    """Conventional marginal-screening model size, floor(n / log n)."""
    if n < 2:
        raise ValidationError(f"need n >= 2 for the default model size, got n={n}")
    return int(n / math.log(n))


def sis_select(X, y, d: int | None = None) -> list[int]:
    """Top-``d`` columns by marginal score (default ``d = floor(n/log n)``)."""
    ranking = sis_rank(X, y)
    p = ranking.shape[0]
    if d is None:
        d = default_sis_size(np.asarray(X).shape[0])
    d = int(d)
    if not 1 <= d <= p:
        raise ValidationError(f"d must be between 1 and p={p}, got {d}")
    return [int(j) for j in ranking[:d]]


def sis_path(X, y, d: int | None = None) -> ScreeningPath:
    """One-step path holding the marginal screen, with its fitted SSR."""
    t0 = time.perf_counter()
    state = projection.init_state(X, y)
    scores = np.abs(np.asarray(X, dtype=np.float64).T @ state.residual)
    chosen = sis_select(X, y, d)
    projection.add_columns(state, chosen)
    path = ScreeningPath(method="sis", J=len(chosen), n=state.n, p=state.p)
    path.steps.append(StepRecord(
        chosen=chosen,
        ssr_after=state.ssr,
        gains=[float(scores[j]) for j in chosen],
        elapsed=time.perf_counter() - t0,
    ))
    return path


def isis_path(X, y, steps: int | None = None,
              per_step: int | None = None) -> ScreeningPath:
    """Iterative marginal screening with least-squares refits between stages.

    The first stage is a plain marginal screen on (X, y). After each stage
    the cumulative selection is fitted by least squares and the next stage
    ranks the unselected columns by |X_j' r| against the fit residual r.
    Defaults follow the usual schedule: ``floor(log n - 1)`` stages of
    ``floor(n / log n)`` columns each.

    The gains recorded per step are the marginal scores used for that
    stage's ranking.
    """
    state = projection.init_state(X, y)
    n, p = state.n, state.p
    if steps is None or per_step is None:
        if n < 2:
            raise ValidationError("need n >= 2 for the default schedule")
        log_n = math.log(n)
        if steps is None:
            steps = int(log_n - 1.0)
        if per_step is None:
            per_step = default_sis_size(n)
    steps, per_step = int(steps), int(per_step)
    if steps < 1 or per_step < 1:
        raise ValidationError(
            f"need at least one step of at least one column, got {steps}x{per_step}"
        )
    if steps * per_step > p:
        raise ValidationError(
            f"schedule {steps}x{per_step} exceeds the number of columns p={p}"
        )

    Xa = np.asarray(X, dtype=np.float64)
    path = ScreeningPath(method="isis", J=per_step, n=n, p=p)
    column_ids = np.arange(p)
    for _ in range(steps):
        t0 = time.perf_counter()
        scores = np.abs(Xa.T @ state.residual)
        scores[state._selected_mask] = -np.inf
        order = np.lexsort((column_ids, -scores))
        chosen = [int(j) for j in order[:per_step]]
        gains = [float(scores[j]) for j in chosen]
        projection.add_columns(state, chosen)
        path.steps.append(StepRecord(
            chosen=chosen,
            ssr_after=state.ssr,
            gains=gains,
            elapsed=time.perf_counter() - t0,
        ))
    return path
