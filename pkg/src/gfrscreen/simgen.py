"""Synthetic benchmark designs with noise calibrated to a target R-squared.

Three Gaussian designs are built in, indexed 1..3:

1. Block covariance: independent 2x2 blocks with unit variances and
   correlation -0.4; eight nonzero coefficients (2, 3, 2, 3, 2, 3, 2, 3).
2. Autoregressive covariance 0.5**|i-j|; nonzero coefficients 3, 1.5 and 2
   on columns 1, 4 and 7 (1-based).
3. Common-factor design: all columns share pairwise correlation 0.6 except
   column 4, which correlates sqrt(0.5) with them, and column 5, which is
   independent of everything; coefficients (5, 5, 5, -15*sqrt(0.5), 1).
   Column 5 is a genuine signal with a weaker marginal covariance against
   the response than the noise columns, which is what defeats marginal
   screening here.

The noise variance is calibrated analytically from beta' Sigma beta so that
Var(X'beta)/Var(y) hits the requested R-squared exactly in population.

In design 3 the two special-column clauses cannot both hold for the pair
(4, 5); column 5's independence wins, so Corr(X4, X5) = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

_EXAMPLES = (1, 2, 3)


@dataclass(frozen=True)
class SimulationSpec:
    """One benchmark configuration."""

    example: int
    n: int
    p: int
    r2: float
    seed: int
    replications: int = 1

    def __post_init__(self):
        if self.example not in _EXAMPLES:
            raise ValidationError(f"example must be one of {_EXAMPLES}, got {self.example}")
        if self.n < 2:
            raise ValidationError(f"need n >= 2, got {self.n}")
        if not 0.0 < self.r2 < 1.0:
            raise ValidationError(f"target R^2 must lie in (0, 1), got {self.r2}")
        if self.replications < 1:
            raise ValidationError(f"need at least one replication, got {self.replications}")
        if self.seed < 0:
            raise ValidationError(f"seed must be non-negative, got {self.seed}")
        if self.example == 1:
            if self.p < 8:
                raise ValidationError(f"design 1 needs p >= 8, got p={self.p}")
            if self.p % 2:
                raise ValidationError(f"design 1 needs an even p, got p={self.p}")
        elif self.example == 2 and self.p < 7:
            raise ValidationError(f"design 2 needs p >= 7, got p={self.p}")
        elif self.example == 3 and self.p < 5:
            raise ValidationError(f"design 3 needs p >= 5, got p={self.p}")


@dataclass(frozen=True)
class TrueModel:
    """Coefficients, support and calibrated noise level of a design."""

    beta: np.ndarray
    support: tuple[int, ...]
    sigma: float
    sigma_xb_sq: float


def _signal_variance(example: int, beta: np.ndarray, support: tuple[int, ...]) -> float:
    """Closed-form beta' Sigma beta for the design's covariance."""
    if example == 1:
        total = 0.0
        for b in range(0, len(support), 2):
            b0, b1 = beta[support[b]], beta[support[b + 1]]
            total += b0 * b0 + b1 * b1 + 2.0 * (-0.4) * b0 * b1
        return total
    if example == 2:
        total = 0.0
        for i in support:
            for j in support:
                total += beta[i] * beta[j] * 0.5 ** abs(i - j)
        return total
    # Common-factor design: covariance on the support {0..4}.
    root_half = math.sqrt(0.5)
    cov = np.array([
        [1.0, 0.6, 0.6, root_half, 0.0],
        [0.6, 1.0, 0.6, root_half, 0.0],
        [0.6, 0.6, 1.0, root_half, 0.0],
        [root_half, root_half, root_half, 1.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 1.0],
    ])
    b = beta[list(support)]
    return float(b @ cov @ b)


def make_example(spec: SimulationSpec) -> TrueModel:
    """Coefficient vector and analytically calibrated noise scale."""
    beta = np.zeros(spec.p)
    if spec.example == 1:
        beta[:8] = [2.0, 3.0, 2.0, 3.0, 2.0, 3.0, 2.0, 3.0]
    elif spec.example == 2:
        beta[0], beta[3], beta[6] = 3.0, 1.5, 2.0
    else:
        beta[:5] = [5.0, 5.0, 5.0, -15.0 * math.sqrt(0.5), 1.0]
    support = tuple(int(j) for j in np.flatnonzero(beta))
    sigma_xb_sq = _signal_variance(spec.example, beta, support)
    sigma = math.sqrt(sigma_xb_sq * (1.0 - spec.r2) / spec.r2)
    return TrueModel(beta=beta, support=support, sigma=sigma, sigma_xb_sq=sigma_xb_sq)


def _rng_for(spec: SimulationSpec, replication_index: int) -> np.random.Generator:
    # One independent, reconstructible stream per replication, so
    # replications can run in any order or in parallel.
    return np.random.default_rng(
        np.random.SeedSequence(spec.seed, spawn_key=(replication_index,))
    )


def sample_dataset(model: TrueModel, spec: SimulationSpec,
                   replication_index: int) -> tuple[np.ndarray, np.ndarray]:
    """Draw one (X, y) replication.

    The covariance is realized through factor/Cholesky constructions, so it
    is positive semi-definite by construction. Draw order is fixed (factor
    variables, then the iid block, then the noise) to pin down the stream.
    """
    if not 0 <= replication_index:
        raise ValidationError(f"replication index must be >= 0, got {replication_index}")
    rng = _rng_for(spec, replication_index)
    n, p = spec.n, spec.p

    if spec.example == 1:
        Z = rng.standard_normal((n, p))
        X = np.empty((n, p))
        X[:, ::2] = Z[:, ::2]
        X[:, 1::2] = -0.4 * Z[:, ::2] + math.sqrt(1.0 - 0.4 ** 2) * Z[:, 1::2]
    elif spec.example == 2:
        Z = rng.standard_normal((n, p))
        X = np.empty((n, p))
        X[:, 0] = Z[:, 0]
        scale = math.sqrt(1.0 - 0.5 ** 2)
        for j in range(1, p):
            X[:, j] = 0.5 * X[:, j - 1] + scale * Z[:, j]
    else:
        w = rng.standard_normal(n)
        Z = rng.standard_normal((n, p))
        X = math.sqrt(0.6) * w[:, None] + math.sqrt(0.4) * Z
        X[:, 3] = math.sqrt(5.0 / 6.0) * w + math.sqrt(1.0 / 6.0) * Z[:, 3]
        X[:, 4] = Z[:, 4]

    eps = model.sigma * rng.standard_normal(n)
    y = X @ model.beta + eps
    return X, y
