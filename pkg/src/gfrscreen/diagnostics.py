"""Brute-force restricted spectrum quantities and screening-condition checks.

Everything here enumerates column supports exactly, so it only makes sense
at desk scale; a hard budget on the enumeration size raises
``BudgetExceededError`` instead of silently approximating.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError, DegeneracyError, ValidationError

#: Maximum number of supports (or support pairs) enumerated per call.
ENUMERATION_BUDGET = 10 ** 6


@dataclass(frozen=True)
class RestrictedSpectrum:
    """Extreme eigenvalues of X_M'X_M / n over all supports M of size s."""

    s: int
    phi: float
    Phi: float
    n: int
    p: int


@dataclass(frozen=True)
class RestrictedCorrelation:
    """Largest normalized cross-Gram operator norm over disjoint supports."""

    s1: int
    s2: int
    theta: float


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of a sufficient-condition check.

    ``margin`` is the ratio by which the condition holds (> 1) or fails
    (< 1); ``detail`` carries the evaluated building blocks.
    """

    holds: bool
    lhs: float
    rhs: float
    margin: float
    detail: dict


def _as_design(X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise ValidationError(f"need a non-empty 2-D design, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValidationError("design matrix contains non-finite entries")
    return X


def _check_budget(count: int, what: str) -> None:
    if count > ENUMERATION_BUDGET:
        raise BudgetExceededError(
            f"{what} would enumerate {count} supports, over the budget of {ENUMERATION_BUDGET}"
        )


def restricted_eigenvalues(X, s: int) -> RestrictedSpectrum:
    """Exact min/max of x'X'Xx / (n ||x||^2) over s-sparse x.

    Equals the extreme eigenvalues of the normalized Gram submatrices over
    every support of size s (supports of smaller size are dominated, since
    each embeds in a size-s one).
    """
    X = _as_design(X)
    n, p = X.shape
    s = int(s)
    if not 1 <= s <= p:
        raise ValidationError(f"s must be between 1 and p={p}, got {s}")
    _check_budget(math.comb(p, s), f"restricted eigenvalues at s={s}")

    gram = (X.T @ X) / n
    lo = math.inf
    hi = -math.inf
    for support in itertools.combinations(range(p), s):
        eigs = np.linalg.eigvalsh(gram[np.ix_(support, support)])
        lo = min(lo, float(eigs[0]))
        hi = max(hi, float(eigs[-1]))
    return RestrictedSpectrum(s=s, phi=lo, Phi=hi, n=n, p=p)


def restricted_correlation(X, s1: int, s2: int) -> RestrictedCorrelation:
    """Exact max of x1'X_M1'X_M2 x2 / (n ||x1|| ||x2||) over disjoint supports.

    The inner maximum over unit x1, x2 is the largest singular value of the
    normalized cross-Gram block.
    """
    X = _as_design(X)
    n, p = X.shape
    s1, s2 = int(s1), int(s2)
    if min(s1, s2) < 1 or s1 + s2 > p:
        raise ValidationError(
            f"need 1 <= s1, s2 with s1 + s2 <= p={p}, got s1={s1}, s2={s2}"
        )
    _check_budget(
        math.comb(p, s1) * math.comb(p - s1, s2),
        f"restricted correlation at ({s1}, {s2})",
    )

    gram = (X.T @ X) / n
    theta = 0.0
    columns = range(p)
    for m1 in itertools.combinations(columns, s1):
        rest = [j for j in columns if j not in m1]
        for m2 in itertools.combinations(rest, s2):
            block = gram[np.ix_(m1, m2)]
            theta = max(theta, float(np.linalg.norm(block, 2)))
    return RestrictedCorrelation(s1=s1, s2=s2, theta=theta)


def restricted_isometry(X, s: int) -> float:
    """Isometry defect max(Phi(s) - 1, 1 - phi(s)) at sparsity s."""
    spectrum = restricted_eigenvalues(X, s)
    return max(spectrum.Phi - 1.0, 1.0 - spectrum.phi)


def check_coverage_budget_condition(X, y, beta_min: float, p0: int, J: int,
                             K0: int) -> ConditionReport:
    """Step-budget condition for full coverage within p0*K0 steps.

    Checks ``K0 > 2 ||y||^2 Phi(J) Phi(1) / (n phi(p0 K0 J)^3 J beta_min^2)``
    with the sparsity argument capped at p. A zero restricted eigenvalue
    makes the condition undefined and raises ``DegeneracyError``.
    """
    X = _as_design(X)
    y = np.asarray(y, dtype=np.float64)
    n, p = X.shape
    if y.shape != (n,):
        raise ValidationError(f"response must have shape ({n},), got {y.shape}")
    p0, J, K0 = int(p0), int(J), int(K0)
    if min(p0, J, K0) < 1:
        raise ValidationError("p0, J and K0 must all be positive")
    if not beta_min > 0.0:
        raise ValidationError(f"beta_min must be positive, got {beta_min}")

    s = min(p, p0 * K0 * J)
    phi_s = restricted_eigenvalues(X, s).phi
    phi_j_top = restricted_eigenvalues(X, min(p, J)).Phi
    phi_1_top = restricted_eigenvalues(X, 1).Phi
    if phi_s <= 0.0:
        raise DegeneracyError(
            f"restricted eigenvalue phi({s}) is zero; condition undefined"
        )
    y_norm_sq = float(y @ y)
    rhs = 2.0 * y_norm_sq * phi_j_top * phi_1_top / (n * phi_s ** 3 * J * beta_min ** 2)
    return ConditionReport(
        holds=K0 > rhs,
        lhs=float(K0),
        rhs=rhs,
        margin=math.inf if rhs == 0.0 else K0 / rhs,
        detail={
            "phi_restricted": phi_s,
            "Phi_J": phi_j_top,
            "Phi_1": phi_1_top,
            "y_norm_sq": y_norm_sq,
            "sparsity": s,
        },
    )


def check_step_recovery_condition(X, p0: int, J: int, eta: float) -> ConditionReport:
    """Per-step relevance condition built from restricted correlations.

    Checks ``phi(p0 J)^3 J / (Phi(1) p0) >= (1 + eta) * (theta_{J, p0} +
    theta_{J, (p0-1)J} theta_{(p0-1)J, p0} / phi(p0 J))^2``. The detail
    block also reports the looser isometry-constant form
    ``(d_{p0+J}(1 + d_{p0 J}) + d_{p0 J}^2)^2 / (1 - d_{p0 J})^5 <=
    J / (p0 (1 + eta)(1 + d_1))``.
    """
    X = _as_design(X)
    n, p = X.shape
    p0, J = int(p0), int(J)
    if min(p0, J) < 1:
        raise ValidationError("p0 and J must be positive")
    if not eta > 0.0:
        raise ValidationError(f"eta must be positive, got {eta}")

    s_big = min(p, p0 * J)
    phi_big = restricted_eigenvalues(X, s_big).phi
    phi_1_top = restricted_eigenvalues(X, 1).Phi

    def theta(a: int, b: int) -> float:
        if a < 1 or b < 1:
            return 0.0
        if a + b > p:
            raise ValidationError(
                f"restricted correlation at sizes ({a}, {b}) needs {a}+{b} <= p={p}"
            )
        return restricted_correlation(X, a, b).theta

    cross = (p0 - 1) * J
    theta_j_p0 = theta(J, p0)
    theta_j_cross = theta(J, cross)
    theta_cross_p0 = theta(cross, p0)

    lhs = phi_big ** 3 * J / (phi_1_top * p0)
    if phi_big > 0.0:
        rhs = (1.0 + eta) * (theta_j_p0 + theta_j_cross * theta_cross_p0 / phi_big) ** 2
    elif theta_j_cross * theta_cross_p0 > 0.0:
        # Dependent columns drive the bound to +inf in the limit, so the
        # condition fails outright rather than being undefined.
        rhs = math.inf
    elif theta_j_p0 > 0.0:
        rhs = (1.0 + eta) * theta_j_p0 ** 2
    else:
        raise DegeneracyError(
            f"restricted eigenvalue phi({s_big}) and all correlations are zero; "
            "condition indeterminate"
        )

    d_one = restricted_isometry(X, 1)
    d_big = restricted_isometry(X, s_big)
    d_joint = restricted_isometry(X, min(p, p0 + J))
    simple_lhs = math.inf
    if d_big < 1.0:
        simple_lhs = (d_joint * (1.0 + d_big) + d_big ** 2) ** 2 / (1.0 - d_big) ** 5
    simple_rhs = J / (p0 * (1.0 + eta) * (1.0 + d_one))

    return ConditionReport(
        holds=lhs >= rhs,
        lhs=lhs,
        rhs=rhs,
        margin=math.inf if rhs == 0.0 else lhs / rhs,
        detail={
            "phi_restricted": phi_big,
            "Phi_1": phi_1_top,
            "theta_J_p0": theta_j_p0,
            "theta_J_cross": theta_j_cross,
            "theta_cross_p0": theta_cross_p0,
            "isometry_simplified_lhs": simple_lhs,
            "isometry_simplified_rhs": simple_rhs,
            "isometry_simplified_holds": simple_lhs <= simple_rhs,
        },
    )
