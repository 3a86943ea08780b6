import itertools
import math

import numpy as np
import pytest

from gfrscreen import diagnostics
from gfrscreen.errors import BudgetExceededError, DegeneracyError, ValidationError

from oracles import projector


def _scaled_orthonormal_design(n, p, seed=0):
    """Columns with X'X = n*I, so phi(s) = Phi(s) = 1 for every s."""
    rng = np.random.default_rng(seed)
    q, _ = np.linalg.qr(rng.standard_normal((n, p)))
    return math.sqrt(n) * q


def _per_support_svd_oracle(X, s):
    """Independent route: singular values of each column block directly."""
    n, p = X.shape
    lo, hi = math.inf, -math.inf
    for support in itertools.combinations(range(p), s):
        sv = np.linalg.svd(X[:, support], compute_uv=False)
        lo = min(lo, sv[-1] ** 2 / n if len(support) <= n else 0.0)
        hi = max(hi, sv[0] ** 2 / n)
    return lo, hi


def test_orthonormal_design_has_unit_spectrum():
    X = _scaled_orthonormal_design(12, 6)
    for s in (1, 2, 5):
        spectrum = diagnostics.restricted_eigenvalues(X, s)
        assert spectrum.phi == pytest.approx(1.0, abs=1e-10)
        assert spectrum.Phi == pytest.approx(1.0, abs=1e-10)


def test_duplicate_column_gives_zero_phi():
    rng = np.random.default_rng(1)
    X = rng.standard_normal((15, 5))
    X[:, 4] = X[:, 1]
    assert diagnostics.restricted_eigenvalues(X, 2).phi == pytest.approx(0.0, abs=1e-10)


def test_restricted_eigenvalues_match_per_support_svd():
    rng = np.random.default_rng(7)
    X = rng.standard_normal((20, 8))
    for s in (1, 2, 3):
        spectrum = diagnostics.restricted_eigenvalues(X, s)
        lo, hi = _per_support_svd_oracle(X, s)
        assert spectrum.phi == pytest.approx(lo, rel=1e-10)
        assert spectrum.Phi == pytest.approx(hi, rel=1e-10)


def test_spectrum_monotone_in_sparsity():
    rng = np.random.default_rng(9)
    X = rng.standard_normal((25, 7))
    spectra = [diagnostics.restricted_eigenvalues(X, s) for s in range(1, 6)]
    for a, b in zip(spectra, spectra[1:]):
        assert b.phi <= a.phi + 1e-12
        assert b.Phi >= a.Phi - 1e-12


def test_phi1_is_extreme_column_norm():
    rng = np.random.default_rng(11)
    X = rng.standard_normal((30, 9))
    norms = np.einsum("ij,ij->j", X, X) / 30
    spectrum = diagnostics.restricted_eigenvalues(X, 1)
    assert spectrum.phi == pytest.approx(norms.min(), rel=1e-12)
    assert spectrum.Phi == pytest.approx(norms.max(), rel=1e-12)


def test_theta_orthogonal_and_duplicate_extremes():
    X = _scaled_orthonormal_design(10, 5)
    assert diagnostics.restricted_correlation(X, 1, 1).theta == pytest.approx(0.0, abs=1e-10)

    n = 12
    rng = np.random.default_rng(3)
    Y = rng.standard_normal((n, 4))
    Y /= np.linalg.norm(Y, axis=0) / math.sqrt(n)   # unit columns at scale sqrt(n)
    Y[:, 2] = Y[:, 0]
    assert diagnostics.restricted_correlation(Y, 1, 1).theta == pytest.approx(1.0, rel=1e-10)


def test_theta_11_is_max_offdiagonal_gram():
    rng = np.random.default_rng(13)
    X = rng.standard_normal((18, 6))
    gram = X.T @ X / 18
    brute = max(abs(gram[i, j]) for i in range(6) for j in range(6) if i != j)
    assert diagnostics.restricted_correlation(X, 1, 1).theta == pytest.approx(brute, rel=1e-12)


def test_theta_bounded_by_isometry_defect():
    rng = np.random.default_rng(17)
    X = rng.standard_normal((30, 7))
    X = math.sqrt(30) * X / np.linalg.norm(X, axis=0)
    for s1, s2 in [(1, 1), (1, 2), (2, 2)]:
        theta = diagnostics.restricted_correlation(X, s1, s2).theta
        delta = diagnostics.restricted_isometry(X, s1 + s2)
        assert theta <= delta + 1e-10


def test_budget_guard():
    X = np.ones((5, 30))
    with pytest.raises(BudgetExceededError):
        diagnostics.restricted_eigenvalues(X, 8)   # C(30, 8) > 1e6
    with pytest.raises(BudgetExceededError):
        diagnostics.restricted_correlation(X, 5, 5)


def test_validation():
    X = np.eye(4)
    with pytest.raises(ValidationError):
        diagnostics.restricted_eigenvalues(X, 0)
    with pytest.raises(ValidationError):
        diagnostics.restricted_eigenvalues(X, 5)
    with pytest.raises(ValidationError):
        diagnostics.restricted_correlation(X, 3, 2)


def test_coverage_budget_orthonormal_design_holds():
    # Large beta_min relative to the response scale drives the bound below 1.
    X = _scaled_orthonormal_design(20, 6)
    y = X[:, 0] * 5.0
    report = diagnostics.check_coverage_budget_condition(X, y, beta_min=50.0, p0=1, J=1, K0=1)
    assert report.holds
    assert report.rhs < 1.0
    assert report.margin > 1.0


def test_coverage_budget_fails_as_signal_vanishes():
    X = _scaled_orthonormal_design(20, 6)
    y = X[:, 0] * 5.0
    report = diagnostics.check_coverage_budget_condition(X, y, beta_min=1e-6, p0=1, J=1, K0=3)
    assert not report.holds
    assert report.margin < 1.0


def test_coverage_budget_composes_from_spectrum_outputs():
    rng = np.random.default_rng(23)
    X = rng.standard_normal((25, 6))
    y = rng.standard_normal(25)
    p0, J, K0, beta_min = 2, 2, 1, 0.8
    report = diagnostics.check_coverage_budget_condition(X, y, beta_min, p0, J, K0)
    s = p0 * K0 * J
    phi = diagnostics.restricted_eigenvalues(X, s).phi
    phi_j = diagnostics.restricted_eigenvalues(X, J).Phi
    phi_1 = diagnostics.restricted_eigenvalues(X, 1).Phi
    by_hand = 2 * float(y @ y) * phi_j * phi_1 / (25 * phi ** 3 * J * beta_min ** 2)
    assert report.rhs == pytest.approx(by_hand, rel=1e-12)
    assert report.holds == (K0 > by_hand)


def test_coverage_budget_zero_phi_is_degenerate():
    X = np.ones((10, 4))   # rank one: phi(2) = 0
    y = np.ones(10)
    with pytest.raises(DegeneracyError):
        diagnostics.check_coverage_budget_condition(X, y, beta_min=1.0, p0=2, J=1, K0=1)


def test_step_recovery_orthonormal_design_holds_with_zero_rhs():
    X = _scaled_orthonormal_design(16, 6)
    report = diagnostics.check_step_recovery_condition(X, p0=2, J=2, eta=0.5)
    assert report.holds
    assert report.rhs == pytest.approx(0.0, abs=1e-18)   # theta terms vanish
    assert report.lhs > 0.0
    assert report.margin > 1.0


def test_step_recovery_duplicate_columns_fail():
    rng = np.random.default_rng(27)
    X = rng.standard_normal((18, 6))
    X = math.sqrt(18) * X / np.linalg.norm(X, axis=0)
    X[:, 5] = X[:, 0]
    report = diagnostics.check_step_recovery_condition(X, p0=2, J=1, eta=0.1)
    assert not report.holds


def test_step_recovery_composes_from_oracle_values():
    rng = np.random.default_rng(29)
    X = rng.standard_normal((22, 7))
    p0, J, eta = 2, 2, 0.25
    report = diagnostics.check_step_recovery_condition(X, p0, J, eta)
    phi = diagnostics.restricted_eigenvalues(X, p0 * J).phi
    phi_1 = diagnostics.restricted_eigenvalues(X, 1).Phi
    t_a = diagnostics.restricted_correlation(X, J, p0).theta
    t_b = diagnostics.restricted_correlation(X, J, (p0 - 1) * J).theta
    t_c = diagnostics.restricted_correlation(X, (p0 - 1) * J, p0).theta
    lhs = phi ** 3 * J / (phi_1 * p0)
    rhs = (1 + eta) * (t_a + t_b * t_c / phi) ** 2
    assert report.lhs == pytest.approx(lhs, rel=1e-12)
    assert report.rhs == pytest.approx(rhs, rel=1e-12)
    assert report.holds == (lhs >= rhs)


def test_projected_bound_exhaustive_small_instance():
    rng = np.random.default_rng(31)
    n, p = 12, 5
    X = rng.standard_normal((n, p))
    for a in (1, 2):
        for b in (1, 2):
            phi = diagnostics.restricted_eigenvalues(X, a + b).phi
            for m1 in itertools.combinations(range(p), a):
                rest = [j for j in range(p) if j not in m1]
                for m2 in itertools.combinations(rest, b):
                    Q2 = np.eye(n) - projector(X, list(m2))
                    sub = X[:, list(m1)]
                    smallest = float(np.linalg.eigvalsh(sub.T @ Q2 @ sub)[0])
                    assert smallest >= n * phi - 1e-8
