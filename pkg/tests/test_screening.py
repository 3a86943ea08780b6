import numpy as np
import pytest

from gfrscreen import projection, screening, simgen
from gfrscreen.errors import ValidationError

from oracles import naive_gfr_path, refit_ssr


def test_fr_matches_naive_refit_oracle():
    rng = np.random.default_rng(101)
    for _ in range(50):
        X = rng.standard_normal((30, 15))
        beta = np.zeros(15)
        beta[rng.choice(15, size=4, replace=False)] = 3.0 * rng.standard_normal(4)
        y = X @ beta + rng.standard_normal(30)
        path = screening.gfr_path(X, y, 1)
        expected = naive_gfr_path(X, y, 1)
        assert [rec.chosen for rec in path.steps] == expected


def test_gfr_forced_ordering_on_orthogonal_design():
    # Scaled basis columns in R^6: column scaling cancels out of the gains,
    # which equal the squared coefficients (9, 4, 1), so the split across
    # steps is forced and step 2 is a partial final step.
    X = np.eye(6)[:, :3] * np.array([2.0, 0.5, 4.0])
    y = np.array([3.0, 2.0, 1.0, 0.0, 0.0, 0.0])
    path = screening.gfr_path(X, y, 2)
    assert path.steps[0].chosen == [0, 1]
    assert path.steps[1].chosen == [2]
    assert path.steps[0].gains == pytest.approx([9.0, 4.0])


def test_gfr_equals_fr_at_j_one():
    rng = np.random.default_rng(5)
    X = rng.standard_normal((25, 40))
    y = rng.standard_normal(25)
    a = screening.gfr_path(X, y, 1)
    b = screening.fr_path(X, y)
    assert [rec.chosen for rec in a.steps] == [rec.chosen for rec in b.steps]
    assert a.ssr_path() == b.ssr_path()
    assert b.method == "fr"


def test_gfr_within_step_gains_dominate_leftovers():
    rng = np.random.default_rng(9)
    X = rng.standard_normal((20, 12))
    y = rng.standard_normal(20)
    state = projection.init_state(X, y)
    for J in (2, 3):
        fresh = state.copy()
        path = screening.gfr_path(X, y, J, max_steps=3)
        for rec in path.steps:
            gains = projection.all_candidate_gains(fresh)
            chosen_min = min(gains[j] for j in rec.chosen)
            leftovers = [gains[j] for j in range(12)
                         if np.isfinite(gains[j]) and j not in rec.chosen
                         and j not in fresh.selected]
            assert all(chosen_min >= g - 1e-12 for g in leftovers)
            projection.add_columns(fresh, rec.chosen)


def test_path_ssr_telescopes_through_sequential_gains():
    rng = np.random.default_rng(29)
    X = rng.standard_normal((30, 20))
    y = rng.standard_normal(30)
    path = screening.gfr_path(X, y, 3, max_steps=5)
    replay = projection.init_state(X, y)
    for rec in path.steps:
        drop = 0.0
        for j in rec.chosen:
            drop += projection.candidate_gain(replay, j).gain
            projection.add_columns(replay, [j])
        assert replay.ssr == pytest.approx(rec.ssr_after, rel=1e-8)
        before = rec.ssr_after + drop
        assert before - drop == pytest.approx(rec.ssr_after, rel=1e-8)


def test_gfr_path_is_deterministic():
    rng = np.random.default_rng(77)
    X = rng.standard_normal((40, 60))
    y = rng.standard_normal(40)
    first = screening.gfr_path(X, y, 2)
    second = screening.gfr_path(X, y, 2)
    assert [rec.chosen for rec in first.steps] == [rec.chosen for rec in second.steps]
    assert first.ssr_path() == second.ssr_path()


def test_gfr_step_count_bound():
    rng = np.random.default_rng(15)
    n = 30
    X = rng.standard_normal((n, 100))
    y = rng.standard_normal(n)
    for J in (1, 2, 3, 4, 7):
        path = screening.gfr_path(X, y, J)
        assert len(path.steps) <= n // J
        assert len(path.model()) <= n
        sizes = path.model_sizes()
        assert sizes[-1] >= min(n - J + 1, len(path.steps) * J)


def test_gfr_stops_on_interpolation():
    # p > n and noiseless: SSR hits zero before the step budget.
    rng = np.random.default_rng(33)
    X = rng.standard_normal((12, 30))
    y = X[:, 4] * 2.0 - X[:, 9]
    path = screening.gfr_path(X, y, 1)
    assert path.steps[-1].ssr_after <= 1e-12 * float(y @ y)
    assert len(path.steps) < 12


def test_gfr_validates_j():
    X = np.eye(4)
    y = np.ones(4)
    with pytest.raises(ValidationError):
        screening.gfr_path(X, y, 0)
    with pytest.raises(ValidationError):
        screening.gfr_path(X, y, 5)


def test_step_records_are_full_sized_and_gain_sorted():
    rng = np.random.default_rng(45)
    X = rng.standard_normal((60, 90))
    y = rng.standard_normal(60)
    for J in (2, 3, 5):
        path = screening.gfr_path(X, y, J)
        for rec in path.steps[:-1]:
            assert len(rec.chosen) == J
        assert len(path.steps[-1].chosen) <= J
        for rec in path.steps:
            gains = rec.gains
            assert all(a >= b for a, b in zip(gains, gains[1:]))
            # Equal gains must be listed by ascending index.
            for (ga, ja), (gb, jb) in zip(zip(gains, rec.chosen),
                                          zip(gains[1:], rec.chosen[1:])):
                if ga == gb:
                    assert ja < jb


def test_path_steps_are_disjoint_and_ssr_sorted():
    rng = np.random.default_rng(55)
    X = rng.standard_normal((50, 80))
    y = rng.standard_normal(50)
    path = screening.gfr_path(X, y, 4)
    seen = set()
    for rec in path.steps:
        assert not (set(rec.chosen) & seen)
        seen.update(rec.chosen)
    ssrs = path.ssr_path()
    assert all(b <= a * (1 + 1e-12) for a, b in zip(ssrs, ssrs[1:]))


def test_sis_rank_trivial_and_zero_response():
    X = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    y = np.array([2.0, 1.0, 0.0])
    assert screening.sis_rank(X, y).tolist() == [0, 1]
    assert screening.sis_rank(X, np.zeros(3)).tolist() == [0, 1]


def test_sis_rank_matches_direct_scan():
    rng = np.random.default_rng(61)
    X = rng.standard_normal((40, 25))
    y = rng.standard_normal(40)
    ranking = screening.sis_rank(X, y)
    scores = np.abs(X.T @ y)
    for d in (1, 5, 10):
        top = set(int(j) for j in ranking[:d])
        brute = set(int(j) for j in np.argsort(-scores)[:d])
        assert top == brute


def test_sis_select_default_size():
    assert screening.default_sis_size(150) == 29
    rng = np.random.default_rng(2)
    X = rng.standard_normal((150, 300))
    y = rng.standard_normal(150)
    assert len(screening.sis_select(X, y)) == 29


def test_sis_select_edges():
    X = np.diag([2.0, 3.0, 1.0])
    y = np.array([1.0, 1.0, 1.0])
    assert sorted(screening.sis_select(X, y, 3)) == [0, 1, 2]
    assert screening.sis_select(X, y, 1) == [1]
    with pytest.raises(ValidationError):
        screening.sis_select(X, y, 0)
    with pytest.raises(ValidationError):
        screening.sis_select(X, y, 4)


def test_isis_default_schedule_size():
    rng = np.random.default_rng(71)
    X = rng.standard_normal((150, 200))
    y = rng.standard_normal(150)
    path = screening.isis_path(X, y)
    assert len(path.steps) == 4
    assert all(len(rec.chosen) == 29 for rec in path.steps)
    assert len(path.model()) == 116


def test_isis_single_step_reduces_to_sis():
    rng = np.random.default_rng(81)
    X = rng.standard_normal((60, 90))
    y = rng.standard_normal(60)
    path = screening.isis_path(X, y, steps=1, per_step=17)
    assert path.model() == screening.sis_select(X, y, 17)


def test_isis_refits_between_stages():
    rng = np.random.default_rng(91)
    X = rng.standard_normal((50, 40))
    y = rng.standard_normal(50)
    path = screening.isis_path(X, y, steps=2, per_step=5)
    first = path.model(1)
    # Stage-2 scores must be computed against the stage-1 fit residual.
    coef = np.linalg.pinv(X[:, first]) @ y
    resid = y - X[:, first] @ coef
    scores = np.abs(X.T @ resid)
    scores[first] = -np.inf
    expected = list(np.argsort(-scores)[:5])
    assert sorted(path.steps[1].chosen) == sorted(int(j) for j in expected)
    assert path.steps[1].ssr_after == pytest.approx(
        refit_ssr(X, path.model(), y), rel=1e-8)


def test_isis_budget_validation():
    X = np.eye(10)
    y = np.ones(10)
    with pytest.raises(ValidationError):
        screening.isis_path(X, y, steps=3, per_step=4)


def test_example2_gfr_two_steps_cover_support():
    # Strong-signal autoregressive design: two GFR(J=2) steps catch the
    # three active columns in nearly every replication.
    spec = simgen.SimulationSpec(example=2, n=150, p=500, r2=0.9, seed=1234,
                                 replications=100)
    model = simgen.make_example(spec)
    hits = 0
    for rep in range(spec.replications):
        X, y = simgen.sample_dataset(model, spec, rep)
        path = screening.gfr_path(X, y, 2, max_steps=2)
        if set(model.support) <= set(path.model()):
            hits += 1
    assert hits >= 95
