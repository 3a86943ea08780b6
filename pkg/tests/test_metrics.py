import math

import pytest

from gfrscreen import metrics, simgen
from gfrscreen.errors import ValidationError


def _small_spec(example=2, n=80, p=120, r2=0.9, seed=7, reps=20):
    return simgen.SimulationSpec(example=example, n=n, p=p, r2=r2, seed=seed,
                                 replications=reps)


def _strip_timing(report):
    d = report.to_dict()
    return {"config": d["config"], "metrics": d["metrics"]}


def test_scenario_i_runs_exactly_p0_steps():
    spec = _small_spec(reps=5)
    outcomes = metrics.run_replications(spec, "gfr", 2, "i")
    # p0 = 3 for design 2; each step takes 2 columns.
    assert all(o.model_size == 6 for o in outcomes)


def test_scenario_i_report_fields():
    spec = _small_spec(reps=10)
    report = metrics.run_scenario_i(spec, "fr", None)
    assert 0.0 <= report.cp <= 1.0
    assert report.time_total_mean > 0.0
    assert report.scenario == "i"


def test_identity_ams_afp_afn():
    spec = _small_spec(reps=15)
    report = metrics.run_scenario_iii(spec, "gfr", 2)
    p0 = len(simgen.make_example(spec).support)
    assert report.ams == pytest.approx(report.afp + (p0 - report.afn), rel=1e-12)


def test_scenario_ii_coverage_bookkeeping():
    spec = _small_spec(reps=10)
    report = metrics.run_scenario_ii(spec, "fr", None)
    assert report.cp == 1.0  # strong signal, full path
    assert report.ams >= 3.0
    assert report.iter_mean >= 3.0
    assert report.time_to_coverage_mean <= report.time_total_mean


def test_scenario_ii_uncovered_uses_total_time():
    outcomes = [
        metrics.ReplicationOutcome(
            selected=[0], covered=False, fp=1, fn=2, model_size=1,
            steps_to_full_coverage=None, size_at_coverage=None,
            time_total=5.0, time_to_coverage=5.0, time_to_selection=None),
        metrics.ReplicationOutcome(
            selected=[0, 1, 2], covered=True, fp=0, fn=0, model_size=3,
            steps_to_full_coverage=3, size_at_coverage=3,
            time_total=4.0, time_to_coverage=1.0, time_to_selection=None),
    ]
    spec = _small_spec(reps=2)
    report = metrics._aggregate(outcomes, spec, "fr", 1, "ii")
    assert report.cp == 0.5
    assert report.ams == 3.0              # covered replications only
    assert report.iter_mean == 3.0
    assert report.time_to_coverage_mean == 3.0  # all replications


def test_single_replication_equals_outcome():
    spec = _small_spec(reps=1)
    outcomes = metrics.run_replications(spec, "fr", None, "iii")
    report = metrics.run_scenario_iii(spec, "fr", None)
    only = outcomes[0]
    assert report.cp == float(only.covered)
    assert report.afp == only.fp
    assert report.afn == only.fn
    assert report.ams == only.model_size


def test_threads_do_not_change_non_timing_fields():
    spec = _small_spec(reps=12)
    serial = metrics.run_scenario_iii(spec, "gfr", 2, threads=1)
    threaded = metrics.run_scenario_iii(spec, "gfr", 2, threads=4)
    assert _strip_timing(serial) == _strip_timing(threaded)


def test_marginal_methods_in_scenario_iii():
    spec = _small_spec(n=100, p=150, reps=5)
    sis = metrics.run_scenario_iii(spec, "sis")
    assert sis.ams == 100 // math.log(100) // 1  # fixed size
    isis = metrics.run_scenario_iii(spec, "isis")
    expected = int(math.log(100) - 1) * int(100 / math.log(100))
    assert isis.ams == expected


def test_autoregressive_design_benchmark_rows():
    # Strong-signal reference rows for the autoregressive design at full
    # scale: fixed-step FR finds all three columns, the full-path runs
    # cover at the expected step counts.
    spec = simgen.SimulationSpec(example=2, n=150, p=500, r2=0.9, seed=555,
                                 replications=60)
    fixed = metrics.run_scenario_i(spec, "fr", None)
    assert fixed.cp >= 0.97

    fr = metrics.run_scenario_ii(spec, "fr", None)
    assert fr.cp >= 0.97
    assert 3.0 <= fr.ams <= 3.2
    assert 3.0 <= fr.iter_mean <= 3.2

    gfr4 = metrics.run_scenario_ii(spec, "gfr", 4)
    assert gfr4.cp >= 0.97
    assert 1.0 <= gfr4.iter_mean <= 1.4
    assert 4.0 <= gfr4.ams <= 5.6


def test_cp_monotone_in_signal_strength():
    reps = 40
    weak = metrics.run_scenario_iii(
        _small_spec(r2=0.5, reps=reps, seed=3), "fr", None)
    strong = metrics.run_scenario_iii(
        _small_spec(r2=0.9, reps=reps, seed=3), "fr", None)
    se = math.sqrt(0.25 / reps)
    assert strong.cp >= weak.cp - 3.0 * se


def test_method_validation():
    spec = _small_spec(reps=2)
    with pytest.raises(ValidationError):
        metrics.run_scenario_i(spec, "sis", None)
    with pytest.raises(ValidationError):
        metrics.run_scenario_iii(spec, "gfr", None)   # gfr needs J
    with pytest.raises(ValidationError):
        metrics.run_scenario_iii(spec, "fr", 3)
    with pytest.raises(ValidationError):
        metrics.run_scenario(spec, "fr", None, "iv")


def test_report_dict_blocks():
    spec = _small_spec(reps=3)
    d = metrics.run_scenario_ii(spec, "gfr", 4).to_dict()
    assert set(d) == {"config", "metrics", "timing"}
    assert d["config"]["method"] == "gfr"
    assert "cp" in d["metrics"]
    assert all(key.startswith("time") for key in d["timing"])
