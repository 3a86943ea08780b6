"""Monte-Carlo scenario runners and their table-style aggregation.

Three reporting scenarios are supported for the built-in designs:

- ``i``   run the stepwise method for exactly p0 steps (p0 = true support
          size) and report the coverage probability and mean run time.
- ``ii``  run the full path; report coverage at termination, plus the mean
          model size and step count at the moment of full coverage and the
          time to reach it. Size/step means are taken over the covered
          replications; the time-to-coverage of an uncovered replication is
          its full run time.
- ``iii`` report the selected model: for the stepwise methods the path is
          scored with the extended criterion (``model_select.ebic_trace``,
          which the plain-BIC formula cannot replace at p >> n; see that
          module), for SIS/ISIS the fixed marginal schedules apply. Reports
          coverage, false positives/negatives, model size, and the time to
          the chosen step.

All non-timing fields are deterministic functions of the spec; replications
may run on several threads without changing them.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import model_select, screening, simgen
from .errors import ValidationError

_STEPWISE = ("fr", "gfr")
_METHODS = ("sis", "isis", "fr", "gfr")


@dataclass
class ReplicationOutcome:
    """Bookkeeping for a single replication."""

    selected: list[int]
    covered: bool
    fp: int
    fn: int
    model_size: int
    steps_to_full_coverage: int | None
    size_at_coverage: int | None
    time_total: float
    time_to_coverage: float | None
    time_to_selection: float | None


@dataclass
class MetricsReport:
    """Aggregated results for one (design, method, scenario) configuration."""

    scenario: str
    method: str
    j: int
    example: int
    n: int
    p: int
    r2: float
    reps: int
    seed: int
    cp: float
    afp: float | None = None
    afn: float | None = None
    ams: float | None = None
    iter_mean: float | None = None
    time_total_mean: float | None = None
    time_to_coverage_mean: float | None = None
    time_to_selection_mean: float | None = None

    def to_dict(self) -> dict:
        """Split into config / metrics / timing blocks for serialization."""
        metrics = {"cp": self.cp}
        for key in ("afp", "afn", "ams", "iter_mean"):
            value = getattr(self, key)
            if value is not None:
                metrics[key] = value
        timing = {}
        for key in ("time_total_mean", "time_to_coverage_mean", "time_to_selection_mean"):
            value = getattr(self, key)
            if value is not None:
                timing[key] = value
        return {
            "config": {
                "scenario": self.scenario,
                "method": self.method,
                "j": self.j,
                "example": self.example,
                "n": self.n,
                "p": self.p,
                "r2": self.r2,
                "reps": self.reps,
                "seed": self.seed,
            },
            "metrics": metrics,
            "timing": timing,
        }


def _outcome_vs_truth(selected: list[int], support: tuple[int, ...]) -> tuple[bool, int, int]:
    sel = set(selected)
    truth = set(support)
    fp = len(sel - truth)
    fn = len(truth - sel)
    return fn == 0, fp, fn


def _check_method(method: str, scenario: str) -> str:
    method = method.lower()
    allowed = _STEPWISE if scenario in ("i", "ii") else _METHODS
    if method not in allowed:
        raise ValidationError(
            f"scenario {scenario} supports methods {allowed}, got {method!r}"
        )
    return method


def _resolve_j(method: str, J: int | None) -> int:
    if method == "fr":
        if J not in (None, 1):
            raise ValidationError("forward regression is the J = 1 case; drop J or pass 1")
        return 1
    if method == "gfr":
        if J is None:
            raise ValidationError("gfr needs J")
        return int(J)
    return 0  # marginal methods take their sizes from the schedule


def _coverage_step(path: screening.ScreeningPath, support: tuple[int, ...]) -> int | None:
    """First 1-based step whose cumulative model contains the support."""
    missing = set(support)
    for k, rec in enumerate(path.steps, start=1):
        missing.difference_update(rec.chosen)
        if not missing:
            return k
    return None


def _replicate_i(X, y, support, method, J):
    t0 = time.perf_counter()
    path = screening.gfr_path(X, y, J, max_steps=len(support), method=method)
    elapsed = time.perf_counter() - t0
    selected = path.model()
    covered, fp, fn = _outcome_vs_truth(selected, support)
    return ReplicationOutcome(
        selected=selected, covered=covered, fp=fp, fn=fn,
        model_size=len(selected), steps_to_full_coverage=_coverage_step(path, support),
        size_at_coverage=None, time_total=elapsed,
        time_to_coverage=None, time_to_selection=None,
    )


def _replicate_ii(X, y, support, method, J):
    t0 = time.perf_counter()
    path = screening.gfr_path(X, y, J, method=method)
    elapsed = time.perf_counter() - t0
    selected = path.model()
    covered, fp, fn = _outcome_vs_truth(selected, support)
    k_star = _coverage_step(path, support)
    if k_star is None:
        time_cov = elapsed
        size_cov = None
    else:
        time_cov = sum(rec.elapsed for rec in path.steps[:k_star])
        size_cov = sum(len(rec.chosen) for rec in path.steps[:k_star])
    return ReplicationOutcome(
        selected=selected, covered=covered, fp=fp, fn=fn,
        model_size=len(selected), steps_to_full_coverage=k_star,
        size_at_coverage=size_cov, time_total=elapsed,
        time_to_coverage=time_cov, time_to_selection=None,
    )


def _replicate_iii(X, y, support, method, J):
    t0 = time.perf_counter()
    if method in _STEPWISE:
        path = screening.gfr_path(X, y, J, method=method)
        trace = model_select.ebic_trace(path, float(y @ y))
        selected = trace.selected_model
        # Time to the criterion's minimum: the steps that were scored
        # before scoring stopped (a streaming run would stop there).
        time_sel = sum(rec.elapsed for rec in path.steps[:len(trace.values) - 1])
    elif method == "sis":
        path = screening.sis_path(X, y)
        selected = path.model()
        time_sel = time.perf_counter() - t0
    else:
        path = screening.isis_path(X, y)
        selected = path.model()
        time_sel = time.perf_counter() - t0
    elapsed = time.perf_counter() - t0
    covered, fp, fn = _outcome_vs_truth(selected, support)
    return ReplicationOutcome(
        selected=selected, covered=covered, fp=fp, fn=fn,
        model_size=len(selected), steps_to_full_coverage=_coverage_step(path, support),
        size_at_coverage=None, time_total=elapsed,
        time_to_coverage=None, time_to_selection=time_sel,
    )


_REPLICATES = {"i": _replicate_i, "ii": _replicate_ii, "iii": _replicate_iii}


def run_replications(spec: simgen.SimulationSpec, method: str, J: int | None,
                     scenario: str, threads: int = 1) -> list[ReplicationOutcome]:
    """All replication outcomes for one configuration, in replication order."""
    if scenario not in _REPLICATES:
        raise ValidationError(f"unknown scenario {scenario!r}")
    method = _check_method(method, scenario)
    J = _resolve_j(method, J)
    model = simgen.make_example(spec)
    replicate = _REPLICATES[scenario]

    def worker(i: int) -> ReplicationOutcome:
        X, y = simgen.sample_dataset(model, spec, i)
        return replicate(X, y, model.support, method, J)

    reps = range(spec.replications)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(worker, reps))
    return [worker(i) for i in reps]


def _mean(values) -> float | None:
    values = list(values)
    if not values:
        return None
    return sum(values) / len(values)


def _aggregate(outcomes, spec, method, J, scenario) -> MetricsReport:
    reps = len(outcomes)
    report = MetricsReport(
        scenario=scenario, method=method, j=J, example=spec.example,
        n=spec.n, p=spec.p, r2=spec.r2, reps=reps, seed=spec.seed,
        cp=sum(o.covered for o in outcomes) / reps,
        time_total_mean=_mean(o.time_total for o in outcomes),
    )
    if scenario == "ii":
        covered = [o for o in outcomes if o.covered]
        report.ams = _mean(o.size_at_coverage for o in covered)
        report.iter_mean = _mean(o.steps_to_full_coverage for o in covered)
        report.time_to_coverage_mean = _mean(o.time_to_coverage for o in outcomes)
    else:
        report.afp = _mean(o.fp for o in outcomes)
        report.afn = _mean(o.fn for o in outcomes)
        report.ams = _mean(o.model_size for o in outcomes)
        if scenario == "iii":
            report.time_to_selection_mean = _mean(o.time_to_selection for o in outcomes)
    return report


def run_scenario(spec: simgen.SimulationSpec, method: str, J: int | None,
                 scenario: str, threads: int = 1) -> MetricsReport:
    """Run one configuration end to end and aggregate."""
    method = _check_method(method, scenario)
    outcomes = run_replications(spec, method, J, scenario, threads=threads)
    return _aggregate(outcomes, spec, method, _resolve_j(method, J), scenario)


def run_scenario_i(spec, method, J, threads: int = 1) -> MetricsReport:
    """Fixed-step run: exactly p0 steps of FR/GFR."""
    return run_scenario(spec, method, J, "i", threads=threads)


def run_scenario_ii(spec, method, J, threads: int = 1) -> MetricsReport:
    """Full-path run with coverage bookkeeping."""
    return run_scenario(spec, method, J, "ii", threads=threads)


def run_scenario_iii(spec, method, J=None, threads: int = 1) -> MetricsReport:
    """Selected-model run: BIC choice for FR/GFR, fixed schedules for SIS/ISIS."""
    return run_scenario(spec, method, J, "iii", threads=threads)
