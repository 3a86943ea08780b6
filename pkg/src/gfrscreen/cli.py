"""Command-line interface: screen user data, run benchmarks, run diagnostics.

Exit codes: 0 success, 2 input/validation error, 3 numerical degeneracy,
4 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__, diagnostics, dataio, metrics, model_select, screening, simgen
from .errors import BudgetExceededError, DegeneracyError, ValidationError

SCHEMA_VERSION = 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gfrscreen",
        description="Variable screening for sparse high-dimensional linear regression",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    screen = sub.add_parser("screen", help="screen a CSV dataset")
    screen.add_argument("--data", required=True, help="CSV file with a header row")
    screen.add_argument("--response", required=True, help="name of the response column")
    screen.add_argument("--method", choices=("sis", "isis", "fr", "gfr"), default="gfr")
    screen.add_argument("--j", type=int, default=None, help="columns per step for gfr")
    screen.add_argument("--d", type=int, default=None,
                        help="sis model size (default: floor(n/log n))")
    screen.add_argument("--isis-steps", type=int, default=None)
    screen.add_argument("--isis-per-step", type=int, default=None)
    screen.add_argument("--max-steps", type=int, default=None)
    screen.add_argument("--select", choices=("none", "bic", "ebic"), default="none",
                        help="how to pick the final model along the path "
                             "(ebic adds a model-count penalty; recommended when p >> n)")
    screen.add_argument("--standardize", action="store_true",
                        help="center/scale all columns (population sd) before screening")
    screen.add_argument("--holdout", type=float, default=None,
                        help="test fraction for PMSE evaluation")
    screen.add_argument("--splits", type=int, default=20,
                        help="number of random train/test splits")
    screen.add_argument("--split-seed", type=int, default=0)
    screen.add_argument("--seed", type=int, default=0)
    _output_flags(screen)
    screen.set_defaults(func=cmd_screen)

    simulate = sub.add_parser("simulate", help="run a built-in benchmark design")
    simulate.add_argument("--example", type=int, choices=(1, 2, 3), required=True)
    simulate.add_argument("--n", type=int, default=150)
    simulate.add_argument("--p", type=int, required=True)
    simulate.add_argument("--r2", type=float, required=True)
    simulate.add_argument("--reps", type=int, default=200)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--method", choices=("sis", "isis", "fr", "gfr"), required=True)
    simulate.add_argument("--j", type=int, default=None)
    simulate.add_argument("--scenario", choices=("i", "ii", "iii"), required=True)
    _output_flags(simulate)
    simulate.set_defaults(func=cmd_simulate)

    diagnose = sub.add_parser("diagnose", help="restricted-spectrum diagnostics on a CSV design")
    diagnose.add_argument("--data", required=True)
    diagnose.add_argument("--response", default=None,
                          help="column to exclude from the design (required for coverage-budget)")
    diagnose.add_argument("--check", choices=("spectrum", "correlation", "coverage-budget", "step-recovery"),
                          required=True)
    diagnose.add_argument("--s", type=int, default=None, help="sparsity for --check spectrum")
    diagnose.add_argument("--s1", type=int, default=None)
    diagnose.add_argument("--s2", type=int, default=None)
    diagnose.add_argument("--p0", type=int, default=None)
    diagnose.add_argument("--j", type=int, default=None)
    diagnose.add_argument("--k0", type=int, default=None)
    diagnose.add_argument("--beta-min", type=float, default=None)
    diagnose.add_argument("--eta", type=float, default=None)
    diagnose.add_argument("--standardize", action="store_true")
    _output_flags(diagnose)
    diagnose.set_defaults(func=cmd_diagnose)
    return parser


def _output_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    sub.add_argument("--out", default=None, help="output file (default: stdout)")
    sub.add_argument("--format", choices=("json", "table", "csv"), default="json")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DegeneracyError as exc:
        print(f"degenerate problem: {exc}", file=sys.stderr)
        return 3
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 4
    return 0


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
# screen
# ---------------------------------------------------------------------------


def _run_path(args, X, y) -> screening.ScreeningPath:
    if args.method == "gfr":
        return screening.gfr_path(X, y, 1 if args.j is None else args.j,
                                  max_steps=args.max_steps)
    if args.method == "fr":
        if args.j not in (None, 1):
            raise ValidationError("--method fr is the --j 1 case; drop --j or pass 1")
        return screening.gfr_path(X, y, 1, max_steps=args.max_steps, method="fr")
    if args.method == "sis":
        return screening.sis_path(X, y, args.d)
    return screening.isis_path(X, y, args.isis_steps, args.isis_per_step)


def _holdout_pmse(X, y, selected, fraction, splits, split_seed) -> dict:
    n = X.shape[0]
    if not 0.0 < fraction < 1.0:
        raise ValidationError(f"--holdout must lie in (0, 1), got {fraction}")
    if splits < 1:
        raise ValidationError(f"--splits must be positive, got {splits}")
    n_test = max(1, round(fraction * n))
    if n_test >= n:
        raise ValidationError(f"holdout fraction {fraction} leaves no training rows")
    rng = np.random.default_rng(split_seed)
    values = []
    for _ in range(splits):
        perm = rng.permutation(n)
        test, train = perm[:n_test], perm[n_test:]
        if selected:
            coef, *_ = np.linalg.lstsq(X[np.ix_(train, selected)], y[train], rcond=None)
            pred = X[np.ix_(test, selected)] @ coef
        else:
            pred = np.zeros(n_test)
        values.append(float(np.mean((y[test] - pred) ** 2)))
    return {"mean": sum(values) / len(values), "splits": splits}


def cmd_screen(args) -> None:
    dataset = dataio.read_dataset(args.data, args.response)
    if args.standardize:
        dataset = dataio.standardize(dataset)
    X, y = dataset.X, dataset.y
    path = _run_path(args, X, y)
    if args.select == "ebic":
        trace = model_select.ebic_trace(path, float(y @ y))
    else:
        trace = model_select.bic_trace(path, float(y @ y))
    selected = trace.selected_model if args.select in ("bic", "ebic") else path.model()

    names = dataset.names
    report = {
        "schema_version": SCHEMA_VERSION,
        "config": {
            "command": "screen",
            "data": args.data,
            "response": args.response,
            "method": args.method,
            "j": path.J,
            "max_steps": args.max_steps,
            "select": args.select,
            "standardize": args.standardize,
            "n": int(X.shape[0]),
            "p": int(X.shape[1]),
            "dropped_rows": dataset.dropped_rows,
            "seed": args.seed,
        },
        "path": [
            {
                "step": k + 1,
                "chosen": [names[j] for j in rec.chosen],
                "ssr": rec.ssr_after,
                "gains": rec.gains,
                "elapsed_s": rec.elapsed,
            }
            for k, rec in enumerate(path.steps)
        ],
        "bic": {"values": trace.values, "k_hat": trace.k_hat},
        "selected": [names[j] for j in selected],
    }
    if args.holdout is not None:
        report["config"]["holdout"] = args.holdout
        report["config"]["split_seed"] = args.split_seed
        report["pmse"] = _holdout_pmse(X, y, selected, args.holdout,
                                       args.splits, args.split_seed)

    if args.format == "json":
        _emit(json.dumps(report, indent=2), args.out)
    elif args.format == "table":
        _emit(_screen_table(report), args.out)
    else:
        _emit(_screen_csv(report), args.out)


def _screen_table(report: dict) -> str:
    cfg = report["config"]
    lines = [
        f"method={cfg['method']} j={cfg['j']} n={cfg['n']} p={cfg['p']} "
        f"select={cfg['select']} standardize={cfg['standardize']} "
        f"dropped_rows={cfg['dropped_rows']}",
        f"{'step':>4}  {'ssr':>14}  {'elapsed_s':>10}  chosen",
    ]
    for rec in report["path"]:
        lines.append(
            f"{rec['step']:>4}  {rec['ssr']:>14.6g}  {rec['elapsed_s']:>10.4f}  "
            + ",".join(rec["chosen"])
        )
    lines.append(f"bic k_hat = {report['bic']['k_hat']}")
    lines.append("selected: " + (",".join(report["selected"]) or "(none)"))
    if "pmse" in report:
        pmse = report["pmse"]
        lines.append(f"pmse mean = {pmse['mean']:.6g} over {pmse['splits']} splits")
    return "\n".join(lines)


def _screen_csv(report: dict) -> str:
    lines = ["step,chosen,ssr,elapsed_s"]
    for rec in report["path"]:
        lines.append(
            f"{rec['step']},{';'.join(rec['chosen'])},{rec['ssr']!r},{rec['elapsed_s']!r}"
        )
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def cmd_simulate(args) -> None:
    spec = simgen.SimulationSpec(
        example=args.example, n=args.n, p=args.p, r2=args.r2,
        seed=args.seed, replications=args.reps,
    )
    report = metrics.run_scenario(spec, args.method, args.j, args.scenario,
                                  threads=max(1, args.threads))
    payload = {"schema_version": SCHEMA_VERSION, **report.to_dict()}
    if args.format == "json":
        _emit(json.dumps(payload, indent=2), args.out)
    elif args.format == "table":
        _emit(_simulate_table(report), args.out)
    else:
        _emit(_simulate_csv(payload), args.out)


def _method_label(report: metrics.MetricsReport) -> str:
    if report.method == "gfr":
        return f"gfr(J={report.j})"
    return report.method


def _simulate_table(report: metrics.MetricsReport) -> str:
    label = _method_label(report)
    if report.scenario == "i":
        header = f"{'method':<10} {'p':>6} {'r2':>5} {'cp':>7} {'time_s':>9}"
        row = (f"{label:<10} {report.p:>6} {report.r2:>5.2f} {report.cp:>7.4f} "
               f"{report.time_total_mean:>9.4f}")
    elif report.scenario == "ii":
        header = (f"{'method':<10} {'p':>6} {'r2':>5} {'cp':>7} {'ams':>9} "
                  f"{'iter':>9} {'time1_s':>9} {'time2_s':>9}")
        row = (f"{label:<10} {report.p:>6} {report.r2:>5.2f} {report.cp:>7.4f} "
               f"{_fmt(report.ams):>9} {_fmt(report.iter_mean):>9} "
               f"{report.time_total_mean:>9.4f} {report.time_to_coverage_mean:>9.4f}")
    else:
        header = (f"{'method':<10} {'p':>6} {'r2':>5} {'cp':>7} {'afp':>9} "
                  f"{'afn':>9} {'ams':>9} {'time3_s':>9}")
        row = (f"{label:<10} {report.p:>6} {report.r2:>5.2f} {report.cp:>7.4f} "
               f"{report.afp:>9.4f} {report.afn:>9.4f} {report.ams:>9.4f} "
               f"{report.time_to_selection_mean:>9.4f}")
    return header + "\n" + row


def _fmt(value: float | None) -> str:
    return "nan" if value is None else f"{value:.4f}"


def _simulate_csv(payload: dict) -> str:
    flat: dict = {"schema_version": payload["schema_version"]}
    for block in ("config", "metrics", "timing"):
        flat.update(payload[block])
    header = ",".join(flat)
    row = ",".join(str(v) for v in flat.values())
    return header + "\n" + row


# ---------------------------------------------------------------------------
# diagnose
# ---------------------------------------------------------------------------


def _require(args, names: list[str]) -> None:
    missing = [name for name in names if getattr(args, name.replace("-", "_")) is None]
    if missing:
        flags = ", ".join("--" + name.replace("_", "-") for name in missing)
        raise ValidationError(f"--check {args.check} needs {flags}")


def cmd_diagnose(args) -> None:
    dataset = dataio.read_dataset(args.data, args.response)
    X = dataio.standardize_columns(dataset.X) if args.standardize else dataset.X

    result: dict
    if args.check == "spectrum":
        _require(args, ["s"])
        spectrum = diagnostics.restricted_eigenvalues(X, args.s)
        result = {
            "s": spectrum.s, "phi": spectrum.phi, "Phi": spectrum.Phi,
            "delta": max(spectrum.Phi - 1.0, 1.0 - spectrum.phi),
        }
    elif args.check == "correlation":
        _require(args, ["s1", "s2"])
        corr = diagnostics.restricted_correlation(X, args.s1, args.s2)
        result = {"s1": corr.s1, "s2": corr.s2, "theta": corr.theta}
    elif args.check == "coverage-budget":
        if args.response is None:
            raise ValidationError("--check coverage-budget needs --response")
        _require(args, ["beta_min", "p0", "j", "k0"])
        cond = diagnostics.check_coverage_budget_condition(
            X, dataset.y, args.beta_min, args.p0, args.j, args.k0)
        result = {"holds": cond.holds, "lhs": cond.lhs, "rhs": cond.rhs,
                  "margin": cond.margin, "detail": cond.detail}
    else:
        _require(args, ["p0", "j", "eta"])
        cond = diagnostics.check_step_recovery_condition(X, args.p0, args.j, args.eta)
        result = {"holds": cond.holds, "lhs": cond.lhs, "rhs": cond.rhs,
                  "margin": cond.margin, "detail": cond.detail}

    payload = {
        "schema_version": SCHEMA_VERSION,
        "config": {
            "command": "diagnose", "data": args.data, "check": args.check,
            "n": int(X.shape[0]), "p": int(X.shape[1]),
            "standardize": args.standardize,
        },
        "result": result,
    }
    text = json.dumps(payload, indent=2)
    if args.format != "json":
        lines = [f"{key} = {value}" for key, value in result.items()]
        text = "\n".join(lines)
    _emit(text, args.out)


if __name__ == "__main__":
    sys.exit(main())
