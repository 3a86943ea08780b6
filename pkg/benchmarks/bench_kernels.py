#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Times the two kernel operations at several shapes and whole solution paths
at the main benchmark size, for every available backend. Run from the
repository root after building the extension in place:

    python3 setup.py build_ext --inplace
    PYTHONPATH=src python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from gfrscreen import kernels, screening, simgen


def _timeit(fn, reps):
    best = float("inf")
    for _ in range(3):
        t0 = time.perf_counter()
        for _ in range(reps):
            fn()
        best = min(best, (time.perf_counter() - t0) / reps)
    return best * 1e6


def bench_gains(backend, n, p, reps=500):
    rng = np.random.default_rng(0)
    R = np.ascontiguousarray(rng.standard_normal((n, p)))
    r = rng.standard_normal(n)
    norms = np.einsum("ij,ij->j", R, R)
    floor = 1e-10 * norms
    out = np.empty(p)
    kernels.set_backend(backend)
    return _timeit(lambda: kernels.candidate_gains(R, r, norms, floor, out), reps)


def bench_append(backend, n, p, t, reps=300):
    rng = np.random.default_rng(1)
    base = np.ascontiguousarray(rng.standard_normal((n, p)))
    norms0 = np.einsum("ij,ij->j", base, base)
    resid0 = rng.standard_normal(n)
    idx = np.arange(t, dtype=np.intp)
    floors = 1e-10 * norms0[:t]
    origs = norms0[:t].copy()
    kernels.set_backend(backend)

    def run():
        R = base.copy()
        norms = norms0.copy()
        resid = resid0.copy()
        buf = np.zeros((n, min(n, p)), order="F")
        kernels.append_columns(R, norms, resid, buf, 0, idx, floors, origs)

    overhead = _timeit(lambda: (base.copy(), norms0.copy(), resid0.copy(),
                                np.zeros((n, min(n, p)), order="F")), reps)
    return _timeit(run, reps) - overhead


def bench_paths(backend, reps=10):
    spec = simgen.SimulationSpec(example=1, n=150, p=500, r2=0.9, seed=5,
                                 replications=1)
    model = simgen.make_example(spec)
    X, y = simgen.sample_dataset(model, spec, 0)
    kernels.set_backend(backend)
    out = {}
    for label, J in (("fr", 1), ("gfr J=2", 2), ("gfr J=4", 4)):
        out[label] = _timeit(lambda: screening.gfr_path(X, y, J), reps) / 1e3
    return out


def main():
    backends = kernels.available_backends()
    print(f"available backends: {', '.join(backends)} "
          f"(default: {kernels.active_backend()})\n")

    print("candidate_gains (us per call)")
    print(f"{'shape':<16}" + "".join(f"{b:>12}" for b in backends))
    for n, p in ((150, 500), (150, 2000), (300, 5000)):
        row = [bench_gains(b, n, p) for b in backends]
        print(f"{f'{n}x{p}':<16}" + "".join(f"{v:12.1f}" for v in row))

    print("\nappend_columns (us per call, allocation-corrected)")
    print(f"{'shape  t':<16}" + "".join(f"{b:>12}" for b in backends))
    for n, p, t in ((150, 500, 1), (150, 500, 2), (150, 500, 4),
                    (150, 2000, 1), (150, 2000, 4)):
        row = [bench_append(b, n, p, t) for b in backends]
        print(f"{f'{n}x{p}  {t}':<16}" + "".join(f"{v:12.1f}" for v in row))

    print("\nfull solution path, n=150 p=500 (ms per path)")
    print(f"{'method':<16}" + "".join(f"{b:>12}" for b in backends))
    results = {b: bench_paths(b) for b in backends}
    for label in ("fr", "gfr J=2", "gfr J=4"):
        print(f"{label:<16}"
              + "".join(f"{results[b][label]:12.2f}" for b in backends))

    kernels.set_backend("cython" if "cython" in backends else "python")


if __name__ == "__main__":
    main()
