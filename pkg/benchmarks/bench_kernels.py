#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Per-kernel timings run both backends in-process on synthetic spectra; the
end-to-end scenarios (a default bose capacity sweep and a full-band BCS dome)
run in subprocesses so the import-time backend selection is exercised for
real.  From the repo root:

    python benchmarks/bench_kernels.py [--sizes 1000 100000] [--repeats 5]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from trapgas._kernels import _purepy

try:
    from trapgas._kernels import _fast
except ImportError:
    _fast = None

REDUCTIONS = ["count_bose", "count_fermi", "energy_bose", "energy_fermi",
              "entropy_bose", "entropy_fermi", "log_xi_bose", "log_xi_fermi"]
OCCUPATIONS = ["occ_bose", "occ_fermi"]
BCS = ["bcs_count", "bcs_energy", "bcs_gap_sum", "bcs_entropy", "bcs_occ"]

SWEEP_SCENARIO = """
import time
from trapgas.units_and_config import RunConfig
from trapgas.capacity import sweep
import trapgas._kernels as K
t0 = time.perf_counter()
sweep(RunConfig(statistics="bose", N=100.0))
print(K.BACKEND, time.perf_counter() - t0)
"""

BCS_SCENARIO = """
import dataclasses
import time
import numpy as np
from trapgas.units_and_config import RunConfig
from trapgas.bcs import bcs_sweep, calibrate_v0, params_from_config
import trapgas._kernels as K
cfg = RunConfig(statistics="bcs", N=100.0, d_eps=1e4, V0=1e-3,
                cutoff_init=512.0)
params = params_from_config(cfg)
v0 = calibrate_v0(params.spectrum, params.d_eps, params.N, 2.0)
params = dataclasses.replace(params, V0=v0)
t0 = time.perf_counter()
bcs_sweep(params, np.geomspace(0.5, 3.0, 15))
print(K.BACKEND, time.perf_counter() - t0)
"""


def _args_for(name, e, w):
    beta = 0.7
    if name.endswith("bose"):
        mu = -0.5
    else:
        mu = 0.5 * float(e[-1])                 # mid-band Fermi level
    if name.startswith("bcs"):
        return (e, w, mu, 1.3, beta, 5.0) if name != "bcs_occ" else \
            (e, mu, 1.3, beta, 5.0)
    if name.startswith("occ"):
        return (e, beta, mu)
    return (e, w, beta, mu)


def _best_time(fn, args, repeats):
    # calibrate the inner loop so each sample runs for >= ~10 ms
    t0 = time.perf_counter()
    fn(*args)
    once = time.perf_counter() - t0
    number = max(1, int(0.01 / max(once, 1e-9)))
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(number):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / number)
    return best


def bench_kernels(sizes, repeats):
    rng = np.random.default_rng(7)
    rows = []
    for n in sizes:
        e = np.sort(rng.uniform(0.0, 50.0, n))
        w = rng.integers(1, 7, n).astype(float)
        e.flags.writeable = False
        w.flags.writeable = False
        for name in REDUCTIONS + OCCUPATIONS + BCS:
            args = _args_for(name, e, w)
            t_pure = _best_time(getattr(_purepy, name), args, repeats)
            t_fast = _best_time(getattr(_fast, name), args, repeats) \
                if _fast is not None else None
            rows.append((name, n, t_pure, t_fast))
    return rows


def print_table(rows):
    print("%-14s %9s %12s %12s %9s" %
          ("kernel", "n", "pure (us)", "fast (us)", "speedup"))
    for name, n, t_pure, t_fast in rows:
        if t_fast is None:
            print("%-14s %9d %12.2f %12s %9s" %
                  (name, n, 1e6 * t_pure, "-", "-"))
        else:
            print("%-14s %9d %12.2f %12.2f %8.1fx" %
                  (name, n, 1e6 * t_pure, 1e6 * t_fast, t_pure / t_fast))


def bench_end_to_end(label, code):
    results = {}
    for backend, env_extra in (("compiled", {}), ("python",
                                                  {"TRAPGAS_PURE_PYTHON": "1"})):
        env = dict(os.environ)
        env.pop("TRAPGAS_PURE_PYTHON", None)
        env.update(env_extra)
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, check=True)
        got, seconds = out.stdout.split()
        results[got] = float(seconds)
    for backend, seconds in sorted(results.items()):
        print("%-24s %-9s %8.3f s" % (label, backend, seconds))
    if "compiled" in results and "python" in results:
        print("%-24s %-9s %7.1fx" %
              (label, "speedup", results["python"] / results["compiled"]))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[300, 100000])
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--skip-end-to-end", action="store_true")
    args = ap.parse_args()

    if _fast is None:
        print("note: compiled backend not built; timing pure python only\n")
    print_table(bench_kernels(args.sizes, args.repeats))
    if not args.skip_end_to_end:
        print()
        bench_end_to_end("bose sweep (N=100)", SWEEP_SCENARIO)
        bench_end_to_end("BCS dome (full band)", BCS_SCENARIO)


if __name__ == "__main__":
    main()
