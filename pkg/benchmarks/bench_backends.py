#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure numpy/scipy fallback.

Runs each workload in a subprocess with ADICKE_BACKEND forced, so both
paths compile/import fresh and report comparable wall times:

    python benchmarks/bench_backends.py
"""

import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, time
import numpy as np
import adicke as ad
from adicke.solver import GridSpec, _solve_on_grid, scaled_quartic_profile

out = {"backend": ad.BACKEND}

# warm-up triggers numba compilation so timings measure steady state
_solve_on_grid(scaled_quartic_profile(0.0), GridSpec(4.5, 401))
p0 = ad.DimensionlessParams.from_alpha(1.0, 10.0, 64)
st0 = ad.solve_full_potential(1.0, p0.nd, 10.0, 1e-6)
ad.purity_qubits(st0.wavefunction, p0, 64)

t0 = time.time()
prof = scaled_quartic_profile(0.0)
for _ in range(3):
    e, _ = _solve_on_grid(prof, GridSpec(4.5, 200001))
out["tridiag_200k_x3_s"] = time.time() - t0
out["e0"] = e

n = 2**14
p = ad.DimensionlessParams.from_alpha(1.0, 10.0, n)
state = ad.solve_full_potential(1.0, p.nd, 10.0, 1e-8)
grid = GridSpec(state.wavefunction.grid.q_max, 4001)
from adicke.model import effective_potential_profile
base = effective_potential_profile(p.alpha, p.nd)
_, wf = _solve_on_grid(lambda q: base(q) + p.nd, grid)
t0 = time.time()
purity = ad.purity_qubits(wf, p, n)
out["purity_4001sq_s"] = time.time() - t0
out["purity"] = purity

print(json.dumps(out))
"""


def run(backend: str) -> dict:
    env = dict(os.environ, ADICKE_BACKEND=backend)
    res = subprocess.run(
        [sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True
    )
    if res.returncode != 0:
        raise RuntimeError(f"{backend} run failed:\n{res.stderr}")
    return json.loads(res.stdout.strip().splitlines()[-1])


def main():
    results = [run("numba"), run("numpy")]
    print(f"{'workload':<24}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    for key, label in [
        ("tridiag_200k_x3_s", "ground state, n=200k x3"),
        ("purity_4001sq_s", "purity kernel, 4001^2"),
    ]:
        a, b = results[0][key], results[1][key]
        print(f"{label:<24}{a:>11.3f}s{b:>11.3f}s{b / a:>9.1f}x")
    de = abs(results[0]["e0"] - results[1]["e0"])
    dp = abs(results[0]["purity"] - results[1]["purity"])
    print(f"cross-backend agreement: |dE| = {de:.2e}, |d purity| = {dp:.2e}")


if __name__ == "__main__":
    main()
