"""Benchmark the compiled gate kernels against the pure-numpy fallback.

Times individual kernels on a 20-qubit register and the full
decode-and-recover pipeline, which is what the verification sweeps hammer.

Run:  python benchmarks/bench_backends.py [--qubits N] [--reps R]
"""

import argparse
import os
import time

import numpy as np

os.environ.setdefault("CONCATQEC_BACKEND", "compiled")

from concatqec import channel, concat  # noqa: E402
from concatqec.backends import get_backend  # noqa: E402


def time_kernel(kern, fn, amps, n, args, reps):
    getattr(kern, fn)(amps, n, *args)  # warm up
    t0 = time.perf_counter()
    for _ in range(reps):
        getattr(kern, fn)(amps, n, *args)
    return (time.perf_counter() - t0) / reps


def bench_kernels(n, reps):
    cases = [
        ("apply_h", (2,)),
        ("apply_h", (n - 1,)),
        ("apply_x", (n // 2,)),
        ("apply_z", (1,)),
        ("apply_cnot", (1, n - 2)),
        ("apply_cnot", (n - 2, 1)),
        ("apply_cz", (0, n // 2)),
        ("apply_ccx", (0, n // 2, n - 1)),
        ("apply_unitary1", (3, 0.6, 0.8j, 0.8, -0.6j)),
    ]
    backends = {name: get_backend(name) for name in ("python", "compiled")}
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[0] = 1.0
    print(f"\nkernels on a {n}-qubit register ({reps} reps)")
    print(f"{'kernel':30s} {'python':>10s} {'compiled':>10s} {'speedup':>8s}")
    for fn, args in cases:
        row = {}
        for name, kern in backends.items():
            row[name] = time_kernel(kern, fn, amps, n, args, reps)
        label = f"{fn}{args}"
        print(f"{label:30s} {row['python']*1e3:9.2f}ms {row['compiled']*1e3:9.2f}ms "
              f"{row['python']/row['compiled']:7.1f}x")


def bench_pipeline(reps):
    spec = concat.default_spec()
    encoded = concat._encode_inputs(spec, concat.default_probe_inputs())
    scenario = next(channel.enumerate_scenarios(2, 1))
    scratch = concat._sweep_scratch()
    print(f"\nfull decode pipeline, one scenario x 3 probe inputs ({reps} reps)")
    for name in ("python", "compiled"):
        # backend selection happens at import; patch the kernel module directly
        from concatqec import statevec
        statevec.kernels = get_backend(name)
        concat._run_scenario(spec, encoded, scenario, 1e-9, scratch=scratch)
        t0 = time.perf_counter()
        for _ in range(reps):
            concat._run_scenario(spec, encoded, scenario, 1e-9, scratch=scratch)
        dt = (time.perf_counter() - t0) / reps
        print(f"{name:10s} {dt*1e3:9.1f} ms/scenario "
              f"(projected 10125-scenario sweep: {dt*10125/60:5.1f} min single-core)")
    statevec.kernels = get_backend("compiled")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--qubits", type=int, default=20)
    ap.add_argument("--reps", type=int, default=10)
    args = ap.parse_args()
    bench_kernels(args.qubits, args.reps)
    bench_pipeline(max(3, args.reps // 2))


if __name__ == "__main__":
    main()
