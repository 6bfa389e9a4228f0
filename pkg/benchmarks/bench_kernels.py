#!/usr/bin/env python3
"""Benchmark the compiled gate kernels against the NumPy fallback.

Times raw kernel calls at several register sizes plus the full 4-qubit
circuit forward/gradient workload under each backend.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""
import argparse
import math
import time

import numpy as np

from vqcnet import _kernels, circuit

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def timeit(fun, repeats):
    start = time.perf_counter()
    for _ in range(repeats):
        fun()
    return (time.perf_counter() - start) / repeats


def random_state(n, rng):
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    amps /= np.linalg.norm(amps)
    return amps.astype(np.complex128)


def bench_kernels(backend, repeats, rng):
    rows = []
    for n in (4, 8, 12):
        amps = random_state(n, rng)
        rows.append((
            f"apply_1q  n={n:2d}",
            timeit(lambda: backend.apply_1q_real(amps, n, n // 2, INV_SQRT2, INV_SQRT2,
                                                 INV_SQRT2, -INV_SQRT2), repeats),
        ))
        rows.append((
            f"apply_cnot n={n:2d}",
            timeit(lambda: backend.apply_cnot(amps, n, 0, n - 1), repeats),
        ))
        rows.append((
            f"expect_z  n={n:2d}",
            timeit(lambda: backend.expect_z(amps, n, 0), repeats),
        ))
    return rows


def bench_circuit(backend, repeats, rng):
    angles = rng.uniform(-math.pi / 2, math.pi / 2, 4)
    weights = rng.uniform(-math.pi, math.pi, (3, 4))

    def forward():
        circuit._expectations(angles, weights, k=backend)

    def shift_rule_sweep():
        # the per-sample gradient workload: 2 evaluations per parameter
        for i in range(weights.shape[0]):
            for q in range(4):
                shifted = weights.copy()
                shifted[i, q] += math.pi / 2
                circuit._expectations(angles, shifted, k=backend)
                shifted[i, q] -= math.pi
                circuit._expectations(angles, shifted, k=backend)

    return [
        ("vqc forward (depth 3)", timeit(forward, repeats)),
        ("shift-rule sweep (24 evals)", timeit(shift_rule_sweep, max(1, repeats // 10))),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=2000)
    args = parser.parse_args()

    names = _kernels.available_backends()
    if len(names) < 2:
        print(f"only {names} available; build the extension to compare backends")
    backends = {name: _kernels.load_backend(name) for name in names}

    results = {}
    for name, backend in backends.items():
        rng = np.random.default_rng(0)
        results[name] = bench_kernels(backend, args.repeats, rng) + \
            bench_circuit(backend, args.repeats, rng)

    labels = [label for label, _ in results[names[0]]]
    width = max(len(l) for l in labels)
    header = f"{'benchmark':<{width}}" + "".join(f"  {n:>12}" for n in names)
    if len(names) == 2:
        header += f"  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for i, label in enumerate(labels):
        times = [results[n][i][1] for n in names]
        row = f"{label:<{width}}" + "".join(f"  {t * 1e6:>10.2f}us" for t in times)
        if len(times) == 2:
            row += f"  {times[0] / times[1]:>7.1f}x" if names[0] == "numpy" \
                else f"  {times[1] / times[0]:>7.1f}x"
        print(row)


if __name__ == "__main__":
    main()
