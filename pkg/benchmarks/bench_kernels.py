#!/usr/bin/env python3
"""Timing comparison of the two kernel backends.

Each hot loop runs on both implementations at a few sizes; the table reports
best-of-k wall times.  Jit functions are warmed once before timing so
compilation cost never lands in a measurement.

Usage: python3 benchmarks/bench_kernels.py [--repeats K]
"""
import argparse
import time

import numpy as np

from schwingersim.kernels import _numpy as np_impl

try:
    from schwingersim.kernels import _numba as nb_impl
except ImportError:
    nb_impl = None

GATE = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)


def best_of(repeats, fn):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def random_state(dim, rng):
    state = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return np.ascontiguousarray(state / np.linalg.norm(state))


def bench_single_qubit(impl, n_qubits, repeats, rng):
    state = random_state(1 << n_qubits, rng)
    stride = 1 << (n_qubits // 2)
    args = (state, GATE[0, 0], GATE[0, 1], GATE[1, 0], GATE[1, 1], stride)
    return best_of(repeats, lambda: impl.apply_single_qubit(*args))


def bench_scaled_phase(impl, n_qubits, repeats, rng):
    state = random_state(1 << n_qubits, rng)
    exponents = np.ascontiguousarray(rng.standard_normal(1 << n_qubits))
    return best_of(repeats, lambda: impl.apply_scaled_phase(state, 0.1234, exponents))


def bench_dephase(impl, n_qubits, repeats, rng):
    dim = 1 << n_qubits
    rho = np.ascontiguousarray(
        rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    )
    popcounts = np.array([bin(i).count("1") for i in range(dim)], dtype=np.int64)
    # decay close to 1 so repeated in-place application never underflows
    return best_of(repeats, lambda: impl.dephase(rho, 0.9999, popcounts))


CASES = [
    ("apply_single_qubit", bench_single_qubit, (12, 16, 20)),
    ("apply_scaled_phase", bench_scaled_phase, (12, 16, 20)),
    ("dephase", bench_dephase, (8, 10)),
]


def warm_numba():
    state = np.ones(4, dtype=complex)
    nb_impl.apply_single_qubit(state, 1.0 + 0j, 0j, 0j, 1.0 + 0j, 1)
    nb_impl.apply_scaled_phase(state, 0.0, np.zeros(4))
    nb_impl.dephase(np.ones((4, 4), dtype=complex), 1.0, np.zeros(4, dtype=np.int64))


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5, help="best-of-K timing")
    args = parser.parse_args()

    if nb_impl is None:
        print("numba backend unavailable; timing the numpy backend only")
    else:
        warm_numba()

    rng = np.random.default_rng(7)
    header = f"{'kernel':<20} {'qubits':>6} {'numpy':>12} {'numba':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, bench, sizes in CASES:
        for n in sizes:
            t_np = bench(np_impl, n, args.repeats, rng)
            if nb_impl is None:
                print(f"{name:<20} {n:>6} {t_np * 1e3:>9.3f} ms {'-':>12} {'-':>8}")
                continue
            t_nb = bench(nb_impl, n, args.repeats, rng)
            ratio = t_np / t_nb if t_nb > 0 else float("inf")
            print(
                f"{name:<20} {n:>6} {t_np * 1e3:>9.3f} ms "
                f"{t_nb * 1e3:>9.3f} ms {ratio:>7.1f}x"
            )


if __name__ == "__main__":
    main()
