"""Timing comparison of the numpy and numba kernel backends.

Runs each hot kernel on random statevectors of increasing size and prints
a table of per-call times plus the speedup of numba over numpy.  Both
backends are pulled straight from ``qetsim.kernels.IMPLEMENTATIONS``, so
the QET_NO_NUMBA environment flag is irrelevant here: if numba imported,
both columns are populated in a single process.

Usage::

    python benchmarks/bench_kernels.py --qubits 14 18 22 --repeats 20
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from qetsim import kernels


def _random_state(n_qubits: int, rng: np.random.Generator) -> np.ndarray:
    dim = 1 << n_qubits
    amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return amps / np.linalg.norm(amps)


def _workloads(n_qubits: int, rng: np.random.Generator):
    amps = _random_state(n_qubits, rng)
    full = (1 << n_qubits) - 1
    half = full >> (n_qubits // 2)
    return [
        ("apply_pauli_signs", lambda impl: impl["apply_pauli_signs"](amps, full, half)),
        ("project_x", lambda impl: impl["project_x"](amps, full, 1)),
        ("z_expectations", lambda impl: impl["z_expectations"](amps, n_qubits)),
        ("diag_z_total", lambda impl: impl["diag_z_total"](amps, n_qubits)),
        ("complement_overlap", lambda impl: impl["complement_overlap"](amps)),
    ]


def _time_call(fn, repeats: int) -> float:
    fn()  # warm up (triggers jit compilation on the numba side)
    timer = timeit.Timer(fn)
    number = max(1, timer.autorange()[0] // 4)
    return min(timer.repeat(repeat=repeats, number=number)) / number


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--qubits", type=int, nargs="+", default=[12, 16, 20])
    parser.add_argument("--repeats", type=int, default=7)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    names = list(kernels.IMPLEMENTATIONS)
    if "numba" not in names:
        print("numba backend unavailable; timing numpy only")

    rng = np.random.default_rng(args.seed)
    header = f"{'kernel':<20} {'qubits':>6} " + " ".join(f"{b:>12}" for b in names)
    if len(names) == 2:
        header += f" {'speedup':>8}"
    print(header)
    print("-" * len(header))

    for n_qubits in args.qubits:
        for label, call in _workloads(n_qubits, rng):
            times = {}
            for backend in names:
                impl = kernels.IMPLEMENTATIONS[backend]
                times[backend] = _time_call(lambda: call(impl), args.repeats)
            row = f"{label:<20} {n_qubits:>6} "
            row += " ".join(f"{times[b] * 1e6:>10.1f}us" for b in names)
            if len(names) == 2:
                row += f" {times['numpy'] / times['numba']:>7.2f}x"
            print(row)
        print()


if __name__ == "__main__":
    main()
