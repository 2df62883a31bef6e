"""Benchmark the compiled gate kernels against the numpy fallback.

Runs the same random layered gate sequence (the shape the embedding
produces) through both kernel modules and reports time per gate, plus a
macro benchmark of one Hilbert-Schmidt gradient step.

    python benchmarks/bench_kernels.py
"""

import argparse
import time

import numpy as np

from qembed._kernels import _gates_py

try:
    from qembed._kernels import _gates_cy
except ImportError:
    _gates_cy = None


def layered_ops(rng, n_qubits, layers):
    ops = []
    for _ in range(layers):
        for q in range(n_qubits):
            ops.append(("rx", (q,), float(rng.uniform(-np.pi, np.pi))))
        for q in range(n_qubits - 1):
            ops.append(("zz", (q, q + 1), float(rng.uniform(-np.pi, np.pi))))
        for q in range(n_qubits):
            ops.append(("ry", (q,), float(rng.uniform(-np.pi, np.pi))))
    return ops


def run_ops(module, ops, state, n_qubits):
    for name, qubits, angle in ops:
        getattr(module, name)(state, n_qubits, *qubits, angle)


def time_backend(module, ops, n_qubits, reps):
    state = np.zeros(2**n_qubits, dtype=np.complex128)
    best = float("inf")
    for _ in range(reps):
        state[:] = 0
        state[0] = 1.0
        t0 = time.perf_counter()
        run_ops(module, ops, state, n_qubits)
        best = min(best, time.perf_counter() - t0)
    return best, state.copy()


def bench_gates(qubit_counts, layers, reps):
    print(f"{'qubits':>6} {'gates':>6} {'python':>12} {'cython':>12} {'speedup':>8}")
    rng = np.random.default_rng(0)
    for n in qubit_counts:
        ops = layered_ops(rng, n, layers)
        t_py, out_py = time_backend(_gates_py, ops, n, reps)
        row = f"{n:>6} {len(ops):>6} {t_py * 1e6 / len(ops):>10.2f}us"
        if _gates_cy is not None:
            t_cy, out_cy = time_backend(_gates_cy, ops, n, reps)
            assert np.max(np.abs(out_py - out_cy)) < 1e-12, "backend mismatch"
            row += f" {t_cy * 1e6 / len(ops):>10.2f}us {t_py / t_cy:>7.1f}x"
        else:
            row += f" {'n/a':>12} {'n/a':>8}"
        print(row)


def bench_gradient_step(reps):
    """One parameter-shift gradient on the moons-experiment geometry."""
    import os
    import subprocess
    import sys

    code = (
        "import time, numpy as np\n"
        "from qembed import KERNEL_BACKEND\n"
        "from qembed.embedding import EmbeddingSpec, param_count\n"
        "from qembed.training import gradient_param_shift\n"
        "spec = EmbeddingSpec(2, 2, 4)\n"
        "rng = np.random.default_rng(1)\n"
        "theta = rng.normal(size=param_count(spec))\n"
        "ba, bb = rng.normal(size=(5, 2)), rng.normal(size=(5, 2))\n"
        "gradient_param_shift(spec, theta, ba, bb)\n"
        f"best = min(__import__('timeit').repeat(lambda: gradient_param_shift(spec, theta, ba, bb), number=1, repeat={reps}))\n"
        "print(f'{KERNEL_BACKEND}: {best*1e3:.1f} ms per gradient step')\n"
    )
    sys.stdout.flush()  # keep parent prints ahead of subprocess output
    for backend in ("python", "cython") if _gates_cy is not None else ("python",):
        env = dict(os.environ, QEMBED_KERNELS=backend)
        subprocess.run([sys.executable, "-c", code], env=env, check=True)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--qubits", type=int, nargs="+", default=[2, 4, 8, 12])
    parser.add_argument("--layers", type=int, default=4)
    parser.add_argument("--reps", type=int, default=20)
    args = parser.parse_args()

    if _gates_cy is None:
        print("compiled kernels not available; showing the numpy fallback only\n")
    print("per-gate timings (layered RX/ZZ/RY sequence, best of reps):")
    bench_gates(args.qubits, args.layers, args.reps)
    print("\ntraining macro-benchmark (2 qubits, 4 layers, batch 5):")
    bench_gradient_step(max(3, args.reps // 4))


if __name__ == "__main__":
    main()
