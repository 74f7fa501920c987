"""Time the compiled premap-sum kernel against the pure-Python one.

Both backends get the same arrays, built the way the exact engine builds
them for a two-trace Wishart cumulant, and must return identical histograms.

    python3 benchmarks/bench_kernels.py [--p 3] [--q 3]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from realfree import _kernels_py
from realfree.diagrams import DiagramClass, class_array

try:
    from realfree import _kernels
except ImportError:  # pragma: no cover
    _kernels = None


def cumulant_inputs(p: int, q: int):
    """Arrays for k₂(Tr W^p, Tr W^q) with a single identity Wishart colour."""
    n = p + q
    members = class_array(DiagramClass.ALL_PREMAPS, n)
    globs = np.concatenate([np.arange(n), n + np.arange(n)]).astype(np.int32)
    classes = _kernels_py.row_cycle_counts(members).astype(np.int32)
    _, classes = np.unique(classes, return_inverse=True)
    n_classes = int(classes.max()) + 1

    gamma = list(range(1, p)) + [0] + list(range(p + 1, n)) + [p]
    # γ₊ acts on the positive half; γ₋⁻¹ sends -γ(k) to -k on the negative half
    gamma_plus = np.arange(2 * n, dtype=np.int32)
    gamma_minus_inv = np.arange(2 * n, dtype=np.int32)
    for i, g in enumerate(gamma):
        gamma_plus[i] = g
        gamma_minus_inv[n + g] = n + i
    block = np.array(([0] * p + [1] * q) * 2, dtype=np.int32)
    group = np.array([0, 1], dtype=np.int32)
    return ([members.astype(np.int32)], [globs], [classes.astype(np.int32)], [n_classes],
            gamma_plus, gamma_minus_inv, block, group, 2, _kernels_py.MODE_CONNECTED)


def timed(fn, args, repeat: int):
    best = float("inf")
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, out


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--p", type=int, default=3)
    parser.add_argument("--q", type=int, default=3)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    inputs = cumulant_inputs(args.p, args.q)
    print(f"k2(Tr W^{args.p}, Tr W^{args.q}): {len(inputs[0][0])} premaps")
    t_py, h_py = timed(_kernels_py.accumulate, inputs, 1)
    print(f"python    {t_py:9.4f} s")
    if _kernels is None:
        print("compiled  unavailable (extension not built)")
        return
    t_c, h_c = timed(_kernels.accumulate, inputs, args.repeat)
    if not np.array_equal(h_py, h_c):
        raise SystemExit("backends disagree")
    print(f"compiled  {t_c:9.4f} s")
    print(f"speed-up  {t_py / t_c:9.1f}x")


if __name__ == "__main__":
    main()
