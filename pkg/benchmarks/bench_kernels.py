#!/usr/bin/env python3
"""Benchmark the jit table kernels against the pure-numpy fallback.

Times marginalization and one proportional-rescale pass on dense tables of
increasing size (the two operations that dominate update propagation).
Requires numba; the fallback is always available. Run:

    python benchmarks/bench_kernels.py
"""

from __future__ import annotations

import time

import numpy as np

from legnet import _kernels


def time_call(fn, *args, repeat: int = 200) -> float:
    fn(*args)  # warm (jit compiles here)
    start = time.perf_counter()
    for _ in range(repeat):
        fn(*args)
    return (time.perf_counter() - start) / repeat


def main() -> None:
    if not _kernels.NUMBA_ENABLED:
        print("numba unavailable or disabled (LEGNET_DISABLE_NUMBA); nothing to compare")
        return

    rng = np.random.default_rng(0)
    print(f"{'events':>7} {'op':<11} {'numpy':>12} {'numba':>12} {'speedup':>8}")
    for n in (8, 12, 14, 16):
        cells = rng.random(1 << n)
        cells /= cells.sum()
        positions = np.arange(0, n, 2, dtype=np.int64)
        m = positions.size
        ratio = rng.random(1 << m) + 0.5

        t_np = time_call(_kernels.marginalize_numpy, cells, positions, m)
        t_jit = time_call(_kernels.marginalize_jit, cells, positions, m)
        print(f"{n:>7} {'marginal':<11} {t_np * 1e6:>10.1f}us {t_jit * 1e6:>10.1f}us {t_np / t_jit:>7.1f}x")

        t_np = time_call(_kernels.rescale_numpy, cells, positions, ratio)
        t_jit = time_call(_kernels.rescale_jit, cells, positions, ratio)
        print(f"{n:>7} {'rescale':<11} {t_np * 1e6:>10.1f}us {t_jit * 1e6:>10.1f}us {t_np / t_jit:>7.1f}x")


if __name__ == "__main__":
    main()
