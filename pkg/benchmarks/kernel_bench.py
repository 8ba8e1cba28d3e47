"""Benchmark the numba hot kernels against their pure-numpy twins.

Usage: python benchmarks/kernel_bench.py [--m 64] [--users 4] [--repeat 20]

The same kernels are selected at import time by SPIMRIS_DISABLE_NUMBA; this
script times both implementations side by side regardless of the flag.
"""

import argparse
import time

import numpy as np

from spimris.kernels import _numpy

try:
    from spimris.kernels import _numba
except ImportError:
    _numba = None


def timeit(fn, args, repeat):
    fn(*args)  # warm up (and JIT-compile the numba path)
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--m", type=int, default=64, help="RIS elements")
    parser.add_argument("--users", type=int, default=4)
    parser.add_argument("--sweeps", type=int, default=3)
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    m = args.m
    a = rng.standard_normal((m, 2 * m)) + 1j * rng.standard_normal((m, 2 * m))
    q = np.ascontiguousarray(a @ a.conj().T / m)
    psi = np.exp(2j * np.pi * rng.uniform(size=m))
    z = rng.standard_normal((m, args.users, args.users)) + 1j * rng.standard_normal(
        (m, args.users, args.users)
    )
    kappa = np.zeros(args.users)

    cases = [
        ("ris_sweep", (psi, q, args.sweeps, 8)),
        ("mu_greedy_sweep", (psi, z, kappa, 1.0, 8, 2)),
    ]
    print(f"M={m}, users={args.users}, sweeps={args.sweeps}, best of {args.repeat}")
    for name, call_args in cases:
        t_np = timeit(getattr(_numpy, name), call_args, args.repeat)
        line = f"{name:16s} numpy {t_np * 1e3:8.3f} ms"
        if _numba is not None:
            t_nb = timeit(getattr(_numba, name), call_args, args.repeat)
            line += f"   numba {t_nb * 1e3:8.3f} ms   speedup {t_np / t_nb:6.1f}x"
            out_np = getattr(_numpy, name)(*call_args)
            out_nb = getattr(_numba, name)(*call_args)
            line += f"   max|diff| {np.max(np.abs(out_np - out_nb)):.1e}"
        print(line)


if __name__ == "__main__":
    main()
