"""Benchmark the numba kernels against the pure-numpy fallbacks.

Run:  python benchmarks/bench_kernels.py [limit]

Imports both implementations directly (ignoring RMFLAB_BACKEND) so one
process can time the two paths side by side. The first numba call includes
JIT compilation; a warmup pass is run before timing.
"""

import math
import sys
import time

import numpy as np

from rmflab import _kernels_numpy as knp

try:
    from rmflab import _kernels_numba as knb
except ImportError:
    knb = None
    print("numba unavailable: timing the numpy fallback only")


def timeit(fn, repeat=3):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def row(name, t_np, t_nb):
    if t_nb is None:
        print(f"{name:<28} numpy {t_np*1e3:9.2f} ms")
    else:
        print(f"{name:<28} numpy {t_np*1e3:9.2f} ms   numba {t_nb*1e3:9.2f} ms   "
              f"speedup {t_np/t_nb:6.1f}x")


def main():
    limit = int(sys.argv[1]) if len(sys.argv) > 1 else 1_000_000
    print(f"kernel benchmark, limit = {limit}")

    if knb is not None:  # warm the JIT cache out of the timed region
        knb.spf_sieve(1000)
        spf_w = knb.spf_sieve(1000)
        knb.omega_from_spf(spf_w)
        dense_w = np.zeros(1001)
        knb.angle_from_spf(spf_w, dense_w, np.zeros(1001))
        knb.block_max_scan(np.zeros(1001), np.zeros(1001),
                           np.array([0], dtype=np.int64),
                           np.array([1000], dtype=np.int64))
        knb.growth_scan(np.zeros(1001), np.zeros(1001), np.zeros(1001),
                        np.zeros(1001), 16)
        knb.kahan_sum2(np.zeros(8), np.zeros(8))
        knb.tau_sieve(100)

    t_np, spf = timeit(lambda: knp.spf_sieve(limit))
    t_nb = timeit(lambda: knb.spf_sieve(limit))[0] if knb else None
    row("spf_sieve", t_np, t_nb)

    omega = knp.omega_from_spf(spf)
    levels = knp.build_levels(spf, omega)
    t_np = timeit(lambda: knp.omega_from_spf(spf))[0]
    t_nb = timeit(lambda: knb.omega_from_spf(spf))[0] if knb else None
    row("omega_from_spf", t_np, t_nb)

    g = np.random.default_rng(0)
    primes = np.nonzero(spf == np.arange(limit + 1, dtype=np.uint32))[0]
    primes = primes[primes >= 2]
    dense = np.zeros(limit + 1)
    dense[primes] = g.uniform(0, 2 * math.pi, len(primes))
    out = np.zeros(limit + 1)
    t_np = timeit(lambda: knp.angle_from_spf(spf, dense, out, levels))[0]
    t_nb = timeit(lambda: knb.angle_from_spf(spf, dense, out))[0] if knb else None
    row("angle_from_spf", t_np, t_nb)

    re = g.normal(size=limit + 1)
    im = g.normal(size=limit + 1)
    t_np = timeit(lambda: knp.kahan_sum2(re, im))[0]
    t_nb = timeit(lambda: knb.kahan_sum2(re, im))[0] if knb else None
    row("compensated sum", t_np, t_nb)

    starts = np.array([0, limit // 3, 2 * limit // 3], dtype=np.int64)
    ends = np.array([limit // 3, 2 * limit // 3, limit], dtype=np.int64)
    t_np = timeit(lambda: knp.block_max_scan(re, im, starts, ends))[0]
    t_nb = timeit(lambda: knb.block_max_scan(re, im, starts, ends))[0] if knb else None
    row("block_max_scan", t_np, t_nb)

    inv = np.abs(g.normal(size=limit + 1))
    t_np = timeit(lambda: knp.growth_scan(re, im, inv, inv, 16))[0]
    t_nb = timeit(lambda: knb.growth_scan(re, im, inv, inv, 16))[0] if knb else None
    row("growth_scan", t_np, t_nb)

    T = min(2000, int(math.isqrt(limit)))
    c = np.zeros(T * T + 1, dtype=np.int16)
    t_np = timeit(lambda: knp.conv_counts_2(T, c), repeat=1)[0]
    t_nb = timeit(lambda: knb.conv_counts_2(T, c), repeat=1)[0] if knb else None
    row(f"conv_counts_2 (T={T})", t_np, t_nb)

    tau_limit = min(limit, 300_000)
    t_np, tau = timeit(lambda: knp.tau_sieve(tau_limit), repeat=1)
    t_nb = timeit(lambda: knb.tau_sieve(tau_limit), repeat=1)[0] if knb else None
    row(f"tau_sieve (n={tau_limit})", t_np, t_nb)

    # end-to-end: one Monte Carlo replica batch through the public engine
    from rmflab.numtheory import shared_factor_table
    from rmflab.partial_sum import ReplicaEngine
    from rmflab.rmf import RmfKind

    table = shared_factor_table(min(limit, 10_000))
    eng = ReplicaEngine(RmfKind.STEINHAUS, table.limit, table)

    def replicas(n=200):
        acc = 0.0
        for s in range(n):
            z = eng.sums(s)[0]
            acc += z.real * z.real + z.imag * z.imag
        return acc

    t_active = timeit(replicas, repeat=1)[0]
    from rmflab.kernels import BACKEND

    print(f"{'200 replica sums (active)':<28} {BACKEND:>5} {t_active*1e3:9.2f} ms")


if __name__ == "__main__":
    main()
