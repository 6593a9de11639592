"""Pure-numpy fallback implementations of the hot kernels.

Integer kernels (sieves, counts) produce arrays identical to the numba path.
The multiplicative-table recurrences are evaluated level by level in Omega(n)
so the floating additions happen in the same order as the numba recurrence,
making the two backends bit-compatible. Reductions use math.fsum, which is
exactly rounded and agrees with the compensated numba sums to below package
tolerance.
"""

from __future__ import annotations

import math

import numpy as np

_FSUM_CHUNK = 1 << 22


def spf_sieve(limit):
    spf = np.zeros(limit + 1, dtype=np.uint32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            sl = spf[p * p :: p]
            sl[sl == 0] = p
    rest = np.nonzero(spf[2:] == 0)[0] + 2
    spf[rest] = rest
    return spf


def _primes_of(spf):
    idx = np.arange(len(spf), dtype=np.uint32)
    pr = np.nonzero(spf == idx)[0]
    return pr[pr >= 2]


def omega_from_spf(spf):
    n_max = len(spf) - 1
    om = np.zeros(n_max + 1, dtype=np.uint8)
    for p in _primes_of(spf):
        pk = int(p)
        while pk <= n_max:
            om[pk::pk] += 1
            pk *= int(p)
    return om


def squarefree_from_spf(spf):
    n_max = len(spf) - 1
    sf = np.ones(n_max + 1, dtype=np.bool_)
    for p in _primes_of(spf):
        p2 = int(p) * int(p)
        if p2 > n_max:
            break
        sf[p2::p2] = False
    return sf


def gpf_from_spf(spf):
    n_max = len(spf) - 1
    g = np.zeros(n_max + 1, dtype=np.uint32)
    g[1] = 1
    for p in _primes_of(spf):  # ascending, so larger primes overwrite
        g[int(p) :: int(p)] = p
    return g


def build_levels(spf, omega):
    """Indices n >= 2 grouped by Omega(n), ascending; drives the gathers."""
    om = omega[2:]
    out = []
    for k in range(1, int(om.max(initial=0)) + 1):
        out.append(np.nonzero(om == k)[0].astype(np.int64) + 2)
    return out


def angle_from_spf(spf, theta_dense, out, levels):
    out[0] = 0.0
    out[1] = 0.0
    for idx in levels:
        p = spf[idx].astype(np.int64)
        out[idx] = out[idx // p] + theta_dense[p]


def sign_value_from_spf(spf, sign_dense, out, levels):
    out[0] = 0
    out[1] = 1
    for idx in levels:
        p = spf[idx].astype(np.int64)
        m = idx // p
        out[idx] = np.where(m % p != 0, out[m] * sign_dense[p], 0).astype(np.int8)


def kahan_sum(x):
    return math.fsum(x)


def kahan_sum2(re, im):
    return math.fsum(re), math.fsum(im)


def block_max_scan(re, im, starts, ends):
    nb = len(starts)
    out = np.empty(nb, dtype=np.float64)
    for b in range(nb):
        lo = starts[b] + 1
        hi = ends[b] + 1
        if lo >= hi:
            out[b] = 0.0
            continue
        cr = np.cumsum(re[lo:hi])
        ci = np.cumsum(im[lo:hi])
        out[b] = float(np.max(np.sqrt(cr * cr + ci * ci)))
    return out


def checkpoint_sums(re, im, cps):
    k = len(cps)
    vr = np.empty(k, dtype=np.float64)
    vi = np.empty(k, dtype=np.float64)
    prev = 0
    sr_parts: list[float] = []
    si_parts: list[float] = []
    for j in range(k):
        n = int(cps[j])
        sr_parts.append(math.fsum(re[prev + 1 : n + 1]))
        si_parts.append(math.fsum(im[prev + 1 : n + 1]))
        vr[j] = math.fsum(sr_parts)
        vi[j] = math.fsum(si_parts)
        prev = n
    return vr, vi


def growth_scan(re, im, inv_norm1, inv_norm2, t_start):
    cr = np.cumsum(re[1:])
    ci = np.cumsum(im[1:])
    a = np.sqrt(cr * cr + ci * ci)  # a[t-1] = |M_t|
    lo = t_start - 1
    v1 = a[lo:] * inv_norm1[t_start:]
    v2 = a[lo:] * inv_norm2[t_start:]
    i1 = int(np.argmax(v1))
    i2 = int(np.argmax(v2))
    return float(v1[i1]), t_start + i1, float(v2[i2]), t_start + i2


def conv_counts_2(T, out):
    for a in range(1, T + 1):
        out[a : a * T + 1 : a] += 1


def conv_counts_next(c_prev, T, out):
    top = len(c_prev) - 1
    seg = c_prev[1:]
    for a in range(1, T + 1):
        out[a : a * top + 1 : a] += seg


def square_over_n_sum(counts):
    n_max = len(counts) - 1
    parts = []
    for lo in range(1, n_max + 1, _FSUM_CHUNK):
        hi = min(lo + _FSUM_CHUNK - 1, n_max)
        c = counts[lo : hi + 1].astype(np.float64)
        n = np.arange(lo, hi + 1, dtype=np.float64)
        parts.append(math.fsum(c * c / n))
    return math.fsum(parts)


def tau_sieve(limit):
    tau = np.zeros(limit + 1, dtype=np.int16)
    for d in range(1, limit + 1):
        tau[d::d] += 1
    return tau


def tau_over_n_sum(tau, u, v):
    n = np.arange(u + 1, v + 1, dtype=np.float64)
    return math.fsum(tau[u + 1 : v + 1].astype(np.float64) / n)
