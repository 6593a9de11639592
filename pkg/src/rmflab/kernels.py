"""Backend facade for the hot kernels.

The default backend is numba (JIT-compiled loops). Setting the environment
variable RMFLAB_BACKEND=numpy selects the pure-numpy fallback; the fallback
is also used automatically when numba cannot be imported. The active backend
name is exposed as BACKEND. benchmarks/bench_kernels.py compares the two.
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_numpy as _np_impl

_requested = os.environ.get("RMFLAB_BACKEND", "numba").strip().lower()

_nb_impl = None
if _requested != "numpy":
    try:
        from . import _kernels_numba as _nb_impl  # noqa: F401
    except ImportError:
        _nb_impl = None

BACKEND = "numba" if _nb_impl is not None else "numpy"


def spf_sieve(limit: int) -> np.ndarray:
    if _nb_impl is not None:
        return _nb_impl.spf_sieve(limit)
    return _np_impl.spf_sieve(limit)


def omega_from_spf(spf):
    if _nb_impl is not None:
        return _nb_impl.omega_from_spf(spf)
    return _np_impl.omega_from_spf(spf)


def squarefree_from_spf(spf):
    if _nb_impl is not None:
        return _nb_impl.squarefree_from_spf(spf)
    return _np_impl.squarefree_from_spf(spf)


def gpf_from_spf(spf):
    if _nb_impl is not None:
        return _nb_impl.gpf_from_spf(spf)
    return _np_impl.gpf_from_spf(spf)


def angle_from_spf(spf, theta_dense, out, levels):
    """Cumulative angles of a completely multiplicative unit function.

    levels is only consulted by the numpy backend; both backends add the
    per-prime angles in the same order, so results are bit-identical.
    """
    if _nb_impl is not None:
        _nb_impl.angle_from_spf(spf, theta_dense, out)
    else:
        _np_impl.angle_from_spf(spf, theta_dense, out, levels)


def sign_value_from_spf(spf, sign_dense, out, levels):
    if _nb_impl is not None:
        _nb_impl.sign_value_from_spf(spf, sign_dense, out)
    else:
        _np_impl.sign_value_from_spf(spf, sign_dense, out, levels)


def kahan_sum(x) -> float:
    if _nb_impl is not None:
        return _nb_impl.kahan_sum(np.ascontiguousarray(x, dtype=np.float64))
    return _np_impl.kahan_sum(x)


def kahan_sum2(re, im):
    if _nb_impl is not None:
        return _nb_impl.kahan_sum2(
            np.ascontiguousarray(re, dtype=np.float64),
            np.ascontiguousarray(im, dtype=np.float64),
        )
    return _np_impl.kahan_sum2(re, im)


def block_max_scan(re, im, starts, ends):
    starts = np.asarray(starts, dtype=np.int64)
    ends = np.asarray(ends, dtype=np.int64)
    if _nb_impl is not None:
        return _nb_impl.block_max_scan(re, im, starts, ends)
    return _np_impl.block_max_scan(re, im, starts, ends)


def checkpoint_sums(re, im, cps):
    cps = np.asarray(cps, dtype=np.int64)
    if _nb_impl is not None:
        return _nb_impl.checkpoint_sums(re, im, cps)
    return _np_impl.checkpoint_sums(re, im, cps)


def growth_scan(re, im, inv_norm1, inv_norm2, t_start: int):
    if _nb_impl is not None:
        return _nb_impl.growth_scan(re, im, inv_norm1, inv_norm2, t_start)
    return _np_impl.growth_scan(re, im, inv_norm1, inv_norm2, t_start)


def conv_counts_2(T: int, out):
    if _nb_impl is not None:
        _nb_impl.conv_counts_2(T, out)
    else:
        _np_impl.conv_counts_2(T, out)


def conv_counts_next(c_prev, T: int, out):
    if _nb_impl is not None:
        _nb_impl.conv_counts_next(c_prev, T, out)
    else:
        _np_impl.conv_counts_next(c_prev, T, out)


def square_over_n_sum(counts) -> float:
    if _nb_impl is not None:
        return _nb_impl.square_over_n_sum(counts)
    return _np_impl.square_over_n_sum(counts)


def tau_sieve(limit: int):
    if _nb_impl is not None:
        return _nb_impl.tau_sieve(limit)
    return _np_impl.tau_sieve(limit)


def tau_over_n_sum(tau, u: int, v: int) -> float:
    if _nb_impl is not None:
        return _nb_impl.tau_over_n_sum(tau, u, v)
    return _np_impl.tau_over_n_sum(tau, u, v)


def build_levels(spf, omega):
    """Omega-level schedule for the numpy gather kernels (cached by callers)."""
    return _np_impl.build_levels(spf, omega)
