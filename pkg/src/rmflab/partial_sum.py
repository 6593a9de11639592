"""Streaming evaluation of weighted partial sums M_f(T), trajectories with
block maxima, and the small-prime convolution identity check.

The default object is M_f(T) = sum_{n <= T} f(n) / sqrt(n). WeightSpec
modifies the summand: an extra rho^Omega(n) factor, a smoothness restriction,
a squarefree restriction, and an extra n^{-delta} damping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels, rng
from .errors import ConfigError, DomainError, RangeError
from .numtheory import FactorTable
from .rmf import RmfKind, RmfSample, gy_support

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class WeightSpec:
    """Summand modifiers for the weighted partial sum.

    rho multiplies each term by rho^Omega(n) (rho = 1 disables; rho = 0
    keeps only the n = 1 term since 0^0 := 1). smooth_cutoff restricts to
    Y-smooth n, squarefree_only to squarefree n, and sigma_shift adds
    n^{-delta} damping on top of the 1/sqrt(n).
    """

    rho: float = 1.0
    smooth_cutoff: int | None = None
    squarefree_only: bool = False
    sigma_shift: float = 0.0

    def validate(self) -> None:
        if not 0.0 <= self.rho <= 1.0:
            raise DomainError(f"rho must lie in [0, 1], got {self.rho}")
        if self.smooth_cutoff is not None and self.smooth_cutoff < 2:
            raise DomainError(f"smooth cutoff must be >= 2, got {self.smooth_cutoff}")
        if self.sigma_shift < 0.0:
            raise DomainError(f"sigma shift must be >= 0, got {self.sigma_shift}")


DEFAULT_SPEC = WeightSpec()


@dataclass
class Trajectory:
    """Checkpointed values of M_f along one realization."""

    checkpoints: np.ndarray
    values: np.ndarray
    block_maxima: np.ndarray | None


def _weights(table: FactorTable, T: int, spec: WeightSpec) -> np.ndarray:
    """Weight vector w[n] for n = 0..T (w[0] = 0); cached on the table."""
    key = ("weights", T, spec)
    w = table.derived.get(key)
    if w is not None:
        return w
    n = np.arange(T + 1, dtype=np.float64)
    with np.errstate(divide="ignore"):
        w = n ** -(0.5 + spec.sigma_shift)
    w[0] = 0.0
    if spec.rho != 1.0:
        w = w * np.power(spec.rho, table.omega[: T + 1].astype(np.float64))
    if spec.smooth_cutoff is not None:
        mask = table.gpf[: T + 1] <= spec.smooth_cutoff
        mask[1] = True
        w = np.where(mask, w, 0.0)
    if spec.squarefree_only:
        w = np.where(table.squarefree[: T + 1], w, 0.0)
    w.setflags(write=False)
    table.derived[key] = w
    return w


def _levels_for(table: FactorTable, T: int):
    key = ("levels", T)
    lv = table.derived.get(key)
    if lv is None:
        lv = [lvl[lvl <= T] for lvl in table.levels]
        table.derived[key] = lv
    return lv


class ReplicaEngine:
    """Evaluates term arrays and sums of M_f(T) for many seeded replicas.

    One engine instance owns scratch buffers and must be used from a single
    thread; clone() makes an independent instance sharing the immutable
    tables. weights is a list of weight vectors; sums() returns one complex
    sum per vector from a single realization (common random numbers).
    """

    def __init__(
        self,
        kind: RmfKind,
        T: int,
        table: FactorTable,
        weights: list[np.ndarray] | None = None,
        spec: WeightSpec = DEFAULT_SPEC,
    ):
        if T > table.limit:
            raise RangeError(f"T={T} exceeds table limit {table.limit}")
        self.kind = kind
        self.T = int(T)
        self.table = table
        self.spf = np.ascontiguousarray(table.spf[: T + 1])
        self.weights = weights if weights is not None else [_weights(table, T, spec)]
        self.primes = table.primes_up_to(T)
        self._primes_u64 = self.primes.astype(np.uint64)
        self._levels = None
        if kernels.BACKEND == "numpy":
            self._levels = _levels_for(table, T)
        self._dense_f = np.zeros(T + 1, dtype=np.float64)
        self._dense_s = np.zeros(T + 1, dtype=np.int8)
        self._angle = np.zeros(T + 1, dtype=np.float64)
        self._vals = np.zeros(T + 1, dtype=np.int8)

    def clone(self) -> "ReplicaEngine":
        eng = object.__new__(ReplicaEngine)
        eng.kind = self.kind
        eng.T = self.T
        eng.table = self.table
        eng.spf = self.spf
        eng.weights = self.weights
        eng.primes = self.primes
        eng._primes_u64 = self._primes_u64
        eng._levels = self._levels
        eng._dense_f = np.zeros(self.T + 1, dtype=np.float64)
        eng._dense_s = np.zeros(self.T + 1, dtype=np.int8)
        eng._angle = np.zeros(self.T + 1, dtype=np.float64)
        eng._vals = np.zeros(self.T + 1, dtype=np.int8)
        return eng

    def _realize(self, seed: int) -> tuple[np.ndarray, np.ndarray | None]:
        """(cos, sin) term factors of f(n) for n = 0..T under this seed."""
        u = rng.uniform_array(seed, self._primes_u64, rng.DOMAIN_PRIME)
        if self.kind is RmfKind.STEINHAUS:
            self._dense_f[self.primes] = TWO_PI * u
            kernels.angle_from_spf(self.spf, self._dense_f, self._angle, self._levels)
            return np.cos(self._angle), np.sin(self._angle)
        self._dense_s[self.primes] = np.where(u < 0.5, 1, -1).astype(np.int8)
        kernels.sign_value_from_spf(self.spf, self._dense_s, self._vals, self._levels)
        return self._vals.astype(np.float64), None

    def sums(self, seed: int) -> list[complex]:
        cos_v, sin_v = self._realize(seed)
        out = []
        for w in self.weights:
            re = w * cos_v
            if sin_v is None:
                sr = kernels.kahan_sum(re)
                out.append(complex(sr, 0.0))
            else:
                im = w * sin_v
                sr, si = kernels.kahan_sum2(re, im)
                out.append(complex(sr, si))
        return out

    def term_arrays(self, seed: int, which: int = 0) -> tuple[np.ndarray, np.ndarray]:
        """Fresh (re, im) term arrays for scan kernels."""
        cos_v, sin_v = self._realize(seed)
        w = self.weights[which]
        re = w * cos_v
        im = w * sin_v if sin_v is not None else np.zeros_like(re)
        return re, im

    def abs_m(self, seed: int) -> float:
        z = self.sums(seed)[0]
        return abs(z)


def _sample_dense(sample: RmfSample) -> tuple[np.ndarray, bool]:
    if sample.kind is RmfKind.STEINHAUS:
        return sample.dense_theta, True
    return sample.dense_signs, False


def partial_sum(
    sample: RmfSample, T: int, spec: WeightSpec = DEFAULT_SPEC, table: FactorTable | None = None
) -> complex:
    """M_f(T) under the given weights, from a pre-drawn sample.

    Compensated summation throughout; the n = 1 term is 1 for every spec.
    """
    spec.validate()
    T = int(T)
    if T < 1:
        raise RangeError(f"T must be >= 1, got {T}")
    if T > sample.limit:
        raise RangeError(f"T={T} exceeds sample limit {sample.limit}")
    if table is None or table.limit < T:
        raise RangeError("factor table must cover T")
    if T == 1:
        return complex(1.0, 0.0)
    w = _weights(table, T, spec)
    spf_T = np.ascontiguousarray(table.spf[: T + 1])
    levels = _levels_for(table, T) if kernels.BACKEND == "numpy" else None
    dense, is_steinhaus = _sample_dense(sample)
    if is_steinhaus:
        angle = np.zeros(T + 1, dtype=np.float64)
        kernels.angle_from_spf(spf_T, dense, angle, levels)
        re = w * np.cos(angle)
        im = w * np.sin(angle)
        sr, si = kernels.kahan_sum2(re, im)
        return complex(sr, si)
    vals = np.zeros(T + 1, dtype=np.int8)
    kernels.sign_value_from_spf(spf_T, dense, vals, levels)
    re = w * vals.astype(np.float64)
    return complex(kernels.kahan_sum(re), 0.0)


def _term_arrays_for_sample(
    sample: RmfSample, T: int, spec: WeightSpec, table: FactorTable
) -> tuple[np.ndarray, np.ndarray]:
    w = _weights(table, T, spec)
    spf_T = np.ascontiguousarray(table.spf[: T + 1])
    levels = _levels_for(table, T) if kernels.BACKEND == "numpy" else None
    dense, is_steinhaus = _sample_dense(sample)
    if is_steinhaus:
        angle = np.zeros(T + 1, dtype=np.float64)
        kernels.angle_from_spf(spf_T, dense, angle, levels)
        return w * np.cos(angle), w * np.sin(angle)
    vals = np.zeros(T + 1, dtype=np.int8)
    kernels.sign_value_from_spf(spf_T, dense, vals, levels)
    return w * vals.astype(np.float64), np.zeros(T + 1, dtype=np.float64)


def trajectory(
    sample: RmfSample,
    checkpoints,
    spec: WeightSpec = DEFAULT_SPEC,
    table: FactorTable | None = None,
    with_block_maxima: bool = False,
) -> Trajectory:
    """Single pass over n = 1..max(checkpoints) recording M_f at each
    checkpoint and, optionally, the running max of |M_f(t) - M_f(T_{j-1})|
    inside each consecutive checkpoint block."""
    spec.validate()
    cps = np.asarray(checkpoints, dtype=np.int64)
    if len(cps) == 0:
        raise ConfigError("need at least one checkpoint")
    if np.any(np.diff(cps) <= 0):
        raise ConfigError("checkpoints must be strictly increasing")
    if cps[0] < 1:
        raise ConfigError("checkpoints must be >= 1")
    T_max = int(cps[-1])
    if sample.limit < T_max:
        raise RangeError(f"checkpoint {T_max} exceeds sample limit {sample.limit}")
    if table is None or table.limit < T_max:
        raise RangeError("factor table must cover max(checkpoints)")
    re, im = _term_arrays_for_sample(sample, T_max, spec, table)
    vr, vi = kernels.checkpoint_sums(re, im, cps)
    values = vr + 1j * vi
    block_maxima = None
    if with_block_maxima and len(cps) > 1:
        block_maxima = kernels.block_max_scan(re, im, cps[:-1], cps[1:])
    return Trajectory(checkpoints=cps, values=values, block_maxima=block_maxima)


def convolution_identity_residual(
    sample: RmfSample, y: int, T: int, table: FactorTable
) -> float:
    """|LHS - RHS| for the small-prime factorization of the partial sum:
    the y-rough sum M_{f_y}(T) against sum_{n <= T} g_y(n)/sqrt(n) *
    M_f(floor(T/n)) over the (squarefree y-smooth) support of g_y.

    Exact as an identity for completely multiplicative (Steinhaus) samples;
    rounding is the only source of residual.
    """
    y, T = int(y), int(T)
    if not 2 <= y <= T:
        raise DomainError(f"need 2 <= y <= T, got y={y}, T={T}")
    if T > sample.limit:
        raise RangeError(f"T={T} exceeds sample limit {sample.limit}")
    if table.limit < T:
        raise RangeError("factor table must cover T")

    re, im = _term_arrays_for_sample(sample, T, DEFAULT_SPEC, table)

    # LHS: keep n = 1 and n with smallest prime factor > y.
    rough = np.zeros(T + 1, dtype=bool)
    rough[1] = True
    spf_T = table.spf[: T + 1]
    rough[2:] = spf_T[2:] > y
    lr, li = kernels.kahan_sum2(np.where(rough, re, 0.0), np.where(rough, im, 0.0))
    lhs = complex(lr, li)

    # RHS: prefix sums of the unrestricted M at floor(T/n) over the g_y support.
    ns, gvals = gy_support(sample, y, table)
    keep = ns <= T
    ns, gvals = ns[keep], gvals[keep]
    qs = np.unique(T // ns)
    vr, vi = kernels.checkpoint_sums(re, im, qs)
    m_at = {int(q): complex(vr[i], vi[i]) for i, q in enumerate(qs)}
    terms = [
        gvals[i] / math.sqrt(float(ns[i])) * m_at[int(T // ns[i])]
        for i in range(len(ns))
    ]
    rhs = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    return abs(lhs - rhs)
