"""Seeded sampling and evaluation of random multiplicative functions.

Two models are supported:

* Steinhaus: f(p) uniform on the unit circle, extended completely
  multiplicatively, so f(n) = exp(i * sum_p v_p(n) theta_p).
* Rademacher: f(p) = +-1 with equal probability, extended multiplicatively
  over squarefree integers; this package takes f(n) = 0 at non-squarefree n
  so that weighted partial sums stay well-defined.

Per-prime values are derived from (seed, p) by the counter-based scheme in
rng.py: extending the limit never changes values at existing primes, and a
sample is reproduced bit-identically from (kind, limit, seed).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import rng
from .errors import DomainError, RangeError
from .numtheory import FactorTable, factorize

TWO_PI = 2.0 * math.pi


class RmfKind(enum.Enum):
    STEINHAUS = "steinhaus"
    RADEMACHER = "rademacher"


@dataclass
class RmfSample:
    """One realization of (f(p))_{p <= limit}.

    theta holds the angle per prime for Steinhaus samples; signs holds the
    +-1 value per prime for Rademacher samples. Both are indexed parallel to
    primes. dense_* views (length limit+1, value stored at index p) feed the
    table kernels and are built lazily.
    """

    kind: RmfKind
    limit: int
    seed: int
    primes: np.ndarray
    theta: np.ndarray | None = None
    signs: np.ndarray | None = None
    _dense_theta: np.ndarray | None = None
    _dense_signs: np.ndarray | None = None

    @property
    def dense_theta(self) -> np.ndarray:
        if self._dense_theta is None:
            d = np.zeros(self.limit + 1, dtype=np.float64)
            d[self.primes] = self.theta
            self._dense_theta = d
        return self._dense_theta

    @property
    def dense_signs(self) -> np.ndarray:
        if self._dense_signs is None:
            d = np.zeros(self.limit + 1, dtype=np.int8)
            d[self.primes] = self.signs
            self._dense_signs = d
        return self._dense_signs

    def provenance(self) -> str:
        return (
            f"kind={self.kind.value} limit={self.limit} seed={self.seed} "
            f"scheme={rng.SCHEME_VERSION}"
        )


def _primes_up_to(limit: int) -> np.ndarray:
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def sample_rmf(kind: RmfKind, limit: int, seed: int, table: FactorTable | None = None) -> RmfSample:
    """Draw a seeded sample over all primes <= limit.

    Deterministic in (kind, limit, seed); values at each prime come from an
    independent counter stream, so samples at different limits agree on the
    primes they share.
    """
    if limit < 2:
        raise DomainError(f"sample limit must be >= 2, got {limit}")
    primes = (
        table.primes_up_to(limit)
        if table is not None and table.limit >= limit
        else _primes_up_to(limit)
    )
    u = rng.uniform_array(seed, primes.astype(np.uint64), rng.DOMAIN_PRIME)
    if kind is RmfKind.STEINHAUS:
        return RmfSample(kind=kind, limit=limit, seed=seed, primes=primes, theta=TWO_PI * u)
    signs = np.where(u < 0.5, 1, -1).astype(np.int8)
    return RmfSample(kind=kind, limit=limit, seed=seed, primes=primes, signs=signs)


def _spf_chain(table: FactorTable, n: int) -> list[int]:
    chain = []
    spf = table.spf
    while n > 1:
        p = int(spf[n])
        chain.append(p)
        n //= p
    return chain


def eval_f(sample: RmfSample, n: int, table: FactorTable) -> complex:
    """f(n) for a single n.

    The Steinhaus angle is accumulated in the same order as the batch table
    recurrence (innermost factor first), so single-point and batch
    evaluations agree bit for bit.
    """
    n = int(n)
    if n < 1:
        raise RangeError(f"n must be >= 1, got {n}")
    if n > sample.limit:
        raise RangeError(f"n={n} exceeds sample limit {sample.limit}")
    if n == 1:
        return complex(1.0, 0.0)
    chain = _spf_chain(table, n)
    if sample.kind is RmfKind.STEINHAUS:
        dense = sample.dense_theta
        angle = 0.0
        for p in reversed(chain):
            angle = angle + dense[p]
        return complex(math.cos(angle), math.sin(angle))
    if len(set(chain)) != len(chain):
        return complex(0.0, 0.0)
    s = 1
    for p in chain:
        s *= int(sample.dense_signs[p])
    return complex(float(s), 0.0)


def _eval_prime_power(sample: RmfSample, p: int, m: int) -> complex:
    if m == 0:
        return complex(1.0, 0.0)
    if sample.kind is RmfKind.STEINHAUS:
        a = m * float(sample.dense_theta[p])
        return complex(math.cos(a), math.sin(a))
    if m >= 2:
        return complex(0.0, 0.0)
    return complex(float(sample.dense_signs[p]), 0.0)


class RestrictedVariants(NamedTuple):
    """Multiplicative splits of f at the smoothness boundary y.

    f_y keeps only prime powers with p > y, g_y is mu * f supported on
    squarefree y-smooth integers, h_y keeps only p <= y. They satisfy the
    Dirichlet convolution identities f_y = g_y * f and f = h_y * f_y (the
    latter for completely multiplicative f).
    """

    f_y: Callable[[int], complex]
    g_y: Callable[[int], complex]
    h_y: Callable[[int], complex]


def restricted_variants(sample: RmfSample, y: int, table: FactorTable) -> RestrictedVariants:
    if not 2 <= y <= sample.limit:
        raise DomainError(f"need 2 <= y <= limit, got y={y}")

    def _mult(n: int, factor: Callable[[int, int], complex]) -> complex:
        if n < 1 or n > sample.limit:
            raise RangeError(f"n={n} outside [1, {sample.limit}]")
        out = complex(1.0, 0.0)
        for p, e in factorize(table, n).pairs:
            out *= factor(p, e)
            if out == 0:
                return complex(0.0, 0.0)
        return out

    def f_y(n: int) -> complex:
        return _mult(
            n, lambda p, e: _eval_prime_power(sample, p, e) if p > y else complex(0.0)
        )

    def g_y(n: int) -> complex:
        def factor(p: int, e: int) -> complex:
            if p > y or e >= 2:
                return complex(0.0)
            return -_eval_prime_power(sample, p, 1)

        return _mult(n, factor)

    def h_y(n: int) -> complex:
        return _mult(
            n, lambda p, e: _eval_prime_power(sample, p, e) if p <= y else complex(0.0)
        )

    return RestrictedVariants(f_y=f_y, g_y=g_y, h_y=h_y)


def gy_support(sample: RmfSample, y: int, table: FactorTable) -> tuple[np.ndarray, np.ndarray]:
    """Support of g_y (squarefree y-smooth n) with its values.

    At most 2^pi(y) points: products of subsets of the primes <= y, with
    g_y(n) = mu(n) f(n). Products above the sample limit are pruned during
    enumeration, so the kept set (and the cost) is bounded by the number of
    squarefree y-smooth integers <= limit.
    """
    if not 2 <= y <= sample.limit:
        raise DomainError(f"need 2 <= y <= limit, got y={y}")
    primes = [int(p) for p in sample.primes[sample.primes <= y]]
    ns = [1]
    vals = [complex(1.0, 0.0)]
    for p in primes:
        fp = _eval_prime_power(sample, p, 1)
        cur_n = list(ns)
        cur_v = list(vals)
        for n0, v0 in zip(cur_n, cur_v):
            if n0 * p <= sample.limit:
                ns.append(n0 * p)
                vals.append(v0 * (-fp))
    order = np.argsort(ns)
    return np.array(ns, dtype=np.int64)[order], np.array(vals, dtype=np.complex128)[order]
