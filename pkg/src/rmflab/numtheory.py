"""Deterministic integer machinery: primes, factorization, arithmetic
functions, smooth-number counts, and divisor sums.

Everything is driven by a smallest-prime-factor table, which makes single
factorizations O(log n) and whole-table transforms (Omega, squarefree flags,
greatest prime factor) a single linear pass. The table is immutable after
construction and safe for concurrent shared reads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import CapacityError, ConfigError, DomainError, RangeError

# Hard cap on the sieve limit. A table of size LIMIT_CAP takes about 800 MB
# for the spf array alone (uint32); raise only on machines that can afford
# the derived tables as well.
LIMIT_CAP = 2 * 10**8

# Memory guard for enumerate_smooth.
ENUMERATE_CAP = 50_000_000

EULER_GAMMA = 0.5772156649015329  # Euler-Mascheroni, 16 significant digits


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as (prime, exponent) pairs, primes increasing."""

    pairs: tuple[tuple[int, int], ...]

    def n(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= p**e
        return out


@dataclass
class FactorTable:
    """Smallest-prime-factor sieve up to limit, with cached derived tables.

    spf[n] is the smallest prime factor of n for 2 <= n <= limit; spf[p] = p
    exactly when p is prime. Derived tables are built lazily and cached; all
    public views are read-only.
    """

    limit: int
    spf: np.ndarray
    derived: dict = field(default_factory=dict, repr=False)
    _omega: np.ndarray | None = field(default=None, repr=False)
    _squarefree: np.ndarray | None = field(default=None, repr=False)
    _gpf: np.ndarray | None = field(default=None, repr=False)
    _primes: np.ndarray | None = field(default=None, repr=False)
    _levels: list[np.ndarray] | None = field(default=None, repr=False)

    @property
    def primes(self) -> np.ndarray:
        if self._primes is None:
            idx = np.arange(len(self.spf), dtype=np.uint32)
            self._primes = (np.nonzero(self.spf == idx)[0][1:]).astype(np.int64)
            # [1:] drops n=0 (spf[0]=0 matches idx 0); n=1 has spf 0 != 1
        return self._primes

    @property
    def omega(self) -> np.ndarray:
        if self._omega is None:
            self._omega = kernels.omega_from_spf(self.spf)
        return self._omega

    @property
    def squarefree(self) -> np.ndarray:
        if self._squarefree is None:
            self._squarefree = kernels.squarefree_from_spf(self.spf)
        return self._squarefree

    @property
    def gpf(self) -> np.ndarray:
        if self._gpf is None:
            self._gpf = kernels.gpf_from_spf(self.spf)
        return self._gpf

    @property
    def levels(self) -> list[np.ndarray]:
        if self._levels is None:
            self._levels = kernels.build_levels(self.spf, self.omega)
        return self._levels

    def primes_up_to(self, x: int) -> np.ndarray:
        if x > self.limit:
            raise RangeError(f"primes_up_to({x}) exceeds table limit {self.limit}")
        pr = self.primes
        return pr[: int(np.searchsorted(pr, x, side="right"))]


def build_factor_table(limit: int) -> FactorTable:
    """Sieve smallest prime factors for 2..limit.

    Parameters
    ----------
    limit : int
        Upper bound (inclusive), 2 <= limit <= LIMIT_CAP. The spf array
        costs 4 bytes per integer; derived tables add up to ~10 more.

    Returns
    -------
    FactorTable
        Immutable table; safe for concurrent shared reads.
    """
    if not isinstance(limit, (int, np.integer)) or limit < 2:
        raise ConfigError(f"factor table limit must be an integer >= 2, got {limit!r}")
    if limit > LIMIT_CAP:
        raise ConfigError(f"factor table limit {limit} exceeds cap {LIMIT_CAP}")
    return FactorTable(limit=int(limit), spf=kernels.spf_sieve(int(limit)))


@lru_cache(maxsize=4)
def shared_factor_table(limit: int) -> FactorTable:
    """Process-wide cached tables for the common experiment limits."""
    return build_factor_table(limit)


def _check_n(table: FactorTable, n: int) -> int:
    n = int(n)
    if n < 1 or n > table.limit:
        raise RangeError(f"n={n} outside [1, {table.limit}]")
    return n


def factorize(table: FactorTable, n: int) -> Factorization:
    """Factor n via repeated division by the smallest prime factor."""
    n = _check_n(table, n)
    pairs: list[tuple[int, int]] = []
    spf = table.spf
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        pairs.append((p, e))
    return Factorization(pairs=tuple(pairs))


def big_omega(table: FactorTable, n: int) -> int:
    """Number of prime factors counted with multiplicity."""
    n = _check_n(table, n)
    spf = table.spf
    count = 0
    while n > 1:
        n //= int(spf[n])
        count += 1
    return count


def mobius(table: FactorTable, n: int) -> int:
    n = _check_n(table, n)
    spf = table.spf
    k = 0
    while n > 1:
        p = int(spf[n])
        n //= p
        if n % p == 0:
            return 0
        k += 1
    return -1 if k % 2 else 1


def tau_ell(table: FactorTable, n: int, ell: int) -> int:
    """Ordered ell-tuple divisor count: multiplicative with
    tau_ell(p^m) = C(ell + m - 1, m).

    Computed in exact (arbitrary precision) integer arithmetic, so there is
    no silent wraparound by construction.
    """
    if ell < 1:
        raise DomainError(f"ell must be >= 1, got {ell}")
    out = 1
    for _, e in factorize(table, n).pairs:
        out *= math.comb(ell + e - 1, e)
    return out


def _smooth_dfs(primes: list[int], bound: int, visit) -> None:
    # Depth-first over exponent tuples in increasing prime order; each
    # product is reached exactly once.
    stack = [(1, 0)]
    while stack:
        value, i = stack.pop()
        visit(value)
        for j in range(i, len(primes)):
            nxt = value * primes[j]
            if nxt > bound:
                break
            stack.append((nxt, j))


def _smooth_primes(x: float, y: int) -> list[int]:
    if math.isinf(x) or x >= y:
        top = int(y)
    else:
        top = int(math.floor(x))
    if top < 2:
        return []
    sieve = np.ones(top + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(top) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return [int(p) for p in np.nonzero(sieve)[0]]


def psi_count(x: float, y: int) -> int:
    """Number of y-smooth integers in [1, x] (n = 1 included).

    Counts by depth-first iteration over prime-exponent tuples in increasing
    prime order, so each smooth integer is visited exactly once; runtime is
    proportional to the count itself, which stays tiny for small y even at
    very large x.
    """
    if y < 2:
        raise DomainError(f"smoothness bound y must be >= 2, got {y}")
    if x < 1:
        return 0
    bound = int(math.floor(x))
    count = 0

    def visit(_v):
        nonlocal count
        count += 1

    _smooth_dfs(_smooth_primes(x, y), bound, visit)
    return count


def enumerate_smooth(x: float, y: int) -> list[int]:
    """All y-smooth integers <= x, sorted ascending."""
    total = psi_count(x, y)
    if total > ENUMERATE_CAP:
        raise CapacityError(
            f"enumerate_smooth would produce {total} values (cap {ENUMERATE_CAP})"
        )
    out: list[int] = []
    _smooth_dfs(_smooth_primes(x, y), int(math.floor(x)), out.append)
    out.sort()
    return out


def psi_ennola(x: float, y: int) -> float:
    """Main term (1/pi(y)!) * prod_{p <= y} (1/log p) * (log x)^pi(y).

    Valid as an approximation to psi_count in the very-smooth regime
    y <= sqrt(log x); no error factor is included.
    """
    if y < 2:
        raise DomainError(f"smoothness bound y must be >= 2, got {y}")
    primes = _smooth_primes(float("inf"), y)
    k = len(primes)
    log_term = k * math.log(math.log(x))
    log_coeff = -math.lgamma(k + 1) - math.fsum(
        math.log(math.log(p)) for p in primes
    )
    return math.exp(log_coeff + log_term)


def divisor_sum_tau_over_n(table: FactorTable, u: int, v: int) -> float:
    """Exact sum_{u < n <= v} tau(n)/n with compensated summation."""
    u, v = int(u), int(v)
    if not 1 <= u < v:
        raise DomainError(f"need 1 <= u < v, got u={u}, v={v}")
    if v > table.limit:
        raise RangeError(f"v={v} exceeds table limit {table.limit}")
    tau = _tau_table(table)
    return kernels.tau_over_n_sum(tau, u, v)


def divisor_envelope(u: int, v: int, C: float) -> float:
    """C * (log v)^{4/3} * (log(v/u))^{2/3}, the uniform divisor-sum bound."""
    if not 1 <= u < v:
        raise DomainError(f"need 1 <= u < v, got u={u}, v={v}")
    return C * math.log(v) ** (4.0 / 3.0) * math.log(v / u) ** (2.0 / 3.0)


_tau_cache: dict[int, np.ndarray] = {}


def _tau_table(table: FactorTable) -> np.ndarray:
    tau = _tau_cache.get(table.limit)
    if tau is None:
        tau = kernels.tau_sieve(table.limit)
        _tau_cache[table.limit] = tau
    return tau


def dirichlet_D(x: int) -> int:
    """Exact sum_{n <= x} tau(n) by the hyperbola method, O(sqrt(x))."""
    x = int(x)
    if x < 1:
        raise DomainError(f"x must be >= 1, got {x}")
    r = math.isqrt(x)
    s = 0
    for d in range(1, r + 1):
        s += x // d
    return 2 * s - r * r


def dirichlet_D_mainterm(x: float) -> float:
    """x log x + (2 gamma - 1) x."""
    if x <= 0:
        raise DomainError(f"x must be positive, got {x}")
    return x * math.log(x) + (2.0 * EULER_GAMMA - 1.0) * x


def prime_power_sum(x: int, sigma: float, table: FactorTable | None = None) -> float:
    """Exact finite sum_{p <= x} p^{-sigma} over sieved primes."""
    x = int(x)
    if x < 2:
        raise DomainError(f"x must be >= 2, got {x}")
    if sigma < 0:
        raise DomainError(f"sigma must be >= 0, got {sigma}")
    if table is not None and x <= table.limit:
        primes = table.primes_up_to(x)
    else:
        primes = np.array(_smooth_primes(float(x), x), dtype=np.int64)
    return math.fsum(float(p) ** (-sigma) for p in primes)
