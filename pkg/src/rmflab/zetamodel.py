"""Euler products, Parseval's identity for Dirichlet series, and the
window-averaged prime statistic with its exact variance and CLT check.

The prime statistic arises from averaging the log Euler product over a
1/log T window at the critical line: it collapses to
2 sum_p p^{-1/2 - 2 llT/lT} (lT/lp) sin(lp/(2 lT)) cos(theta_p),
a sum of independent bounded terms that is asymptotically Gaussian with
variance (1/2) log log T + O(log log log T).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, stats

from . import rng
from .errors import DomainError, RangeError
from .numtheory import FactorTable
from .parallel import map_chunks
from .rmf import RmfKind, RmfSample


@dataclass(frozen=True)
class EulerProductSpec:
    prime_cutoff: int
    s: complex
    include_f: bool = True

    def validate(self) -> None:
        if self.prime_cutoff < 2:
            raise DomainError(f"prime cutoff must be >= 2, got {self.prime_cutoff}")
        if self.s.real <= 0:
            raise DomainError(f"need Re(s) > 0, got {self.s}")


def euler_product_eval(sample: RmfSample, spec: EulerProductSpec) -> complex:
    """prod_{p <= P} (1 - f(p) p^{-s})^{-1}, evaluated in log space with the
    principal logarithm per factor; include_f=False substitutes f(p) = 1
    (the literal zeta-like product)."""
    spec.validate()
    if spec.prime_cutoff > sample.limit:
        raise RangeError(
            f"prime cutoff {spec.prime_cutoff} exceeds sample limit {sample.limit}"
        )
    primes = sample.primes[sample.primes <= spec.prime_cutoff].astype(np.float64)
    p_pow = np.exp(-spec.s * np.log(primes))
    if spec.include_f:
        if sample.kind is RmfKind.STEINHAUS:
            f_p = np.exp(1j * sample.theta[: len(primes)])
        else:
            f_p = sample.signs[: len(primes)].astype(np.complex128)
    else:
        f_p = np.ones(len(primes), dtype=np.complex128)
    logs = -np.log(1.0 - f_p * p_pow)
    total = complex(math.fsum(logs.real), math.fsum(logs.imag))
    return complex(np.exp(total))


@dataclass(frozen=True)
class QuadratureSpec:
    epsabs: float = 1e-12
    epsrel: float = 1e-11
    limit: int = 400
    limlst: int = 200


def parseval_check(
    a: dict[int, complex], sigma: float, quadrature: QuadratureSpec | None = None
) -> tuple[float, float, float]:
    """Both sides of Parseval's identity for the finitely supported
    Dirichlet series A(s) = sum a_n n^{-s}, and their relative gap:

      int_1^inf |sum_{n <= x} a_n|^2 dx / x^{1+2 sigma}
        = (1/2 pi) int_R |A(sigma + it)|^2 / |sigma + it|^2 dt.

    The left side is integrated in closed form (the inner sum is piecewise
    constant). The right side is numerical: the squared modulus expands over
    support pairs into Fourier integrals of the Cauchy kernel, each evaluated
    by adaptive (QAWF/QAGI) quadrature whose tail handling is built in. The
    two routes share no code, so the residual is a real cross-check.

    Returns (lhs, rhs, relative residual).
    """
    if sigma <= 0:
        raise DomainError(f"need sigma > 0, got {sigma}")
    if not a:
        raise DomainError("empty coefficient map")
    q = quadrature or QuadratureSpec()
    ns = sorted(int(n) for n in a)
    if ns[0] < 1:
        raise DomainError("support must consist of positive integers")
    coeffs = [complex(a[n]) for n in ns]

    # Left side: sum_j |S_j|^2 int_{n_j}^{n_{j+1}} x^{-1-2s} dx, final piece
    # to infinity.
    two_s = 2.0 * sigma
    s_part = complex(0.0)
    lhs_terms = []
    for j, n in enumerate(ns):
        s_part += coeffs[j]
        hi = ns[j + 1] if j + 1 < len(ns) else None
        a2 = abs(s_part) ** 2
        if hi is None:
            lhs_terms.append(a2 * n ** (-two_s) / two_s)
        else:
            lhs_terms.append(a2 * (n ** (-two_s) - hi ** (-two_s)) / two_s)
    lhs = math.fsum(lhs_terms)

    # Right side: (1/2 pi) sum_{m,n} a_m conj(a_n) (mn)^{-sigma} I(log(n/m))
    # with I(lam) = int_R e^{-i lam t} / (sigma^2 + t^2) dt, even and real.
    def kernel(t: float) -> float:
        return 1.0 / (sigma * sigma + t * t)

    i0, _ = integrate.quad(
        kernel, 0.0, np.inf, epsabs=q.epsabs, epsrel=q.epsrel, limit=q.limit
    )
    rhs_terms = [abs(c) ** 2 * float(n) ** (-two_s) * 2.0 * i0
                 for c, n in zip(coeffs, ns)]
    for i in range(len(ns)):
        for j in range(i + 1, len(ns)):
            lam = math.log(ns[j] / ns[i])
            I_lam, _ = integrate.quad(
                kernel, 0.0, np.inf, weight="cos", wvar=lam,
                epsabs=q.epsabs, limit=q.limit, limlst=q.limlst,
            )
            cross = 2.0 * (coeffs[i] * coeffs[j].conjugate()).real
            rhs_terms.append(
                cross * (ns[i] * ns[j]) ** (-sigma) * 2.0 * I_lam
            )
    rhs = math.fsum(rhs_terms) / (2.0 * math.pi)
    return lhs, rhs, abs(lhs - rhs) / (abs(lhs) + 1e-300)


def parseval_residual(
    a: dict[int, complex], sigma: float, quadrature: QuadratureSpec | None = None
) -> float:
    """Relative residual of Parseval's identity; see parseval_check."""
    return parseval_check(a, sigma, quadrature)[2]


def _sigma_t_coefficients(primes: np.ndarray, T: int) -> np.ndarray:
    lT = math.log(T)
    llT = math.log(lT)
    lp = np.log(primes.astype(np.float64))
    expo = -(0.5 + 2.0 * llT / lT)
    return 2.0 * primes.astype(np.float64) ** expo * (lT / lp) * np.sin(lp / (2.0 * lT))


def _require_sigma_t_domain(T: int) -> None:
    if T < 16:
        raise DomainError(f"T must be >= 16 so log log T > 0, got {T}")


def sigma_T(sample: RmfSample, T: int) -> float:
    """The window-averaged prime statistic for one Steinhaus realization."""
    _require_sigma_t_domain(T)
    if T > sample.limit:
        raise RangeError(f"T={T} exceeds sample limit {sample.limit}")
    if sample.kind is not RmfKind.STEINHAUS:
        raise DomainError("the prime statistic is defined for Steinhaus samples")
    mask = sample.primes <= T
    c = _sigma_t_coefficients(sample.primes[mask], T)
    return math.fsum(c * np.cos(sample.theta[mask]))


def sigma_T_variance_exact(T: int, table: FactorTable) -> float:
    """Exact variance sum_p c_p^2 / 2 over sieved primes (E cos^2 = 1/2)."""
    _require_sigma_t_domain(T)
    primes = table.primes_up_to(T)
    c = _sigma_t_coefficients(primes, T)
    return math.fsum(0.5 * c * c)


@dataclass(frozen=True)
class CltResult:
    T: int
    replicas: int
    seed: int
    ks_statistic: float
    sample_mean: float
    sample_var: float
    predicted_var: float


def sigma_T_clt_experiment(
    T: int,
    replicas: int,
    seed: int,
    table: FactorTable,
    parallel_width: int = 1,
) -> CltResult:
    """Draw replicas of the prime statistic, normalize by the exact standard
    deviation, and report the Kolmogorov-Smirnov distance to N(0, 1)."""
    _require_sigma_t_domain(T)
    if replicas < 2:
        raise DomainError(f"need at least 2 replicas, got {replicas}")
    primes = table.primes_up_to(T)
    c = _sigma_t_coefficients(primes, T)
    pr_u64 = primes.astype(np.uint64)
    seeds = rng.child_seeds(seed, replicas)

    def work(lo: int, hi: int):
        out = np.empty(hi - lo)
        for i in range(lo, hi):
            u = rng.uniform_array(int(seeds[i]), pr_u64, rng.DOMAIN_PRIME)
            out[i - lo] = float(np.dot(c, np.cos(2.0 * math.pi * u)))
        return out

    vals = np.concatenate(map_chunks(work, replicas, parallel_width))
    mean = math.fsum(vals) / replicas
    var = (math.fsum(vals * vals) - replicas * mean * mean) / (replicas - 1)
    pv = sigma_T_variance_exact(T, table)
    ks = float(stats.kstest(vals / math.sqrt(pv), "norm").statistic)
    return CltResult(
        T=int(T), replicas=replicas, seed=seed, ks_statistic=ks,
        sample_mean=mean, sample_var=var, predicted_var=pv,
    )


def sigma_T_samples(
    T: int, replicas: int, seed: int, table: FactorTable, parallel_width: int = 1
) -> np.ndarray:
    """Replica values of the prime statistic (CSV export path)."""
    _require_sigma_t_domain(T)
    primes = table.primes_up_to(T)
    c = _sigma_t_coefficients(primes, T)
    pr_u64 = primes.astype(np.uint64)
    seeds = rng.child_seeds(seed, replicas)

    def work(lo: int, hi: int):
        out = np.empty(hi - lo)
        for i in range(lo, hi):
            u = rng.uniform_array(int(seeds[i]), pr_u64, rng.DOMAIN_PRIME)
            out[i - lo] = float(np.dot(c, np.cos(2.0 * math.pi * u)))
        return out

    return np.concatenate(map_chunks(work, replicas, parallel_width))


def quadrature_identity_residual(T: float, p: int, theta: float) -> float:
    """Numerical check of the window-average identity
    log T * int_{-1/(2 log T)}^{1/(2 log T)} cos(theta - t log p) dt
      = 2 (log T / log p) sin(log p / (2 log T)) cos(theta)."""
    if T < 3:
        raise DomainError(f"T must be >= 3, got {T}")
    if p < 2 or p > T:
        raise DomainError(f"need a prime 2 <= p <= T, got p={p}")
    lT = math.log(T)
    lp = math.log(p)
    half = 1.0 / (2.0 * lT)
    val, _ = integrate.quad(
        lambda t: math.cos(theta - t * lp), -half, half, epsabs=1e-14, epsrel=1e-13
    )
    lhs = lT * val
    rhs = 2.0 * (lT / lp) * math.sin(lp / (2.0 * lT)) * math.cos(theta)
    return abs(lhs - rhs)
