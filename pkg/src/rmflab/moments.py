"""Exact and Monte Carlo moments of |M_f(T)|, theoretical envelope bands,
and the hypercontractivity / 2l-moment inequality checks.

Exact even moments come from the identity E|M_f(T)|^{2k} =
sum_{n <= T^k} d_{k,T}(n)^2 / n with d_{k,T}(n) the number of ordered
k-tuples with product n and every coordinate <= T; the counts are built by
truncated Dirichlet self-convolution of the indicator of [1, T]. A tiny-range
brute-force enumerator serves as the independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import kernels, rng
from .errors import CapacityError, DomainError
from .numtheory import FactorTable, tau_ell
from .parallel import map_chunks
from .partial_sum import DEFAULT_SPEC, ReplicaEngine, WeightSpec, _weights
from .rmf import RmfKind

# Capacity limits for the dense convolution arrays (documented, enforced).
EXACT_K2_MAX_T = 10_000
EXACT_K3_MAX_T = 200
EXACT_K1_MAX_T = 10**9
BRUTE_MAX_T = 12
BRUTE_MAX_K = 3


@dataclass(frozen=True)
class MomentEstimate:
    kind: RmfKind
    T: int
    k: float
    replicas: int
    mean: float
    stderr: float
    seed: int
    method: str = "mc"


@dataclass(frozen=True)
class EnvelopeConstants:
    """Instantiations of the O(.) constants in the envelope bands.

    Defaults follow the package convention A = C = 10, c = 1; acceptance
    tests freeze calibrated values instead of asserting universality.
    """

    A: float = 10.0
    C: float = 10.0
    c: float = 1.0
    c_lower: float = 10.0
    c_upper: float = 10.0


@dataclass(frozen=True)
class EnvelopeBand:
    T: float
    k: float
    log_lower: float
    log_upper: float
    regime: str
    constants: EnvelopeConstants


def mc_moment(
    kind: RmfKind,
    T: int,
    k: float,
    spec: WeightSpec = DEFAULT_SPEC,
    replicas: int = 1000,
    seed: int = 0,
    table: FactorTable | None = None,
    parallel_width: int = 1,
) -> MomentEstimate:
    """Monte Carlo mean of |M_f(T)|^{2k} over independently seeded replicas.

    Deterministic given (kind, T, k, spec, replicas, seed): replica seeds are
    spawned from the master seed and the reduction is a fixed chunked fsum,
    independent of parallel_width.
    """
    if k <= 0:
        raise DomainError(f"moment order k must be positive, got {k}")
    if replicas < 2:
        raise DomainError(f"need at least 2 replicas, got {replicas}")
    if table is None:
        raise DomainError("mc_moment requires a factor table covering T")
    proto = ReplicaEngine(kind, T, table, spec=spec)
    seeds = rng.child_seeds(seed, replicas)
    two_k = float(k)

    def work(lo: int, hi: int):
        eng = proto.clone()
        xs = np.empty(hi - lo, dtype=np.float64)
        for i in range(lo, hi):
            z = eng.sums(int(seeds[i]))[0]
            xs[i - lo] = (z.real * z.real + z.imag * z.imag) ** two_k
        return math.fsum(xs), math.fsum(xs * xs)

    parts = map_chunks(work, replicas, parallel_width)
    s1 = math.fsum(p[0] for p in parts)
    s2 = math.fsum(p[1] for p in parts)
    mean = s1 / replicas
    var = max(0.0, (s2 - replicas * mean * mean) / (replicas - 1))
    stderr = math.sqrt(var / replicas)
    return MomentEstimate(
        kind=kind, T=int(T), k=float(k), replicas=replicas, mean=mean,
        stderr=stderr, seed=seed, method="mc",
    )


def exact_moment_integer_k(T: int, k: int) -> float:
    """Exact E|M_f(T)|^{2k} for integer k via truncated self-convolution.

    Supported ranges (dense coefficient array of length T^k): k = 1 for any
    T <= 1e9, k = 2 for T <= 10^4, k = 3 for T <= 200. Steinhaus model.
    """
    T = int(T)
    if T < 1:
        raise DomainError(f"T must be >= 1, got {T}")
    if k == 1:
        if T > EXACT_K1_MAX_T:
            raise CapacityError(f"k=1 supports T <= {EXACT_K1_MAX_T}, got {T}")
        return _harmonic(T)
    if k == 2:
        if T > EXACT_K2_MAX_T:
            raise CapacityError(f"k=2 supports T <= {EXACT_K2_MAX_T}, got {T}")
        counts = np.zeros(T * T + 1, dtype=np.int16)
        kernels.conv_counts_2(T, counts)
        return kernels.square_over_n_sum(counts)
    if k == 3:
        if T > EXACT_K3_MAX_T:
            raise CapacityError(f"k=3 supports T <= {EXACT_K3_MAX_T}, got {T}")
        c2 = np.zeros(T * T + 1, dtype=np.int16)
        kernels.conv_counts_2(T, c2)
        c3 = np.zeros(T * T * T + 1, dtype=np.int32)
        kernels.conv_counts_next(c2, T, c3)
        return kernels.square_over_n_sum(c3)
    raise CapacityError(f"exact moments support k in {{1, 2, 3}}, got k={k}")


def _harmonic(T: int) -> float:
    parts = []
    chunk = 1 << 22
    for lo in range(1, T + 1, chunk):
        hi = min(lo + chunk - 1, T)
        parts.append(math.fsum(1.0 / np.arange(lo, hi + 1, dtype=np.float64)))
    return math.fsum(parts)


def brute_force_moment(T: int, k: int) -> float:
    """Independent oracle on tiny ranges: enumerate all 2k-tuples from
    [1, T]^{2k}, keep those with n_1...n_k = n_{k+1}...n_{2k}, and add
    1/sqrt(n_1...n_{2k}) for each."""
    T, k = int(T), int(k)
    if T < 1 or k < 1:
        raise DomainError("T and k must be >= 1")
    if T > BRUTE_MAX_T or k > BRUTE_MAX_K:
        raise CapacityError(
            f"brute force supports T <= {BRUTE_MAX_T}, k <= {BRUTE_MAX_K}"
        )
    side = np.arange(1, T + 1, dtype=np.int64)
    prods = side.copy()
    for _ in range(k - 1):
        prods = np.multiply.outer(prods, side).ravel()
    eq = prods[:, None] == prods[None, :]
    w = 1.0 / np.sqrt(np.multiply.outer(prods, prods).astype(np.float64))
    return math.fsum(w[eq])


def moment_envelope(
    T: float,
    k: float,
    constants: EnvelopeConstants | None = None,
    regime: str | None = None,
    log_T: float | None = None,
) -> EnvelopeBand:
    """Log-scale envelope band [log_lower, log_upper] for E|M_f(T)|^{2k}.

    The regime is selected from k against log T / log log T unless forced:
    'large_k' (k >= c log T/log log T, upper bound plus the all-range lower
    bound), 'main_range' (10 <= k), 'small_k_gerspach' (0 < k <= 1), and
    'fixed_k_pseudo' otherwise (the (log T)^{k^2} pseudomoment band).
    log_T substitutes for T when T itself overflows a float.
    """
    cons = constants or EnvelopeConstants()
    if k <= 0:
        raise DomainError(f"k must be positive, got {k}")
    lT = math.log(T) if log_T is None else float(log_T)
    if lT < math.log(16):
        raise DomainError(f"T must be >= 16 for iterated logs, got {T}")
    llT = math.log(lT)
    l3T = math.log(llT)  # positive for T >= 16
    k2 = k * k
    if regime is None:
        if k >= cons.c * lT / llT:
            regime = "large_k"
        elif k >= 10:
            regime = "main_range"
        elif k <= 1:
            regime = "small_k_gerspach"
        else:
            regime = "fixed_k_pseudo"

    if regime == "main_range":
        if k < 10:
            raise DomainError("main_range regime needs k >= 10")
        mid = k2 * (llT - math.log(k) - math.log(math.log(k)))
        lo, hi = mid - cons.A * k2, mid + cons.A * k2
    elif regime == "large_k":
        hi = cons.C * k2 + max(0.0, k2 * (llT - math.log(k)))
        if k >= 10:
            lo = k2 * (llT - math.log(k) - math.log(math.log(k))) - cons.A * k2
        else:
            lo = k2 * llT - math.log(cons.c_lower)
    elif regime == "small_k_gerspach":
        if k > 1:
            raise DomainError("small_k_gerspach regime needs 0 < k <= 1")
        main = (
            cons.C
            * lT**k2
            * min(1.0 / k2, llT)
            * min(1.0 / k2, l3T)
        )
        hi = math.log(main + (2.0 / k) * min(1.0 / k, l3T))
        lo = k2 * llT - math.log(cons.c_lower)
    elif regime == "fixed_k_pseudo":
        lo = k2 * llT - math.log(cons.c_lower)
        hi = k2 * llT + math.log(cons.c_upper)
    else:
        raise DomainError(f"unknown envelope regime {regime!r}")

    lo = min(lo, hi)
    return EnvelopeBand(
        T=float(T), k=float(k), log_lower=lo, log_upper=hi,
        regime=regime, constants=cons,
    )


@dataclass(frozen=True)
class WeisslerResult:
    lhs: float
    lhs_stderr: float
    rhs: float
    rhs_stderr: float
    satisfied_with_margin: bool


def weissler_check(
    T: int,
    p: float,
    q: float,
    rho: float,
    spec: WeightSpec = DEFAULT_SPEC,
    replicas: int = 1000,
    seed: int = 0,
    table: FactorTable | None = None,
    kind: RmfKind = RmfKind.STEINHAUS,
    parallel_width: int = 1,
) -> WeisslerResult:
    """Estimate both sides of the hypercontractive comparison
    E[|F_rho|^q]^{1/q} <= E[|F|^p]^{1/p} on common random numbers.

    Requires 0 < p <= q and 0 <= rho <= sqrt(p/q); outside that range the
    inequality is not claimed and the call is rejected.
    """
    if not 0 < p <= q:
        raise DomainError(f"need 0 < p <= q, got p={p}, q={q}")
    bound = math.sqrt(p / q)
    if not 0 <= rho <= bound + 1e-15:
        raise DomainError(f"need rho <= sqrt(p/q) = {bound:.6g}, got {rho}")
    if table is None:
        raise DomainError("weissler_check requires a factor table covering T")
    spec.validate()
    w_base = _weights(table, T, spec)
    w_rho = _weights(table, T, replace(spec, rho=spec.rho * rho))
    proto = ReplicaEngine(kind, T, table, weights=[w_rho, w_base])
    seeds = rng.child_seeds(seed, replicas)

    def work(lo: int, hi: int):
        eng = proto.clone()
        xs = np.empty(hi - lo)
        ys = np.empty(hi - lo)
        for i in range(lo, hi):
            z_rho, z = eng.sums(int(seeds[i]))
            xs[i - lo] = (z_rho.real**2 + z_rho.imag**2) ** (q / 2.0)
            ys[i - lo] = (z.real**2 + z.imag**2) ** (p / 2.0)
        return math.fsum(xs), math.fsum(xs * xs), math.fsum(ys), math.fsum(ys * ys)

    parts = map_chunks(work, replicas, parallel_width)
    sx = math.fsum(pt[0] for pt in parts)
    sxx = math.fsum(pt[1] for pt in parts)
    sy = math.fsum(pt[2] for pt in parts)
    syy = math.fsum(pt[3] for pt in parts)
    mx, my = sx / replicas, sy / replicas
    se_mx = math.sqrt(max(0.0, (sxx - replicas * mx * mx) / (replicas - 1)) / replicas)
    se_my = math.sqrt(max(0.0, (syy - replicas * my * my) / (replicas - 1)) / replicas)
    lhs = mx ** (1.0 / q)
    rhs = my ** (1.0 / p)
    # delta method for the stderr of mean^{1/q}
    se_lhs = se_mx / q * mx ** (1.0 / q - 1.0) if mx > 0 else 0.0
    se_rhs = se_my / p * my ** (1.0 / p - 1.0) if my > 0 else 0.0
    ok = (lhs + 2 * se_lhs <= rhs - 2 * se_rhs) or (lhs <= rhs)
    return WeisslerResult(
        lhs=lhs, lhs_stderr=se_lhs, rhs=rhs, rhs_stderr=se_rhs,
        satisfied_with_margin=ok,
    )


@dataclass(frozen=True)
class MomentLemmaResult:
    lhs_mean: float
    lhs_stderr: float
    rhs_exact: float
    lhs_exact: float | None


def lemma_moment_bound_check(
    a: dict[int, complex],
    ell: int,
    replicas: int = 1000,
    seed: int = 0,
    table: FactorTable | None = None,
) -> MomentLemmaResult:
    """Check E|sum a(n) f(n)/sqrt(n)|^{2l} <= (sum |a(n)|^2 tau_l(n)/n)^l
    for a finitely supported coefficient map (Steinhaus model).

    The right side is exact via tau_l. For l in {1, 2} and support size at
    most 12 an exact left side is also computed by expansion.
    """
    if ell < 0:
        raise DomainError(f"ell must be >= 0, got {ell}")
    ns = sorted(int(n) for n in a)
    if any(n < 1 for n in ns):
        raise DomainError("support must consist of positive integers")
    if ell == 0:
        return MomentLemmaResult(1.0, 0.0, 1.0, 1.0)
    if not ns:
        return MomentLemmaResult(0.0, 0.0, 0.0, 0.0)
    limit = max(ns)
    if table is None or table.limit < limit:
        from .numtheory import build_factor_table

        table = build_factor_table(max(limit, 2))
    coeffs = np.array([complex(a[n]) for n in ns])
    rhs = (
        math.fsum(abs(a[n]) ** 2 * tau_ell(table, n, ell) / n for n in ns) ** ell
    )

    # Monte Carlo left side.
    primes = table.primes_up_to(limit) if limit >= 2 else np.empty(0, dtype=np.int64)
    expo = np.zeros((len(ns), len(primes)), dtype=np.float64)
    p_index = {int(p): j for j, p in enumerate(primes)}
    from .numtheory import factorize

    for i, n in enumerate(ns):
        for pp, e in factorize(table, n).pairs:
            expo[i, p_index[pp]] = e
    inv_sqrt = 1.0 / np.sqrt(np.array(ns, dtype=np.float64))
    seeds = rng.child_seeds(seed, replicas)
    pr_u64 = primes.astype(np.uint64)

    xs = np.empty(replicas)
    for r in range(replicas):
        u = rng.uniform_array(int(seeds[r]), pr_u64, rng.DOMAIN_PRIME)
        ang = expo @ (2.0 * math.pi * u)
        z = np.sum(coeffs * inv_sqrt * np.exp(1j * ang))
        xs[r] = abs(z) ** (2 * ell)
    mean = math.fsum(xs) / replicas
    var = max(0.0, (math.fsum(xs * xs) - replicas * mean * mean) / (replicas - 1))
    stderr = math.sqrt(var / replicas)

    lhs_exact = None
    if ell in (1, 2) and len(ns) <= 12:
        lhs_exact = _exact_lhs_expansion(a, ns, ell)
    return MomentLemmaResult(mean, stderr, rhs, lhs_exact)


def _exact_lhs_expansion(a: dict[int, complex], ns: list[int], ell: int) -> float:
    """E|sum a(n) f(n)/sqrt(n)|^{2l} exactly, grouping l-tuples by product
    (complete multiplicativity plus orthogonality of the Steinhaus model)."""
    from itertools import product as iproduct

    groups: dict[int, complex] = {}
    for tup in iproduct(ns, repeat=ell):
        prod = 1
        coef = complex(1.0)
        for n in tup:
            prod *= n
            coef *= complex(a[n]) / math.sqrt(n)
        groups[prod] = groups.get(prod, 0j) + coef
    return math.fsum(abs(c) ** 2 for c in groups.values())
