"""Max-of-N experiments and almost-sure growth statistics.

max_of_samples models the maximum of the zeta model over a window: N
independent replicas of M_f(T) with N = round(T log T) (full mode, one sample
per oscillation scale) or N = round(log T) (short mode). The growth
experiment tracks sup_T |M_f(T)|/normalizer for the square-root-cancellation
normalizer (log T)^{1/2+eps} and the iterated-log normalizer
exp(L sqrt(log log T)), plus block maxima over the exp(j^4) checkpoint grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels, rng
from .errors import CapacityError, DomainError
from .numtheory import FactorTable
from .parallel import map_chunks
from .partial_sum import ReplicaEngine
from .rmf import RmfKind

FULL_MODE_MAX_T = 10_000


def fgh_threshold(T: float, eps: float) -> float:
    """exp(sqrt((1/2 + eps) log T log log T)); needs log log T >= 0."""
    if T < math.e:
        raise DomainError(f"T must be >= e so log log T >= 0, got {T}")
    if eps <= -0.5:
        raise DomainError(f"eps must exceed -1/2, got {eps}")
    lT = math.log(T)
    return math.exp(math.sqrt((0.5 + eps) * lT * math.log(lT)))


def short_threshold(T: float, eps: float) -> float:
    """(1 + eps) log T."""
    if T <= 1:
        raise DomainError(f"T must exceed 1, got {T}")
    if eps <= -1.0:
        raise DomainError(f"eps must exceed -1, got {eps}")
    return (1.0 + eps) * math.log(T)


@dataclass(frozen=True)
class ExtremeTrial:
    T: int
    N: int
    trial_seed: int
    max_abs: float
    argmax_replica: int
    threshold_eps: float
    below_threshold: bool
    mode: str


def trial_size(T: int, mode: str) -> int:
    lT = math.log(T)
    if mode == "full":
        return max(1, round(T * lT))
    if mode == "short":
        return max(1, round(lT))
    raise DomainError(f"mode must be 'full' or 'short', got {mode!r}")


def max_of_samples(
    kind: RmfKind,
    T: int,
    mode: str,
    trial_seed: int,
    table: FactorTable,
    parallel_width: int = 1,
    threshold_eps: float = 0.5,
    n_samples: int | None = None,
) -> ExtremeTrial:
    """Maximum of |M_f(T)| over the trial's independently seeded replicas.

    Deterministic for fixed (kind, T, mode, trial_seed) at any
    parallel_width; ties in the maximum resolve to the smallest replica
    index. n_samples overrides N for diagnostics (nested-prefix tests).
    """
    N = trial_size(T, mode) if n_samples is None else int(n_samples)
    if mode == "full" and T > FULL_MODE_MAX_T and n_samples is None:
        raise CapacityError(
            f"full mode capped at T <= {FULL_MODE_MAX_T} "
            f"(about T^2 log T work), got T={T}"
        )
    if N < 1:
        raise DomainError(f"need at least one replica, got N={N}")
    proto = ReplicaEngine(kind, T, table)
    seeds = rng.child_seeds(trial_seed, N)

    def work(lo: int, hi: int):
        eng = proto.clone()
        best = -1.0
        arg = lo
        for i in range(lo, hi):
            v = eng.abs_m(int(seeds[i]))
            if v > best:
                best = v
                arg = i
        return best, arg

    parts = map_chunks(work, N, parallel_width)
    best, arg = -1.0, 0
    for b, a in parts:  # chunk order fixes tie-breaking by replica index
        if b > best:
            best, arg = b, a
    try:
        thr = fgh_threshold(T, threshold_eps) if mode == "full" else (
            short_threshold(T, threshold_eps)
        )
        below = bool(best <= thr)
    except DomainError:
        below = False  # threshold undefined this far below the asymptotic range
    return ExtremeTrial(
        T=int(T), N=N, trial_seed=trial_seed, max_abs=best, argmax_replica=arg,
        threshold_eps=threshold_eps, below_threshold=below, mode=mode,
    )


def replica_abs(kind: RmfKind, T: int, trial_seed: int, index: int, table: FactorTable) -> float:
    """Re-simulate one replica of a trial (spot-check hook)."""
    eng = ReplicaEngine(kind, T, table)
    return eng.abs_m(int(rng.child_seed(trial_seed, index)))


@dataclass(frozen=True)
class GrowthStatistics:
    seed: int
    sup_upper: float       # sup |M(t)| / (log t)^{1/2 + eps}
    arg_upper: int
    sup_lower: float       # sup |M(t)| / exp(L sqrt(log log t))
    arg_lower: int
    block_maxima: np.ndarray
    block_bounds: np.ndarray


def growth_checkpoints(T_max: int, t_start: int = 16) -> np.ndarray:
    """exp(j^4) grid clipped to [t_start, T_max], with both ends included."""
    pts = [t_start]
    j = 1
    while True:
        v = math.exp(j**4)
        if v > T_max:
            break
        iv = int(round(v))
        if iv > pts[-1]:
            pts.append(iv)
        j += 1
    if pts[-1] < T_max:
        pts.append(int(T_max))
    return np.array(pts, dtype=np.int64)


def as_growth_experiment(
    kind: RmfKind,
    seeds,
    T_max: int,
    epsilon: float,
    L: float,
    table: FactorTable,
) -> list[GrowthStatistics]:
    """Per-seed sup statistics over integer T in [16, T_max] plus block
    maxima over the exp(j^4) grid."""
    if epsilon <= 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    if L <= 0:
        raise DomainError(f"L must be positive, got {L}")
    T_max = int(T_max)
    if T_max < 16:
        raise DomainError(f"T_max must be >= 16, got {T_max}")
    t_start = 16
    t = np.arange(T_max + 1, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        lt = np.log(t)
        inv1 = lt ** -(0.5 + epsilon)
        inv2 = np.exp(-L * np.sqrt(np.log(lt)))
    inv1[:t_start] = 0.0
    inv2[:t_start] = 0.0
    bounds = growth_checkpoints(T_max, t_start)
    proto = ReplicaEngine(kind, T_max, table)
    out = []
    for s in seeds:
        re, im = proto.term_arrays(int(s))
        s1, a1, s2, a2 = kernels.growth_scan(re, im, inv1, inv2, t_start)
        bm = kernels.block_max_scan(re, im, bounds[:-1], bounds[1:])
        out.append(
            GrowthStatistics(
                seed=int(s), sup_upper=s1, arg_upper=int(a1),
                sup_lower=s2, arg_lower=int(a2),
                block_maxima=bm, block_bounds=bounds,
            )
        )
    return out
