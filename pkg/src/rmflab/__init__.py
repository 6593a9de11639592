"""rmflab: a simulation and verification lab for weighted partial sums of
random multiplicative functions, viewed as a model of the zeta function on
the critical line.

The package computes exact moments, Monte Carlo tails, extreme-value
experiments, and numerically checks the identities and inequalities that are
checkable at desk scale. All randomness is counter-based and seeded, so every
experiment is reproducible bit for bit.
"""

from .errors import (
    CapacityError,
    ConfigError,
    DomainError,
    InvariantError,
    RangeError,
    RmflabError,
)
from .kernels import BACKEND
from .numtheory import (
    FactorTable,
    Factorization,
    big_omega,
    build_factor_table,
    dirichlet_D,
    dirichlet_D_mainterm,
    divisor_envelope,
    divisor_sum_tau_over_n,
    enumerate_smooth,
    factorize,
    mobius,
    prime_power_sum,
    psi_count,
    psi_ennola,
    shared_factor_table,
    tau_ell,
)
from .rmf import RmfKind, RmfSample, eval_f, restricted_variants, sample_rmf
from .partial_sum import (
    Trajectory,
    WeightSpec,
    convolution_identity_residual,
    partial_sum,
    trajectory,
)
from .moments import (
    EnvelopeBand,
    EnvelopeConstants,
    MomentEstimate,
    brute_force_moment,
    exact_moment_integer_k,
    lemma_moment_bound_check,
    mc_moment,
    moment_envelope,
    weissler_check,
)
from .tails import (
    TailCurve,
    laplace_duality_residual,
    sample_abs_m,
    tail_curve,
    tail_envelope_large,
    tail_envelope_small,
)
from .extremes import (
    ExtremeTrial,
    as_growth_experiment,
    fgh_threshold,
    max_of_samples,
    short_threshold,
)
from .zetamodel import (
    EulerProductSpec,
    euler_product_eval,
    parseval_check,
    parseval_residual,
    quadrature_identity_residual,
    sigma_T,
    sigma_T_clt_experiment,
    sigma_T_variance_exact,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
