"""Declarative experiment runner.

A run is described by an ExperimentConfig (JSON file and/or CLI flags; flags
override file values). Artifacts are written atomically to the output
directory together with a run manifest. Exit codes: 0 success, 2 config
error, 3 capacity error, 4 internal invariant violation.
"""

from __future__ import annotations

import dataclasses
import math
import os
import sys
import json
from dataclasses import dataclass
from pathlib import Path

import click
import numpy as np

from . import __version__, kernels, rng
from .artifacts import RunManifest, write_csv, write_jsonl
from .errors import CapacityError, ConfigError, DomainError, InvariantError, RmflabError
from .extremes import fgh_threshold, max_of_samples
from .moments import exact_moment_integer_k, mc_moment, moment_envelope, weissler_check
from .numtheory import (
    dirichlet_D,
    divisor_sum_tau_over_n,
    psi_count,
    shared_factor_table,
)
from .partial_sum import (
    DEFAULT_SPEC,
    convolution_identity_residual,
    partial_sum,
)
from .partial_sum import trajectory as compute_trajectory
from .rmf import RmfKind, eval_f, sample_rmf
from .tails import (
    laplace_duality_residual,
    sample_abs_m,
    tail_curve,
    tail_envelope_large,
    tail_envelope_small,
)
from .zetamodel import (
    EulerProductSpec,
    euler_product_eval,
    parseval_check,
    parseval_residual,
    quadrature_identity_residual,
    sigma_T_clt_experiment,
    sigma_T_samples,
    sigma_T_variance_exact,
)

EXPERIMENTS = (
    "moments",
    "tails",
    "extremes",
    "trajectory",
    "weissler",
    "parseval",
    "sigma_t",
    "verify_all",
)

_NAN = float("nan")


@dataclass
class ExperimentConfig:
    experiment: str
    kind: str = "steinhaus"
    T: int | None = None
    T_grid: list | None = None
    k: float | None = None
    k_grid: list | None = None
    V_grid: list | None = None
    eps: float = 0.25
    L: float = 1.0
    p: float | None = None
    q: float | None = None
    rho: float | None = None
    sigma: float | None = None
    sigmas: list | None = None
    support_sizes: list | None = None
    checkpoints: list | None = None
    mode: str = "full"
    trials: int = 20
    replicas: int = 1000
    seed: int = 0
    parallel_width: int | None = None
    output_dir: str | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        if "experiment" not in data:
            raise ConfigError("config requires an 'experiment' field")
        return cls(**data)

    def rmf_kind(self) -> RmfKind:
        try:
            return RmfKind(self.kind.lower())
        except ValueError:
            raise ConfigError(f"unknown kind {self.kind!r}") from None

    def width(self) -> int:
        if self.parallel_width is not None:
            if self.parallel_width < 1:
                raise ConfigError("parallel_width must be >= 1")
            return int(self.parallel_width)
        env = os.environ.get("RMFLAB_THREADS")
        if env:
            try:
                return max(1, int(env))
            except ValueError:
                raise ConfigError(f"bad RMFLAB_THREADS value {env!r}") from None
        return max(1, os.cpu_count() or 1)

    def out_dir(self) -> Path:
        base = self.output_dir or os.environ.get("RMFLAB_OUT") or "rmflab_out"
        return Path(base)

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        self.rmf_kind()
        if self.replicas < 1:
            raise ConfigError("replicas must be >= 1")
        if self.seed < 0 or self.seed >= 2**64:
            raise ConfigError("seed must fit in 64 bits")
        e = self.experiment
        if e in ("moments", "tails", "trajectory", "sigma_t", "extremes") and not (
            self.T or self.T_grid or self.checkpoints
        ):
            raise ConfigError(f"{e} requires T or a grid")
        if e == "moments" and not (self.k or self.k_grid):
            raise ConfigError("moments requires k or k_grid")
        if e == "tails" and not self.V_grid:
            raise ConfigError("tails requires V_grid")
        if e == "weissler":
            if self.p is None or self.q is None or self.rho is None:
                raise ConfigError("weissler requires p, q and rho")
            if not 0 < self.p <= self.q:
                raise ConfigError("weissler requires 0 < p <= q")
            if not 0 <= self.rho <= math.sqrt(self.p / self.q) + 1e-15:
                raise ConfigError("weissler requires rho <= sqrt(p/q)")
        if e == "parseval":
            for s in self._sigma_list():
                if s <= 0:
                    raise ConfigError(f"parseval requires sigma > 0, got {s}")
        if e == "extremes" and self.mode not in ("full", "short"):
            raise ConfigError(f"extremes mode must be full or short, got {self.mode!r}")

    def _sigma_list(self) -> list[float]:
        if self.sigmas:
            return [float(s) for s in self.sigmas]
        if self.sigma is not None:
            return [float(self.sigma)]
        return [0.25, 0.5, 1.0, 2.0]


def _t_list(cfg: ExperimentConfig) -> list[int]:
    if cfg.T_grid:
        return [int(t) for t in cfg.T_grid]
    if cfg.T:
        return [int(cfg.T)]
    raise ConfigError("missing T")


def _k_list(cfg: ExperimentConfig) -> list[float]:
    if cfg.k_grid:
        return [float(k) for k in cfg.k_grid]
    if cfg.k:
        return [float(cfg.k)]
    raise ConfigError("missing k")


def _provenance(cfg: ExperimentConfig) -> str:
    scope = cfg.T_grid or cfg.T or cfg.checkpoints or "-"
    return (
        f"kind={cfg.kind} limit={scope} seed={cfg.seed} "
        f"scheme={rng.SCHEME_VERSION} backend={kernels.BACKEND} "
        f"version={__version__}"
    )


# ---------------------------------------------------------------------------
# experiment bodies


def _run_moments(cfg: ExperimentConfig, out: Path) -> list[Path]:
    kind = cfg.rmf_kind()
    rows = []
    for T in _t_list(cfg):
        table = shared_factor_table(max(T, 2))
        for k in _k_list(cfg):
            try:
                band = moment_envelope(T, k)
                env_lo, env_hi, regime = band.log_lower, band.log_upper, band.regime
            except DomainError:
                env_lo, env_hi, regime = _NAN, _NAN, "none"
            est = mc_moment(
                kind, T, k, replicas=cfg.replicas, seed=cfg.seed, table=table,
                parallel_width=cfg.width(),
            )
            rows.append(
                (cfg.kind, T, k, "mc", cfg.replicas, est.mean, est.stderr,
                 env_lo, env_hi, regime, cfg.seed)
            )
            if kind is RmfKind.STEINHAUS and float(k).is_integer():
                try:
                    exact = exact_moment_integer_k(T, int(k))
                    rows.append(
                        (cfg.kind, T, k, "exact", 0, exact, 0.0,
                         env_lo, env_hi, regime, cfg.seed)
                    )
                except CapacityError:
                    pass
    path = out / "moments.csv"
    write_csv(
        path, "moments-v1",
        ["kind", "T", "k", "method", "replicas", "mean", "stderr",
         "envelope_low", "envelope_high", "regime", "seed"],
        rows, provenance=_provenance(cfg),
    )
    return [path]


def _run_tails(cfg: ExperimentConfig, out: Path) -> list[Path]:
    kind = cfg.rmf_kind()
    rows = []
    for T in _t_list(cfg):
        table = shared_factor_table(max(T, 2))
        curve = tail_curve(
            kind, T, cfg.V_grid, cfg.replicas, cfg.seed, table,
            parallel_width=cfg.width(),
        )
        lT = math.log(T) if T > 1 else _NAN
        llT = math.log(lT) if T >= 16 else _NAN
        for i, V in enumerate(curve.V_grid):
            env_l = _NAN
            if 0 < V < lT and lT / V > 1:
                env_l = tail_envelope_large(T, float(V))
            env_s = _NAN
            if T >= 16 and llT > 0:
                env_s = tail_envelope_small(T, float(V) / math.sqrt(0.5 * llT))
            rows.append(
                (T, float(V), curve.phi_hat[i], curve.ci_low[i], curve.ci_high[i],
                 env_l, env_s, cfg.replicas, cfg.seed)
            )
    path = out / "tails.csv"
    write_csv(
        path, "tails-v1",
        ["T", "V", "phi_hat", "ci_low", "ci_high", "envelope_large",
         "envelope_small_if_applicable", "replicas", "seed"],
        rows, provenance=_provenance(cfg),
    )
    return [path]


_EXTREME_EPS = (-0.2, 0.0, 0.2, 0.5)


def _run_extremes(cfg: ExperimentConfig, out: Path) -> list[Path]:
    kind = cfg.rmf_kind()
    rows = []
    for T in _t_list(cfg):
        table = shared_factor_table(max(T, 2))
        for t_idx in range(cfg.trials):
            trial_seed = rng.child_seed(cfg.seed, t_idx, rng.DOMAIN_TRIAL)
            trial = max_of_samples(
                kind, T, cfg.mode, trial_seed, table, parallel_width=cfg.width()
            )
            thresholds = [
                fgh_threshold(T, e) if T >= 16 else _NAN for e in _EXTREME_EPS
            ]
            below = [
                (trial.max_abs <= th) if not math.isnan(th) else False
                for th in thresholds
            ]
            rows.append(
                (cfg.mode, T, trial.N, trial_seed, trial.max_abs,
                 math.log(trial.max_abs) if trial.max_abs > 0 else _NAN,
                 *thresholds, *below)
            )
    path = out / "extremes.csv"
    write_csv(
        path, "extremes-v1",
        ["mode", "T", "N", "trial_seed", "max_abs", "log_max",
         "fgh_eps_m0p2", "fgh_eps_0", "fgh_eps_0p2", "fgh_eps_0p5",
         "below_m0p2", "below_0", "below_0p2", "below_0p5"],
        rows, provenance=_provenance(cfg),
    )
    return [path]


def _run_trajectory(cfg: ExperimentConfig, out: Path) -> list[Path]:
    kind = cfg.rmf_kind()
    if cfg.checkpoints:
        cps = [int(c) for c in cfg.checkpoints]
    else:
        # default grid: exp(j^4) checkpoints clipped to [1, T], plus T itself
        T = int(cfg.T or (cfg.T_grid or [10**4])[-1])
        lT = math.log(T)
        pts = {T}
        j = 1
        while j**4 <= lT:
            pts.add(max(1, round(math.exp(j**4))))
            j += 1
        cps = sorted(pts)
    rows = []
    T_max = max(cps)
    table = shared_factor_table(max(T_max, 2))
    for r in range(cfg.replicas):
        s = rng.child_seed(cfg.seed, r)
        sample = sample_rmf(kind, T_max, s, table)
        traj = compute_trajectory(sample, cps, DEFAULT_SPEC, table, with_block_maxima=True)
        for j, T in enumerate(traj.checkpoints):
            z = traj.values[j]
            bm = traj.block_maxima[j - 1] if j > 0 and traj.block_maxima is not None else _NAN
            lT = math.log(float(T)) if T > 1 else _NAN
            norm_eps = abs(z) / lT ** (0.5 + cfg.eps) if T >= 16 else _NAN
            norm_L = (
                abs(z) / math.exp(cfg.L * math.sqrt(math.log(lT))) if T >= 16 else _NAN
            )
            rows.append((s, int(T), z.real, z.imag, abs(z), bm, norm_eps, norm_L))
    path = out / "trajectory.csv"
    write_csv(
        path, "trajectory-v1",
        ["seed", "T", "re", "im", "abs", "block_max",
         "norm_log_half_eps", "norm_exp_L_sqrt_loglog"],
        rows, provenance=_provenance(cfg),
    )
    return [path]


def _run_weissler(cfg: ExperimentConfig, out: Path) -> list[Path]:
    kind = cfg.rmf_kind()
    rows = []
    for T in _t_list(cfg) if (cfg.T or cfg.T_grid) else [1000]:
        table = shared_factor_table(max(T, 2))
        res = weissler_check(
            T, float(cfg.p), float(cfg.q), float(cfg.rho),
            replicas=cfg.replicas, seed=cfg.seed, table=table, kind=kind,
            parallel_width=cfg.width(),
        )
        rows.append(
            (T, cfg.p, cfg.q, cfg.rho, cfg.replicas, res.lhs, res.lhs_stderr,
             res.rhs, res.rhs_stderr, res.satisfied_with_margin, cfg.seed)
        )
    path = out / "weissler.csv"
    write_csv(
        path, "weissler-v1",
        ["T", "p", "q", "rho", "replicas", "lhs", "lhs_stderr", "rhs",
         "rhs_stderr", "satisfied_with_margin", "seed"],
        rows, provenance=_provenance(cfg),
    )
    return [path]


def _random_coefficients(size: int, seed: int) -> dict[int, complex]:
    ns = range(1, size + 1)
    re = rng.uniform_array(seed, np.arange(1, size + 1, dtype=np.uint64), rng.DOMAIN_TRIAL)
    im = rng.uniform_array(seed ^ 0xABCDEF, np.arange(1, size + 1, dtype=np.uint64), rng.DOMAIN_TRIAL)
    return {n: complex(2 * re[i] - 1, 2 * im[i] - 1) for i, n in enumerate(ns)}


def _run_parseval(cfg: ExperimentConfig, out: Path) -> list[Path]:
    sizes = [int(s) for s in (cfg.support_sizes or [1, 2, 5, 20])]
    records = []
    for size in sizes:
        coeffs = _random_coefficients(size, cfg.seed)
        for sigma in cfg._sigma_list():
            lhs, rhs, res = parseval_check(coeffs, sigma)
            records.append(
                {"support": size, "sigma": sigma, "lhs": lhs, "rhs": rhs,
                 "residual": res}
            )
    path = out / "parseval.jsonl"
    write_jsonl(path, records, provenance=_provenance(cfg))
    return [path]


def _run_sigma_t(cfg: ExperimentConfig, out: Path) -> list[Path]:
    rows = []
    summaries = []
    for T in _t_list(cfg):
        table = shared_factor_table(max(T, 2))
        vals = sigma_T_samples(T, cfg.replicas, cfg.seed, table, cfg.width())
        pv = sigma_T_variance_exact(T, table)
        sd = math.sqrt(pv)
        rows += [
            (T, i, float(vals[i]), float(vals[i]) / sd) for i in range(len(vals))
        ]
        clt = sigma_T_clt_experiment(T, cfg.replicas, cfg.seed, table, cfg.width())
        summaries.append({
            "T": T, "replicas": cfg.replicas,
            "ks_statistic": clt.ks_statistic,
            "sample_mean": clt.sample_mean,
            "sample_var": clt.sample_var,
            "predicted_var": clt.predicted_var,
            "half_loglog": 0.5 * math.log(math.log(T)),
        })
    path = out / "sigma_t.csv"
    write_csv(
        path, "sigma_t-v1", ["T", "replica", "value", "normalized"],
        rows, provenance=_provenance(cfg),
    )
    spath = out / "sigma_t_summary.jsonl"
    write_jsonl(spath, summaries, provenance=_provenance(cfg))
    return [path, spath]


# ---------------------------------------------------------------------------
# verify-all battery (tiny scale)


def _verify_checks(cfg: ExperimentConfig):
    kind = RmfKind.STEINHAUS
    width = cfg.width()
    table = shared_factor_table(1000)

    def check_oracle():
        from .moments import brute_force_moment

        worst = 0.0
        for T in (1, 2, 3, 6):
            for k in (1, 2):
                worst = max(
                    worst, abs(exact_moment_integer_k(T, k) - brute_force_moment(T, k))
                )
        return worst <= 1e-12, f"max |exact - brute| = {worst:.3g}"

    def check_second_moment():
        est = mc_moment(kind, 100, 1.0, replicas=400, seed=cfg.seed, table=table,
                        parallel_width=width)
        h = math.fsum(1.0 / n for n in range(1, 101))
        ok = abs(est.mean - h) <= 4 * est.stderr
        return ok, f"mean={est.mean:.4f} H={h:.4f} stderr={est.stderr:.4f}"

    def check_duality():
        vals = sample_abs_m(kind, 50, 500, cfg.seed, table, parallel_width=width)
        worst = max(laplace_duality_residual(vals, k) for k in (0.5, 1.0, 2.0))
        return worst <= 1e-9, f"max residual = {worst:.3g}"

    def check_parseval():
        coeffs = _random_coefficients(5, cfg.seed)
        worst = max(parseval_residual(coeffs, s) for s in (0.5, 1.0))
        return worst <= 1e-6, f"max residual = {worst:.3g}"

    def check_convolution():
        worst = 0.0
        for y in (2, 3):
            for r in range(5):
                s = rng.child_seed(cfg.seed, r)
                sample = sample_rmf(kind, 50, s, table)
                worst = max(worst, convolution_identity_residual(sample, y, 50, table))
        return worst <= 1e-9, f"max residual = {worst:.3g}"

    def check_weissler():
        res = weissler_check(100, 2.0, 4.0, 1 / math.sqrt(2), replicas=500,
                             seed=cfg.seed, table=table, parallel_width=width)
        return res.satisfied_with_margin, f"lhs={res.lhs:.4f} rhs={res.rhs:.4f}"

    def check_divisor():
        # partial summation cross-check of the direct tau(n)/n sum
        u, v = 10, 500
        direct = divisor_sum_tau_over_n(table, u, v)
        via_d = dirichlet_D(v) / v - dirichlet_D(u) / u + math.fsum(
            dirichlet_D(m) * (1.0 / m - 1.0 / (m + 1)) for m in range(u, v)
        )
        ok = abs(direct - via_d) <= 1e-9
        return ok, f"direct={direct:.12f} partial-summation={via_d:.12f}"

    def check_smooth():
        ok = psi_count(30, 3) == 12 and psi_count(100, 100) == 100
        mono = all(
            psi_count(x, y) <= psi_count(x + 10, y) <= psi_count(x + 10, y + 2)
            for x in (20, 50) for y in (2, 3)
        )
        return ok and mono, "psi counts and monotonicity"

    def check_determinism():
        sample = sample_rmf(kind, 100, cfg.seed, table)
        a = partial_sum(sample, 100, DEFAULT_SPEC, table)
        b = partial_sum(sample, 100, DEFAULT_SPEC, table)
        m1 = mc_moment(kind, 50, 1.0, replicas=300, seed=cfg.seed, table=table,
                       parallel_width=1)
        m3 = mc_moment(kind, 50, 1.0, replicas=300, seed=cfg.seed, table=table,
                       parallel_width=3)
        ok = a == b and m1.mean == m3.mean and m1.stderr == m3.stderr
        return ok, "bit-identical reruns and width independence"

    def check_euler():
        sample = sample_rmf(kind, 100, cfg.seed, table)
        zero = dataclasses.replace(sample, theta=np.zeros_like(sample.theta))
        zero._dense_theta = None
        a = euler_product_eval(zero, EulerProductSpec(97, complex(1.0, 0.3), True))
        b = euler_product_eval(zero, EulerProductSpec(97, complex(1.0, 0.3), False))
        return a == b, f"|a-b| = {abs(a - b):.3g}"

    def check_sigma_t_identity():
        worst = max(
            quadrature_identity_residual(100, p, th)
            for p in (2, 3, 97) for th in (0.0, 1.0, math.pi / 2)
        )
        return worst <= 1e-10, f"max residual = {worst:.3g}"

    def check_gaussian_tail():
        from scipy.stats import norm

        v = tail_envelope_small(1000, 2.0)
        return abs(v - float(norm.sf(2.0))) <= 1e-12, f"value = {v:.6g}"

    def check_extension():
        s10 = sample_rmf(kind, 10, cfg.seed, table)
        s100 = sample_rmf(kind, 100, cfg.seed, table)
        ok = np.array_equal(s10.theta, s100.theta[: len(s10.theta)])
        return ok, "limit extension preserves values"

    def check_eval_consistency():
        sample = sample_rmf(kind, 100, cfg.seed, table)
        worst = 0.0
        for n in (1, 2, 12, 97, 100):
            direct = eval_f(sample, n, table)
            term = partial_sum(sample, n, DEFAULT_SPEC, table) - (
                partial_sum(sample, n - 1, DEFAULT_SPEC, table) if n > 1 else 0.0
            )
            worst = max(worst, abs(direct / math.sqrt(n) - term))
        return worst <= 1e-9, f"max |f(n)/sqrt(n) - increment| = {worst:.3g}"

    return [
        ("oracle_equality", check_oracle),
        ("second_moment_orthogonality", check_second_moment),
        ("laplace_duality", check_duality),
        ("parseval_identity", check_parseval),
        ("convolution_identity", check_convolution),
        ("weissler_inequality", check_weissler),
        ("divisor_partial_summation", check_divisor),
        ("smooth_counts", check_smooth),
        ("determinism", check_determinism),
        ("euler_product_consistency", check_euler),
        ("window_average_identity", check_sigma_t_identity),
        ("gaussian_tail_value", check_gaussian_tail),
        ("sampler_extension", check_extension),
        ("eval_partial_sum_consistency", check_eval_consistency),
    ]


def _run_verify_all(cfg: ExperimentConfig, out: Path) -> list[Path]:
    rows = []
    failures = 0
    for name, fn in _verify_checks(cfg):
        try:
            ok, detail = fn()
        except RmflabError as exc:
            ok, detail = False, f"error: {exc}"
        rows.append((name, "pass" if ok else "FAIL", detail))
        if not ok:
            failures += 1
    path = out / "verify_all.csv"
    write_csv(path, "verify-v1", ["check", "status", "detail"], rows,
              provenance=_provenance(cfg))
    if failures:
        raise InvariantError(f"{failures} verify-all checks failed; see {path}")
    return [path]


_RUNNERS = {
    "moments": _run_moments,
    "tails": _run_tails,
    "extremes": _run_extremes,
    "trajectory": _run_trajectory,
    "weissler": _run_weissler,
    "parseval": _run_parseval,
    "sigma_t": _run_sigma_t,
    "verify_all": _run_verify_all,
}


def run(cfg: ExperimentConfig) -> list[Path]:
    """Validate, execute, and write artifacts plus the run manifest."""
    cfg.validate()
    out = cfg.out_dir()
    manifest = RunManifest(
        config=dataclasses.asdict(cfg),
        tool_version=__version__,
        scheme_version=rng.SCHEME_VERSION,
        backend=kernels.BACKEND,
    )
    manifest.start()
    paths = _RUNNERS[cfg.experiment](cfg, out)
    manifest.finish(paths)
    manifest.write(out / "run_manifest.json")
    return paths


# ---------------------------------------------------------------------------
# click wiring

_EXIT_BY_ERROR = (
    (ConfigError, 2),
    (DomainError, 2),
    (CapacityError, 3),
    (InvariantError, 4),
)


def _execute(cfg_data: dict) -> None:
    try:
        cfg = ExperimentConfig.from_dict(cfg_data)
        paths = run(cfg)
    except RmflabError as exc:
        for etype, code in _EXIT_BY_ERROR:
            if isinstance(exc, etype):
                kindname = {2: "config", 3: "capacity", 4: "invariant"}[code]
                click.echo(f"error: {kindname}: {exc}", err=True)
                sys.exit(code)
        click.echo(f"error: internal: {exc}", err=True)
        sys.exit(4)
    except Exception as exc:  # anything unexpected is an internal failure
        click.echo(f"error: internal: {type(exc).__name__}: {exc}", err=True)
        sys.exit(4)
    for p in paths:
        click.echo(str(p))


def _merge(config_file: str | None, experiment: str, flags: dict) -> dict:
    data: dict = {}
    if config_file:
        try:
            data = json.loads(Path(config_file).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            click.echo(f"error: config: cannot read {config_file}: {exc}", err=True)
            sys.exit(2)
    data["experiment"] = experiment
    for key, val in flags.items():
        if val is not None and val != ():
            data[key] = list(val) if isinstance(val, tuple) else val
    return data


def _common(fn):
    fn = click.option("--config", "config_file", type=click.Path(), default=None,
                      help="JSON config file; flags override its values.")(fn)
    fn = click.option("--kind", type=click.Choice(["steinhaus", "rademacher"]),
                      default=None)(fn)
    fn = click.option("--replicas", type=int, default=None)(fn)
    fn = click.option("--seed", type=int, default=None)(fn)
    fn = click.option("--parallel-width", "parallel_width", type=int, default=None)(fn)
    fn = click.option("--output-dir", "output_dir", type=click.Path(), default=None)(fn)
    return fn


@click.group()
@click.version_option(__version__)
def main():
    """Experiment runner for the random multiplicative partial-sum lab."""


@main.command()
@_common
@click.option("--t", "T", type=int, default=None)
@click.option("--t-grid", "T_grid", type=int, multiple=True)
@click.option("--k", type=float, default=None)
@click.option("--k-grid", "k_grid", type=float, multiple=True)
def moments(config_file, **flags):
    """Monte Carlo and exact moments with envelope bands."""
    _execute(_merge(config_file, "moments", flags))


@main.command()
@_common
@click.option("--t", "T", type=int, default=None)
@click.option("--v-grid", "V_grid", type=float, multiple=True)
def tails(config_file, **flags):
    """Tail curves with Wilson intervals and envelopes."""
    _execute(_merge(config_file, "tails", flags))


@main.command()
@_common
@click.option("--t", "T", type=int, default=None)
@click.option("--mode", type=click.Choice(["full", "short"]), default=None)
@click.option("--trials", type=int, default=None)
def extremes(config_file, **flags):
    """Max-of-N trials against the conjectured thresholds."""
    _execute(_merge(config_file, "extremes", flags))


@main.command()
@_common
@click.option("--t", "T", type=int, default=None)
@click.option("--checkpoint", "checkpoints", type=int, multiple=True)
@click.option("--eps", type=float, default=None)
@click.option("--l", "L", type=float, default=None)
def trajectory(config_file, **flags):
    """Checkpointed trajectories with block maxima."""
    _execute(_merge(config_file, "trajectory", flags))


@main.command()
@_common
@click.option("--t", "T", type=int, default=None)
@click.option("--p", type=float, default=None)
@click.option("--q", type=float, default=None)
@click.option("--rho", type=float, default=None)
def weissler(config_file, **flags):
    """Hypercontractive inequality check on common random numbers."""
    _execute(_merge(config_file, "weissler", flags))


@main.command()
@_common
@click.option("--sigma", type=float, default=None)
@click.option("--sigma-grid", "sigmas", type=float, multiple=True)
@click.option("--support-size", "support_sizes", type=int, multiple=True)
def parseval(config_file, **flags):
    """Parseval identity residuals for random finite Dirichlet series."""
    _execute(_merge(config_file, "parseval", flags))


@main.command(name="sigma-t")
@_common
@click.option("--t", "T", type=int, default=None)
def sigma_t(config_file, **flags):
    """Window-averaged prime statistic: samples, variance, CLT check."""
    _execute(_merge(config_file, "sigma_t", flags))


@main.command(name="verify-all")
@_common
def verify_all(config_file, **flags):
    """Run the tiny-scale invariant battery; exit 0 only if all pass."""
    _execute(_merge(config_file, "verify_all", flags))


if __name__ == "__main__":
    main()
