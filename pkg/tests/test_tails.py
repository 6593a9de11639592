import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import norm

from rmflab.errors import DomainError
from rmflab.rmf import RmfKind
from rmflab.tails import (
    laplace_duality_residual,
    sample_abs_m,
    tail_curve,
    tail_envelope_large,
    tail_envelope_small,
    wilson_interval,
)

ST = RmfKind.STEINHAUS


class TestTailCurve:
    def test_phi_at_minus_infinity_threshold(self, table_1k):
        # e^V below every |M| forces phi_hat = 1 (|M| > 0 a.s. for Steinhaus)
        c = tail_curve(ST, 100, [-40.0], replicas=200, seed=5, table=table_1k)
        assert c.phi_hat[0] == 1.0

    def test_t_one_step_function(self, table_1k):
        c = tail_curve(ST, 1, [-1.0, 1.0], replicas=200, seed=5, table=table_1k)
        assert c.phi_hat[0] == 1.0  # |M| = 1 > e^{-1}
        assert c.phi_hat[1] == 0.0  # |M| = 1 <= e

    def test_monotone_and_bounded(self, table_1k):
        grid = np.linspace(-2.0, 3.0, 21)
        c = tail_curve(ST, 1000, grid, replicas=500, seed=7, table=table_1k)
        assert np.all(np.diff(c.phi_hat) <= 0)
        assert np.all((0 <= c.ci_low) & (c.ci_low <= c.phi_hat))
        assert np.all((c.phi_hat <= c.ci_high) & (c.ci_high <= 1))

    def test_seed_stability(self, table_1k):
        a = tail_curve(ST, 100, [0.0, 1.0], replicas=300, seed=9, table=table_1k)
        b = tail_curve(ST, 100, [0.0, 1.0], replicas=300, seed=9, table=table_1k,
                       parallel_width=3)
        assert np.array_equal(a.phi_hat, b.phi_hat)
        assert np.array_equal(a.ci_low, b.ci_low)

    def test_replica_floor(self, table_1k):
        with pytest.raises(DomainError):
            tail_curve(ST, 100, [0.0], replicas=50, seed=1, table=table_1k)


class TestEnvelopes:
    def test_large_substitution(self):
        # pick T, V with (log T)/V = e so the denominator log equals 1
        T = math.exp(200.0)
        V = 200.0 / math.e
        assert tail_envelope_large(T, V) == pytest.approx(math.exp(-V * V), rel=1e-12)
        T2, V2 = 10**6, 3.0
        expect = math.exp(-(V2**2) / math.log(math.log(T2) / V2))
        assert tail_envelope_large(T2, V2) == pytest.approx(expect, rel=1e-15)

    def test_large_domain(self):
        with pytest.raises(DomainError):
            tail_envelope_large(100, math.log(100))
        with pytest.raises(DomainError):
            tail_envelope_large(100, -1.0)

    def test_small_values(self):
        assert tail_envelope_small(1000, 0.0) == pytest.approx(0.5, rel=1e-15)
        assert tail_envelope_small(1000, 2.0) == pytest.approx(0.02275013194817921, rel=1e-12)
        # independent quadrature oracle
        from scipy.integrate import quad

        for L in (0.5, 1.0, 2.0, 4.0, 8.0):
            oracle = quad(lambda x: math.exp(-x * x / 2), L, np.inf)[0] / math.sqrt(2 * math.pi)
            assert tail_envelope_small(10, L) == pytest.approx(oracle, rel=1e-11)

    def test_large_monotone_in_v(self):
        T = 10**6
        vals = [tail_envelope_large(T, v) for v in np.linspace(0.5, 10, 30)]
        assert all(a >= b for a, b in zip(vals, vals[1:]))


class TestLaplaceDuality:
    def test_single_sample(self):
        assert laplace_duality_residual([1.0], 1.0) == 0.0

    def test_two_samples_hand_integration(self):
        # survival: 1 on u < 0, 1/2 on (0, 1], 0 beyond; rhs = (1 + e^2)/2
        res = laplace_duality_residual([1.0, math.e], 1.0)
        assert res <= 1e-15

    def test_pooled_monte_carlo(self, table_1k):
        vals = sample_abs_m(ST, 1000, 2000, 31, table_1k, parallel_width=2)
        for k in (0.5, 1.0, 2.0):
            assert laplace_duality_residual(vals, k) <= 1e-9

    def test_empty_rejected(self):
        with pytest.raises(DomainError):
            laplace_duality_residual([], 1.0)
        with pytest.raises(DomainError):
            laplace_duality_residual([1.0], 0.0)

    @given(
        xs=st.lists(
            st.floats(min_value=1e-6, max_value=1e6, allow_nan=False),
            min_size=1, max_size=200,
        ),
        k=st.floats(min_value=0.05, max_value=10.0),
    )
    @settings(max_examples=80, deadline=None)
    def test_exact_for_any_finite_measure(self, xs, k):
        assert laplace_duality_residual(xs, k) <= 1e-9


class TestSmallRangeReport:
    def test_report_small_range_factors(self, table_1m, capsys):
        # Comparison of phi_hat against the Gaussian-tail envelope on the
        # normalized grid V = L sqrt(0.5 loglog T); recorded, not asserted
        # (the bound is one-sided and asymptotic). Only well-formedness is
        # checked here.
        T = 10**6
        llT = math.log(math.log(T))
        Ls = [0.5, 1.0, 1.5]
        grid = [L * math.sqrt(0.5 * llT) for L in Ls]
        c = tail_curve(ST, T, grid, replicas=400, seed=77, table=table_1m,
                       parallel_width=2)
        with capsys.disabled():
            for L, V, p in zip(Ls, grid, c.phi_hat):
                env = tail_envelope_small(T, L)
                ratio = p / env if env > 0 else float("inf")
                print(f"[small-range report] T=1e6 L={L}: phi_hat={p:.4f} "
                      f"gaussian_tail={env:.4f} ratio={ratio:.3f}")
        assert np.all((0 <= c.phi_hat) & (c.phi_hat <= 1))
        assert np.all(np.diff(c.phi_hat) <= 0)


class TestWilson:
    def test_extremes(self):
        lo, hi = wilson_interval(0, 100)
        assert lo == 0.0 and hi > 0.0
        lo, hi = wilson_interval(100, 100)
        assert hi == 1.0 and lo < 1.0

    def test_against_normal_quantile(self):
        lo, hi = wilson_interval(50, 100)
        z = norm.ppf(0.975)
        assert lo == pytest.approx(0.5 - z / 2 / math.sqrt(100 + z * z), rel=1e-6)
