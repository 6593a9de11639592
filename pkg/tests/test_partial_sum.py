import cmath
import math

import numpy as np
import pytest

from rmflab import rng
from rmflab.errors import ConfigError, DomainError, RangeError
from rmflab.partial_sum import (
    DEFAULT_SPEC,
    ReplicaEngine,
    WeightSpec,
    convolution_identity_residual,
    partial_sum,
    trajectory,
)
from rmflab.rmf import RmfKind, sample_rmf

ST = RmfKind.STEINHAUS
RA = RmfKind.RADEMACHER


class TestWeightSpec:
    def test_validate(self):
        WeightSpec().validate()
        WeightSpec(rho=0.0, smooth_cutoff=5, squarefree_only=True, sigma_shift=0.1).validate()
        with pytest.raises(DomainError):
            WeightSpec(rho=1.5).validate()
        with pytest.raises(DomainError):
            WeightSpec(smooth_cutoff=1).validate()
        with pytest.raises(DomainError):
            WeightSpec(sigma_shift=-0.5).validate()


class TestPartialSum:
    def test_t_one(self, table_1k):
        s = sample_rmf(ST, 100, 3, table_1k)
        for spec in (DEFAULT_SPEC, WeightSpec(rho=0.3), WeightSpec(rho=0.0)):
            assert partial_sum(s, 1, spec, table_1k) == 1.0

    def test_t_two_forced(self, table_1k):
        s = sample_rmf(ST, 100, 3, table_1k)
        th2 = float(s.dense_theta[2])
        expect = 1.0 + cmath.exp(1j * th2) / math.sqrt(2.0)
        assert partial_sum(s, 2, DEFAULT_SPEC, table_1k) == pytest.approx(expect, abs=1e-14)

    def test_rho_zero_keeps_only_one(self, table_1k):
        s = sample_rmf(ST, 1000, 3, table_1k)
        assert partial_sum(s, 1000, WeightSpec(rho=0.0), table_1k) == 1.0

    def test_smooth_cutoff_above_t_is_noop(self, table_1k):
        s = sample_rmf(ST, 500, 3, table_1k)
        a = partial_sum(s, 500, DEFAULT_SPEC, table_1k)
        b = partial_sum(s, 500, WeightSpec(smooth_cutoff=500), table_1k)
        assert a == b

    def test_second_moment_orthogonality(self, table_1k):
        # E|M_f(T)|^2 = H_T: Monte Carlo with a 4-sigma band
        T, R = 1000, 2000
        seeds = rng.child_seeds(2718, R)
        eng = ReplicaEngine(ST, T, table_1k)
        vals = np.array([abs(eng.sums(int(s))[0]) ** 2 for s in seeds])
        H = math.fsum(1.0 / n for n in range(1, T + 1))
        stderr = vals.std(ddof=1) / math.sqrt(R)
        assert abs(vals.mean() - H) <= 4 * stderr

    def test_rademacher_squarefree_only_matches(self, table_1k):
        # for Rademacher f the squarefree restriction changes nothing
        s = sample_rmf(RA, 1000, 3, table_1k)
        a = partial_sum(s, 1000, DEFAULT_SPEC, table_1k)
        b = partial_sum(s, 1000, WeightSpec(squarefree_only=True), table_1k)
        assert a == b

    def test_rademacher_second_moment(self, table_1k):
        # E|M|^2 = sum over squarefree n <= T of 1/n
        from rmflab.numtheory import mobius

        T, R = 300, 3000
        target = math.fsum(1.0 / n for n in range(1, T + 1) if mobius(table_1k, n) != 0)
        seeds = rng.child_seeds(1414, R)
        eng = ReplicaEngine(RA, T, table_1k)
        vals = np.array([abs(eng.sums(int(s))[0]) ** 2 for s in seeds])
        stderr = vals.std(ddof=1) / math.sqrt(R)
        assert abs(vals.mean() - target) <= 4 * stderr

    def test_rademacher_values_real(self, table_1k):
        s = sample_rmf(RA, 100, 3, table_1k)
        z = partial_sum(s, 100, DEFAULT_SPEC, table_1k)
        assert z.imag == 0.0

    def test_brute_force_agreement(self, table_1k):
        from rmflab.numtheory import big_omega, factorize
        from rmflab.rmf import eval_f

        s = sample_rmf(ST, 200, 17, table_1k)
        spec = WeightSpec(rho=0.6, smooth_cutoff=7, sigma_shift=0.25)
        brute = complex(0)
        for n in range(1, 201):
            if any(p > 7 for p, _ in factorize(table_1k, n).pairs):
                continue
            brute += eval_f(s, n, table_1k) * 0.6 ** big_omega(table_1k, n) * n ** -0.75
        got = partial_sum(s, 200, spec, table_1k)
        assert got == pytest.approx(brute, abs=1e-10)

    def test_range_errors(self, table_1k):
        s = sample_rmf(ST, 100, 3, table_1k)
        with pytest.raises(RangeError):
            partial_sum(s, 101, DEFAULT_SPEC, table_1k)
        with pytest.raises(RangeError):
            partial_sum(s, 0, DEFAULT_SPEC, table_1k)


class TestTrajectory:
    def test_single_checkpoint(self, table_1k):
        s = sample_rmf(ST, 100, 5, table_1k)
        traj = trajectory(s, [1], table=table_1k)
        assert traj.values[0] == 1.0

    def test_matches_independent_partial_sums(self, table_1k):
        s = sample_rmf(ST, 1000, 5, table_1k)
        cps = [10, 100, 1000]
        traj = trajectory(s, cps, table=table_1k)
        for j, cp in enumerate(cps):
            direct = partial_sum(s, cp, DEFAULT_SPEC, table_1k)
            assert abs(traj.values[j] - direct) <= 1e-12 * max(1.0, abs(direct))

    def test_first_block_max(self, table_1k):
        s = sample_rmf(ST, 100, 5, table_1k)
        traj = trajectory(s, [1, 2], table=table_1k, with_block_maxima=True)
        assert traj.block_maxima[0] == pytest.approx(1 / math.sqrt(2), abs=1e-14)

    def test_block_max_bounds_increments(self, table_1k):
        s = sample_rmf(ST, 1000, 5, table_1k)
        cps = [1, 10, 100, 1000]
        traj = trajectory(s, cps, table=table_1k, with_block_maxima=True)
        for j in range(1, len(cps)):
            inc = abs(traj.values[j] - traj.values[j - 1])
            assert traj.block_maxima[j - 1] >= inc - 1e-12

    def test_unsorted_rejected(self, table_1k):
        s = sample_rmf(ST, 100, 5, table_1k)
        with pytest.raises(ConfigError):
            trajectory(s, [10, 10], table=table_1k)
        with pytest.raises(ConfigError):
            trajectory(s, [100, 10], table=table_1k)


class TestConvolutionIdentity:
    @pytest.mark.parametrize("y,T", [(2, 10), (2, 100), (3, 100), (5, 1000)])
    def test_residual_tiny(self, table_1k, y, T):
        for r in range(5):
            s = sample_rmf(ST, 1000, rng.child_seed(31337, r), table_1k)
            res = convolution_identity_residual(s, y, T, table_1k)
            lhs_scale = 1.0 + abs(partial_sum(s, T, DEFAULT_SPEC, table_1k))
            assert res <= 1e-9 * lhs_scale

    def test_y_equals_t_degenerate(self, table_1k):
        s = sample_rmf(ST, 100, 9, table_1k)
        assert convolution_identity_residual(s, 100, 100, table_1k) <= 1e-9

    def test_domain(self, table_1k):
        s = sample_rmf(ST, 100, 9, table_1k)
        with pytest.raises(DomainError):
            convolution_identity_residual(s, 1, 10, table_1k)
        with pytest.raises(DomainError):
            convolution_identity_residual(s, 20, 10, table_1k)


class TestEngineDeterminism:
    def test_engine_matches_sample_path(self, table_1k):
        # replica engine and sample_rmf + partial_sum realize the same draw
        for kind in (ST, RA):
            eng = ReplicaEngine(kind, 800, table_1k)
            for seed in (0, 7, 2**63):
                s = sample_rmf(kind, 800, seed, table_1k)
                assert eng.sums(seed)[0] == partial_sum(s, 800, DEFAULT_SPEC, table_1k)

    def test_clone_independence(self, table_1k):
        eng = ReplicaEngine(ST, 500, table_1k)
        c1 = eng.clone()
        a = eng.sums(42)[0]
        b = c1.sums(42)[0]
        assert a == b

    def test_multi_weight_common_randomness(self, table_1k):
        from rmflab.partial_sum import _weights

        w1 = _weights(table_1k, 500, DEFAULT_SPEC)
        w2 = _weights(table_1k, 500, WeightSpec(rho=0.5))
        eng = ReplicaEngine(ST, 500, table_1k, weights=[w1, w2])
        z1, z2 = eng.sums(7)
        solo = ReplicaEngine(ST, 500, table_1k, spec=WeightSpec(rho=0.5))
        assert solo.sums(7)[0] == z2
