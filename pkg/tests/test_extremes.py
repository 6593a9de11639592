import math

import numpy as np
import pytest

from rmflab.errors import CapacityError, DomainError
from rmflab.extremes import (
    as_growth_experiment,
    fgh_threshold,
    growth_checkpoints,
    max_of_samples,
    replica_abs,
    short_threshold,
    trial_size,
)
from rmflab.rmf import RmfKind

ST = RmfKind.STEINHAUS


class TestThresholds:
    def test_fgh_substitution(self):
        T = math.exp(math.e)  # log T = e, log log T = 1
        assert fgh_threshold(T, 0.0) == pytest.approx(math.exp(math.sqrt(math.e / 2)), rel=1e-12)
        got = fgh_threshold(10**4, 0.1)
        lT = math.log(10**4)
        assert got == pytest.approx(math.exp(math.sqrt(0.6 * lT * math.log(lT))), rel=1e-12)

    def test_short_substitution(self):
        assert short_threshold(100, 0.0) == pytest.approx(math.log(100), rel=1e-15)

    def test_domains(self):
        with pytest.raises(DomainError):
            fgh_threshold(10**4, -0.6)
        with pytest.raises(DomainError):
            short_threshold(10**4, -1.5)
        with pytest.raises(DomainError):
            fgh_threshold(2, 0.0)


class TestMaxOfSamples:
    def test_trial_sizes(self):
        assert trial_size(2, "short") == 1  # round(log 2)
        assert trial_size(1000, "full") == round(1000 * math.log(1000))

    def test_short_t2_single_replica(self, table_1k):
        trial = max_of_samples(ST, 2, "short", 77, table_1k)
        assert trial.N == 1
        assert trial.max_abs == replica_abs(ST, 2, 77, 0, table_1k)

    def test_width_independence(self, table_1k):
        a = max_of_samples(ST, 200, "full", 404, table_1k, parallel_width=1)
        b = max_of_samples(ST, 200, "full", 404, table_1k, parallel_width=8)
        assert a.max_abs == b.max_abs
        assert a.argmax_replica == b.argmax_replica

    def test_nested_prefix_monotone(self, table_1k):
        full = max_of_samples(ST, 300, "full", 11, table_1k)
        half = max_of_samples(ST, 300, "full", 11, table_1k, n_samples=full.N // 2)
        quarter = max_of_samples(ST, 300, "full", 11, table_1k, n_samples=full.N // 4)
        assert quarter.max_abs <= half.max_abs <= full.max_abs

    def test_max_dominates_spot_replicas(self, table_1k):
        trial = max_of_samples(ST, 150, "full", 5, table_1k)
        for idx in (0, trial.N // 2, trial.N - 1):
            assert trial.max_abs >= replica_abs(ST, 150, 5, idx, table_1k)

    def test_argmax_is_attained(self, table_1k):
        trial = max_of_samples(ST, 150, "full", 5, table_1k)
        assert trial.max_abs == replica_abs(ST, 150, 5, trial.argmax_replica, table_1k)

    def test_capacity(self, table_1k):
        with pytest.raises(CapacityError):
            max_of_samples(ST, 20_000, "full", 1, table_1k)


class TestGrowthExperiment:
    def test_checkpoint_grid(self):
        pts = growth_checkpoints(10**6)
        assert pts[0] == 16
        assert pts[-1] == 10**6
        assert np.all(np.diff(pts) > 0)

    def test_single_point_sup(self, table_1k):
        stats = as_growth_experiment(ST, [3], 16, 0.25, 1.0, table_1k)[0]
        # only T = 16 contributes, so both sups sit at the same point
        assert stats.arg_upper == 16 and stats.arg_lower == 16
        lT = math.log(16)
        ratio = stats.sup_upper / stats.sup_lower
        expect = math.exp(1.0 * math.sqrt(math.log(lT))) / lT ** (0.5 + 0.25)
        assert ratio == pytest.approx(expect, rel=1e-12)

    def test_monotone_in_epsilon(self, table_1k):
        sups = []
        for eps in (0.1, 0.25, 0.5, 1.0, 3.0):
            stats = as_growth_experiment(ST, [9], 1000, eps, 1.0, table_1k)[0]
            sups.append(stats.sup_upper)
        assert all(a >= b for a, b in zip(sups, sups[1:]))

    def test_monotone_in_L(self, table_1k):
        sups = []
        for L in (0.5, 1.0, 2.0):
            stats = as_growth_experiment(ST, [9], 1000, 0.25, L, table_1k)[0]
            sups.append(stats.sup_lower)
        assert all(a >= b for a, b in zip(sups, sups[1:]))

    def test_determinism(self, table_1k):
        a = as_growth_experiment(ST, [1, 2], 1000, 0.25, 1.0, table_1k)
        b = as_growth_experiment(ST, [1, 2], 1000, 0.25, 1.0, table_1k)
        for x, y in zip(a, b):
            assert x.sup_upper == y.sup_upper
            assert np.array_equal(x.block_maxima, y.block_maxima)

    def test_domains(self, table_1k):
        with pytest.raises(DomainError):
            as_growth_experiment(ST, [1], 1000, -0.1, 1.0, table_1k)
        with pytest.raises(DomainError):
            as_growth_experiment(ST, [1], 1000, 0.1, 0.0, table_1k)
