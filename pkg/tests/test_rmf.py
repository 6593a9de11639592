import cmath
import math

import numpy as np
import pytest

from rmflab import rng
from rmflab.errors import RangeError
from rmflab.rmf import (
    RmfKind,
    eval_f,
    gy_support,
    restricted_variants,
    sample_rmf,
)

ST = RmfKind.STEINHAUS
RA = RmfKind.RADEMACHER


class TestSampling:
    def test_determinism(self, table_1k):
        a = sample_rmf(ST, 10, 12345, table_1k)
        b = sample_rmf(ST, 10, 12345, table_1k)
        assert np.array_equal(a.theta, b.theta)

    def test_limit_extension_stability(self, table_1k):
        small = sample_rmf(ST, 10, 999, table_1k)
        big = sample_rmf(ST, 100, 999, table_1k)
        assert np.array_equal(small.theta, big.theta[: len(small.theta)])
        small_r = sample_rmf(RA, 10, 999, table_1k)
        big_r = sample_rmf(RA, 100, 999, table_1k)
        assert np.array_equal(small_r.signs, big_r.signs[: len(small_r.signs)])

    def test_angle_range(self, table_1k):
        s = sample_rmf(ST, 1000, 4, table_1k)
        assert np.all((0 <= s.theta) & (s.theta < 2 * math.pi))

    def test_signs_pm_one(self, table_1k):
        s = sample_rmf(RA, 1000, 4, table_1k)
        assert set(np.unique(s.signs)) <= {-1, 1}

    def test_mean_cos_law_of_large_numbers(self, table_1m):
        s = sample_rmf(ST, 10**6, 2024, table_1m)
        n = len(s.theta)
        assert abs(float(np.mean(np.cos(s.theta)))) <= 4.0 / math.sqrt(n)


class TestEvalF:
    def test_one(self, table_1k):
        s = sample_rmf(ST, 100, 7, table_1k)
        assert eval_f(s, 1, table_1k) == 1.0

    def test_unit_modulus(self, table_1k):
        s = sample_rmf(ST, 1000, 7, table_1k)
        for n in (2, 12, 97, 360, 1000):
            assert abs(abs(eval_f(s, n, table_1k)) - 1.0) < 1e-12

    def test_steinhaus_twelve(self, table_1k):
        s = sample_rmf(ST, 100, 7, table_1k)
        th2 = float(s.dense_theta[2])
        th3 = float(s.dense_theta[3])
        expect = cmath.exp(1j * (2 * th2 + th3))
        assert eval_f(s, 12, table_1k) == pytest.approx(expect, abs=1e-12)

    def test_rademacher_nonsquarefree_zero(self, table_1k):
        s = sample_rmf(RA, 100, 7, table_1k)
        assert eval_f(s, 12, table_1k) == 0.0
        assert eval_f(s, 4, table_1k) == 0.0
        assert eval_f(s, 30, table_1k) in (1.0, -1.0)

    def test_out_of_range(self, table_1k):
        s = sample_rmf(ST, 100, 7, table_1k)
        with pytest.raises(RangeError):
            eval_f(s, 101, table_1k)

    def test_complete_multiplicativity(self, table_10k):
        s = sample_rmf(ST, 10_000, 11, table_10k)
        pairs = [(2, 3), (4, 9), (12, 35), (97, 101), (100, 100), (17, 588)]
        for m, n in pairs:
            lhs = eval_f(s, m * n, table_10k)
            rhs = eval_f(s, m, table_10k) * eval_f(s, n, table_10k)
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_orthogonality_monte_carlo(self, table_1k):
        # E f(m) conj(f(n)) -> 1_{m=n}, 4/sqrt(R) band over all m, n <= 30
        R = 3000
        seeds = rng.child_seeds(505, R)
        acc = np.zeros((30, 30), dtype=np.complex128)
        for r in range(R):
            s = sample_rmf(ST, 30, int(seeds[r]), table_1k)
            f = np.array([eval_f(s, n, table_1k) for n in range(1, 31)])
            acc += np.outer(f, f.conj())
        acc /= R
        band = 4.0 / math.sqrt(R)
        for i in range(30):
            for j in range(30):
                target = 1.0 if i == j else 0.0
                assert abs(acc[i, j] - target) <= band, (i + 1, j + 1)


class TestRestrictedVariants:
    def test_fy_on_rough_numbers(self, table_1k):
        s = sample_rmf(ST, 1000, 13, table_1k)
        v = restricted_variants(s, 5, table_1k)
        for n in (7, 11, 77, 121):  # all prime factors > 5
            assert v.f_y(n) == pytest.approx(eval_f(s, n, table_1k), abs=1e-12)
        for n in (2, 10, 15, 100):
            assert v.f_y(n) == 0.0

    def test_gy_values(self, table_1k):
        s = sample_rmf(ST, 1000, 13, table_1k)
        v = restricted_variants(s, 5, table_1k)
        for p in (2, 3, 5):
            assert v.g_y(p) == pytest.approx(-eval_f(s, p, table_1k), abs=1e-15)
            assert v.g_y(p * p) == 0.0
        assert v.g_y(7) == 0.0

    def test_hy_smooth_support(self, table_1k):
        s = sample_rmf(ST, 1000, 13, table_1k)
        v = restricted_variants(s, 5, table_1k)
        assert v.h_y(30) == pytest.approx(eval_f(s, 30, table_1k), abs=1e-15)
        assert v.h_y(7) == 0.0

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_dirichlet_convolution_identities(self, table_1k, seed):
        # f = h_y * f_y and f_y = g_y * f, exactly on n <= 1000
        s = sample_rmf(ST, 1000, seed, table_1k)
        y = 3
        v = restricted_variants(s, y, table_1k)
        for n in range(1, 1001, 7):
            divisors = [d for d in range(1, n + 1) if n % d == 0]
            conv_h_fy = sum(v.h_y(d) * v.f_y(n // d) for d in divisors)
            assert conv_h_fy == pytest.approx(eval_f(s, n, table_1k), abs=1e-10)
            conv_g_f = sum(v.g_y(d) * eval_f(s, n // d, table_1k) for d in divisors)
            assert conv_g_f == pytest.approx(v.f_y(n), abs=1e-10)

    def test_gy_support_size(self, table_1k):
        s = sample_rmf(ST, 1000, 21, table_1k)
        ns, vals = gy_support(s, 5, table_1k)
        assert len(ns) == 8  # subsets of {2, 3, 5}
        assert set(ns.tolist()) == {1, 2, 3, 5, 6, 10, 15, 30}
        lk = dict(zip(ns.tolist(), vals))
        v = restricted_variants(s, 5, table_1k)
        for n, val in lk.items():
            assert val == pytest.approx(v.g_y(n), abs=1e-12)
