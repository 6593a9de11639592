import cmath
import dataclasses
import math

import numpy as np
import pytest

from rmflab.errors import DomainError
from rmflab.rmf import RmfKind, sample_rmf
from rmflab.zetamodel import (
    CltResult,
    EulerProductSpec,
    QuadratureSpec,
    euler_product_eval,
    parseval_residual,
    quadrature_identity_residual,
    sigma_T,
    sigma_T_clt_experiment,
    sigma_T_variance_exact,
    _sigma_t_coefficients,
)

ST = RmfKind.STEINHAUS


def zeroed(sample):
    s = dataclasses.replace(sample, theta=np.zeros_like(sample.theta))
    s._dense_theta = None
    return s


class TestEulerProduct:
    def test_single_factor_f_one(self, table_1k):
        s = zeroed(sample_rmf(ST, 100, 3, table_1k))
        val = euler_product_eval(s, EulerProductSpec(2, complex(1.0, 0.0)))
        assert val == pytest.approx(2.0, rel=1e-14)

    def test_single_factor_general(self, table_1k):
        s = sample_rmf(ST, 100, 3, table_1k)
        th2 = float(s.theta[0])
        for sigma in (0.3, 1.0, 2.5):
            val = euler_product_eval(s, EulerProductSpec(2, complex(sigma, 0.0)))
            expect = 1.0 / (1.0 - cmath.exp(1j * th2) * 2.0**-sigma)
            assert val == pytest.approx(expect, rel=1e-13)

    def test_log_route_matches_direct_product(self, table_1k):
        s = sample_rmf(ST, 1000, 8, table_1k)
        T = 1000
        sc = complex(0.5 + 2 * math.log(math.log(T)) / math.log(T), 0.7)
        spec = EulerProductSpec(100, sc)
        via_logs = euler_product_eval(s, spec)
        direct = complex(1.0)
        for i, p in enumerate(s.primes[s.primes <= 100]):
            fp = cmath.exp(1j * float(s.theta[i]))
            direct *= 1.0 / (1.0 - fp * complex(p) ** -sc)
        assert abs(via_logs - direct) <= 1e-12 * abs(direct)

    def test_include_f_false_equals_zero_angles(self, table_1k):
        s = zeroed(sample_rmf(ST, 500, 3, table_1k))
        a = euler_product_eval(s, EulerProductSpec(499, complex(0.6, 1.0), True))
        b = euler_product_eval(s, EulerProductSpec(499, complex(0.6, 1.0), False))
        assert a == b

    def test_domain(self, table_1k):
        s = sample_rmf(ST, 100, 3, table_1k)
        with pytest.raises(DomainError):
            euler_product_eval(s, EulerProductSpec(10, complex(-0.5, 0.0)))
        with pytest.raises(DomainError):
            euler_product_eval(s, EulerProductSpec(1, complex(1.0, 0.0)))


class TestParseval:
    def test_single_term_analytic(self):
        for sigma in (0.25, 0.5, 1.0, 2.0):
            assert parseval_residual({1: 1.0}, sigma) <= 1e-9

    def test_battery_random_coefficients(self):
        g = np.random.default_rng(99)
        for size in (1, 2, 5, 20):
            coeffs = {n: complex(g.normal(), g.normal()) for n in range(1, size + 1)}
            for sigma in (0.25, 0.5, 1.0, 2.0):
                assert parseval_residual(coeffs, sigma) <= 1e-6, (size, sigma)

    def test_sparse_support(self):
        coeffs = {1: 1 + 2j, 7: -0.5j, 100: 3.0}
        assert parseval_residual(coeffs, 0.5) <= 1e-6

    def test_lhs_value_single_term(self):
        # LHS = |a|^2 / (2 sigma): verified through the residual with an
        # independently computed RHS; here just the domain errors
        with pytest.raises(DomainError):
            parseval_residual({1: 1.0}, 0.0)
        with pytest.raises(DomainError):
            parseval_residual({}, 1.0)
        with pytest.raises(DomainError):
            parseval_residual({0: 1.0}, 1.0)


class TestSigmaT:
    def test_single_prime_closed_form(self, table_1k):
        s = sample_rmf(ST, 2, 5, table_1k)
        T = 1_000_000
        # cut the sample to p = 2 only; formula collapses to one term
        lT, l2 = math.log(T), math.log(2)
        coef = 2 * 2 ** -(0.5 + 2 * math.log(lT) / lT) * (lT / l2) * math.sin(l2 / (2 * lT))
        got = _sigma_t_coefficients(np.array([2]), T)
        assert float(got[0]) == pytest.approx(coef, rel=1e-14)

    def test_sigma_t_value(self, table_1k):
        s = sample_rmf(ST, 1000, 5, table_1k)
        val = sigma_T(s, 1000)
        c = _sigma_t_coefficients(s.primes, 1000)
        expect = float(np.dot(c, np.cos(s.theta)))
        assert val == pytest.approx(expect, rel=1e-12)

    def test_variance_single_prime(self):
        c = _sigma_t_coefficients(np.array([2]), 10**6)
        # half the squared coefficient
        assert 0.5 * float(c[0]) ** 2 == pytest.approx(
            2 * 2 ** -(1 + 4 * math.log(math.log(10**6)) / math.log(10**6))
            * (math.log(10**6) / math.log(2)) ** 2
            * math.sin(math.log(2) / (2 * math.log(10**6))) ** 2,
            rel=1e-12,
        )

    def test_mean_zero(self, table_10k):
        res = sigma_T_clt_experiment(10_000, 2000, 17, table_10k, parallel_width=2)
        assert abs(res.sample_mean) <= 4 * math.sqrt(res.predicted_var / 2000)

    def test_sample_variance_band(self, table_10k):
        res = sigma_T_clt_experiment(10_000, 2000, 17, table_10k, parallel_width=2)
        band = 4 * math.sqrt(2.0 / 2000) * res.predicted_var
        assert abs(res.sample_var - res.predicted_var) <= band

    def test_determinism(self, table_10k):
        a = sigma_T_clt_experiment(10_000, 500, 3, table_10k, parallel_width=1)
        b = sigma_T_clt_experiment(10_000, 500, 3, table_10k, parallel_width=4)
        assert a == b

    def test_domain(self, table_1k):
        s = sample_rmf(ST, 1000, 5, table_1k)
        with pytest.raises(DomainError):
            sigma_T(s, 8)
        from rmflab.rmf import RmfKind as K

        r = sample_rmf(K.RADEMACHER, 1000, 5, table_1k)
        with pytest.raises(DomainError):
            sigma_T(r, 1000)


class TestWindowIdentity:
    def test_theta_right_angle(self):
        assert quadrature_identity_residual(100, 2, math.pi / 2) <= 1e-10

    def test_p2_theta0(self):
        assert quadrature_identity_residual(100, 2, 0.0) <= 1e-10

    @pytest.mark.parametrize("p", [2, 3, 97])
    @pytest.mark.parametrize("theta", [0.0, 0.7, 2.0, 5.5])
    def test_grid(self, p, theta):
        assert quadrature_identity_residual(500, p, theta) <= 1e-10

    def test_small_prime_large_t_limit(self):
        # closed form tends to cos(theta) as T grows with p fixed
        theta = 0.9
        lp = math.log(2)
        vals = []
        for T in (10**3, 10**6, 10**12):
            lT = math.log(T)
            vals.append(2 * (lT / lp) * math.sin(lp / (2 * lT)) * math.cos(theta))
        target = math.cos(theta)
        errs = [abs(v - target) for v in vals]
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] <= target * (lp / math.log(10**12)) ** 2
