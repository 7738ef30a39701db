import math
import threading

import numpy as np
import pytest
from scipy.special import gammaln, roots_jacobi

from toeplitz_spectra.errors import DomainError
from toeplitz_spectra.quadrature import (
    IntegrationResult,
    adaptive_integrate,
    build_generalized_laguerre,
    build_jacobi01,
    build_legendre01,
    log_axis_integrate,
)


def log_beta(a, b):
    return gammaln(a) + gammaln(b) - gammaln(a + b)


class TestJacobi01:
    def test_monomial_exactness(self):
        rule = build_jacobi01(8, 0.0)
        assert np.sum(rule.weights * rule.nodes**5) == pytest.approx(1.0 / 6.0, abs=1e-14)

    def test_mass(self):
        rule = build_jacobi01(8, 1.5)
        assert np.sum(rule.weights) == pytest.approx(0.4, abs=1e-12)

    def test_beta_moments(self):
        rule = build_jacobi01(16, 2.5)
        for m in range(32):
            expect = math.exp(log_beta(m + 1.0, 3.5))
            got = float(np.sum(rule.weights * rule.nodes**m))
            assert got == pytest.approx(expect, rel=1e-11)

    def test_invariants_for_every_rule(self):
        for n in (1, 2, 8, 64, 512):
            for lam in (-0.5, 0.0, 2.5, 40.0):
                rule = build_jacobi01(n, lam)
                assert np.all(rule.weights > 0)
                assert np.all(np.diff(rule.nodes) > 0)
                assert 0.0 < rule.nodes[0] and rule.nodes[-1] < 1.0
                assert np.sum(rule.weights) == pytest.approx(1.0 / (lam + 1.0), abs=1e-12)

    def test_order_domain(self):
        with pytest.raises(DomainError):
            build_jacobi01(0, 0.0)
        with pytest.raises(DomainError):
            build_jacobi01(513, 0.0)
        with pytest.raises(DomainError):
            build_jacobi01(8, -1.0)


class TestGeneralizedLaguerre:
    def test_first_moment(self):
        rule = build_generalized_laguerre(8, 0.0)
        assert np.sum(rule.weights * rule.nodes) == pytest.approx(1.0, rel=1e-13)

    def test_mass(self):
        rule = build_generalized_laguerre(8, 1.0)
        assert np.sum(rule.weights) == pytest.approx(1.0, rel=1e-12)

    def test_moments(self):
        rule = build_generalized_laguerre(24, 2.5)
        for m in range(48):
            expect = math.exp(gammaln(m + 3.5))
            got = float(np.sum(rule.weights * rule.nodes**m))
            assert got == pytest.approx(expect, rel=1e-10)

    def test_invariants(self):
        for n in (1, 8, 64, 256):
            for lam in (-0.5, 0.0, 2.5):
                rule = build_generalized_laguerre(n, lam)
                assert np.all(rule.weights > 0)
                assert np.all(np.diff(rule.nodes) > 0)
                assert rule.nodes[0] > 0.0
                assert np.sum(rule.weights) == pytest.approx(
                    math.exp(gammaln(lam + 1.0)), rel=1e-10)


class TestRandomExactness:
    def test_random_polynomials(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            n = int(rng.integers(2, 40))
            lam = float(rng.uniform(-0.8, 5.0))
            deg = int(rng.integers(0, 2 * n))  # <= 2n - 1
            coeffs = rng.standard_normal(deg + 1)
            rule = build_jacobi01(n, lam)
            got = float(np.sum(rule.weights * np.polyval(coeffs, rule.nodes)))
            expect = sum(
                c * math.exp(log_beta(deg - i + 1.0, lam + 1.0))
                for i, c in enumerate(coeffs)
            )
            assert got == pytest.approx(expect, rel=2e-11, abs=1e-12)

    def test_refinement_shrinks_error(self):
        # smooth integrand: error decreases monotonically along the ladder
        big = build_jacobi01(64, 0.5)
        truth = float(np.sum(big.weights * np.exp(big.nodes)))
        errs = []
        for n in (2, 4, 8, 16):
            rule = build_jacobi01(n, 0.5)
            errs.append(abs(float(np.sum(rule.weights * np.exp(rule.nodes))) - truth))
        assert all(e2 < e1 for e1, e2 in zip(errs[:-1], errs[1:]))


class TestAdaptive:
    def test_constant(self):
        res = adaptive_integrate(lambda x: np.ones_like(x), 0.0, 1.0, 1e-12)
        assert res.value == pytest.approx(1.0, abs=1e-13)
        assert res.converged

    def test_oscillatory_closed_form(self):
        res = adaptive_integrate(lambda x: np.sin(50.0 * x), 0.0, 1.0, 1e-12)
        assert res.value == pytest.approx((1.0 - math.cos(50.0)) / 50.0, abs=1e-12)

    def test_endpoint_singularity_vs_jacobi_rule(self):
        # int_0^pi sin^(-1/2) = 2 int_0^(pi/2) sin^(-1/2); cross-check against
        # a high-order symmetric Gauss-Jacobi rule in x = cos(theta)
        half = adaptive_integrate(lambda th: np.sin(th) ** -0.5, 0.0, math.pi / 2.0, 1e-11)
        assert half.converged
        x, w = roots_jacobi(200, -0.75, -0.75)
        whole = float(np.sum(w))  # integrand (1-x^2)^(-3/4) equals the weight
        assert 2.0 * half.value == pytest.approx(whole, rel=1e-10)

    def test_interior_spike_with_breakpoints(self):
        width = 1e-5
        res = adaptive_integrate(
            lambda x: np.exp(-((x - 0.3) / width) ** 2 / 2.0) / (width * math.sqrt(2 * math.pi)),
            0.0, 1.0, 1e-9, breakpoints=(0.3 - 6 * width, 0.3, 0.3 + 6 * width))
        assert res.value == pytest.approx(1.0, rel=1e-8)

    def test_complex_integrand(self):
        res = adaptive_integrate(lambda x: np.exp(1j * x), 0.0, 1.0, 1e-12)
        expect = (np.exp(1j) - 1.0) / 1j
        assert res.value == pytest.approx(expect, abs=1e-12)

    def test_budget_flag(self):
        res = adaptive_integrate(lambda x: np.abs(np.sin(1.0 / x)), 1e-12, 1.0, 1e-14,
                                 max_panels=50)
        assert not res.converged
        assert res.panels >= 50

    def test_result_unpacks(self):
        value, err = adaptive_integrate(lambda x: x, 0.0, 1.0, 1e-12)
        assert value == pytest.approx(0.5, abs=1e-14)
        assert err >= 0.0

    def test_scalar_function_mode(self):
        res = adaptive_integrate(lambda x: x * x, 0.0, 1.0, 1e-12, vectorized=False)
        assert res.value == pytest.approx(1.0 / 3.0, abs=1e-13)

    def test_bad_bounds(self):
        with pytest.raises(DomainError):
            adaptive_integrate(lambda x: x, 1.0, 0.0, 1e-10)
        with pytest.raises(DomainError):
            adaptive_integrate(lambda x: x, 0.0, 1.0, 0.0)


class TestLogAxis:
    def test_constant(self):
        res = log_axis_integrate(lambda s: np.ones_like(s), 0.0, 1.0, 1e-12)
        assert res.value == pytest.approx(1.0, abs=1e-13)

    def test_gaussian(self):
        res = log_axis_integrate(lambda s: np.exp(-(s**2)), -8.0, 8.0, 1e-12)
        assert res.value == pytest.approx(math.sqrt(math.pi), rel=1e-10)


class TestCache:
    def test_copy_on_read(self):
        a = build_jacobi01(8, 0.0)
        b = build_jacobi01(8, 0.0)
        a.nodes[0] = -1.0  # corrupting one copy must not leak into the cache
        assert b.nodes[0] > 0.0
        c = build_jacobi01(8, 0.0)
        assert c.nodes[0] == b.nodes[0]

    def test_concurrent_construction(self):
        results = []
        errors = []

        def worker():
            try:
                rule = build_generalized_laguerre(48, 1.25)
                results.append(rule.nodes.copy())
            except Exception as exc:  # noqa: BLE001
                errors.append(exc)

        threads = [threading.Thread(target=worker) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors
        assert all(np.array_equal(results[0], r) for r in results)
