import math

import numpy as np
import pytest
from scipy.special import gammaln

from toeplitz_spectra.errors import DomainError
from toeplitz_spectra.oracle import (
    CoherentState,
    FormComparison,
    WavePacket,
    hyperbolic_form_direct,
    hyperbolic_form_spectral,
    normalization_probe,
    parabolic_form_direct,
    parabolic_form_spectral,
    resolution_apply_check,
    resolution_kernel_parabolic,
    toeplitz_matrix_disk,
    unitarity_check_parabolic,
)
from toeplitz_spectra.quadrature import adaptive_integrate
from toeplitz_spectra.spectra import gamma_elliptic, gamma_hyperbolic, gamma_parabolic
from toeplitz_spectra.symbols import Geometry, SymbolSpec, builtin


class TestToeplitzMatrix:
    def test_identity_symbol(self):
        tm = toeplitz_matrix_disk(builtin("constant", Geometry.ELLIPTIC, value=1.0), 0.0, 8)
        assert tm.offdiag_max() < 1e-10
        assert np.max(np.abs(np.diag(tm.entries) - 1.0)) < 1e-10

    def test_indicator_diagonalizes(self):
        sym = builtin("indicator", Geometry.ELLIPTIC, lo=0.0, hi=0.5)
        tm = toeplitz_matrix_disk(sym, 0.0, 16)
        sf = gamma_elliptic(sym, 0.0, np.arange(16))
        assert tm.offdiag_max() < 1e-10
        rel = np.max(np.abs(np.diag(tm.entries) - sf.values) / np.abs(sf.values))
        assert rel <= 1e-8

    def test_point_mass_diagonal(self):
        sym = builtin("delta", Geometry.ELLIPTIC, loc=0.5)
        tm = toeplitz_matrix_disk(sym, 1.0, 12)
        sf = gamma_elliptic(sym, 1.0, np.arange(12))
        assert tm.offdiag_max() < 1e-12
        assert np.max(np.abs(np.diag(tm.entries) - sf.values)) <= 1e-10

    def test_non_radial_detector(self):
        tm = toeplitz_matrix_disk(lambda z: np.real(z), 0.0, 8)
        assert tm.offdiag_max() > 0.1

    def test_hermitian_for_real_symbols(self):
        tm = toeplitz_matrix_disk(lambda z: np.abs(z) ** 2 + np.real(z), 1.0, 10)
        assert tm.hermiticity_defect() <= 1e-9

    def test_size_domain(self):
        with pytest.raises(DomainError):
            toeplitz_matrix_disk(builtin("constant", Geometry.ELLIPTIC, value=1.0), 0.0, 65)
        with pytest.raises(DomainError):
            toeplitz_matrix_disk(builtin("constant", Geometry.PARABOLIC, value=1.0), 0.0, 8)


class TestParabolicForms:
    def test_unitarity_closed_forms(self):
        fc = unitarity_check_parabolic(0.0, 1.0, 1.0)
        assert fc.spectral == pytest.approx(0.25)
        assert fc.rel_err <= 1e-6
        fc = unitarity_check_parabolic(1.0, 1.0, 2.0)
        assert fc.spectral == pytest.approx(2.0 / 27.0)
        assert fc.rel_err <= 1e-6
        fc = unitarity_check_parabolic(2.5, 1.3, 0.7)
        assert fc.rel_err <= 1e-6

    def test_point_mass_value(self):
        direct, settings = parabolic_form_direct(
            builtin("delta", Geometry.PARABOLIC, loc=1.0), 0.0, 1.0, 1.0, tol=1e-9)
        assert direct.real == pytest.approx(0.0625, abs=1e-9)
        assert settings["converged"]

    def test_point_mass_spectral_closed_form(self):
        # spectral side carries the closed form
        # 2^(lam+1) Gamma(2 lam+3) / (Gamma(lam+1) (mu+nu+2)^(2 lam+3))
        for lam, mu, nu in ((0.0, 1.0, 1.0), (1.0, 1.0, 2.0)):
            sf = gamma_parabolic(builtin("delta", Geometry.PARABOLIC, loc=1.0), lam, [1.0])
            spectral = parabolic_form_spectral(sf, lam, mu, nu)
            closed = 2.0 ** (lam + 1.0) * math.exp(
                gammaln(2.0 * lam + 3.0) - gammaln(lam + 1.0)) / (mu + nu + 2.0) ** (2.0 * lam + 3.0)
            assert spectral == pytest.approx(closed, rel=1e-9)

    def test_indicator_cross_oracle(self):
        sym = builtin("indicator", Geometry.PARABOLIC, lo=0.0, hi=1.0)
        direct, _ = parabolic_form_direct(sym, 0.0, 1.0, 2.0, tol=1e-8)
        sf = gamma_parabolic(sym, 0.0, [1.0])
        spectral = parabolic_form_spectral(sf, 0.0, 1.0, 2.0)
        assert abs(direct - spectral) / abs(spectral) <= 1e-5

    def test_bad_parameters(self):
        with pytest.raises(DomainError):
            parabolic_form_direct(builtin("constant", Geometry.PARABOLIC, value=1.0), 0.0, -1.0, 1.0)
        with pytest.raises(DomainError):
            CoherentState(0.0)


class TestHyperbolicForms:
    def test_unitarity(self):
        one = builtin("constant", Geometry.HYPERBOLIC, value=1.0)
        for lam in (0.0, 1.0):
            direct, settings = hyperbolic_form_direct(one, lam, WavePacket(0.0, 1.0), tol=1e-7)
            assert direct == pytest.approx(1.0, abs=1e-6)
            assert settings["converged"]

    def test_indicator_against_closed_form(self):
        # gamma of chi_(0,pi/2) at lam=0 is 1/(1+e^(-pi eta)); the packet form
        # is its |g|^2 average
        packet = WavePacket(1.0, 0.5)
        sym = builtin("indicator", Geometry.HYPERBOLIC, lo=0.0, hi=math.pi / 2.0)
        direct, _ = hyperbolic_form_direct(sym, 0.0, packet, tol=1e-7)
        res = adaptive_integrate(
            lambda e: packet.amplitude(e) ** 2 / (1.0 + np.exp(-math.pi * e)),
            packet.eta0 - 12 * packet.sigma, packet.eta0 + 12 * packet.sigma, tol=1e-12)
        assert abs(direct - res.value) / abs(res.value) <= 1e-4

    def test_point_mass_cross_oracle(self):
        sym = builtin("delta", Geometry.HYPERBOLIC, loc=math.pi / 2.0)
        packet = WavePacket(2.0, 0.5)
        direct, _ = hyperbolic_form_direct(sym, 1.0, packet, tol=1e-7)
        sf = gamma_hyperbolic(sym, 1.0, [0.0])
        spectral = hyperbolic_form_spectral(sf, packet)
        assert abs(direct - spectral) / abs(spectral) <= 1e-4

    def test_narrow_packet_localizes(self):
        sym = builtin("indicator", Geometry.HYPERBOLIC, lo=0.0, hi=math.pi / 2.0)
        packet = WavePacket(2.0, 0.05)
        direct, _ = hyperbolic_form_direct(sym, 0.0, packet, tol=1e-6)
        gamma_at = gamma_hyperbolic(sym, 0.0, [2.0]).values[0].real
        assert abs(direct - gamma_at) <= 1e-2

    def test_packet_validation(self):
        with pytest.raises(DomainError):
            WavePacket(0.0, -1.0)


class TestResolutionKernel:
    def test_two_representations_agree(self):
        rng = np.random.default_rng(13)
        for _ in range(25):
            lam = float(rng.uniform(-0.5, 3.0))
            eta = float(rng.uniform(0.05, 20.0))
            z = complex(rng.uniform(-2, 2), rng.uniform(0.2, 3.0))
            zeta = complex(rng.uniform(-2, 2), rng.uniform(0.2, 3.0))
            star = resolution_kernel_parabolic(lam, eta, z, zeta, form="star")
            gam = resolution_kernel_parabolic(lam, eta, z, zeta, form="gamma")
            assert abs(star - gam) <= 1e-10 * max(1.0, abs(gam))

    def test_apply_matches_closed_form(self):
        fc = resolution_apply_check(0.0, 2.0, 1.0, 1j, tol=1e-6)
        assert fc.rel_err <= 1e-5

    def test_limits(self):
        small = resolution_apply_check(0.0, 1e-4, 1.0, 1j, tol=1e-8)
        assert abs(small.direct) <= 1e-7
        big = resolution_apply_check(0.0, 100.0, 1.0, 1j, tol=1e-7)
        fmu = math.sqrt(math.gamma(2.0)) * 0.25
        assert abs(big.direct - fmu) / abs(fmu) <= 1e-6

    def test_domain(self):
        with pytest.raises(DomainError):
            resolution_kernel_parabolic(0.0, -1.0, 1j, 1j)
        with pytest.raises(DomainError):
            resolution_kernel_parabolic(0.0, 1.0, 1.0 + 0.0j, 1j)
        with pytest.raises(DomainError):
            resolution_kernel_parabolic(0.0, 1.0, 1j, 1j, form="series")


class TestNormalizationProbe:
    def test_degenerate_lambda_zero(self):
        probe = normalization_probe(0.0)
        # Gamma(1) = 1: both candidates coincide, either matches
        assert probe.comparisons["1/Gamma(lam+1)"].rel_err <= 1e-4

    def test_discriminates_at_generic_lambda(self):
        probe = normalization_probe(2.5)
        assert probe.winner == "1/Gamma(lam+1)"
        assert probe.comparisons["1/Gamma(lam+1)"].rel_err <= 1e-6
        assert probe.comparisons["1/sqrt(Gamma(lam+1))"].rel_err > 1e-3


class TestFormComparison:
    def test_error_fields(self):
        fc = FormComparison.of(1.0 + 0.0j, 1.0 + 1e-8j, {"note": "x"})
        assert fc.abs_err == pytest.approx(1e-8, rel=1e-6)
        assert fc.rel_err == pytest.approx(1e-8, rel=1e-6)
        assert fc.settings == {"note": "x"}
