import math

import numpy as np
import pytest

from framecert import (
    KernelDomainError,
    KernelQuery,
    Scale,
    inverse_transform,
    kernel0_freq,
    kernel0_time,
    kernel_sum,
)
from framecert.kernellab import inverse_transform_grid


class TestKernelQuery:
    def test_validation(self):
        with pytest.raises(KernelDomainError):
            KernelQuery(0.0, 1.0, j_range=(3, -3))
        with pytest.raises(KernelDomainError):
            KernelQuery(0.0, 1.0, k_truncation=0)
        q = KernelQuery(0.25, -0.5)
        assert q.tol == 1e-10


class TestInverseTransform:
    def test_synthesizer_time_values(self, catalog):
        # The time-domain synthesizer is (1/sqrt(2 pi)) (1 - x^2) e^{-x^2/2}:
        # value 1/sqrt(2 pi) at 0 and a zero at x = 1.
        v0 = inverse_transform(catalog.psi_hat, 0.0)
        assert v0 == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), abs=1e-10)
        assert abs(inverse_transform(catalog.psi_hat, 1.0)) < 1e-8

    def test_analyzer_self_convergence(self, catalog):
        a = inverse_transform(catalog.phi_hat, 0.0, tol=1e-8)
        b = inverse_transform(catalog.phi_hat, 0.0, tol=1e-12)
        assert a == pytest.approx(b, abs=1e-8)

    def test_grid_matches_scalar(self, catalog):
        xs = np.linspace(-2.0, 2.0, 9)
        grid = inverse_transform_grid(catalog.psi_hat, xs, tol=1e-12)
        for x, v in zip(xs, grid):
            assert v == pytest.approx(
                inverse_transform(catalog.psi_hat, float(x), tol=1e-12),
                abs=1e-10)

    def test_zero_function(self, catalog):
        z = Scale(catalog.bump, 0.0)
        assert inverse_transform(z, 0.3) == 0.0
        assert np.all(inverse_transform_grid(z, np.linspace(-1, 1, 5)) == 0.0)


class TestKernel0:
    def test_dual_routes_agree(self, catalog):
        r_t = kernel0_time(catalog.mu_hat, catalog.phi_hat, 0.3, -0.4, 1.0,
                           k_truncation=80, tol=1e-12)
        r_f = kernel0_freq(catalog.mu_hat, catalog.phi_hat, 0.3, -0.4, 1.0,
                           l_truncation=4, tol=1e-11)
        assert r_t.value == pytest.approx(r_f.value,
                                          abs=1e-8 + r_t.tail_bound)

    def test_point_symmetry(self, catalog):
        # K0(x, y) = K0(-x, -y) because the transforms are even
        a = kernel0_freq(catalog.mu_hat, catalog.phi_hat, 0.7, 0.2, 1.0,
                         l_truncation=4, tol=1e-11)
        b = kernel0_freq(catalog.mu_hat, catalog.phi_hat, -0.7, -0.2, 1.0,
                         l_truncation=4, tol=1e-11)
        assert a.value == pytest.approx(b.value, abs=1e-10)

    def test_lattice_periodicity(self, catalog):
        # shifting both arguments by the translation step leaves K0 unchanged
        a = kernel0_time(catalog.mu_hat, catalog.phi_hat, 0.3, -0.1, 1.0,
                         k_truncation=80, tol=1e-12)
        b = kernel0_time(catalog.mu_hat, catalog.phi_hat, 1.3, 0.9, 1.0,
                         k_truncation=80, tol=1e-12)
        assert a.value == pytest.approx(
            b.value, abs=1e-10 + a.tail_bound + b.tail_bound)

    def test_imaginary_part_small(self, catalog):
        r = kernel0_freq(catalog.mu_hat, catalog.phi_hat, 0.45, -0.8, 1.0,
                         l_truncation=4, tol=1e-11)
        assert abs(r.imag) < 1e-8

    def test_time_remainder_signal(self, catalog):
        with pytest.raises(KernelDomainError):
            kernel0_time(catalog.mu_hat, catalog.phi_hat, 0.0, 0.5, 1.0,
                         k_truncation=2, max_remainder=1e-12)

    def test_b_validation(self, catalog):
        with pytest.raises(KernelDomainError):
            kernel0_time(catalog.mu_hat, catalog.phi_hat, 0.0, 0.5, 0.0)
        with pytest.raises(KernelDomainError):
            kernel0_freq(catalog.mu_hat, catalog.phi_hat, 0.0, 0.5, -1.0)


class TestKernelSum:
    def test_diagonal_rejected(self, catalog):
        with pytest.raises(KernelDomainError):
            kernel_sum(catalog.mu_hat, catalog.phi_hat, 0.5, 0.5, 2.0, 1.0)

    def test_dilation_rejected(self, catalog):
        with pytest.raises(KernelDomainError):
            kernel_sum(catalog.mu_hat, catalog.phi_hat, 0.1, 0.5, 1.0, 1.0)

    def test_tail_requires_both_constants(self, catalog):
        r0 = kernel_sum(catalog.mu_hat, catalog.phi_hat, 0.2, 0.9, 2.0, 1.0,
                        j_range=(-2, 2), l_truncation=3, tol=1e-9)
        r1 = kernel_sum(catalog.mu_hat, catalog.phi_hat, 0.2, 0.9, 2.0, 1.0,
                        j_range=(-2, 2), l_truncation=3, tol=1e-9,
                        sigma1=4.5e-5, tau1=8.6e-4)
        assert r1.value == r0.value
        assert r1.tail_bound > r0.tail_bound
