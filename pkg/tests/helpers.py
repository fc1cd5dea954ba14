"""Shared test utilities: finite-difference jets and closed-form
polynomial-times-Gaussian integrals (the quadrature oracle)."""

from __future__ import annotations

import math

import numpy as np

from framecert import Jet3


def fd_jet(f, x: float, h: float = 5e-4) -> Jet3:
    """Five-point central finite differences for derivatives 1..3 of a
    scalar callable, packaged as a jet alongside the exact value."""
    fm2, fm1, f0, fp1, fp2 = (f(x - 2 * h), f(x - h), f(x), f(x + h),
                              f(x + 2 * h))
    d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
    d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h)
    d3 = (-fm2 + 2 * fm1 - 2 * fp1 + fp2) / (2 * h ** 3)
    return Jet3(f0, d1, d2, d3)


def jet_close(a: Jet3, b: Jet3, rtol: float = 1e-5, floor: float = 1e-6):
    """Componentwise agreement with a mixed relative/absolute criterion."""
    for u, v in ((a.c0, b.c0), (a.c1, b.c1), (a.c2, b.c2), (a.c3, b.c3)):
        scale = max(abs(u), abs(v), floor)
        assert abs(u - v) <= rtol * scale, f"{u} vs {v} (scale {scale})"


def gaussian_poly_integral(coeffs, b: float, lo: float, hi: float) -> float:
    """Exact integral of sum_n coeffs[n] x^n e^{-b x^2} over [lo, hi],
    via the erf/exponential recurrence for the moments."""
    n_max = len(coeffs) - 1
    moments = []
    j0 = math.sqrt(math.pi / b) / 2.0 * (math.erf(math.sqrt(b) * hi)
                                         - math.erf(math.sqrt(b) * lo))
    moments.append(j0)
    if n_max >= 1:
        moments.append((math.exp(-b * lo * lo) - math.exp(-b * hi * hi))
                       / (2.0 * b))
    for n in range(2, n_max + 1):
        boundary = (lo ** (n - 1) * math.exp(-b * lo * lo)
                    - hi ** (n - 1) * math.exp(-b * hi * hi)) / (2.0 * b)
        moments.append(boundary + (n - 1) / (2.0 * b) * moments[n - 2])
    return math.fsum(c * m for c, m in zip(coeffs, moments))


def abs_gaussian_poly_integral(coeffs, b: float, lo: float, hi: float) -> float:
    """Exact integral of |p(x) e^{-b x^2}|: split at the real roots of p
    inside [lo, hi] and sum absolute values of the signed pieces."""
    roots = []
    if len(coeffs) > 1 and any(c != 0.0 for c in coeffs[1:]):
        for r in np.roots(list(reversed(coeffs))):
            if abs(r.imag) < 1e-12 and lo < r.real < hi:
                roots.append(float(r.real))
    edges = sorted({lo, hi, *roots})
    return math.fsum(
        abs(gaussian_poly_integral(coeffs, b, a, c))
        for a, c in zip(edges[:-1], edges[1:])
    )
