"""Kernel diagnostics: the level-0 kernel K0 by two independent routes and
the full dilation-summed kernel K, with empirical decay checks.

These are spot checks of the kernel estimates, not proofs: quadrature errors
and truncation remainders are reported alongside the values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np

from .funcexpr import FrequencyFunction, Product, shift
from .quad import _NODES, _WEIGHTS_K, QuadratureError, integrate, l1_norm_deriv

TWO_PI = 2.0 * math.pi


class KernelDomainError(ValueError):
    """Query outside the kernel's domain (e.g. on the diagonal x = y)."""


@dataclass(frozen=True)
class KernelQuery:
    x: float
    y: float
    j_range: Tuple[int, int] = (-20, 20)
    k_truncation: int = 40
    l_truncation: int = 8
    tol: float = 1e-10

    def __post_init__(self):
        if self.j_range[0] > self.j_range[1]:
            raise KernelDomainError("j_range must satisfy j_min <= j_max")
        if self.k_truncation < 1 or self.l_truncation < 1:
            raise KernelDomainError("truncations must be >= 1")


@dataclass(frozen=True)
class KernelResult:
    """A kernel value with its reported numerical slop: quadrature error and
    truncation remainder, plus the imaginary part that should vanish for
    real kernels."""

    value: float
    tail_bound: float = 0.0
    imag: float = 0.0


def _integration_pieces(f: FrequencyFunction, tol: float):
    """Bounded intervals covering where f matters, plus the envelope tail."""
    pieces = []
    tail = 0.0
    for lo, hi in f.support.intervals:
        if not (math.isfinite(lo) and math.isfinite(hi)):
            env = f.envelope
            if env is None:
                raise QuadratureError(
                    "unbounded support and no decay envelope on transform"
                )
            cut = env.cutoff(tol * 1e-3) + 1.0
            tail += env.amplitude * math.sqrt(math.pi / env.rate) / 2.0 * (
                math.erfc(math.sqrt(env.rate) * cut)
            )
            lo, hi = max(lo, -cut), min(hi, cut)
            if lo >= hi:
                continue
        pieces.append((lo, hi))
    return pieces, tail


def inverse_transform(f: FrequencyFunction, x: float, tol: float = 1e-10) -> float:
    """Inverse Fourier transform of f at x, integral of f(xi) e^{2 pi i xi x}.

    Computed as the cosine integral; correct as stated for even real f (all
    catalog transforms), where the sine part vanishes by parity."""
    pieces, tail = _integration_pieces(f, tol)
    if not pieces:
        return 0.0
    w = TWO_PI * x

    def g(xi: np.ndarray) -> np.ndarray:
        return f.values(xi) * np.cos(w * xi)

    vals = []
    for lo, hi in pieces:
        v, _ = integrate(g, lo, hi, tol / max(1, len(pieces)),
                         breakpoints=f.breakpoints, vectorized=True)
        vals.append(v)
    return math.fsum(vals)


def _composite_rule(f: FrequencyFunction, max_abs_x: float, tol: float):
    """Fixed composite Gauss-Kronrod nodes/weights over the support of f,
    with panels short enough that e^{2 pi i x xi} turns by at most ~pi/2 per
    panel for |x| <= max_abs_x. Used for transform evaluation on many points
    at once."""
    pieces, tail = _integration_pieces(f, tol)
    panel = 0.25 / max(1.0, abs(max_abs_x))
    nodes = []
    weights = []
    for lo, hi in pieces:
        edges = sorted({lo, hi, *[b for b in f.breakpoints if lo < b < hi]})
        for a, b in zip(edges[:-1], edges[1:]):
            m = max(1, int(math.ceil((b - a) / panel)))
            sub = np.linspace(a, b, m + 1)
            h = 0.5 * (sub[1] - sub[0])
            mids = 0.5 * (sub[:-1] + sub[1:])
            nodes.append((mids[:, None] + h * _NODES[None, :]).ravel())
            weights.append(np.tile(h * _WEIGHTS_K, m))
    if not nodes:
        return np.zeros(0), np.zeros(0), tail
    return np.concatenate(nodes), np.concatenate(weights), tail


def inverse_transform_grid(
    f: FrequencyFunction, xs: np.ndarray, tol: float = 1e-12
) -> np.ndarray:
    """Inverse transform of even real f evaluated on an array of points,
    via one shared composite rule (cosine integral, vectorized)."""
    xs = np.asarray(xs, dtype=float)
    nodes, weights, _ = _composite_rule(f, float(np.abs(xs).max(initial=0.0)),
                                        tol)
    if nodes.size == 0:
        return np.zeros(xs.shape)
    fw = f.values(nodes) * weights
    out = np.empty(xs.shape)
    for start in range(0, xs.size, 128):
        blk = xs[start:start + 128]
        out[start:start + 128] = np.cos(
            TWO_PI * blk[:, None] * nodes[None, :]
        ) @ fw
    return out


@lru_cache(maxsize=64)
def _cubic_decay_constants(f: FrequencyFunction, tol: float = 1e-9):
    """(m0, m3) with |f_time(t)| <= min(m0, m3 / |t|^3): m0 is the L^1 norm
    of the transform, m3 = (2 pi)^{-3} times the L^1 norm of its third
    derivative."""
    m0 = l1_norm_deriv(f, 0, (-math.inf, math.inf), tol).certified_upper
    m3 = l1_norm_deriv(f, 3, (-math.inf, math.inf), tol).certified_upper
    return m0, m3 / TWO_PI ** 3


def kernel0_time(
    psi_hat: FrequencyFunction,
    phi_hat: FrequencyFunction,
    x: float,
    y: float,
    B: float,
    k_truncation: int = 40,
    tol: float = 1e-10,
    max_remainder: Optional[float] = None,
) -> KernelResult:
    """Level-0 kernel via the time-domain lattice sum
    B * sum_k psi(x - Bk) phi(y - Bk), truncated at |k| <= k_truncation.

    The remainder estimate uses the cubic time decay |f(t)| <= m3/|t|^3
    implied by three integrable transform derivatives."""
    if B <= 0.0:
        raise KernelDomainError("translation step B must be positive")
    k = np.arange(-k_truncation, k_truncation + 1, dtype=float)
    psi_vals = inverse_transform_grid(psi_hat, x - B * k, tol)
    phi_vals = inverse_transform_grid(phi_hat, y - B * k, tol)
    value = B * math.fsum(psi_vals * phi_vals)

    _, m3p = _cubic_decay_constants(psi_hat)
    _, m3q = _cubic_decay_constants(phi_hat)
    c = max(abs(x), abs(y))
    edge = B * k_truncation - c
    if edge <= 0.0:
        remainder = math.inf
    else:
        # sum_{|k| > K} (B|k| - c)^{-6} <= (2/B) * integral_{K}^{inf},
        # comparison with the decreasing integrand.
        remainder = m3p * m3q * B * (2.0 / (5.0 * B)) * edge ** -5
    if max_remainder is not None and remainder > max_remainder:
        raise KernelDomainError(
            f"truncation remainder {remainder:.3e} exceeds {max_remainder:.3e}"
        )
    return KernelResult(value, tail_bound=remainder)


def kernel0_freq(
    psi_hat: FrequencyFunction,
    phi_hat: FrequencyFunction,
    x: float,
    y: float,
    B: float,
    l_truncation: int = 8,
    tol: float = 1e-10,
) -> KernelResult:
    """Level-0 kernel via the shift-lattice (Poisson-summed) form:
    sum_l e^{-2 pi i l y / B} integral e^{2 pi i xi (x-y)}
    psi_hat(xi) phi_hat(xi + l/B) d xi."""
    if B <= 0.0:
        raise KernelDomainError("translation step B must be positive")
    z = x - y
    total_re = []
    total_im = []
    quad_err = []
    for l in range(-l_truncation, l_truncation + 1):
        t = l / B
        g = Product((psi_hat, shift(phi_hat, t)))
        pieces, tail = _integration_pieces(g, tol)
        if not pieces and tail == 0.0:
            continue
        w = TWO_PI * z

        def gc(xi: np.ndarray) -> np.ndarray:
            return g.values(xi) * np.cos(w * xi)

        def gs(xi: np.ndarray) -> np.ndarray:
            return g.values(xi) * np.sin(w * xi)

        re_l, im_l, err_l = 0.0, 0.0, tail
        for lo, hi in pieces:
            vr, er = integrate(gc, lo, hi, tol, breakpoints=g.breakpoints,
                               vectorized=True)
            vi, ei = integrate(gs, lo, hi, tol, breakpoints=g.breakpoints,
                               vectorized=True)
            re_l += vr
            im_l += vi
            err_l += er + ei
        phase = -TWO_PI * l * y / B
        cp, sp = math.cos(phase), math.sin(phase)
        total_re.append(cp * re_l - sp * im_l)
        total_im.append(sp * re_l + cp * im_l)
        quad_err.append(err_l)
    return KernelResult(
        math.fsum(total_re), tail_bound=math.fsum(quad_err),
        imag=math.fsum(total_im),
    )


def kernel_sum(
    psi_hat: FrequencyFunction,
    phi_hat: FrequencyFunction,
    x: float,
    y: float,
    A: float,
    B: float,
    j_range: Tuple[int, int] = (-20, 20),
    sigma1: Optional[float] = None,
    tau1: Optional[float] = None,
    l_truncation: int = 8,
    tol: float = 1e-10,
) -> KernelResult:
    """Dilation-summed kernel sum_j |A|^j K0(A^j x, A^j y) over j_range.

    When sigma1 and tau1 are given, the out-of-range tail is bounded through
    the envelope |K0(u, v)| <= min(sigma1, tau1/|u - v|^2): geometrically
    decaying on both sides of the j window."""
    if x == y:
        raise KernelDomainError("kernel_sum requires x != y")
    a = abs(A)
    if a <= 1.0:
        raise KernelDomainError("|A| must exceed 1")
    j_min, j_max = j_range
    terms = []
    imag = []
    err = []
    for j in range(j_min, j_max + 1):
        s = A ** j
        r = kernel0_freq(psi_hat, phi_hat, s * x, s * y, B, l_truncation, tol)
        terms.append(a ** j * r.value)
        imag.append(a ** j * r.imag)
        err.append(a ** j * r.tail_bound)
    tail = math.fsum(err)
    if sigma1 is not None and tau1 is not None:
        z2 = (x - y) ** 2
        # j < j_min side: |A|^j sigma1 summed geometrically.
        tail += sigma1 * a ** j_min / (a - 1.0)
        # j > j_max side: |A|^j tau1 / (|A|^j |x-y|)^2 = tau1 |A|^{-j} / z^2.
        tail += tau1 / z2 * a ** -j_max / (a - 1.0)
    return KernelResult(math.fsum(terms), tail_bound=tail,
                        imag=math.fsum(imag))
