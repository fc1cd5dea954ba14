"""Frequency-domain norm quantities and Calderon-Zygmund constants.

sigma_1..3 and tau_1..3 are lattice sums of L^1 norms of (derivatives of)
products of the synthesizer transform with shifted copies of the analyzer
transform. The three kernel constants follow from them by closed-form
dilation prefactors.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .funcexpr import FrequencyFunction, Product, identity_x, shift
from .quad import BoundWithError, l1_norm_deriv, shift_sum

TWO_PI = 2.0 * math.pi
INV_4PI2 = 1.0 / (4.0 * math.pi ** 2)

_TAIL_MARGIN = 10.0


class InvalidDilationError(ValueError):
    """Dilation factor with |A| <= 1."""


@dataclass(frozen=True)
class SigmaTau:
    sigma1: BoundWithError
    sigma2: BoundWithError
    sigma3: BoundWithError
    tau1: BoundWithError
    tau2: BoundWithError
    tau3: BoundWithError

    def as_dict(self) -> dict:
        return {
            name: {"estimate": b.estimate, "error": b.error, "certified_upper": b.certified_upper}
            for name, b in (
                ("sigma1", self.sigma1), ("sigma2", self.sigma2), ("sigma3", self.sigma3),
                ("tau1", self.tau1), ("tau2", self.tau2), ("tau3", self.tau3),
            )
        }


@dataclass(frozen=True)
class CZConstants:
    C1: BoundWithError
    C2: BoundWithError
    C3: BoundWithError
    A: float
    B: float

    def as_dict(self) -> dict:
        return {
            name: {"estimate": b.estimate, "error": b.error, "certified_upper": b.certified_upper}
            for name, b in (("C1", self.C1), ("C2", self.C2), ("C3", self.C3))
        } | {"A": self.A, "B": self.B}


def _integrand(k: int, d_family: str, psi: FrequencyFunction, phi: FrequencyFunction,
               B: float, l: int) -> FrequencyFunction:
    """Integrand for the (sigma_k or tau_k, l) term, following the original
    definitions: the identity factor X multiplies the unshifted function."""
    t = l / B
    if k == 1:
        return Product((psi, shift(phi, t)))
    if k == 2:
        return Product((identity_x(), psi, shift(phi, t)))
    if k == 3:
        return Product((identity_x(), phi, shift(psi, t)))
    raise ValueError("k must be 1, 2 or 3")


def _tail_fn(psi: FrequencyFunction, phi: FrequencyFunction, B: float, term_cache: dict):
    """Tail bound callable for the lattice sum, built from a Gaussian decay
    envelope on one factor and a bounded support on the other.

    tail(L) = margin * (|term(L)| + |term(-L)|) * (analytic Gaussian tail
    ratio beyond L); exact zero once bounded supports can no longer meet."""
    sup_psi, sup_phi = psi.support, phi.support

    if sup_psi.is_bounded() and sup_phi.is_bounded():
        r_u = max(abs(x) for x in sup_psi.bounds())
        r_v = max(abs(x) for x in sup_phi.bounds())

        def tail(big_l: int) -> float:
            return 0.0 if (big_l + 1) / B > r_u + r_v else math.inf

        return tail

    if sup_phi.is_bounded() and psi.envelope is not None:
        rate, radius = psi.envelope.rate, max(abs(x) for x in sup_phi.bounds())
    elif sup_psi.is_bounded() and phi.envelope is not None:
        rate, radius = phi.envelope.rate, max(abs(x) for x in sup_psi.bounds())
    else:
        return None

    r = rate / (B * B)
    c = radius * B

    def tail(big_l: int) -> float:
        t = big_l + 1 - c
        if t <= 0.0 or big_l - c <= 0.0:
            return math.inf
        pair = sum(
            term_cache[l].certified_upper for l in (big_l, -big_l) if l in term_cache
        )
        if pair == 0.0:
            # Terms vanished identically; trust the envelope shape alone.
            pair = term_cache[1].certified_upper + term_cache[-1].certified_upper
            if pair == 0.0:
                return 0.0
        ratio = (
            math.exp(-r * t * t)
            + math.sqrt(math.pi / r) / 2.0 * math.erfc(math.sqrt(r) * t)
        ) / math.exp(-r * (big_l - c) ** 2)
        return _TAIL_MARGIN * pair * ratio

    return tail


def _lattice_quantity(k: int, deriv: int, prefactor: float,
                      psi: FrequencyFunction, phi: FrequencyFunction,
                      B: float, tol: float) -> BoundWithError:
    if psi.support.is_empty() or phi.support.is_empty():
        return BoundWithError.zero()

    term_cache: dict = {}

    def term(l: int) -> BoundWithError:
        h = _integrand(k, "", psi, phi, B, l)
        t = l1_norm_deriv(h, deriv, (-INF_BOUNDS, INF_BOUNDS), tol / 16.0)
        term_cache[l] = t
        return t

    center = term(0)
    rest = shift_sum(term, _tail_fn(psi, phi, B, term_cache), tol)
    return (center + rest).scaled(prefactor)


INF_BOUNDS = math.inf


def sigma(k: int, psi: FrequencyFunction, phi: FrequencyFunction,
          B: float, tol: float = 1e-8) -> BoundWithError:
    """Certified bound on sigma_k(psi, phi) for translation step B."""
    if B <= 0.0:
        raise ValueError("translation step B must be positive")
    prefactor = 1.0 if k == 1 else TWO_PI
    return _lattice_quantity(k, 0, prefactor, psi, phi, B, tol)


def tau(k: int, psi: FrequencyFunction, phi: FrequencyFunction,
        B: float, tol: float = 1e-8) -> BoundWithError:
    """Certified bound on tau_k(psi, phi): derivative order 2 for k=1,
    order 3 for k=2,3, all with prefactor 1/(4 pi^2)."""
    if B <= 0.0:
        raise ValueError("translation step B must be positive")
    deriv = 2 if k == 1 else 3
    return _lattice_quantity(k, deriv, INV_4PI2, psi, phi, B, tol)


def compute_sigma_tau(psi: FrequencyFunction, phi: FrequencyFunction,
                      B: float, tol: float = 1e-8) -> SigmaTau:
    """All six quantities; independent computations, reduced in fixed order."""
    jobs = [
        lambda: sigma(1, psi, phi, B, tol),
        lambda: sigma(2, psi, phi, B, tol),
        lambda: sigma(3, psi, phi, B, tol),
        lambda: tau(1, psi, phi, B, tol),
        lambda: tau(2, psi, phi, B, tol),
        lambda: tau(3, psi, phi, B, tol),
    ]
    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(j) for j in jobs]
            results = [f.result() for f in futures]
    else:
        results = [j() for j in jobs]
    return SigmaTau(*results)


def _worker_count() -> int:
    try:
        return max(1, int(os.environ.get("FRAMECERT_THREADS", "1")))
    except ValueError:
        return 1


def geometric_sum_prefactor(kind: str, A: float) -> float:
    """Dilation-scale geometric sum constants: 2|A|/(|A|-1) for quadratic
    decay, |A|(2|A|+1)/(A^2-1) for cubic decay."""
    a = abs(A)
    if a <= 1.0:
        raise InvalidDilationError(f"|A| must exceed 1, got {A}")
    if kind == "quadratic":
        return 2.0 * a / (a - 1.0)
    if kind == "cubic":
        return a * (2.0 * a + 1.0) / (a * a - 1.0)
    raise ValueError("kind must be 'quadratic' or 'cubic'")


def cz_constants(st: SigmaTau, A: float, B: float = 1.0) -> CZConstants:
    """C1 = (2|A|/(|A|-1)) sqrt(sigma1 tau1);
    C2, C3 = (4|A|(2|A|+1)/(A^2-1)) (sigma_k tau_k^2)^(1/3), k = 2, 3.

    Errors propagate monotonically: the error field is the formula applied
    to certified uppers minus the formula applied to estimates."""
    p1 = geometric_sum_prefactor("quadratic", A)
    p23 = 4.0 * geometric_sum_prefactor("cubic", A)

    def bound(f, *inputs: BoundWithError) -> BoundWithError:
        est = f(*(b.estimate for b in inputs))
        hi = f(*(b.certified_upper for b in inputs))
        return BoundWithError(est, max(0.0, hi - est))

    c1 = bound(lambda s, t: p1 * math.sqrt(s * t), st.sigma1, st.tau1)
    c2 = bound(lambda s, t: p23 * (s * t * t) ** (1.0 / 3.0), st.sigma2, st.tau2)
    c3 = bound(lambda s, t: p23 * (s * t * t) ** (1.0 / 3.0), st.sigma3, st.tau3)
    return CZConstants(c1, c2, c3, float(A), float(B))
