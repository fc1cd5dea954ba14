"""Error-controlled quadrature and certified lattice summation.

The workhorse is an adaptive Gauss-Kronrod 7/15 rule. Integrands are either
plain callables (optionally vectorized over numpy arrays) or |d-th jet
component| of a FrequencyFunction. Interval subdivision always happens at
declared breakpoints first, so piecewise joints and |.| kinks are seen by the
local error estimator.

Error control is double precision with compensated summation and explicit
margins, not directed rounding; the certificate reports it as such.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .funcexpr import FrequencyFunction, GaussianEnvelope

MAX_DEPTH_DEFAULT = 60


class QuadratureError(RuntimeError):
    """Adaptive subdivision failed to reach the requested tolerance."""


class ShiftSumError(RuntimeError):
    """Lattice sum truncation could not be certified."""


@dataclass(frozen=True)
class BoundWithError:
    """A numerical estimate with a nonnegative error bound.

    The value of record is certified_upper = estimate + error."""

    estimate: float
    error: float

    def __post_init__(self):
        if self.error < 0.0 or math.isnan(self.error):
            raise ValueError(f"error bound must be nonnegative, got {self.error}")

    @property
    def certified_upper(self) -> float:
        return self.estimate + self.error

    def __add__(self, other: "BoundWithError") -> "BoundWithError":
        return BoundWithError(self.estimate + other.estimate, self.error + other.error)

    def scaled(self, c: float) -> "BoundWithError":
        if c < 0.0:
            raise ValueError("scaling a bound by a negative factor is not meaningful")
        return BoundWithError(c * self.estimate, c * self.error)

    @staticmethod
    def zero() -> "BoundWithError":
        return BoundWithError(0.0, 0.0)


# ---------------------------------------------------------------------------
# Gauss-Kronrod 7/15.

_XK = (
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
)
_WK = (
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
)
_WG = (
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
)

_NODES = np.array([-x for x in _XK[:-1]] + [0.0] + [x for x in reversed(_XK[:-1])])
_WEIGHTS_K = np.array(list(_WK[:-1]) + [_WK[-1]] + list(reversed(_WK[:-1])))
_WEIGHTS_G = np.zeros(15)
for _i, _w in zip((1, 3, 5, 7, 9, 11, 13), list(_WG[:-1]) + [_WG[-1]] + list(reversed(_WG[:-1]))):
    _WEIGHTS_G[_i] = _w


def _gk15(f: Callable, a: float, b: float, vectorized: bool):
    h = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    x = mid + h * _NODES
    if vectorized:
        y = np.asarray(f(x), dtype=float)
    else:
        y = np.array([f(float(t)) for t in x])
    k = h * float(np.dot(_WEIGHTS_K, y))
    g = h * float(np.dot(_WEIGHTS_G, y))
    return k, abs(k - g)


def integrate(
    f: Callable,
    a: float,
    b: float,
    tol: float,
    breakpoints: Sequence[float] = (),
    vectorized: bool = False,
    max_depth: int = MAX_DEPTH_DEFAULT,
):
    """Adaptive integral of f over [a, b] with absolute error target tol.

    Returns (estimate, error_bound). Splits at interior breakpoints before
    any adaptive bisection. Deterministic for fixed inputs."""
    if not (a < b):
        return 0.0, 0.0
    if tol <= 0.0:
        raise ValueError("tol must be positive")

    edges = sorted({a, b, *[p for p in breakpoints if a < p < b]})
    heap = []
    counter = 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, err = _gk15(f, lo, hi, vectorized)
        heapq.heappush(heap, (-err, counter, lo, hi, val, err, 0))
        counter += 1

    while True:
        total_err = math.fsum(item[5] for item in heap)
        if total_err <= tol:
            break
        neg_err, _, lo, hi, val, err, depth = heapq.heappop(heap)
        if depth >= max_depth:
            raise QuadratureError(
                f"subdivision depth {max_depth} exceeded on [{lo}, {hi}] "
                f"(residual error {err:.3e}, target {tol:.3e})"
            )
        mid = 0.5 * (lo + hi)
        for seg in ((lo, mid), (mid, hi)):
            v, e = _gk15(f, seg[0], seg[1], vectorized)
            heapq.heappush(heap, (-e, counter, seg[0], seg[1], v, e, depth + 1))
            counter += 1

    segs = sorted(heap, key=lambda it: it[2])
    estimate = math.fsum(it[4] for it in segs)
    error = math.fsum(it[5] for it in segs)
    return estimate, error


# Margin applied where a value envelope stands in for a derivative envelope.
_TAIL_MARGIN = 10.0


def l1_norm_deriv(
    h: FrequencyFunction,
    d: int,
    interval,
    tol: float,
    max_depth: int = MAX_DEPTH_DEFAULT,
) -> BoundWithError:
    """Certified bound on the integral of |d-th derivative of h| over interval.

    The interval is clipped to the support of h; an unbounded piece requires
    a Gaussian decay envelope on h and contributes a certified tail."""
    if d not in (0, 1, 2, 3):
        raise ValueError("derivative order must be 0..3")
    a, b = float(interval[0]), float(interval[1])

    from .funcexpr import Support

    region = h.support.intersect(Support.of((a, b)))
    if region.is_empty():
        return BoundWithError.zero()

    comp = ("c0", "c1", "c2", "c3")[d]

    def f(x: float) -> float:
        return abs(getattr(h.eval_jet(x), comp))

    pieces = []
    tail_err = 0.0
    for lo, hi in region.intervals:
        if not (math.isfinite(lo) and math.isfinite(hi)):
            env = h.envelope
            if env is None:
                raise QuadratureError(
                    "unbounded integration region and no decay envelope on integrand"
                )
            cut = env.cutoff(tol * 1e-3) + 1.0
            # Tail of the envelope beyond the cutoff, with margin for d > 0.
            tail = env.amplitude * math.sqrt(math.pi / env.rate) / 2.0 * math.erfc(
                math.sqrt(env.rate) * cut
            )
            tail_err += (_TAIL_MARGIN if d else 1.0) * tail
            lo = max(lo, -cut)
            hi = min(hi, cut)
            if lo >= hi:
                continue
        pieces.append((lo, hi))

    if not pieces:
        return BoundWithError(0.0, tail_err)

    per_piece_tol = tol / len(pieces)
    vals, errs = [], []
    for lo, hi in pieces:
        v, e = integrate(f, lo, hi, per_piece_tol, breakpoints=h.breakpoints,
                         max_depth=max_depth)
        vals.append(v)
        errs.append(e)
    return BoundWithError(math.fsum(vals), math.fsum(errs) + tail_err)


@dataclass(frozen=True)
class LatticeTailModel:
    """Bound on the two-sided lattice tail sum_{|l| > L} term(l), assuming
    term(l) <= norm_factor * amplitude * exp(-rate*(|l| - center_offset)^2)."""

    amplitude: float
    rate: float
    center_offset: float
    norm_factor: float

    def tail_beyond(self, big_l: int) -> float:
        t = big_l + 1 - self.center_offset
        if t <= 0.0:
            return math.inf
        r = self.rate
        one_side = self.amplitude * (
            math.exp(-r * t * t)
            + math.sqrt(math.pi / r) / 2.0 * math.erfc(math.sqrt(r) * t)
        )
        return 2.0 * self.norm_factor * one_side


def shift_sum(
    term: Callable[[int], BoundWithError],
    envelope,
    tol: float,
    max_l: int = 64,
) -> BoundWithError:
    """Certified sum of term(l) over the shift lattice l != 0.

    Terms are accumulated in the fixed order l = +1, -1, +2, -2, ... with
    compensated summation. `envelope` is a LatticeTailModel, a callable
    L -> tail bound, or None; the tail bound for the untouched terms is
    added to the error once it drops below tol."""
    if envelope is None:
        tail_fn = None
    elif hasattr(envelope, "tail_beyond"):
        tail_fn = envelope.tail_beyond
    else:
        tail_fn = envelope

    estimates = []
    errors = []
    zero_pairs = 0
    last_pair = 0.0
    for big_l in range(1, max_l + 1):
        pair = 0.0
        for l in (big_l, -big_l):
            t = term(l)
            estimates.append(t.estimate)
            errors.append(t.error)
            pair += t.certified_upper
        last_pair = pair
        if pair == 0.0:
            zero_pairs += 1
        else:
            zero_pairs = 0
        if tail_fn is not None:
            tail = tail_fn(big_l)
            if tail < tol:
                errors.append(tail)
                return BoundWithError(math.fsum(estimates), math.fsum(errors))
        elif zero_pairs >= 3:
            return BoundWithError(math.fsum(estimates), math.fsum(errors))

    total = math.fsum(estimates)
    if tail_fn is not None:
        raise ShiftSumError(
            f"lattice tail bound still above tol {tol:.3e} at |l| = {max_l}"
        )
    if last_pair > 1e-14 * (abs(total) + 1e-300):
        raise ShiftSumError(
            f"lattice terms not negligible by |l| = {max_l} and no tail envelope given"
        )
    return BoundWithError(total, math.fsum(errors))


def envelope_from_function(f: FrequencyFunction) -> Optional[GaussianEnvelope]:
    return f.envelope
