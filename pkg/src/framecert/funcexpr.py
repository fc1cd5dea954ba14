"""Composable frequency-domain function model.

Expression trees over a closed catalog of primitives: polynomials, Gaussians
a*exp(-b*xi^2), the C^3 ramp spline, affine reparametrizations, sums,
products, quotients, scalar multiples, and clamp-to-support. Every node
evaluates to an order-3 jet at a scalar point and to plain values on numpy
arrays. Evaluation outside the declared support returns the exact zero jet.

All functions here are real-valued in frequency, so complex conjugation in
the analysis formulas is the identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .jets import Jet3, ZERO, jet_exp

INF = math.inf


# ---------------------------------------------------------------------------
# Supports: finite unions of closed intervals, possibly unbounded.


@dataclass(frozen=True)
class Support:
    """Finite union of closed intervals, sorted and disjoint."""

    intervals: Tuple[Tuple[float, float], ...]

    @staticmethod
    def real_line() -> "Support":
        return Support(((-INF, INF),))

    @staticmethod
    def empty() -> "Support":
        return Support(())

    @staticmethod
    def of(*intervals: Tuple[float, float]) -> "Support":
        return _normalize([(float(a), float(b)) for a, b in intervals])

    def is_empty(self) -> bool:
        return not self.intervals

    def contains(self, xi: float) -> bool:
        return any(a <= xi <= b for a, b in self.intervals)

    def contains_array(self, xi: np.ndarray) -> np.ndarray:
        mask = np.zeros(xi.shape, dtype=bool)
        for a, b in self.intervals:
            mask |= (xi >= a) & (xi <= b)
        return mask

    def intersect(self, other: "Support") -> "Support":
        out = []
        for a, b in self.intervals:
            for c, d in other.intervals:
                lo, hi = max(a, c), min(b, d)
                if lo <= hi:
                    out.append((lo, hi))
        return _normalize(out)

    def union(self, other: "Support") -> "Support":
        return _normalize(list(self.intervals) + list(other.intervals))

    def translate(self, t: float) -> "Support":
        return Support(tuple((a + t, b + t) for a, b in self.intervals))

    def affine_preimage(self, scale: float, offset: float) -> "Support":
        """Support of xi -> f(scale*xi + offset) given this support of f."""
        if scale == 0.0:
            # Constant argument: either everywhere or nowhere.
            return Support.real_line() if self.contains(offset) else Support.empty()
        out = []
        for a, b in self.intervals:
            lo, hi = (a - offset) / scale, (b - offset) / scale
            if lo > hi:
                lo, hi = hi, lo
            out.append((lo, hi))
        return _normalize(out)

    def bounds(self) -> Tuple[float, float]:
        if not self.intervals:
            return (0.0, 0.0)
        return (self.intervals[0][0], self.intervals[-1][1])

    def is_bounded(self) -> bool:
        lo, hi = self.bounds()
        return not self.is_empty() and math.isfinite(lo) and math.isfinite(hi)


def _normalize(intervals: list) -> Support:
    ivs = sorted((a, b) for a, b in intervals if a <= b)
    merged: list = []
    for a, b in ivs:
        if merged and a <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    return Support(tuple(merged))


@dataclass(frozen=True)
class GaussianEnvelope:
    """Certified decay record: |f(xi)| <= amplitude * exp(-rate * xi^2)
    for |xi| >= from_abscissa."""

    amplitude: float
    rate: float
    from_abscissa: float = 0.0

    def at(self, xi: float) -> float:
        if abs(xi) < self.from_abscissa:
            return self.amplitude
        return self.amplitude * math.exp(-self.rate * xi * xi)

    def cutoff(self, eps: float) -> float:
        """Abscissa beyond which the envelope is below eps."""
        if eps >= self.amplitude:
            return self.from_abscissa
        return max(self.from_abscissa, math.sqrt(math.log(self.amplitude / eps) / self.rate))


# ---------------------------------------------------------------------------
# Expression nodes.


class FrequencyFunction:
    """Base class. Subclasses define _jet, _values, support, breakpoints."""

    support: Support
    breakpoints: Tuple[float, ...]
    envelope: Optional[GaussianEnvelope]

    def eval_jet(self, xi: float) -> Jet3:
        xi = float(xi)
        if not self.support.contains(xi):
            return ZERO
        return self._jet(xi)

    def values(self, xi: np.ndarray) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        out = np.zeros(xi.shape)
        mask = self.support.contains_array(xi)
        if mask.any():
            out[mask] = self._values(xi[mask])
        return out

    def __call__(self, xi: float) -> float:
        return self.eval_jet(xi).c0

    def _jet(self, xi: float) -> Jet3:  # pragma: no cover - abstract
        raise NotImplementedError

    def _values(self, xi: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    # Serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_dict(d: dict) -> "FrequencyFunction":
        return _from_dict(d)


def _bkpts(*items) -> Tuple[float, ...]:
    vals = set()
    for it in items:
        vals.update(it)
    return tuple(sorted(vals))


@dataclass(frozen=True)
class Polynomial(FrequencyFunction):
    coeffs: Tuple[float, ...]  # ascending powers
    support: Support = field(default_factory=Support.real_line)
    breakpoints: Tuple[float, ...] = ()
    envelope: Optional[GaussianEnvelope] = None

    def _jet(self, xi: float) -> Jet3:
        c0 = c1 = c2 = c3 = 0.0
        for k, ck in enumerate(self.coeffs):
            p = xi ** k if k else 1.0
            c0 += ck * p
            if k >= 1:
                c1 += ck * k * (xi ** (k - 1) if k > 1 else 1.0)
            if k >= 2:
                c2 += ck * k * (k - 1) * (xi ** (k - 2) if k > 2 else 1.0)
            if k >= 3:
                c3 += ck * k * (k - 1) * (k - 2) * (xi ** (k - 3) if k > 3 else 1.0)
        return Jet3(c0, c1, c2, c3)

    def _values(self, xi: np.ndarray) -> np.ndarray:
        out = np.zeros(xi.shape)
        for k, ck in enumerate(reversed(self.coeffs)):
            out = out * xi + ck
        return out

    def to_dict(self) -> dict:
        return {"type": "polynomial", "coeffs": list(self.coeffs)}


@dataclass(frozen=True)
class Gaussian(FrequencyFunction):
    """amplitude * exp(-rate * xi^2)."""

    amplitude: float
    rate: float
    support: Support = field(default_factory=Support.real_line)
    breakpoints: Tuple[float, ...] = ()
    envelope: Optional[GaussianEnvelope] = None

    def __post_init__(self):
        if self.envelope is None:
            object.__setattr__(
                self, "envelope", GaussianEnvelope(abs(self.amplitude), self.rate)
            )

    def _jet(self, xi: float) -> Jet3:
        r = self.rate
        inner = Jet3(-r * xi * xi, -2.0 * r * xi, -2.0 * r, 0.0)
        return self.amplitude * jet_exp(inner)

    def _values(self, xi: np.ndarray) -> np.ndarray:
        return self.amplitude * np.exp(-self.rate * xi * xi)

    def to_dict(self) -> dict:
        return {"type": "gaussian", "amplitude": self.amplitude, "rate": self.rate}


_R4, _R5, _R6, _R7 = 35.0, -84.0, 70.0, -20.0


@dataclass(frozen=True)
class Ramp(FrequencyFunction):
    """The C^3 ramp spline: 0 for xi<=0, 35x^4-84x^5+70x^6-20x^7 on [0,1],
    1 for xi>=1. Satisfies ramp(xi) + ramp(1-xi) = 1."""

    support: Support = Support(((0.0, INF),))
    breakpoints: Tuple[float, ...] = (0.0, 1.0)
    envelope: Optional[GaussianEnvelope] = None

    def _jet(self, xi: float) -> Jet3:
        if xi >= 1.0:
            return Jet3(1.0)
        if xi <= 0.0:
            return ZERO
        x = xi
        v = x ** 4 * (_R4 + x * (_R5 + x * (_R6 + x * _R7)))
        d1 = 140.0 * x ** 3 * (1.0 - x) ** 3
        d2 = 420.0 * x ** 2 * (1.0 - x) ** 2 * (1.0 - 2.0 * x)
        d3 = 840.0 * x * (1.0 - x) * (1.0 - 5.0 * x + 5.0 * x ** 2)
        return Jet3(v, d1, d2, d3)

    def _values(self, xi: np.ndarray) -> np.ndarray:
        x = np.clip(xi, 0.0, 1.0)
        return x ** 4 * (_R4 + x * (_R5 + x * (_R6 + x * _R7)))

    def to_dict(self) -> dict:
        return {"type": "ramp"}


@dataclass(frozen=True)
class Affine(FrequencyFunction):
    """g(xi) = child(scale*xi + offset)."""

    child: FrequencyFunction
    scale_arg: float
    offset: float
    support: Support = field(init=False)
    breakpoints: Tuple[float, ...] = field(init=False)
    envelope: Optional[GaussianEnvelope] = None

    def __post_init__(self):
        object.__setattr__(
            self, "support", self.child.support.affine_preimage(self.scale_arg, self.offset)
        )
        if self.scale_arg != 0.0:
            bk = tuple(
                sorted((b - self.offset) / self.scale_arg for b in self.child.breakpoints)
            )
        else:
            bk = ()
        object.__setattr__(self, "breakpoints", bk)

    def _jet(self, xi: float) -> Jet3:
        s = self.scale_arg
        j = self.child.eval_jet(s * xi + self.offset)
        return Jet3(j.c0, s * j.c1, s * s * j.c2, s ** 3 * j.c3)

    def _values(self, xi: np.ndarray) -> np.ndarray:
        return self.child.values(self.scale_arg * xi + self.offset)

    def to_dict(self) -> dict:
        return {
            "type": "affine",
            "scale": self.scale_arg,
            "offset": self.offset,
            "child": self.child.to_dict(),
        }


@dataclass(frozen=True)
class Scale(FrequencyFunction):
    """factor * child(xi)."""

    child: FrequencyFunction
    factor: float
    support: Support = field(init=False)
    breakpoints: Tuple[float, ...] = field(init=False)
    envelope: Optional[GaussianEnvelope] = field(init=False)

    def __post_init__(self):
        sup = Support.empty() if self.factor == 0.0 else self.child.support
        object.__setattr__(self, "support", sup)
        object.__setattr__(self, "breakpoints", self.child.breakpoints)
        env = self.child.envelope
        if env is not None:
            env = GaussianEnvelope(abs(self.factor) * env.amplitude, env.rate, env.from_abscissa)
        object.__setattr__(self, "envelope", env)

    def _jet(self, xi: float) -> Jet3:
        return self.factor * self.child.eval_jet(xi)

    def _values(self, xi: np.ndarray) -> np.ndarray:
        return self.factor * self.child.values(xi)

    def to_dict(self) -> dict:
        return {"type": "scale", "factor": self.factor, "child": self.child.to_dict()}


@dataclass(frozen=True)
class Sum(FrequencyFunction):
    children: Tuple[FrequencyFunction, ...]
    support: Support = field(init=False)
    breakpoints: Tuple[float, ...] = field(init=False)
    envelope: Optional[GaussianEnvelope] = None

    def __post_init__(self):
        sup = Support.empty()
        for c in self.children:
            sup = sup.union(c.support)
        object.__setattr__(self, "support", sup)
        object.__setattr__(self, "breakpoints", _bkpts(*(c.breakpoints for c in self.children)))

    def _jet(self, xi: float) -> Jet3:
        out = ZERO
        for c in self.children:
            out = out + c.eval_jet(xi)
        return out

    def _values(self, xi: np.ndarray) -> np.ndarray:
        out = np.zeros(xi.shape)
        for c in self.children:
            out += c.values(xi)
        return out

    def to_dict(self) -> dict:
        return {"type": "sum", "children": [c.to_dict() for c in self.children]}


@dataclass(frozen=True)
class Product(FrequencyFunction):
    children: Tuple[FrequencyFunction, ...]
    support: Support = field(init=False)
    breakpoints: Tuple[float, ...] = field(init=False)
    envelope: Optional[GaussianEnvelope] = None

    def __post_init__(self):
        sup = Support.real_line()
        for c in self.children:
            sup = sup.intersect(c.support)
        object.__setattr__(self, "support", sup)
        object.__setattr__(self, "breakpoints", _bkpts(*(c.breakpoints for c in self.children)))

    def _jet(self, xi: float) -> Jet3:
        out = Jet3(1.0)
        for c in self.children:
            out = out * c.eval_jet(xi)
        return out

    def _values(self, xi: np.ndarray) -> np.ndarray:
        out = np.ones(xi.shape)
        for c in self.children:
            out *= c.values(xi)
        return out

    def to_dict(self) -> dict:
        return {"type": "product", "children": [c.to_dict() for c in self.children]}


@dataclass(frozen=True)
class Quotient(FrequencyFunction):
    """num/den on the support of num; den must be nonzero there."""

    num: FrequencyFunction
    den: FrequencyFunction
    support: Support = field(init=False)
    breakpoints: Tuple[float, ...] = field(init=False)
    envelope: Optional[GaussianEnvelope] = None

    def __post_init__(self):
        object.__setattr__(self, "support", self.num.support)
        object.__setattr__(self, "breakpoints", _bkpts(self.num.breakpoints, self.den.breakpoints))

    def _jet(self, xi: float) -> Jet3:
        return self.num.eval_jet(xi) / self.den.eval_jet(xi)

    def _values(self, xi: np.ndarray) -> np.ndarray:
        return self.num.values(xi) / self.den.values(xi)

    def to_dict(self) -> dict:
        return {"type": "quotient", "num": self.num.to_dict(), "den": self.den.to_dict()}


@dataclass(frozen=True)
class Clamp(FrequencyFunction):
    """child restricted to the given support; exact zero elsewhere.

    The child is never evaluated outside the clamp region, so a Quotient
    child with a removable singularity outside the region is safe."""

    child: FrequencyFunction
    region: Support
    support: Support = field(init=False)
    breakpoints: Tuple[float, ...] = field(init=False)
    envelope: Optional[GaussianEnvelope] = None

    def __post_init__(self):
        object.__setattr__(self, "support", self.child.support.intersect(self.region))
        edges = [e for iv in self.region.intervals for e in iv if math.isfinite(e)]
        object.__setattr__(self, "breakpoints", _bkpts(self.child.breakpoints, edges))

    def _jet(self, xi: float) -> Jet3:
        return self.child.eval_jet(xi)

    def _values(self, xi: np.ndarray) -> np.ndarray:
        return self.child.values(xi)

    def to_dict(self) -> dict:
        return {
            "type": "clamp",
            "support": [list(iv) for iv in self.region.intervals],
            "child": self.child.to_dict(),
        }


# ---------------------------------------------------------------------------
# Constructors used throughout the package.


def identity_x() -> Polynomial:
    """The identity function xi -> xi."""
    return Polynomial((0.0, 1.0))


def shift(f: FrequencyFunction, t: float) -> FrequencyFunction:
    """g(xi) = f(xi + t); support and breakpoints translate by -t."""
    if t == 0.0:
        return f
    return Affine(f, 1.0, float(t))


def reflection(f: FrequencyFunction) -> FrequencyFunction:
    """g(xi) = f(-xi)."""
    return Affine(f, -1.0, 0.0)


def times_identity(f: FrequencyFunction) -> FrequencyFunction:
    """g(xi) = xi * f(xi), same support as f."""
    return Product((identity_x(), f))


def product(f: FrequencyFunction, g: FrequencyFunction) -> FrequencyFunction:
    return Product((f, g))


def scale(f: FrequencyFunction, c: float) -> FrequencyFunction:
    return Scale(f, float(c))


def difference(f: FrequencyFunction, g: FrequencyFunction) -> Optional[FrequencyFunction]:
    """f - g, or None when the difference is structurally zero."""
    if f is g or f == g:
        return None
    return Sum((f, Scale(g, -1.0)))


# ---------------------------------------------------------------------------
# JSON round trip.

def _from_dict(d: dict) -> FrequencyFunction:
    t = d.get("type")
    if t == "polynomial":
        return Polynomial(tuple(float(c) for c in d["coeffs"]))
    if t == "gaussian":
        return Gaussian(float(d["amplitude"]), float(d["rate"]))
    if t == "ramp":
        return Ramp()
    if t == "affine":
        return Affine(_from_dict(d["child"]), float(d["scale"]), float(d["offset"]))
    if t == "scale":
        return Scale(_from_dict(d["child"]), float(d["factor"]))
    if t == "sum":
        return Sum(tuple(_from_dict(c) for c in d["children"]))
    if t == "product":
        return Product(tuple(_from_dict(c) for c in d["children"]))
    if t == "quotient":
        return Quotient(_from_dict(d["num"]), _from_dict(d["den"]))
    if t == "clamp":
        region = Support.of(*[tuple(iv) for iv in d["support"]])
        return Clamp(_from_dict(d["child"]), region)
    raise ValueError(f"unknown expression node type: {t!r}")
