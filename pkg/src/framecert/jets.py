"""Order-3 truncated Taylor arithmetic.

A Jet3 carries the value and first three derivatives of a real function at a
point. Products use the Leibniz rule, quotients recursive Leibniz inversion,
and exp the order-3 Faa di Bruno formula. Third order is all the frequency
norm quantities ever need, so the order is fixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Denominators with |value| below this floor raise JetDivisionError.
DIVISION_FLOOR = 1e-300


class JetError(ArithmeticError):
    pass


class JetDivisionError(JetError):
    """Quotient jet requested with denominator value at or below the floor."""


class JetOverflowError(JetError):
    """exp() of a jet whose value is too large for double precision."""


@dataclass(frozen=True)
class Jet3:
    """Value and derivatives of order 1..3 of a function at a point."""

    c0: float
    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0

    def __add__(self, other: "Jet3 | float") -> "Jet3":
        o = _as_jet(other)
        return Jet3(self.c0 + o.c0, self.c1 + o.c1, self.c2 + o.c2, self.c3 + o.c3)

    __radd__ = __add__

    def __neg__(self) -> "Jet3":
        return Jet3(-self.c0, -self.c1, -self.c2, -self.c3)

    def __sub__(self, other: "Jet3 | float") -> "Jet3":
        return self + (-_as_jet(other))

    def __rsub__(self, other: "Jet3 | float") -> "Jet3":
        return _as_jet(other) + (-self)

    def __mul__(self, other: "Jet3 | float") -> "Jet3":
        o = _as_jet(other)
        a0, a1, a2, a3 = self.c0, self.c1, self.c2, self.c3
        b0, b1, b2, b3 = o.c0, o.c1, o.c2, o.c3
        return Jet3(
            a0 * b0,
            a1 * b0 + a0 * b1,
            a2 * b0 + 2.0 * a1 * b1 + a0 * b2,
            a3 * b0 + 3.0 * a2 * b1 + 3.0 * a1 * b2 + a0 * b3,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: "Jet3 | float") -> "Jet3":
        o = _as_jet(other)
        if abs(o.c0) <= DIVISION_FLOOR:
            raise JetDivisionError(
                f"jet division by value {o.c0!r} at or below floor {DIVISION_FLOOR}"
            )
        a0, a1, a2, a3 = self.c0, self.c1, self.c2, self.c3
        b0, b1, b2, b3 = o.c0, o.c1, o.c2, o.c3
        # Solve q*b = a order by order (recursive Leibniz inversion).
        q0 = a0 / b0
        q1 = (a1 - q0 * b1) / b0
        q2 = (a2 - q0 * b2 - 2.0 * q1 * b1) / b0
        q3 = (a3 - q0 * b3 - 3.0 * q1 * b2 - 3.0 * q2 * b1) / b0
        return Jet3(q0, q1, q2, q3)

    def __rtruediv__(self, other: "Jet3 | float") -> "Jet3":
        return _as_jet(other) / self

    def is_finite(self) -> bool:
        return all(map(math.isfinite, (self.c0, self.c1, self.c2, self.c3)))


ZERO = Jet3(0.0)
ONE = Jet3(1.0)


def _as_jet(x: "Jet3 | float") -> Jet3:
    if isinstance(x, Jet3):
        return x
    return Jet3(float(x))


def variable(xi: float) -> Jet3:
    """Jet of the identity function at the point xi."""
    return Jet3(float(xi), 1.0)


def constant(c: float) -> Jet3:
    return Jet3(float(c))


def jet_exp(a: Jet3) -> Jet3:
    """Jet of exp(f) given the jet of f (Faa di Bruno through order 3)."""
    try:
        e0 = math.exp(a.c0)
    except OverflowError as exc:
        raise JetOverflowError(f"exp({a.c0}) overflows double precision") from exc
    return Jet3(
        e0,
        e0 * a.c1,
        e0 * (a.c2 + a.c1 * a.c1),
        e0 * (a.c3 + 3.0 * a.c1 * a.c2 + a.c1 ** 3),
    )


# Explicit-name aliases for the operator methods.
def jet_add(a: Jet3, b: Jet3) -> Jet3:
    return a + b


def jet_mul(a: Jet3, b: Jet3) -> Jet3:
    return a * b


def jet_div(a: Jet3, b: Jet3) -> Jet3:
    return a / b
