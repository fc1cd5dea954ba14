"""Closed-form operator-norm constants on Hardy space, BMO and L^p.

Everything here is a plain formula in double precision: the inputs are
already certified upper bounds and every formula is monotone in them, so no
separate error field is carried.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class DomainError(ValueError):
    """Parameter outside the validity range of a closed-form bound."""


@dataclass(frozen=True)
class CZONormInputs:
    """Inputs to the norm bounds: an L2 -> L2 operator norm bound and the
    two kernel smoothness constants, with the free trade-off parameter."""

    l2_norm: float
    C2: float
    C3: float
    zeta: float

    def __post_init__(self):
        if self.zeta < 3.0:
            raise DomainError(f"zeta must be >= 3, got {self.zeta}")
        if min(self.l2_norm, self.C2, self.C3) < 0.0:
            raise DomainError("norm inputs must be nonnegative")


def d_zeta(zeta: float) -> float:
    """D(zeta) = 7 sqrt(zeta^2 (zeta^2 + 3) / (zeta^2 - 1)^3); ~ 7/zeta for
    large zeta."""
    if zeta <= 1.0:
        raise DomainError(f"d_zeta requires zeta > 1, got {zeta}")
    z2 = zeta * zeta
    return 7.0 * math.sqrt(z2 * (z2 + 3.0) / (z2 - 1.0) ** 3)


def c_interp(p: float, r: float = 1.0) -> float:
    """Weak-(r,r)/strong-(2,2) interpolation constant c(p, r); c(p) = c(p, 1).

    c(2, r) = 1 exactly, and c(p) ~ 4/(p-1) as p decreases to 1."""
    if not (1.0 <= r < p <= 2.0):
        raise DomainError(f"c_interp requires 1 <= r < p <= 2, got p={p}, r={r}")
    base = 2.0 ** (2.0 * p * r / (p + r)) * p * (p + r) * (2.0 - r) / (
        (p + r - p * r) * (p - r)
    )
    exponent = (2.0 - p) * (p + r) / (2.0 * p * (p + r - p * r))
    return base ** exponent


def czo_norm_bound(space, inputs: CZONormInputs) -> float:
    """Operator norm bound on the given space.

    space is "H1", "BMO", or ("Lp", p) with 1 < p < infinity. Equality holds
    at p = 2, where the bound reduces to the L2 norm itself."""
    z, c2, c3, zeta = inputs.l2_norm, inputs.C2, inputs.C3, inputs.zeta
    if space == "H1":
        return 2.0 * math.sqrt(zeta) * z + d_zeta(zeta) * c3
    if space == "BMO":
        return 2.0 * math.sqrt(zeta) * z + d_zeta(zeta) * c2
    if isinstance(space, tuple) and space[0] == "Lp":
        p = float(space[1])
        if not (1.0 < p < math.inf):
            raise DomainError(f"Lp bound requires 1 < p < inf, got p={p}")
        weak = 8.0 * zeta / (zeta * zeta - 1.0)
        if p <= 2.0:
            base = math.sqrt(32.0 * zeta) * z + weak * c3
            return c_interp(p) * base ** (2.0 / p - 1.0) * z ** (2.0 - 2.0 / p)
        q = p / (p - 1.0)  # conjugate exponent, lands in (1, 2)
        base = math.sqrt(32.0 * zeta) * z + weak * c2
        return c_interp(q) * base ** (1.0 - 2.0 / p) * z ** (2.0 / p)
    raise DomainError(f"unknown space spec: {space!r}")


def molecule_constants(zeta: float, C3: float, l2_norm: float) -> dict:
    """The three constants of the atom/molecule machinery:

    - C4: quadratic off-support decay constant of the image of an atom,
    - C5: L1 -> weak-L1 constant,
    - atom_h1_bound: Hardy-space norm bound on the image of an atom."""
    if zeta < 3.0:
        raise DomainError(f"zeta must be >= 3, got {zeta}")
    z2 = zeta * zeta
    c4 = C3 / (2.0 * math.sqrt(3.0)) * math.sqrt(z2 * z2 * (z2 + 3.0) / (z2 - 1.0) ** 3)
    c5 = math.sqrt(32.0 * zeta) * l2_norm + 8.0 * zeta / (z2 - 1.0) * C3
    atom = 2.0 * math.sqrt(zeta) * l2_norm + d_zeta(zeta) * C3
    return {"C4": c4, "C5": c5, "atom_h1_bound": atom}
