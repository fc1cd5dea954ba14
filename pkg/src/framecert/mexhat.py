"""Built-in Mexican hat example: synthesizer, band-limited reference pair,
and the band-limited-reciprocal analyzer, all in the frequency domain.

Dyadic dilations and unit translations: A = 2, B = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .funcexpr import (
    Affine,
    Clamp,
    FrequencyFunction,
    Gaussian,
    GaussianEnvelope,
    Polynomial,
    Product,
    Quotient,
    Ramp,
    Scale,
    Sum,
    Support,
    reflection,
)
from .jets import Jet3

A_DILATION = 2.0
B_STEP = 1.0

_PI2 = math.pi * math.pi

# |psi_hat(xi)| = 4 pi^2 xi^2 exp(-2 pi^2 xi^2) <= (4/e) exp(-pi^2 xi^2):
# split off exp(-pi^2 xi^2) and maximize the rest.
_PSI_ENVELOPE = GaussianEnvelope(4.0 / math.e, _PI2)


@dataclass(frozen=True)
class MexicanHatCatalog:
    psi_hat: FrequencyFunction      # (2 pi xi)^2 exp(-2 pi^2 xi^2)
    ramp: FrequencyFunction         # C^3 ramp spline
    cutoff: FrequencyFunction       # kappa, rises 0 -> 1 on 1/3 <= |xi| <= 1/2
    bump: FrequencyFunction         # beta, double bump on 1/12 <= |xi| <= 1/3
    psi_star_hat: FrequencyFunction  # (1 - kappa) psi_hat, band-limited
    mu_hat: FrequencyFunction       # kappa psi_hat = psi_hat - psi_star_hat
    phi_hat: FrequencyFunction      # beta / psi_hat on the support of beta
    A: float = A_DILATION
    B: float = B_STEP


def ramp_jet(xi: float) -> Jet3:
    """Jet of the ramp spline at xi."""
    return Ramp().eval_jet(xi)


def build_catalog() -> MexicanHatCatalog:
    r = Ramp()

    psi_hat = Product(
        (Polynomial((0.0, 0.0, 4.0 * _PI2)), Gaussian(1.0, 2.0 * _PI2)),
        envelope=_PSI_ENVELOPE,
    )

    # kappa: ramp(6 xi - 2) on xi >= 0, mirrored. The positive piece is zero
    # below 1/3, so the mirrored pieces never overlap.
    kappa_pos = Affine(r, 6.0, -2.0)
    kappa = Sum((kappa_pos, reflection(kappa_pos)))

    # beta on xi >= 0 equals ramp(12 xi - 1) * ramp(2 - 6 xi): each factor is
    # identically 1 where the other one is active.
    bump_pos = Product((Affine(r, 12.0, -1.0), Affine(r, -6.0, 2.0)))
    bump = Sum((bump_pos, reflection(bump_pos)))

    one_minus_kappa = Sum((Polynomial((1.0,)), Scale(kappa, -1.0)))
    psi_star_hat = Clamp(Product((one_minus_kappa, psi_hat)), Support.of((-0.5, 0.5)))

    mu_hat = Product((kappa, psi_hat))
    object.__setattr__(mu_hat, "envelope", _PSI_ENVELOPE)

    # The quotient is only ever evaluated on supp(beta), where
    # psi_hat >= psi_hat(1/12) > 0; the clamp short-circuits elsewhere.
    phi_hat = Clamp(Quotient(bump, psi_hat), bump.support)

    return MexicanHatCatalog(
        psi_hat=psi_hat,
        ramp=r,
        cutoff=kappa,
        bump=bump,
        psi_star_hat=psi_star_hat,
        mu_hat=mu_hat,
        phi_hat=phi_hat,
    )
