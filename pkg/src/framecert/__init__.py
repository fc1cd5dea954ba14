"""Certified bounds for wavelet frame operators.

Computes Calderon-Zygmund kernel constants and Daubechies-type deviation
estimates for a synthesizer/analyzer pair, and decides bijectivity of the
frame operator on the Hardy space H^1, on L^p (1 < p < infinity) and on BMO
via the Neumann-series criterion.
"""

from .certify import (
    Certificate,
    ConfigError,
    FramePairConfig,
    GridRefinementError,
    ZetaOptimum,
    certify,
    daubechies_l2_bound,
    m_bound,
    n_bound,
    optimize_zeta,
)
from .czconst import (
    CZConstants,
    InvalidDilationError,
    SigmaTau,
    compute_sigma_tau,
    cz_constants,
    geometric_sum_prefactor,
    sigma,
    tau,
)
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
    difference,
    identity_x,
    reflection,
    shift,
)
from .hardy import CZONormInputs, DomainError, c_interp, czo_norm_bound, d_zeta, molecule_constants
from .jets import Jet3, JetDivisionError, JetOverflowError, jet_exp
from .kernellab import (
    KernelDomainError,
    KernelQuery,
    KernelResult,
    inverse_transform,
    kernel0_freq,
    kernel0_time,
    kernel_sum,
)
from .mexhat import MexicanHatCatalog, build_catalog
from .quad import (
    BoundWithError,
    LatticeTailModel,
    QuadratureError,
    ShiftSumError,
    integrate,
    l1_norm_deriv,
    shift_sum,
)

__version__ = "0.1.0"

__all__ = [
    "Affine",
    "BoundWithError",
    "Certificate",
    "Clamp",
    "ConfigError",
    "CZConstants",
    "CZONormInputs",
    "DomainError",
    "FramePairConfig",
    "FrequencyFunction",
    "Gaussian",
    "GaussianEnvelope",
    "GridRefinementError",
    "InvalidDilationError",
    "Jet3",
    "JetDivisionError",
    "JetOverflowError",
    "KernelDomainError",
    "KernelQuery",
    "KernelResult",
    "LatticeTailModel",
    "MexicanHatCatalog",
    "Polynomial",
    "Product",
    "QuadratureError",
    "Quotient",
    "Ramp",
    "Scale",
    "ShiftSumError",
    "SigmaTau",
    "Sum",
    "Support",
    "ZetaOptimum",
    "build_catalog",
    "c_interp",
    "certify",
    "compute_sigma_tau",
    "cz_constants",
    "czo_norm_bound",
    "d_zeta",
    "daubechies_l2_bound",
    "difference",
    "geometric_sum_prefactor",
    "identity_x",
    "integrate",
    "inverse_transform",
    "jet_exp",
    "kernel0_freq",
    "kernel0_time",
    "kernel_sum",
    "l1_norm_deriv",
    "m_bound",
    "molecule_constants",
    "n_bound",
    "optimize_zeta",
    "reflection",
    "shift",
    "shift_sum",
    "sigma",
    "tau",
]
