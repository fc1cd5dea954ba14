"""Top-level certification pipeline.

Given a synthesizer/analyzer pair, a band-limited reference pair with perfect
reconstruction, and the grid parameters (A, B), this module bounds the frame
operator's deviation from the identity and decides bijectivity on the Hardy
space H^1, on L^p, and on BMO via the Neumann-series criterion: the verdict
is "bijective" exactly when M_1 < 1 and M_inf < 1.

The L^2 deviation Delta is a Daubechies-type sufficient estimate: the sup of
the main-symbol deviation plus a bound on the lattice cross terms. Two valid
cross-term bounds are computed -- the per-shift Cauchy-Schwarz sum and the
Schur row/column test -- and the smaller one is used. Sups are estimated on a
refining grid with local subdivision; the error field of Delta is a
grid-resolution heuristic, recorded as such in the certificate metadata.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from .czconst import CZConstants, SigmaTau, compute_sigma_tau, cz_constants
from .funcexpr import FrequencyFunction, Support, difference
from .hardy import CZONormInputs, czo_norm_bound
from .quad import BoundWithError

ZETA_MAX_DEFAULT = 1e4
P_GRID_DEFAULT = (1.04, 1.2, 1.5, 2.0)

# Values below this envelope level are treated as zero when windowing the
# dilation/shift sums for the grid-based sups.
_WINDOW_EPS = 1e-18
_J_CAP = 45


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


class GridRefinementError(RuntimeError):
    """Grid refinement for the L^2 deviation stalled above tolerance."""


# ---------------------------------------------------------------------------
# Configuration and certificate types.


@dataclass(frozen=True)
class FramePairConfig:
    """Synthesizer/analyzer pair with a perfect-reconstruction reference pair.

    The perturbations (synthesizer - reference_synthesizer) and
    (analyzer - reference_analyzer) may be supplied explicitly when a closed
    form with better decay metadata is available; otherwise they are formed
    structurally, and a structurally identical pair contributes exactly 0."""

    synthesizer: FrequencyFunction
    analyzer: FrequencyFunction
    reference_synthesizer: FrequencyFunction
    reference_analyzer: FrequencyFunction
    A: float
    B: float
    synthesizer_perturbation: Optional[FrequencyFunction] = None
    analyzer_perturbation: Optional[FrequencyFunction] = None
    tol: float = 1e-8
    zeta_max: float = ZETA_MAX_DEFAULT
    p_grid: Tuple[float, ...] = P_GRID_DEFAULT
    alt_decomposition: bool = False
    assume_perfect_reconstruction: bool = True
    check_reconstruction: bool = True
    include_timings: bool = False

    def __post_init__(self):
        if not abs(self.A) > 1.0:
            raise ConfigError(f"field 'A': |A| must exceed 1, got {self.A}")
        if not self.B > 0.0:
            raise ConfigError(f"field 'B': must be positive, got {self.B}")
        if not self.tol > 0.0:
            raise ConfigError(f"field 'tol': must be positive, got {self.tol}")
        if not self.zeta_max >= 3.0:
            raise ConfigError(
                f"field 'zeta_max': must be >= 3, got {self.zeta_max}"
            )
        for p in self.p_grid:
            if not (1.0 < p < math.inf):
                raise ConfigError(
                    f"field 'p_grid': entries must lie in (1, inf), got {p}"
                )


@dataclass(frozen=True)
class ZetaOptimum:
    zeta: float
    value: float

    def as_dict(self) -> dict:
        return {"zeta": self.zeta, "value": self.value}


@dataclass(frozen=True)
class PairReport:
    """All certified quantities for one perturbation pair."""

    name: str
    zero: bool
    sigma_tau: Optional[SigmaTau]
    cz: Optional[CZConstants]
    delta: Optional[BoundWithError]
    delta_meta: dict
    n1: Optional[ZetaOptimum]
    n_inf: Optional[ZetaOptimum]
    np_entries: Dict[float, Optional[ZetaOptimum]]


@dataclass(frozen=True)
class Certificate:
    inputs: dict
    pairs: Tuple[PairReport, ...]
    m1: float
    m_inf: float
    np_table: dict
    verdict: str
    neumann_rates: dict
    metadata: dict

    def as_dict(self) -> dict:
        def bwe(b: Optional[BoundWithError]):
            if b is None:
                return None
            return {
                "estimate": b.estimate,
                "error": b.error,
                "certified_upper": b.certified_upper,
            }

        return {
            "inputs": self.inputs,
            "sigma_tau": {
                r.name: (r.sigma_tau.as_dict() if r.sigma_tau else None)
                for r in self.pairs
            },
            "cz_constants": {
                r.name: (r.cz.as_dict() if r.cz else None) for r in self.pairs
            },
            "delta": {r.name: bwe(r.delta) for r in self.pairs},
            "n1": {
                r.name: (r.n1.as_dict() if r.n1 else None) for r in self.pairs
            },
            "n_inf": {
                r.name: (r.n_inf.as_dict() if r.n_inf else None)
                for r in self.pairs
            },
            "m1": self.m1,
            "m_inf": self.m_inf,
            "np_table": self.np_table,
            "verdict": self.verdict,
            "neumann_rates": self.neumann_rates,
            "metadata": self.metadata,
        }


# ---------------------------------------------------------------------------
# Daubechies-type L^2 deviation.


def _clipped_support(f: FrequencyFunction) -> Optional[Support]:
    """Support of f clipped to where it can exceed the window threshold;
    None when unbounded with no decay envelope."""
    sup = f.support
    if sup.is_empty() or sup.is_bounded():
        return sup
    if f.envelope is None:
        return None
    cut = f.envelope.cutoff(_WINDOW_EPS)
    return sup.intersect(Support.of((-cut, cut)))


def _abs_range(sup: Support) -> Tuple[float, float]:
    """Range of |u| over the support: (closest to 0, farthest from 0)."""
    lo, hi = math.inf, 0.0
    for a, b in sup.intervals:
        hi = max(hi, abs(a), abs(b))
        lo = 0.0 if a <= 0.0 <= b else min(lo, abs(a), abs(b))
    return lo, hi


def _j_window(region: Support, a: float) -> Tuple[int, int]:
    """Integer j range such that |A|^j [1, |A|] can meet the region in |u|."""
    wlo, whi = _abs_range(region)
    log_a = math.log(a)
    if whi <= 0.0:
        return 1, 0
    j_hi = _J_CAP if not math.isfinite(whi) else min(
        _J_CAP, int(math.ceil(math.log(whi) / log_a)) + 1
    )
    j_lo = -_J_CAP if wlo <= 0.0 else max(
        -_J_CAP, int(math.floor(math.log(wlo) / log_a)) - 1
    )
    return j_lo, j_hi


def _row_data(
    psi: FrequencyFunction,
    phi: FrequencyFunction,
    A: float,
    B: float,
    xi: np.ndarray,
):
    """Per-shift dilation sums on the grid xi.

    Returns (t0, rows): t0[i] = sum_j psi(A^j xi_i) phi(A^j xi_i) signed, and
    rows[l][i] = sum_j |psi(A^j xi_i) phi(A^j xi_i + l/B)| for each l != 0
    that can contribute."""
    a = abs(A)
    sup_psi = _clipped_support(psi)
    sup_phi = _clipped_support(phi)
    if sup_psi is None or sup_phi is None:
        raise GridRefinementError(
            "unbounded support without a decay envelope; cannot window sums"
        )
    t0 = np.zeros(xi.shape)
    rows: Dict[int, np.ndarray] = {}
    if sup_psi.is_empty() or sup_phi.is_empty():
        return t0, rows
    _, hi_p = _abs_range(sup_psi)
    _, hi_q = _abs_range(sup_phi)
    l_max = int(math.ceil(B * (hi_p + hi_q))) + 1
    for l in range(-l_max, l_max + 1):
        t = l / B
        region = sup_psi.intersect(sup_phi.translate(-t))
        if region.is_empty():
            continue
        j_lo, j_hi = _j_window(region, a)
        acc = np.zeros(xi.shape)
        for j in range(j_lo, j_hi + 1):
            u = (A ** j) * xi
            prod = psi.values(u) * phi.values(u + t)
            if l == 0:
                t0 += prod
            acc += np.abs(prod)
        if l != 0 and float(acc.max(initial=0.0)) > 0.0:
            rows[l] = acc
    return t0, rows


def _refined_sup(fn: Callable[[np.ndarray], np.ndarray], xi: np.ndarray,
                 vals: np.ndarray) -> float:
    """Sup of fn, starting from its values on xi and locally subdividing
    around the argmax (two rounds of 65-point windows)."""
    best = float(vals.max(initial=0.0))
    if best == 0.0 or xi.size < 3:
        return best
    i = int(vals.argmax())
    lo = float(xi[max(i - 1, 0)])
    hi = float(xi[min(i + 1, xi.size - 1)])
    for _ in range(2):
        local = np.linspace(lo, hi, 65)
        lv = fn(local)
        best = max(best, float(lv.max(initial=0.0)))
        k = int(lv.argmax())
        lo = float(local[max(k - 1, 0)])
        hi = float(local[min(k + 1, 64)])
    return best


def _delta_on_grid(
    psi: FrequencyFunction,
    phi: FrequencyFunction,
    A: float,
    B: float,
    target: float,
    n: int,
) -> Tuple[float, dict]:
    a = abs(A)
    half = np.linspace(1.0, a, n)
    xi = np.concatenate([-half[::-1], half])

    t0, rows = _row_data(psi, phi, A, B, xi)
    t0_swap, cols = _row_data(phi, psi, A, B, xi)

    dev_vals = np.abs(t0 - target)
    dev = _refined_sup(
        lambda x: np.abs(_row_data(psi, phi, A, B, x)[0] - target), xi, dev_vals
    )

    def total(d: Dict[int, np.ndarray], m: int) -> np.ndarray:
        out = np.zeros(m)
        for arr in d.values():
            out += arr
        return out

    row_total = total(rows, xi.size)
    col_total = total(cols, xi.size)
    row_sup = _refined_sup(
        lambda x: total(_row_data(psi, phi, A, B, x)[1], x.size), xi, row_total
    )
    col_sup = _refined_sup(
        lambda x: total(_row_data(phi, psi, A, B, x)[1], x.size), xi, col_total
    )
    schur = math.sqrt(row_sup * col_sup)

    # Per-shift Cauchy-Schwarz branch: sum_l sqrt(b(l) * b~(l)), where b~(l)
    # is the column sup at shift l, i.e. the swapped-pair row at shift -l.
    cs_terms = []
    for l, arr in sorted(rows.items()):
        mate = cols.get(-l)
        if mate is None:
            continue
        cs_terms.append(math.sqrt(float(arr.max()) * float(mate.max())))
    cs = math.fsum(cs_terms)

    value = dev + min(cs, schur)
    meta = {
        "grid_points": int(xi.size),
        "grid_spacing": (a - 1.0) / (n - 1),
        "symbol_deviation": dev,
        "cross_term_cauchy_schwarz": cs,
        "cross_term_schur": schur,
        "shifts_used": sorted(rows.keys()),
    }
    return value, meta


def daubechies_l2_bound(
    psi: FrequencyFunction,
    phi: FrequencyFunction,
    A: float,
    B: float,
    target: float,
    grid: int = 513,
    rtol: float = 1e-3,
) -> BoundWithError:
    """Certified-style bound on the L^2 deviation of the frame operator from
    target (1 for deviation from the identity, 0 for the operator norm).

    The error field is a grid-resolution heuristic: four times the change
    under the last grid doubling."""
    b, _ = delta_with_meta(psi, phi, A, B, target, grid=grid, rtol=rtol)
    return b


def delta_with_meta(
    psi: FrequencyFunction,
    phi: FrequencyFunction,
    A: float,
    B: float,
    target: float,
    grid: int = 513,
    rtol: float = 1e-3,
    max_levels: int = 6,
) -> Tuple[BoundWithError, dict]:
    if not abs(A) > 1.0:
        raise ConfigError(f"field 'A': |A| must exceed 1, got {A}")
    if not B > 0.0:
        raise ConfigError(f"field 'B': must be positive, got {B}")
    n = max(int(grid), 33)
    prev = None
    value = meta = None
    for _ in range(max_levels):
        value, meta = _delta_on_grid(psi, phi, A, B, target, n)
        if prev is not None:
            change = abs(value - prev)
            if change <= max(rtol * abs(value), 1e-12):
                err = 4.0 * change + 1e-15
                meta = dict(meta, error_model="grid-resolution heuristic",
                            refinement_change=change)
                return BoundWithError(value, err), meta
        prev = value
        n = 2 * n - 1
    raise GridRefinementError(
        f"L^2 deviation sup did not settle within {max_levels} grid "
        f"refinements (last value {value!r})"
    )


# ---------------------------------------------------------------------------
# Norm bounds and the zeta trade-off.


def n_bound(p, l2_norm: float, cz: CZConstants, zeta: float) -> float:
    """N_p bound from an L^2 norm bound and the kernel constants at the
    trade-off parameter zeta; p = 1 uses C3 (Hardy side), p = inf uses C2
    (BMO side), 1 < p < inf the interpolated form."""
    inputs = CZONormInputs(
        l2_norm, cz.C2.certified_upper, cz.C3.certified_upper, zeta
    )
    if p == 1:
        return czo_norm_bound("H1", inputs)
    if p in ("inf", math.inf):
        return czo_norm_bound("BMO", inputs)
    return czo_norm_bound(("Lp", float(p)), inputs)


_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def optimize_zeta(
    objective: Callable[[float], float],
    zeta_range: Tuple[float, float] = (3.0, ZETA_MAX_DEFAULT),
) -> ZetaOptimum:
    """Minimize the objective over [zeta_lo, zeta_max]: 64-point logarithmic
    scan, then golden-section refinement on the best bracket. The returned
    value never exceeds the objective at any scanned point."""
    lo, hi = float(zeta_range[0]), float(zeta_range[1])
    if not (3.0 <= lo < hi):
        raise ConfigError(
            f"field 'zeta_range': need 3 <= lo < hi, got ({lo}, {hi})"
        )
    grid = np.geomspace(lo, hi, 64)
    grid[0], grid[-1] = lo, hi
    vals = [float(objective(float(z))) for z in grid]
    i = min(range(len(vals)), key=lambda k: (vals[k], k))
    best_z, best_v = float(grid[i]), vals[i]

    a = float(grid[i - 1]) if i > 0 else lo
    b = float(grid[i + 1]) if i < len(vals) - 1 else hi
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc, fd = float(objective(c)), float(objective(d))
    for _ in range(200):
        if b - a <= 1e-10 * max(1.0, abs(b)):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = float(objective(c))
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = float(objective(d))
    for z, v in ((c, fc), (d, fd)):
        if v < best_v:
            best_z, best_v = float(z), float(v)
    return ZetaOptimum(best_z, best_v)


# ---------------------------------------------------------------------------
# Perturbation pairs and assembly.


def _is_zero(f: Optional[FrequencyFunction]) -> bool:
    return f is None or f.support.is_empty()


def _perturbations(cfg: FramePairConfig):
    dpsi = cfg.synthesizer_perturbation
    if dpsi is None:
        dpsi = difference(cfg.synthesizer, cfg.reference_synthesizer)
    dphi = cfg.analyzer_perturbation
    if dphi is None:
        dphi = difference(cfg.analyzer, cfg.reference_analyzer)
    return dpsi, dphi


def _pairs(cfg: FramePairConfig):
    """The two perturbation pairs whose norm bounds sum to M_p.

    Default decomposition: (psi - psi*, phi) and (psi*, phi - phi*).
    Alternative: (psi - psi*, phi*) and (psi, phi - phi*)."""
    dpsi, dphi = _perturbations(cfg)
    if cfg.alt_decomposition:
        return (
            ("synthesizer_perturbation", dpsi, cfg.reference_analyzer),
            ("analyzer_perturbation", cfg.synthesizer, dphi),
        )
    return (
        ("synthesizer_perturbation", dpsi, cfg.analyzer),
        ("analyzer_perturbation", cfg.reference_synthesizer, dphi),
    )


def _pair_report(name: str, synth, anal, cfg: FramePairConfig) -> PairReport:
    zero = _is_zero(synth) or _is_zero(anal)
    if zero:
        return PairReport(name, True, None, None, None, {}, None, None,
                          {p: None for p in cfg.p_grid})
    st = compute_sigma_tau(synth, anal, cfg.B, cfg.tol)
    cz = cz_constants(st, cfg.A, cfg.B)
    delta, meta = delta_with_meta(synth, anal, cfg.A, cfg.B, target=0.0)
    l2 = delta.certified_upper
    zr = (3.0, cfg.zeta_max)
    n1 = optimize_zeta(lambda z: n_bound(1, l2, cz, z), zr)
    n_inf = optimize_zeta(lambda z: n_bound(math.inf, l2, cz, z), zr)
    np_entries = {
        p: optimize_zeta(lambda z, p=p: n_bound(p, l2, cz, z), zr)
        for p in cfg.p_grid
    }
    return PairReport(name, False, st, cz, delta, meta, n1, n_inf, np_entries)


def m_bound(p, cfg: FramePairConfig) -> float:
    """M_p: the sum over the two perturbation pairs of the zeta-optimized
    N_p bound; an identically-zero perturbation contributes exactly 0."""
    total = 0.0
    for name, synth, anal in _pairs(cfg):
        if _is_zero(synth) or _is_zero(anal):
            continue
        st = compute_sigma_tau(synth, anal, cfg.B, cfg.tol)
        cz = cz_constants(st, cfg.A, cfg.B)
        delta = daubechies_l2_bound(synth, anal, cfg.A, cfg.B, target=0.0)
        opt = optimize_zeta(
            lambda z: n_bound(p, delta.certified_upper, cz, z),
            (3.0, cfg.zeta_max),
        )
        total += opt.value
    return total


def certify(cfg: FramePairConfig) -> Certificate:
    """Run the full pipeline and assemble the certificate."""
    t_start = time.perf_counter()

    psi0 = cfg.synthesizer(0.0)
    phi0 = cfg.analyzer(0.0)
    hypotheses = {
        "vanishing_at_zero": {
            "synthesizer": psi0,
            "analyzer": phi0,
            "ok": abs(psi0) < 1e-12 and abs(phi0) < 1e-12,
        },
        "smoothness_and_decay": "asserted by user (not machine-checkable)",
    }

    reconstruction: dict = {
        "asserted": cfg.assume_perfect_reconstruction,
    }
    if cfg.check_reconstruction:
        recon = daubechies_l2_bound(
            cfg.reference_synthesizer, cfg.reference_analyzer,
            cfg.A, cfg.B, target=1.0,
        )
        reconstruction["l2_deviation_from_identity"] = recon.certified_upper
        reconstruction["ok"] = recon.certified_upper < 1e-6

    reports = tuple(
        _pair_report(name, synth, anal, cfg)
        for name, synth, anal in _pairs(cfg)
    )

    def total(get) -> float:
        return math.fsum(get(r).value for r in reports if get(r) is not None)

    m1 = total(lambda r: r.n1)
    m_inf = total(lambda r: r.n_inf)

    np_table = {}
    for p in cfg.p_grid:
        entries = {
            r.name: (r.np_entries[p].as_dict() if r.np_entries[p] else None)
            for r in reports
        }
        value = math.fsum(
            r.np_entries[p].value for r in reports if r.np_entries[p]
        )
        np_table[repr(float(p))] = {
            "value": value,
            "below_one": value < 1.0,
            "pairs": entries,
        }

    verdict = "bijective" if (m1 < 1.0 and m_inf < 1.0) else "inconclusive"
    neumann_rates = {"H1": m1, "L2": m1 / 2.0, "BMO": m_inf}

    inputs = {
        "synthesizer": cfg.synthesizer.to_dict(),
        "analyzer": cfg.analyzer.to_dict(),
        "reference_synthesizer": cfg.reference_synthesizer.to_dict(),
        "reference_analyzer": cfg.reference_analyzer.to_dict(),
        "A": cfg.A,
        "B": cfg.B,
        "p_grid": [float(p) for p in cfg.p_grid],
        "alt_decomposition": cfg.alt_decomposition,
    }
    if cfg.synthesizer_perturbation is not None:
        inputs["synthesizer_perturbation"] = cfg.synthesizer_perturbation.to_dict()
    if cfg.analyzer_perturbation is not None:
        inputs["analyzer_perturbation"] = cfg.analyzer_perturbation.to_dict()

    metadata = {
        "tol": cfg.tol,
        "zeta_max": cfg.zeta_max,
        "delta_grid": {r.name: r.delta_meta for r in reports},
        "zero_pairs": [r.name for r in reports if r.zero],
        "hypotheses": hypotheses,
        "reconstruction": reconstruction,
        "error_model": (
            "double precision with compensated summation and explicit "
            "margins; sup estimates are grid-resolution heuristics"
        ),
    }
    if cfg.include_timings:
        metadata["timings"] = {
            "total_seconds": time.perf_counter() - t_start
        }

    return Certificate(
        inputs=inputs,
        pairs=reports,
        m1=m1,
        m_inf=m_inf,
        np_table=np_table,
        verdict=verdict,
        neumann_rates=neumann_rates,
        metadata=metadata,
    )
