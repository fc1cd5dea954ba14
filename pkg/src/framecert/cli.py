"""Command-line interface: configuration parsing, certificate serialization,
kernel slices, and plot data (CSV plus rendered PNG figures).

Exit codes: 0 = bijective verdict, 2 = inconclusive verdict, 1 = error.
Output files are deterministic for a fixed configuration; wall-clock timings
are included only when explicitly requested.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Optional

import numpy as np

from .certify import (
    Certificate,
    ConfigError,
    FramePairConfig,
    P_GRID_DEFAULT,
    ZETA_MAX_DEFAULT,
    certify,
)
from .funcexpr import FrequencyFunction
from .kernellab import kernel0_freq
from .mexhat import build_catalog

_PLOT_RANGE = (-1.0, 1.0)
_PLOT_SAMPLES = 2001


def _fail(msg: str) -> "NoReturn":  # noqa: F821
    print(f"error: {msg}", file=sys.stderr)
    sys.exit(1)


def _parse_function(cfg: dict, field: str, required: bool = True
                    ) -> Optional[FrequencyFunction]:
    if field not in cfg or cfg[field] is None:
        if required:
            raise ConfigError(f"field '{field}': missing function definition")
        return None
    try:
        return FrequencyFunction.from_dict(cfg[field])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"field '{field}': {exc}") from exc


def _number(cfg: dict, field: str, default=None) -> float:
    if field not in cfg:
        if default is None:
            raise ConfigError(f"field '{field}': missing")
        return default
    v = cfg[field]
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise ConfigError(f"field '{field}': expected a number, got {v!r}")
    return float(v)


def load_config(path: str, overrides: argparse.Namespace) -> FramePairConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config file: top level must be a JSON object")
    return build_pair_config(raw, overrides)


def build_pair_config(raw: dict, overrides: argparse.Namespace
                      ) -> FramePairConfig:
    p_grid = raw.get("p_grid", list(P_GRID_DEFAULT))
    if overrides.p_grid is not None:
        p_grid = overrides.p_grid
    try:
        p_grid = tuple(float(p) for p in p_grid)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"field 'p_grid': {exc}") from exc

    return FramePairConfig(
        synthesizer=_parse_function(raw, "synthesizer"),
        analyzer=_parse_function(raw, "analyzer"),
        reference_synthesizer=_parse_function(raw, "reference_synthesizer"),
        reference_analyzer=_parse_function(raw, "reference_analyzer"),
        synthesizer_perturbation=_parse_function(
            raw, "synthesizer_perturbation", required=False),
        analyzer_perturbation=_parse_function(
            raw, "analyzer_perturbation", required=False),
        A=_number(raw, "A"),
        B=_number(raw, "B"),
        tol=(overrides.tol if overrides.tol is not None
             else _number(raw, "tol", 1e-8)),
        zeta_max=(overrides.zeta_max if overrides.zeta_max is not None
                  else _number(raw, "zeta_max", ZETA_MAX_DEFAULT)),
        p_grid=p_grid,
        alt_decomposition=bool(
            overrides.alt_decomposition or raw.get("alt_decomposition", False)
        ),
        assume_perfect_reconstruction=bool(
            raw.get("assume_perfect_reconstruction", True)),
        check_reconstruction=bool(raw.get("check_reconstruction", True)),
        include_timings=bool(raw.get("include_timings", False)),
    )


def mexican_hat_config(overrides: argparse.Namespace) -> FramePairConfig:
    cat = build_catalog()
    return FramePairConfig(
        synthesizer=cat.psi_hat,
        analyzer=cat.phi_hat,
        reference_synthesizer=cat.psi_star_hat,
        reference_analyzer=cat.phi_hat,
        synthesizer_perturbation=cat.mu_hat,
        A=cat.A,
        B=cat.B,
        tol=overrides.tol if overrides.tol is not None else 1e-8,
        zeta_max=(overrides.zeta_max if overrides.zeta_max is not None
                  else ZETA_MAX_DEFAULT),
        p_grid=(tuple(overrides.p_grid) if overrides.p_grid is not None
                else P_GRID_DEFAULT),
        alt_decomposition=bool(overrides.alt_decomposition),
    )


def serialize_certificate(cert: Certificate) -> str:
    return json.dumps(cert.as_dict(), sort_keys=True, indent=2) + "\n"


def _write_text(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        _fail(f"cannot write {path}: {exc}")


def _resolve_config(args: argparse.Namespace) -> FramePairConfig:
    if args.preset == "mexican-hat":
        return mexican_hat_config(args)
    if args.preset is not None:
        raise ConfigError(f"field 'preset': unknown preset {args.preset!r}")
    if args.config is None:
        raise ConfigError("field 'config': provide --config or --preset")
    return load_config(args.config, args)


def cmd_certify(args: argparse.Namespace) -> int:
    try:
        cfg = _resolve_config(args)
    except ConfigError as exc:
        _fail(str(exc))
    cert = certify(cfg)
    _write_text(args.out, serialize_certificate(cert))
    return 0 if cert.verdict == "bijective" else 2


def _catalog_functions(args: argparse.Namespace) -> dict:
    if args.preset == "mexican-hat" or (args.preset is None and
                                        args.config is None):
        cat = build_catalog()
        return {
            "psi_hat": cat.psi_hat,
            "cutoff": cat.cutoff,
            "bump": cat.bump,
            "psi_star_hat": cat.psi_star_hat,
            "mu_hat": cat.mu_hat,
            "phi_hat": cat.phi_hat,
        }
    cfg = _resolve_config(args)
    out = {
        "synthesizer": cfg.synthesizer,
        "analyzer": cfg.analyzer,
        "reference_synthesizer": cfg.reference_synthesizer,
        "reference_analyzer": cfg.reference_analyzer,
    }
    if cfg.synthesizer_perturbation is not None:
        out["synthesizer_perturbation"] = cfg.synthesizer_perturbation
    if cfg.analyzer_perturbation is not None:
        out["analyzer_perturbation"] = cfg.analyzer_perturbation
    return out


def _render_figure(path: str, xi: np.ndarray, curves: dict, title: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 4.5))
    for name, vals in curves.items():
        ax.plot(xi, vals, label=name, linewidth=1.2)
    ax.set_xlabel("xi")
    ax.legend(loc="best", fontsize=8)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_plots(args: argparse.Namespace) -> int:
    try:
        funcs = _catalog_functions(args)
    except ConfigError as exc:
        _fail(str(exc))
    out_dir = args.out or "plots"
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        _fail(f"cannot create output directory {out_dir}: {exc}")

    lo, hi = _PLOT_RANGE
    xi = np.linspace(lo, hi, _PLOT_SAMPLES)
    all_curves = {}
    for name, f in funcs.items():
        vals = f.values(xi)
        all_curves[name] = vals
        csv_path = os.path.join(out_dir, f"{name}.csv")
        lines = ["xi,value"]
        lines += [f"{float(x)!r},{float(v)!r}" for x, v in zip(xi, vals)]
        _write_text(csv_path, "\n".join(lines) + "\n")
        _render_figure(os.path.join(out_dir, f"{name}.png"), xi,
                       {name: vals}, name)
    _render_figure(os.path.join(out_dir, "overview.png"), xi, all_curves,
                   "frequency-domain catalog")
    return 0


def cmd_kernel(args: argparse.Namespace) -> int:
    try:
        funcs = _catalog_functions(args)
    except ConfigError as exc:
        _fail(str(exc))
    if "mu_hat" in funcs:
        psi, phi = funcs["mu_hat"], funcs["phi_hat"]
        pair_name = "mu_hat,phi_hat"
    else:
        psi, phi = funcs["synthesizer"], funcs["analyzer"]
        pair_name = "synthesizer,analyzer"
    out_dir = args.out or "kernel"
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        _fail(f"cannot create output directory {out_dir}: {exc}")

    y = args.y
    B = 1.0
    xs = np.linspace(y - 5.0, y + 5.0, args.samples)
    rows = ["x,y,value,imag"]
    values = []
    for x in xs:
        r = kernel0_freq(psi, phi, float(x), y, B,
                         l_truncation=args.l_trunc, tol=1e-9)
        values.append(r.value)
        rows.append(f"{float(x)!r},{y!r},{r.value!r},{r.imag!r}")
    _write_text(os.path.join(out_dir, "kernel0_slice.csv"),
                "\n".join(rows) + "\n")
    _render_figure(os.path.join(out_dir, "kernel0_slice.png"), xs,
                   {f"K0(x, {y}) [{pair_name}]": np.array(values)},
                   "level-0 kernel slice")
    return 0


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON configuration file")
    sub.add_argument("--preset", choices=["mexican-hat"],
                     help="built-in example configuration")
    sub.add_argument("--out", help="output path (file or directory)")
    sub.add_argument("--tol", type=float, default=None,
                     help="quadrature/lattice tolerance override")
    sub.add_argument("--zeta-max", dest="zeta_max", type=float, default=None,
                     help="upper end of the zeta search range")
    sub.add_argument("--p-grid", dest="p_grid", default=None,
                     type=lambda s: [float(t) for t in s.split(",") if t],
                     help="comma-separated list of p values to report")
    sub.add_argument("--alt-decomposition", action="store_true",
                     help="swap the roles of the pairs in the M_p split")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="framecert",
        description=("Certified bounds for wavelet frame operators: kernel "
                     "constants, deviation estimates and bijectivity "
                     "verdicts on H^1, L^p and BMO."),
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_cert = subs.add_parser("certify", help="run the full certification")
    _add_common(p_cert)

    p_mex = subs.add_parser("mexican-hat",
                            help="certify the built-in example")
    _add_common(p_mex)

    p_kernel = subs.add_parser("kernel", help="emit a level-0 kernel slice")
    _add_common(p_kernel)
    p_kernel.add_argument("--y", type=float, default=0.25,
                          help="fixed second argument of the slice")
    p_kernel.add_argument("--samples", type=int, default=201)
    p_kernel.add_argument("--l-trunc", dest="l_trunc", type=int, default=6)

    p_plots = subs.add_parser("plots",
                              help="emit CSV samples and PNG figures")
    _add_common(p_plots)

    args = parser.parse_args(argv)
    if args.command == "mexican-hat":
        args.preset = "mexican-hat"
        args.command = "certify"

    try:
        if args.command == "certify":
            return cmd_certify(args)
        if args.command == "plots":
            return cmd_plots(args)
        if args.command == "kernel":
            return cmd_kernel(args)
    except ConfigError as exc:
        _fail(str(exc))
    except Exception as exc:  # numeric sub-failures -> exit 1
        _fail(f"{type(exc).__name__}: {exc}")
    parser.error(f"unknown command {args.command!r}")
    return 1


if __name__ == "__main__":
    sys.exit(main())
