"""Command-line interface.

One subcommand per analysis product: evolve (stroboscopic time series),
spectrum (power spectrum + subharmonic weight), quasi (quasienergies and
pi-pairing), qfi / cfi (Fisher-information series + curvature fit) and
sweep (any diagnostic over an (h_x T, J T) grid). Every run writes its
delimited outputs plus a run.json sidecar with the fully resolved
configuration; feeding that sidecar back via --config reproduces the run.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__, metrology, output, quasienergy, spectral, sweep
from .config import ConfigError, RunConfig
from .dynamics import observable_by_label, stroboscopic_trajectory, total_magnetization, pair_correlation
from .errors import NumericalError
from .model import CHAIN, RING, STEP_ORDERS, TARGET_HX, TARGET_J, ModelSpec
from .states import all_zero_state

_FLAG_MAP = {
    # (config section, key)
    "n_qubits": ("model", "n_qubits"),
    "hxt": ("model", "hx_t"),
    "jt": ("model", "j_t"),
    "boundary": ("model", "boundary"),
    "period": ("model", "period"),
    "t1_fraction": ("model", "t1_fraction"),
    "step_order": ("model", "step_order"),
    "couplings": ("model", "couplings"),
    "discard": ("analysis", "transient_discard"),
    "samples": ("analysis", "spectrum_samples"),
    "n_max": ("analysis", "n_max"),
    "pair_tolerance": ("analysis", "pair_tolerance"),
    "fit_window": ("analysis", "fit_window"),
    "pd_threshold": ("analysis", "pd_threshold"),
    "h_min": ("sweep", "h_min"),
    "h_max": ("sweep", "h_max"),
    "h_count": ("sweep", "h_count"),
    "j_min": ("sweep", "j_min"),
    "j_max": ("sweep", "j_max"),
    "j_count": ("sweep", "j_count"),
    "workers": ("sweep", "workers"),
    "output_dir": ("output", "directory"),
    "format": ("output", "format"),
}


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="config file (INI sections or a run.json sidecar)")
    model = parser.add_argument_group("model")
    model.add_argument("-N", "--n-qubits", type=int, dest="n_qubits")
    model.add_argument("--hxt", type=float, help="dimensionless field h_x*T")
    model.add_argument("--jt", type=float, help="dimensionless coupling J*T")
    model.add_argument("--boundary", choices=["auto", RING, CHAIN])
    model.add_argument("--period", type=float, help="driving period T (default 1)")
    model.add_argument("--t1-fraction", type=float, dest="t1_fraction", help="T1/T (default 0.5)")
    model.add_argument("--step-order", choices=list(STEP_ORDERS), dest="step_order")
    model.add_argument("--couplings", help="comma list of per-bond J*T values")
    analysis = parser.add_argument_group("analysis")
    analysis.add_argument("--discard", type=int, help="transient periods to drop (default 50)")
    analysis.add_argument("--samples", type=int, help="spectral window length (default 512)")
    analysis.add_argument("--n-max", type=int, dest="n_max", help="metrology horizon in periods (default 200)")
    analysis.add_argument("--pair-tolerance", type=float, dest="pair_tolerance",
                          help="pi-pair gap tolerance (default 0.05*pi/T)")
    analysis.add_argument("--fit-window", type=float, dest="fit_window", help="tail fraction for curvature fits")
    analysis.add_argument("--pd-threshold", type=float, dest="pd_threshold", help="PD classification threshold")
    out = parser.add_argument_group("output")
    out.add_argument("-o", "--output-dir", dest="output_dir")
    out.add_argument("--format", choices=["csv", "json"])


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.from_file(args.config) if args.config else RunConfig()
    for flag, (section, key) in _FLAG_MAP.items():
        value = getattr(args, flag, None)
        if value is not None:
            config.set(section, key, value)
    return config.validate()


def _build_model(config: RunConfig) -> ModelSpec:
    per_bond = config.per_bond_couplings()
    return ModelSpec.dimensionless(
        config.model.n_qubits,
        config.model.hx_t,
        per_bond if per_bond is not None else config.model.j_t,
        period=config.model.period,
        t1_fraction=config.model.t1_fraction,
        boundary=None if config.model.boundary == "auto" else config.model.boundary,
        step_order=config.model.step_order,
    )


def _grid(config: RunConfig) -> sweep.GridSpec:
    s = config.sweep
    return sweep.GridSpec(
        h_range=(s.h_min, s.h_max, s.h_count),
        j_range=(s.j_min, s.j_max, s.j_count),
        n_qubits=config.model.n_qubits,
        boundary=None if config.model.boundary == "auto" else config.model.boundary,
        period=config.model.period,
        t1_fraction=config.model.t1_fraction,
        step_order=config.model.step_order,
    )


def _out_dir(config: RunConfig) -> Path:
    directory = Path(config.output.directory)
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def _finish(directory, command, config, summary, files) -> int:
    sidecar = output.write_run_sidecar(
        directory, command, config.to_dict(), summary, files, __version__
    )
    files = files + [sidecar]
    for key, value in summary.items():
        print(f"{key} = {value}")
    print("wrote " + ", ".join(str(f) for f in files))
    return 0


def _cmd_evolve(args) -> int:
    config = _resolve_config(args)
    spec = _build_model(config)
    periods = args.periods or config.analysis.transient_discard + config.analysis.spectrum_samples
    psi0 = all_zero_state(spec.n_qubits)
    observables = [total_magnetization(spec.n_qubits)]
    if spec.n_qubits >= 2:
        observables.append(pair_correlation(spec.n_qubits))
    series = stroboscopic_trajectory(spec, psi0, periods, observables)
    directory = _out_dir(config)
    files = [output.write_time_series(directory, s, config.output.format) for s in series]
    summary = {"periods": periods}
    for s in series:
        summary[f"{s.label}_final"] = float(s.values[-1])
    return _finish(directory, "evolve", config, summary, files)


def _cmd_spectrum(args) -> int:
    config = _resolve_config(args)
    spec = _build_model(config)
    discard = config.analysis.transient_discard
    samples = config.analysis.spectrum_samples
    psi0 = all_zero_state(spec.n_qubits)
    series = stroboscopic_trajectory(
        spec, psi0, discard + samples, [total_magnetization(spec.n_qubits)]
    )[0]
    signal = series.values[discard : discard + samples]
    spectrum = spectral.power_spectrum(signal - signal.mean(), period=spec.protocol.period)
    diagnostic = spectral.subharmonic_weight(series, discard, samples)
    directory = _out_dir(config)
    files = [output.write_spectrum(directory, spectrum, config.output.format)]
    dominant = int(1 + np.argmax(spectrum.powers[1:]))
    summary = {
        "weight": diagnostic.weight,
        "dominant_bin": dominant,
        "subharmonic_bin": samples // 2,
    }
    return _finish(directory, "spectrum", config, summary, files)


def _cmd_quasi(args) -> int:
    config = _resolve_config(args)
    spec = _build_model(config)
    psi0 = all_zero_state(spec.n_qubits)
    analysis, overlap = quasienergy.analyze(spec, psi0, config.pair_tolerance())
    directory = _out_dir(config)
    files = output.write_quasienergies(directory, analysis, config.output.format)
    files.append(
        output.write_quasi_summary(directory, analysis.pair_fraction, overlap, config.output.format)
    )
    summary = {
        "f_pi": analysis.pair_fraction,
        "w_overlap": overlap,
        "n_pairs": len(analysis.pairs),
    }
    return _finish(directory, "quasi", config, summary, files)


def _theta(args) -> str:
    return TARGET_HX if args.theta == "hx" else TARGET_J


def _fisher_summary(fit: metrology.CurvatureFit) -> dict:
    return {"a": fit.a, "b": fit.b, "c": fit.c, "kappa": fit.kappa,
            "rms": fit.rms_residual, "window": list(fit.window)}


def _cmd_qfi(args) -> int:
    config = _resolve_config(args)
    spec = _build_model(config)
    psi0 = all_zero_state(spec.n_qubits)
    series = metrology.qfi_series(spec, _theta(args), psi0, config.analysis.n_max)
    fit = metrology.curvature_fit(series, config.analysis.fit_window)
    directory = _out_dir(config)
    files = [
        output.write_fisher_series(directory, series, config.output.format),
        output.write_curvature(directory, fit),
    ]
    return _finish(directory, "qfi", config, _fisher_summary(fit), files)


def _cmd_cfi(args) -> int:
    config = _resolve_config(args)
    spec = _build_model(config)
    psi0 = all_zero_state(spec.n_qubits)
    observable = observable_by_label(args.observable, spec.n_qubits)
    mode = metrology.MODE_EXACT if args.gradient_mode == "exact" else metrology.MODE_FINITE_DIFFERENCE
    series = metrology.cfi_series(
        spec, _theta(args), observable, psi0, config.analysis.n_max, mode=mode
    )
    directory = _out_dir(config)
    files = [output.write_fisher_series(directory, series, config.output.format)]
    try:
        fit = metrology.curvature_fit(series, config.analysis.fit_window)
    except ValueError:
        # too few defined points (e.g. a variance-degenerate observable)
        summary = {"fit": "skipped: too few defined points"}
    else:
        files.append(output.write_curvature(directory, fit))
        summary = _fisher_summary(fit)
    summary["undefined_points"] = int(np.sum(series.flags == metrology.FLAG_UNDEFINED))
    summary["divergent_points"] = int(np.sum(series.flags == metrology.FLAG_DIVERGENT))
    return _finish(directory, "cfi", config, summary, files)


_DIAG_BY_FLAG = {
    "weight": sweep.WEIGHT,
    "fpi": sweep.PI_FRACTION,
    "overlap": sweep.OVERLAP,
    "kappa-hx": sweep.KAPPA_HX,
    "kappa-j": sweep.KAPPA_J,
}


def _cmd_sweep(args) -> int:
    config = _resolve_config(args)
    diagnostic = _DIAG_BY_FLAG[args.diag]
    grid = _grid(config)
    settings = sweep.SweepSettings(
        transient_discard=config.analysis.transient_discard,
        spectrum_samples=config.analysis.spectrum_samples,
        n_max=config.analysis.n_max,
        pair_tolerance=config.pair_tolerance(),
        fit_window=config.analysis.fit_window,
        workers=config.sweep.workers,
    )
    diagram = sweep.sweep_diagnostic(grid, diagnostic, settings)
    if diagnostic == sweep.WEIGHT:
        sweep.classify_pd(diagram, config.analysis.pd_threshold)
    directory = _out_dir(config)
    files = [output.write_diagram(directory, diagram, config.output.format)]
    finite = diagram.values[np.isfinite(diagram.values)]
    summary = {
        "diagnostic": diagnostic,
        "cells": int(diagram.values.size),
        "failed_cells": int(diagram.values.size - finite.size),
        "min": float(finite.min()) if finite.size else None,
        "max": float(finite.max()) if finite.size else None,
    }
    if diagram.classification is not None:
        summary["pd_cells"] = int(diagram.classification.sum())
        summary["pd_threshold"] = config.analysis.pd_threshold
    return _finish(directory, "sweep", config, summary, files)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="floquet-ising",
        description="Exact simulation and Fisher-information metrology of the "
        "periodically driven few-qubit transverse-field Ising model.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    evolve = commands.add_parser("evolve", help="stroboscopic M_z and C_zz time series")
    evolve.add_argument("--periods", type=int, help="number of driving periods (default discard+samples)")
    evolve.set_defaults(handler=_cmd_evolve)

    spectrum = commands.add_parser("spectrum", help="power spectrum and subharmonic weight")
    spectrum.set_defaults(handler=_cmd_spectrum)

    quasi = commands.add_parser("quasi", help="quasienergies, pi-pairs, overlap weight")
    quasi.set_defaults(handler=_cmd_quasi)

    qfi = commands.add_parser("qfi", help="quantum Fisher information series + curvature fit")
    qfi.add_argument("--theta", choices=["hx", "j"], required=True, help="estimation target")
    qfi.set_defaults(handler=_cmd_qfi)

    cfi = commands.add_parser("cfi", help="classical Fisher information series + curvature fit")
    cfi.add_argument("--theta", choices=["hx", "j"], required=True, help="estimation target")
    cfi.add_argument("--observable", choices=["mz", "czz"], default="mz")
    cfi.add_argument("--gradient-mode", choices=["exact", "finite-difference"],
                     default="exact", dest="gradient_mode")
    cfi.set_defaults(handler=_cmd_cfi)

    sweep_cmd = commands.add_parser("sweep", help="evaluate a diagnostic over an (h_x T, J T) grid")
    sweep_cmd.add_argument("--diag", choices=list(_DIAG_BY_FLAG), default="weight")
    grid = sweep_cmd.add_argument_group("grid")
    grid.add_argument("--h-min", type=float, dest="h_min")
    grid.add_argument("--h-max", type=float, dest="h_max")
    grid.add_argument("--h-count", type=int, dest="h_count")
    grid.add_argument("--j-min", type=float, dest="j_min")
    grid.add_argument("--j-max", type=float, dest="j_max")
    grid.add_argument("--j-count", type=int, dest="j_count")
    grid.add_argument("--workers", type=int, help="parallel worker processes (default 1)")
    sweep_cmd.set_defaults(handler=_cmd_sweep)

    for sub in (evolve, spectrum, quasi, qfi, cfi, sweep_cmd):
        _add_common_flags(sub)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, NumericalError) as exc:
        module = type(exc).__module__
        print(f"error [{module}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
