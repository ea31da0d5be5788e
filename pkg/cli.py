"""Command-line entrypoint for the point-interaction toolkit."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np
import pandas as pd

from pointscatter.config import OUTPUT_FORMATS, TASKS, InteractionSpec, RunConfig, load_config, with_overrides
from pointscatter.errors import (
    ConfigError,
    ImpermeableInteraction,
    NumericalError,
    ValidationError,
)
from pointscatter.physics.convergence import build_deviation_ladder, fit_deviation_trend
from pointscatter.physics.lambda_algebra import (
    Arrangement,
    LambdaParams,
    Parity,
    PhysicalStrengths,
    is_permeable,
    lambda_to_strengths,
    make_arrangement,
    make_even_arrangement,
    make_odd_arrangement,
    strengths_to_lambda,
)
from pointscatter.physics.nonrel_limit import nonrel_consistency_check
from pointscatter.physics.resonance import closed_form_distance, impermeable_box_spectrum, search_resonances
from pointscatter.physics.special_cases import SpecialCaseId, base_lambda, case_strengths, instantiate
from pointscatter.physics.spectra import SpectrumReport, check_critical, check_supercritical, find_bound_states
from pointscatter.physics.transfer_core import scattering_amplitudes, single_point_limit
from pointscatter.reporting.exporters import frame_to_csv, to_json_text, write_csv, write_datasets, write_json
from pointscatter.reporting.figures import generate_figure
from pointscatter.reporting.tables import (
    bound_state_frame,
    box_frame,
    conversion_frame,
    limit_frame,
    pole_frame,
    scatter_frame,
    threshold_frame,
)

logger = logging.getLogger("pointscatter.cli")

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


class PartialResult(NumericalError):
    """Results were written but some of them are flagged as untrustworthy."""


def _say(message: str) -> None:
    # stdout carries the data when no --out is given
    print(message, file=sys.stderr)


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="pointscatter",
        description="Spectra, resonances and scattering of two Dirac point interactions.",
    )
    parser.add_argument("task", choices=TASKS, help="Operation to run.")
    parser.add_argument("--config", type=Path, default=None, help="JSON run document.")
    parser.add_argument("--out", type=Path, default=None, help="Output file or directory. Defaults to stdout.")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default=None, help="Output format (csv, json, xlsx).")
    parser.add_argument("--grid", type=int, default=None, help="Points of the real-energy bound-state scan.")
    parser.add_argument(
        "--tol",
        type=float,
        default=None,
        help="Residual tolerance for threshold, bound-state and pole acceptance.",
    )
    parser.add_argument("--log-level", type=str, default=None, help="Logging level (default WARNING).")
    parser.add_argument("--mass", type=float, default=None, help="Mass m > 0.")
    parser.add_argument("--separation", type=float, default=None, help="Separation l >= 0.")
    parser.add_argument("--case", type=str, default=None, help="Special case such as 'even/equal-mixture'.")
    parser.add_argument("--strength", type=float, default=None, help="Strength of the special case.")
    parser.add_argument(
        "--strengths",
        type=float,
        nargs=4,
        action="append",
        metavar=("B", "A0", "A1", "W"),
        default=None,
        help="Physical strengths; give once (with --parity) or twice (one per point).",
    )
    parser.add_argument(
        "--lambda",
        dest="lambdas",
        type=float,
        nargs=5,
        action="append",
        metavar=("PHI", "A", "B", "C", "D"),
        default=None,
        help="Lambda parameters; give once (with --parity) or twice (one per point).",
    )
    parser.add_argument("--parity", choices=("even", "odd", "general"), default=None)
    parser.add_argument("--figure", type=int, default=None, help="Figure id for the figure task.")
    parser.add_argument("--boundary", type=str, default=None, help="Box boundary such as 'even/pseudoscalar:+'.")
    parser.add_argument(
        "--ladder",
        type=float,
        nargs="+",
        default=None,
        help="Strengths for a non-relativistic deviation ladder.",
    )
    return parser.parse_args(argv)


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge CLI flags over the JSON document over the defaults."""
    cfg = load_config(args.config) if args.config is not None else RunConfig()
    cfg = with_overrides(
        cfg,
        task=args.task,
        mass=args.mass,
        separation=args.separation,
        output_path=args.out,
        output_format=args.format,
        figure=args.figure,
        boundary=args.boundary,
        log_level=args.log_level.upper() if args.log_level else None,
    )
    if args.grid is not None:
        cfg.scan = replace(cfg.scan, grid=args.grid)
    if args.tol is not None:
        cfg.tolerances = replace(cfg.tolerances, threshold=args.tol, bound_residual=args.tol, pole=args.tol)

    if args.case is not None or args.strengths is not None or args.lambdas is not None:
        interaction = InteractionSpec(parity=args.parity or "general")
        if args.case is not None:
            if args.strength is None:
                raise ConfigError("--case needs --strength")
            interaction.case, interaction.strength = args.case, args.strength
        if args.strengths is not None:
            interaction.strengths = tuple(tuple(row) for row in args.strengths)  # type: ignore[assignment]
        if args.lambdas is not None:
            interaction.lambdas = tuple(tuple(row) for row in args.lambdas)  # type: ignore[assignment]
        interaction.form()
        cfg.interaction = interaction
    elif args.parity is not None:
        cfg.interaction.parity = args.parity
    return cfg.validate()


def _case(cfg: RunConfig) -> SpecialCaseId | None:
    spec = cfg.interaction
    if spec.case is None:
        return None
    return SpecialCaseId.parse(spec.case, spec.strength or 0.0)


def _pair(lambdas: Sequence[LambdaParams], parity: str, m: float, l: float) -> Arrangement:
    if len(lambdas) == 2:
        return Arrangement(m, l, lambdas[0], lambdas[1], Parity(parity))
    if parity == "even":
        return make_even_arrangement(lambdas[0], m, l)
    if parity == "odd":
        return make_odd_arrangement(lambdas[0], m, l)
    return make_arrangement(lambdas[0], lambdas[0], m, l)


def build_arrangement(cfg: RunConfig) -> Arrangement:
    spec = cfg.interaction
    form = spec.form()
    if form == "case":
        return instantiate(_case(cfg), cfg.mass, cfg.separation)  # type: ignore[arg-type]
    if form == "strengths":
        lambdas = [strengths_to_lambda(PhysicalStrengths(*row)) for row in spec.strengths or ()]
    else:
        lambdas = [LambdaParams(*row) for row in spec.lambdas or ()]
    return _pair(lambdas, spec.parity, cfg.mass, cfg.separation)


# --- tasks ------------------------------------------------------------------

Datasets = Mapping[str, pd.DataFrame]


def cmd_convert(cfg: RunConfig) -> Datasets:
    """Both representations of each support point plus the permeability flag."""
    spec = cfg.interaction
    form = spec.form()
    rows: list[tuple[PhysicalStrengths | None, LambdaParams | None, bool]] = []
    if form == "case":
        case = _case(cfg)
        strengths = case_strengths(case)  # type: ignore[arg-type]
        permeable = is_permeable(strengths)
        rows.append((strengths, base_lambda(case) if permeable else None, permeable))  # type: ignore[arg-type]
    elif form == "strengths":
        for raw in spec.strengths or ():
            strengths = PhysicalStrengths(*raw)
            permeable = is_permeable(strengths)
            rows.append((strengths, strengths_to_lambda(strengths) if permeable else None, permeable))
    else:
        for raw in spec.lambdas or ():
            lam = LambdaParams(*raw)
            rows.append((lambda_to_strengths(lam), lam, True))

    frame = conversion_frame(rows)
    blocked = [index for index, (_, _, permeable) in enumerate(rows, start=1) if not permeable]
    if blocked:
        _emit({"convert": frame}, cfg, "convert")
        raise ImpermeableInteraction(
            f"Point(s) {blocked} are impermeable: A1 = 0 and B^2 + W^2 - A0^2 - 4 = 0"
        )
    return {"convert": frame}


def cmd_bound_states(cfg: RunConfig) -> Datasets:
    arr = build_arrangement(cfg)
    report = find_bound_states(arr, cfg.scan, tol=cfg.tolerances)
    _say(f"Bound states: {len(report.bound_states)} ({report.method.value})")
    return {"bound_states": bound_state_frame(report, arr), "thresholds": threshold_frame(report, arr)}


def cmd_critical(cfg: RunConfig) -> Datasets:
    arr = build_arrangement(cfg)
    report = SpectrumReport(
        critical=check_critical(arr, tol=cfg.tolerances),
        supercritical=check_supercritical(arr, tol=cfg.tolerances),
    )
    _say(f"Critical: {report.has_critical}  Supercritical: {report.has_supercritical}")
    return {"thresholds": threshold_frame(report, arr)}


def cmd_resonances(cfg: RunConfig) -> Datasets:
    arr = build_arrangement(cfg)
    search = search_resonances(arr, None, cfg.seeds, tol=cfg.tolerances)
    frame = pole_frame(search.poles)
    case = _case(cfg)
    if case is not None and search.poles:
        frame["closed_form_distance"] = [
            closed_form_distance(case, pole.energy, cfg.mass, cfg.separation) for pole in search.poles
        ]
    if search.dropped:
        _say(f"[WARN] {search.dropped} of {search.seeds} Newton seeds did not converge")
    _say(f"Resonance poles: {len(search.poles)}")
    return {"resonances": frame}


def cmd_scatter(cfg: RunConfig) -> Datasets:
    arr = build_arrangement(cfg)
    grid = cfg.energies
    energies = np.linspace(grid.e_min * cfg.mass, grid.e_max * cfg.mass, grid.points)
    if grid.include_negative:
        energies = np.concatenate([-energies[::-1], energies])
    amplitudes = scattering_amplitudes(arr, energies, tol=cfg.tolerances)
    _say(f"Scatter: {energies.size} energies, max unitarity defect {amplitudes.unitarity_defect.max():.3e}")
    return {"scatter": scatter_frame(amplitudes)}


def cmd_figure(cfg: RunConfig) -> Datasets:
    if cfg.figure is None:
        raise ConfigError("The figure task needs --figure")
    result = generate_figure(
        cfg.figure, cfg.mass, cfg.separation, scan=cfg.scan, seeds=cfg.seeds, tol=cfg.tolerances
    )
    _say(f"Figure {result.figure_id}: {result.title}")
    if not result.anchors_match:
        _emit(result.datasets, cfg, f"figure_{result.figure_id:02d}")
        raise PartialResult(f"Figure {result.figure_id} anchors do not match; datasets written and flagged")
    return result.datasets


def cmd_limit(cfg: RunConfig) -> Datasets:
    arr = build_arrangement(cfg)
    matrix, parity_class = single_point_limit(arr)
    _say(f"Single-point limit: {parity_class.value}")
    return {"limit": limit_frame(matrix, parity_class)}


def cmd_nonrel_check(cfg: RunConfig, ladder: Sequence[float] | None = None) -> Datasets:
    case = _case(cfg)
    if case is None:
        raise ConfigError("nonrel-check needs a special case (--case/--strength)")
    if ladder:
        frame = build_deviation_ladder(case, ladder, cfg.mass, cfg.separation, scan=cfg.scan)
        trend = fit_deviation_trend(frame)
        if trend.slope is None:
            _say("[WARN] Too few compared rows for a deviation trend")
        else:
            _say(f"Deviation trend slope: {trend.slope:.6f}")
        return {"ladder": trend.frame}

    report = nonrel_consistency_check(case, None, cfg.mass, cfg.separation, scan=cfg.scan)
    frame = pd.DataFrame(
        [
            {
                "case": report.case,
                "strength": report.strength,
                "mass": report.mass,
                "separation": report.separation,
                "eps_rel": report.eps_rel,
                "eps_nr": report.eps_nr,
                "deviation": report.deviation,
                "status": report.status.value,
            }
        ]
    )
    _say(f"Non-relativistic check: {report.status.value}")
    return {"nonrel": frame}


def cmd_box(cfg: RunConfig) -> Datasets:
    if cfg.boundary is None:
        raise ConfigError("The box task needs --boundary")
    spectrum = impermeable_box_spectrum(cfg.boundary, cfg.mass, cfg.separation)
    _say(f"Box spectrum: {len(spectrum.inside)} inside, {len(spectrum.outside)} outside")
    return {"box": box_frame(spectrum, cfg.mass)}


COMMANDS: dict[str, Callable[[RunConfig], Datasets]] = {
    "convert": cmd_convert,
    "bound-states": cmd_bound_states,
    "critical": cmd_critical,
    "resonances": cmd_resonances,
    "scatter": cmd_scatter,
    "figure": cmd_figure,
    "limit": cmd_limit,
    "box": cmd_box,
}


def _emit(datasets: Datasets, cfg: RunConfig, stem: str) -> list[Path]:
    out, fmt = cfg.output_path, cfg.output_format
    if out is None:
        if fmt == "xlsx":
            raise ConfigError("xlsx output needs --out")
        for name, frame in datasets.items():
            if len(datasets) > 1:
                print(f"# {name}")
            sys.stdout.write(frame_to_csv(frame) if fmt == "csv" else to_json_text(frame))
        return []
    if len(datasets) == 1 and out.suffix in (".csv", ".json"):
        frame = next(iter(datasets.values()))
        return [write_csv(frame, out) if out.suffix == ".csv" else write_json(frame, out)]
    try:
        return write_datasets(datasets, out, fmt, stem=stem)
    except ImportError as exc:
        _say(f"[WARN] Workbook export skipped: {exc}")
        return []


def run(cfg: RunConfig, ladder: Sequence[float] | None = None) -> list[Path]:
    logger.info("Running %s (m=%g, l=%g)", cfg.task, cfg.mass, cfg.separation)
    if cfg.task == "nonrel-check":
        datasets = cmd_nonrel_check(cfg, ladder)
    else:
        datasets = COMMANDS[cfg.task](cfg)
    stem = f"figure_{cfg.figure:02d}" if cfg.task == "figure" and cfg.figure is not None else cfg.task
    return _emit(datasets, cfg, stem)


def main(argv: Sequence[str] | None = None) -> int:
    args = parse_args(argv)
    level = (args.log_level or "WARNING").upper()
    if not isinstance(logging.getLevelName(level), int):
        print(f"[ERROR] Unknown log level '{args.log_level}'", file=sys.stderr)
        return EXIT_VALIDATION
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = build_config(args)
        logging.getLogger().setLevel(cfg.log_level)
        written = run(cfg, args.ladder)
    except (ValidationError, FileNotFoundError) as exc:
        print(f"[ERROR] {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"[ERROR] {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    if written:
        print("Outputs generated:\n" + "\n".join(f" - {path}" for path in written))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
