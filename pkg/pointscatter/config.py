"""Run configuration: tolerances, scan grids and the JSON run document."""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping, Sequence

from .errors import ConfigError

THREADS_ENV_VAR = "POINTSCATTER_THREADS"

TASKS = (
    "convert",
    "bound-states",
    "critical",
    "resonances",
    "scatter",
    "figure",
    "limit",
    "nonrel-check",
    "box",
)
OUTPUT_FORMATS = ("csv", "json", "xlsx")


@dataclass(frozen=True, slots=True)
class Tolerances:
    """Library-wide numerical tolerances.

    Energies and lengths are measured in units of the mass where a tolerance is
    marked as relative to ``m``.
    """

    algebraic: float = 1e-12
    round_trip: float = 1e-10
    composition: float = 1e-11
    k_guard: float = 1e-9
    threshold: float = 1e-10
    bound_residual: float = 1e-9
    pole: float = 1e-10
    dedupe: float = 1e-8
    locus: float = 1e-6
    closed_form: float = 1e-9

    def __post_init__(self) -> None:
        for item in fields(self):
            value = getattr(self, item.name)
            if not value > 0:
                raise ConfigError(f"Tolerance '{item.name}' must be positive, got {value!r}")


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True, slots=True)
class ScanSpec:
    """Real-energy scan used by the bound-state solver."""

    grid: int = 4096
    endpoint_eps: float = 1e-6
    xtol: float = 1e-12
    verify_closed_form: bool = False
    threads: int | None = None

    def __post_init__(self) -> None:
        if self.grid < 8:
            raise ConfigError(f"Scan grid must have at least 8 points, got {self.grid}")
        if not 0 < self.endpoint_eps < 0.5:
            raise ConfigError(f"endpoint_eps must lie in (0, 0.5), got {self.endpoint_eps}")
        if not self.xtol > 0:
            raise ConfigError(f"xtol must be positive, got {self.xtol}")


@dataclass(frozen=True, slots=True)
class SeedSpec:
    """Seed grid for the complex Newton search, in units of ``m``."""

    nx: int = 64
    ny: int = 32
    re_min: float = -6.0
    re_max: float = 6.0
    im_min: float = -2.0
    im_max: float = -1e-4
    max_iter: int = 60
    deflation_rounds: int = 2
    threads: int | None = None

    def __post_init__(self) -> None:
        if self.nx < 1 or self.ny < 1:
            raise ConfigError(f"Seed grid must be non-empty, got {self.nx}x{self.ny}")
        if not self.re_min < self.re_max:
            raise ConfigError("Seed window needs re_min < re_max")
        if not self.im_min < self.im_max <= 0:
            raise ConfigError("Seed window must lie in the lower half-plane with im_min < im_max <= 0")


@dataclass(frozen=True, slots=True)
class EnergyGrid:
    """Real energy grid for scattering spectra, in units of ``m``."""

    e_min: float = 1.001
    e_max: float = 6.0
    points: int = 200
    include_negative: bool = False

    def __post_init__(self) -> None:
        if not 1.0 < self.e_min < self.e_max:
            raise ConfigError("Scatter grid needs 1 < e_min < e_max (energies in units of m)")
        if self.points < 1:
            raise ConfigError("Scatter grid needs at least one point")


@dataclass(slots=True)
class InteractionSpec:
    """Exactly one of ``case``, ``strengths`` or ``lambdas`` is set."""

    case: str | None = None
    strength: float | None = None
    strengths: tuple[tuple[float, float, float, float], ...] | None = None
    lambdas: tuple[tuple[float, float, float, float, float], ...] | None = None
    parity: str = "general"

    def form(self) -> str:
        present = [
            name
            for name, value in (("case", self.case), ("strengths", self.strengths), ("lambda", self.lambdas))
            if value is not None
        ]
        if len(present) != 1:
            raise ConfigError(f"Exactly one interaction form is required, got {present or 'none'}")
        return present[0]


@dataclass(slots=True)
class RunConfig:
    mass: float = 2.0
    separation: float = 1.0
    interaction: InteractionSpec = field(default_factory=InteractionSpec)
    task: str = "bound-states"
    scan: ScanSpec = field(default_factory=ScanSpec)
    seeds: SeedSpec = field(default_factory=SeedSpec)
    energies: EnergyGrid = field(default_factory=EnergyGrid)
    tolerances: Tolerances = DEFAULT_TOLERANCES
    output_path: Path | None = None
    output_format: str = "csv"
    figure: int | None = None
    boundary: str | None = None
    log_level: str = "WARNING"

    def validate(self) -> "RunConfig":
        if not self.mass > 0:
            raise ConfigError(f"mass must be positive, got {self.mass}")
        if not self.separation >= 0:
            raise ConfigError(f"separation must be non-negative, got {self.separation}")
        if self.task not in TASKS:
            raise ConfigError(f"Unknown task '{self.task}'. Expected one of {', '.join(TASKS)}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"Unknown output format '{self.output_format}'")
        if self.interaction.parity not in ("even", "odd", "general"):
            raise ConfigError(f"Unknown parity '{self.interaction.parity}'")
        if not isinstance(logging.getLevelName(self.log_level), int):
            raise ConfigError(f"Unknown log level '{self.log_level}'")
        return self


def thread_count(requested: int | None = None) -> int:
    """Return the worker cap: explicit request, then ``POINTSCATTER_THREADS``, then 1."""
    if requested is not None:
        return max(1, int(requested))
    raw = os.environ.get(THREADS_ENV_VAR, "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError as exc:
        raise ConfigError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from exc


def _pairs(raw: Sequence[Any], width: int, label: str) -> tuple[tuple[float, ...], ...]:
    try:
        if raw and not isinstance(raw[0], (list, tuple)):
            rows = [raw]
        else:
            rows = list(raw)
        parsed = tuple(tuple(float(x) for x in row) for row in rows)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"'{label}' must hold numbers") from exc
    if len(parsed) not in (1, 2) or any(len(row) != width for row in parsed):
        raise ConfigError(f"'{label}' needs one or two rows of {width} numbers")
    return parsed


def _section(cls, payload: Mapping[str, Any] | None, label: str):
    if payload is None:
        return cls()
    known = {item.name for item in fields(cls)}
    unknown = set(payload) - known
    if unknown:
        raise ConfigError(f"Unknown keys in '{label}': {sorted(unknown)}")
    try:
        return cls(**payload)
    except TypeError as exc:
        raise ConfigError(f"Invalid '{label}' section: {exc}") from exc


def parse_interaction(payload: Mapping[str, Any] | None) -> InteractionSpec:
    if payload is None:
        return InteractionSpec()
    spec = InteractionSpec(parity=str(payload.get("parity", "general")))
    if "case" in payload:
        spec.case = str(payload["case"])
        if "strength" not in payload:
            raise ConfigError("A special-case interaction needs a 'strength'")
        spec.strength = float(payload["strength"])
    if "strengths" in payload:
        spec.strengths = _pairs(payload["strengths"], 4, "strengths")  # type: ignore[assignment]
    if "lambda" in payload:
        spec.lambdas = _pairs(payload["lambda"], 5, "lambda")  # type: ignore[assignment]
    spec.form()
    return spec


def config_from_mapping(payload: Mapping[str, Any]) -> RunConfig:
    """Build a validated :class:`RunConfig` from a decoded JSON document."""
    output = payload.get("output", {}) or {}
    cfg = RunConfig(
        mass=float(payload.get("mass", 2.0)),
        separation=float(payload.get("separation", 1.0)),
        task=str(payload.get("task", "bound-states")),
        scan=_section(ScanSpec, payload.get("scan"), "scan"),
        seeds=_section(SeedSpec, payload.get("seeds"), "seeds"),
        energies=_section(EnergyGrid, payload.get("scatter"), "scatter"),
        tolerances=_section(Tolerances, payload.get("tolerances"), "tolerances"),
        output_path=Path(output["path"]) if output.get("path") else None,
        output_format=str(output.get("format", "csv")),
        figure=int(payload["figure"]) if payload.get("figure") is not None else None,
        boundary=payload.get("boundary"),
        log_level=str(payload.get("log_level", "WARNING")).upper(),
    )
    if payload.get("interaction") is not None:
        cfg.interaction = parse_interaction(payload["interaction"])
    return cfg.validate()


def load_config(path: str | Path) -> RunConfig:
    """
    Read a JSON run document.

    Parameters
    ----------
    path:
        Location of the JSON document.

    Returns
    -------
    RunConfig

    Raises
    ------
    FileNotFoundError
        If the document does not exist.
    ConfigError
        When the document is not valid JSON or violates the schema.
    """

    target = Path(path)
    if not target.exists():
        raise FileNotFoundError(f"Config not found: {target}")
    try:
        payload = json.loads(target.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Config {target} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ConfigError(f"Config {target} must hold a JSON object")
    return config_from_mapping(payload)


def with_overrides(cfg: RunConfig, **overrides: Any) -> RunConfig:
    """Return a copy of ``cfg`` where non-``None`` overrides replace fields."""
    changes = {key: value for key, value in overrides.items() if value is not None}
    return replace(cfg, **changes).validate()
