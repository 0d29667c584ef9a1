"""
Benchmark Configuration
Line-oriented experiment files (`key = value`, `#` comments, [comm] / [sense] /
[complexity] sections) validated into frozen pydantic models.

Lengths in the file are in wavelengths and angles in degrees; the models
convert them to meters and radians when building scenarios.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.core.config import settings
from src.core.exceptions import ConfigParseError, UnknownKeyError
from src.evaluation.comm import CommScenario
from src.evaluation.sensing import SensingScenario
from src.physics.geometry import CarrierConfig, Direction
from src.physics.propagation import ChannelModel, LineOfSight, NearField, Rician
from src.synthesis.architectures import ARCHITECTURE_NAMES, ArchitectureSpec
from src.synthesis.frontend import FrontEnd, FrontendLayout

ArchitectureName = Literal["digital", "milac", "hybrid", "sim", "bdris_full", "bdris_tree"]
ExperimentName = Literal["comm", "sense", "complexity"]

SECTIONS = ("comm", "sense", "complexity")
DEFAULT_SNR_GRID = tuple(float(s) for s in range(-10, 31, 5))


def _strictly_increasing(values: tuple[float, ...]) -> tuple[float, ...]:
    if not values:
        raise ValueError("must not be empty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError("must be strictly increasing")
    return values


class _Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


# ═══════════════════════════════════════════════════════════════
# SECTIONS
# ═══════════════════════════════════════════════════════════════

class CommConfig(_Section):
    """[comm] spectral-efficiency experiment."""

    trials: int = Field(default=200, ge=1)
    snr_grid_db: tuple[float, ...] = DEFAULT_SNR_GRID
    architectures: tuple[ArchitectureName, ...] = ("digital", "milac", "hybrid", "bdris_full", "sim")
    channel: Literal["los", "rician", "near_field"] = "rician"
    k_factor_db: float = 5.0
    path_count: int = Field(default=4, ge=1)
    user_azimuth_deg: float = Field(default=0.0, ge=-90.0, le=90.0)
    user_elevation_deg: float = Field(default=0.0, ge=-90.0, le=90.0)
    user_range: float = Field(default=20.0, gt=0, description="UE distance in wavelengths (near_field)")
    path_gain: float = Field(default=1.0, gt=0)

    check_grid = field_validator("snr_grid_db")(_strictly_increasing)

    @field_validator("architectures")
    @classmethod
    def non_empty(cls, v: tuple[str, ...]) -> tuple[str, ...]:
        if not v:
            raise ValueError("must name at least one architecture")
        return v


class SenseConfig(_Section):
    """[sense] AoD estimation experiment."""

    trials: int = Field(default=1000, ge=1)
    snr_grid_db: tuple[float, ...] = DEFAULT_SNR_GRID
    architectures: tuple[ArchitectureName, ...] = ("digital", "milac", "hybrid", "bdris_full", "sim")
    codebook_size: int = Field(default=64, ge=2)
    sector_min_deg: float = Field(default=-60.0, ge=-90.0, le=90.0)
    sector_max_deg: float = Field(default=60.0, ge=-90.0, le=90.0)
    true_aod_deg: float = 20.0
    path_gain: float = Field(default=1.0, gt=0)
    path_phase_deg: float = 0.0
    grid_resolution_deg: float = Field(default=0.05, gt=0)

    check_grid = field_validator("snr_grid_db")(_strictly_increasing)

    @field_validator("architectures")
    @classmethod
    def non_empty(cls, v: tuple[str, ...]) -> tuple[str, ...]:
        if not v:
            raise ValueError("must name at least one architecture")
        return v

    @model_validator(mode="after")
    def target_in_sector(self) -> "SenseConfig":
        if not self.sector_max_deg > self.sector_min_deg:
            raise ValueError("sector_max_deg must exceed sector_min_deg")
        if not self.sector_min_deg <= self.true_aod_deg <= self.sector_max_deg:
            raise ValueError("true_aod_deg must lie inside the sweep sector")
        return self


class ComplexityConfig(_Section):
    """[complexity] component-count sweep."""

    m_values: tuple[int, ...] = (16, 32, 64, 128, 256)
    architectures: tuple[ArchitectureName, ...] = ("digital", "hybrid", "sim", "milac", "bdris_full", "bdris_tree")
    asymmetric: bool = True

    @field_validator("m_values")
    @classmethod
    def positive_sizes(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        if not v:
            raise ValueError("must not be empty")
        if any(m < 1 for m in v):
            raise ValueError("every M must be >= 1")
        return v


# ═══════════════════════════════════════════════════════════════
# BENCH CONFIG
# ═══════════════════════════════════════════════════════════════

class BenchConfig(_Section):
    """Fully resolved benchmark run."""

    experiment: ExperimentName = "comm"
    seed: int = Field(default=1, ge=0)
    output_dir: Path = Field(default_factory=lambda: settings.output_dir)
    plot: bool = False

    wavelength: float = Field(default=0.01, gt=0, description="meters")
    reference_impedance: float = Field(default=50.0, gt=0, description="ohms")
    rows: int = Field(default=9, ge=1)
    cols: int = Field(default=9, ge=1)
    element_spacing: float = Field(default=0.5, gt=0)
    rf_chains: int = Field(default=4, ge=1)
    feed_spacing: float = Field(default=0.5, gt=0)
    surface_distance: float = Field(default=5.0, gt=0)
    bdris_elements: int = Field(default=0, ge=0, description="0 means N = M")
    sim_layers: int = Field(default=3, ge=1)
    sim_layer_spacing: float = Field(default=0.5, gt=0)
    tree_shape: Literal["path", "star"] = "path"
    budget: int = Field(default=500, ge=1)
    restarts: int = Field(default=4, ge=1)

    comm: CommConfig = Field(default_factory=CommConfig)
    sense: SenseConfig = Field(default_factory=SenseConfig)
    complexity: ComplexityConfig = Field(default_factory=ComplexityConfig)

    @property
    def carrier(self) -> CarrierConfig:
        return CarrierConfig(wavelength=self.wavelength, reference_impedance=self.reference_impedance)

    def layout(self) -> FrontendLayout:
        return FrontendLayout.in_wavelengths(
            self.carrier,
            rows=self.rows,
            cols=self.cols,
            element_spacing=self.element_spacing,
            rf_chains=self.rf_chains,
            feed_spacing=self.feed_spacing,
            surface_distance=self.surface_distance,
            bdris_elements=self.bdris_elements,
            sim_layers=self.sim_layers,
            sim_layer_spacing=self.sim_layer_spacing,
            tree_shape=self.tree_shape,
            budget=self.budget,
            restarts=self.restarts,
        )

    def specs(self, frontend: FrontEnd, names: tuple[str, ...]) -> tuple[ArchitectureSpec, ...]:
        return tuple(frontend.spec(name) for name in names)

    def channel_model(self) -> ChannelModel:
        comm = self.comm
        if comm.channel == "los":
            return LineOfSight(gain=comm.path_gain)
        if comm.channel == "rician":
            return Rician.from_db(comm.k_factor_db, comm.path_count, gain=comm.path_gain)
        return NearField(range_m=comm.user_range * self.wavelength, gain=comm.path_gain)

    def comm_scenario(self) -> CommScenario:
        frontend = FrontEnd(self.layout())
        return CommScenario(
            frontend=frontend,
            specs=self.specs(frontend, self.comm.architectures),
            snr_grid_db=self.comm.snr_grid_db,
            trials=self.comm.trials,
            seed=self.seed,
            channel=self.channel_model(),
            user_direction=Direction.from_degrees(self.comm.user_azimuth_deg, self.comm.user_elevation_deg),
        )

    def sense_scenario(self) -> SensingScenario:
        sense = self.sense
        return SensingScenario(
            frontend=FrontEnd(self.layout()),
            true_aod=Direction.from_degrees(sense.true_aod_deg),
            path_gain=sense.path_gain * complex(math.cos(math.radians(sense.path_phase_deg)),
                                                math.sin(math.radians(sense.path_phase_deg))),
            codebook_size=sense.codebook_size,
            sector=(math.radians(sense.sector_min_deg), math.radians(sense.sector_max_deg)),
            snr_grid_db=sense.snr_grid_db,
            trials=sense.trials,
            seed=self.seed,
            grid_resolution=math.radians(sense.grid_resolution_deg),
        )


# ═══════════════════════════════════════════════════════════════
# PARSING
# ═══════════════════════════════════════════════════════════════

_SECTION_MODELS: dict[str, type[_Section]] = {
    "comm": CommConfig,
    "sense": SenseConfig,
    "complexity": ComplexityConfig,
}
_LIST_KEYS = {"snr_grid_db", "architectures", "m_values"}


def _global_keys() -> set[str]:
    return set(BenchConfig.model_fields) - set(SECTIONS)


def parse_config(text: str) -> BenchConfig:
    """
    Parse an experiment file into a resolved BenchConfig.

    Args:
        text: File contents; every key is optional

    Returns:
        BenchConfig with defaults applied

    Raises:
        UnknownKeyError: For a key or section that does not exist (names it)
        ConfigParseError: For malformed lines or invalid values (cites the line)
    """
    data: dict[str, Any] = {}
    key_lines: dict[tuple[str, ...], int] = {}
    section: str | None = None

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in SECTIONS:
                raise ConfigParseError(number, f"unknown section '[{section}]'")
            data.setdefault(section, {})
            continue
        if "=" not in line:
            raise ConfigParseError(number, f"expected 'key = value', got '{line}'")

        key, value = (part.strip() for part in line.split("=", 1))
        allowed = _global_keys() if section is None else set(_SECTION_MODELS[section].model_fields)
        if key not in allowed:
            raise UnknownKeyError(key, number, section)
        target = data if section is None else data[section]
        if key in target:
            raise ConfigParseError(number, f"duplicate key '{key}'")
        if key in _LIST_KEYS:
            target[key] = [item.strip() for item in value.split(",") if item.strip()]
        else:
            target[key] = value
        key_lines[(key,) if section is None else (section, key)] = number

    try:
        return BenchConfig.model_validate(data)
    except ValidationError as exc:
        error = exc.errors()[0]
        loc = tuple(str(part) for part in error["loc"])
        line = None
        for depth in range(len(loc), 0, -1):
            if loc[:depth] in key_lines:
                line = key_lines[loc[:depth]]
                break
        where = ".".join(loc) or "config"
        raise ConfigParseError(line, f"{where}: {error['msg']}") from exc


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(_format_value(item) for item in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def echo_config(config: BenchConfig) -> str:
    """Serialize a resolved config so that parse_config(echo_config(c)) == c."""
    lines = ["# wavebench resolved configuration"]
    for key in BenchConfig.model_fields:
        if key not in SECTIONS:
            lines.append(f"{key} = {_format_value(getattr(config, key))}")
    for name in SECTIONS:
        lines.append("")
        lines.append(f"[{name}]")
        block = getattr(config, name)
        for key in type(block).model_fields:
            lines.append(f"{key} = {_format_value(getattr(block, key))}")
    return "\n".join(lines) + "\n"


def load_config(path: Path) -> BenchConfig:
    """
    Read and parse an experiment file.

    Raises:
        ConfigParseError: If the file cannot be read
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigParseError(None, f"cannot read {path}: {exc}") from exc
    return parse_config(text)


__all__ = [
    "ARCHITECTURE_NAMES",
    "BenchConfig",
    "CommConfig",
    "ComplexityConfig",
    "SenseConfig",
    "echo_config",
    "load_config",
    "parse_config",
]
