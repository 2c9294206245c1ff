"""Run configuration: defaults, config files and flag overrides.

Config files are plain INI text ([model] / [analysis] / [sweep] / [output]
sections, key = value lines, # comments). The resolved configuration is
echoed into every run's JSON sidecar, and that sidecar is itself accepted
back as a config file, so any run can be reproduced from its own output.
"""

from __future__ import annotations

import configparser
import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .model import BOUNDARIES, FIELD_THEN_ISING, STEP_ORDERS


@dataclass
class ModelSection:
    n_qubits: int = 3
    boundary: str = "auto"  # ring for N=3, chain otherwise
    hx_t: float = 2.6
    j_t: float = 1.57
    period: float = 1.0
    t1_fraction: float = 0.5
    step_order: str = FIELD_THEN_ISING
    couplings: str = ""  # optional comma list of per-bond J*T values


@dataclass
class AnalysisSection:
    transient_discard: int = 50
    spectrum_samples: int = 512
    n_max: int = 200
    pair_tolerance: float = 0.0  # 0 -> default 0.05 * pi / T
    fit_window: float = 0.5
    pd_threshold: float = 0.8


@dataclass
class SweepSection:
    h_min: float = 0.0
    h_max: float = math.pi
    h_count: int = 61
    j_min: float = 0.0
    j_max: float = math.pi
    j_count: int = 61
    workers: int = 1


@dataclass
class OutputSection:
    directory: str = "."
    format: str = "csv"  # csv | json


_SECTION_TYPES = {
    "model": ModelSection,
    "analysis": AnalysisSection,
    "sweep": SweepSection,
    "output": OutputSection,
}


class ConfigError(ValueError):
    """A config file or override could not be parsed."""


def _parse_value(raw: str, kind: type, where: str):
    text = str(raw).strip()
    try:
        if kind is float:
            if text.lower() == "pi":
                return math.pi
            return float(text)
        if kind is int:
            return int(text)
        return text
    except ValueError as exc:
        raise ConfigError(f"{where}: cannot parse {raw!r} as {kind.__name__}") from exc


@dataclass
class RunConfig:
    model: ModelSection = field(default_factory=ModelSection)
    analysis: AnalysisSection = field(default_factory=AnalysisSection)
    sweep: SweepSection = field(default_factory=SweepSection)
    output: OutputSection = field(default_factory=OutputSection)

    def validate(self) -> "RunConfig":
        if self.model.boundary not in ("auto",) + BOUNDARIES:
            raise ConfigError(f"model.boundary must be auto|ring|chain, got {self.model.boundary!r}")
        if self.model.step_order not in STEP_ORDERS:
            raise ConfigError(f"model.step_order must be one of {STEP_ORDERS}")
        if self.output.format not in ("csv", "json"):
            raise ConfigError(f"output.format must be csv or json, got {self.output.format!r}")
        return self

    def set(self, section: str, key: str, value) -> None:
        if section not in _SECTION_TYPES:
            raise ConfigError(f"unknown config section [{section}]")
        block = getattr(self, section)
        fields = {f.name: f.type for f in dataclasses.fields(block)}
        if key not in fields:
            raise ConfigError(f"unknown key {key!r} in section [{section}]")
        kind = type(getattr(block, key))
        setattr(block, key, _parse_value(value, kind, f"[{section}] {key}"))

    def to_dict(self) -> dict:
        return {name: dataclasses.asdict(getattr(self, name)) for name in _SECTION_TYPES}

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        config = cls()
        for section, values in data.items():
            if section not in _SECTION_TYPES:
                raise ConfigError(f"unknown config section [{section}]")
            for key, value in values.items():
                config.set(section, key, value)
        return config.validate()

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        path = Path(path)
        text = path.read_text()
        if text.lstrip().startswith("{"):
            data = json.loads(text)
            # a run sidecar carries the resolved config under "config"
            if "config" in data:
                data = data["config"]
            return cls.from_dict(data)
        parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
        try:
            parser.read_string(text, source=str(path))
        except configparser.Error as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        config = cls()
        for section in parser.sections():
            for key, value in parser.items(section):
                try:
                    config.set(section, key, value)
                except ConfigError as exc:
                    raise ConfigError(f"{path}: {exc}") from exc
        return config.validate()

    def per_bond_couplings(self) -> list[float] | None:
        text = self.model.couplings.strip()
        if not text:
            return None
        try:
            return [float(x) for x in text.split(",")]
        except ValueError as exc:
            raise ConfigError(f"model.couplings must be a comma list of numbers, got {text!r}") from exc

    def pair_tolerance(self) -> float:
        if self.analysis.pair_tolerance > 0:
            return self.analysis.pair_tolerance
        return 0.05 * math.pi / self.model.period
