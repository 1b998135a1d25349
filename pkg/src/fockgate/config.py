"""Run configuration: one JSON document, flags may override any field.

Override syntax is a dotted path, e.g. ``--set physical.delta=10`` or
``--set sweep.ratios=[0.02,0.1]``; values parse as JSON with a plain-string
fallback.  Defaults put the model in both the adiabatic (g/delta = 0.05) and
selective (|Omega_L|/g = 0.1) regimes; they are conventions of this package.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .hamiltonians import RamanParams
from .spaces import HilbertSpace

TASKS = ("gate", "synthesize", "sweep", "validate")
MODEL_CHOICES = ("ideal", "effective", "full", "all")


class ConfigError(Exception):
    """Invalid configuration; the message names the offending field."""


@dataclass
class PhysicalConfig:
    g: float = 1.0
    omega_l: float = 0.1
    theta: float = 0.0
    delta: float = 20.0
    include_shift: bool = True


@dataclass
class SpaceConfig:
    fock_cutoff: int = 12
    atom_dim: int = 2


@dataclass
class GateConfig:
    m: int = 1
    k: int = 1
    phi: float = 0.7853981633974483  # pi/4


@dataclass
class SweepConfig:
    ratios: list[float] = field(default_factory=lambda: [0.02, 0.05, 0.1, 0.2, 0.5])
    samples: int = 8
    m: int = 1
    workers: int = 4


@dataclass
class TargetConfig:
    """Oscillator target: an explicit amplitude list or a named preset."""

    amplitudes: list | None = None
    preset: str | None = "pair"
    n: int = 3
    alpha: list[float] = field(default_factory=lambda: [0.7071067811865476, 0.0])
    beta: list[float] = field(default_factory=lambda: [0.7071067811865476, 0.0])


@dataclass
class ValidateConfig:
    self_test: bool = False


@dataclass
class RunConfig:
    task: str = "gate"
    model: str = "ideal"
    seed: int = 1234
    out_dir: str | None = None
    physical: PhysicalConfig = field(default_factory=PhysicalConfig)
    space: SpaceConfig = field(default_factory=SpaceConfig)
    gate: GateConfig = field(default_factory=GateConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    target: TargetConfig = field(default_factory=TargetConfig)
    tolerances: dict = field(default_factory=dict)
    validate: ValidateConfig = field(default_factory=ValidateConfig)


def _build(cls, data: dict, path: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{path or 'config'}: expected an object, got {type(data).__name__}")
    sections = {
        "physical": PhysicalConfig,
        "space": SpaceConfig,
        "gate": GateConfig,
        "sweep": SweepConfig,
        "target": TargetConfig,
        "validate": ValidateConfig,
    }
    kwargs = {}
    names = {f.name for f in dataclasses.fields(cls)}
    for key, value in data.items():
        if key not in names:
            raise ConfigError(f"{path + '.' if path else ''}{key}: unknown field")
        if key in sections:
            kwargs[key] = _build(sections[key], value, f"{path + '.' if path else ''}{key}")
        else:
            kwargs[key] = value
    return cls(**kwargs)


def config_from_dict(data: dict) -> RunConfig:
    cfg = _build(RunConfig, data, "")
    validate_config(cfg)
    return cfg


def config_to_dict(cfg: RunConfig) -> dict:
    return dataclasses.asdict(cfg)


def load_config(path: str | None, overrides: list[str] | None = None) -> RunConfig:
    data: dict = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except FileNotFoundError as exc:
            raise ConfigError(f"config file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    for item in overrides or []:
        data = apply_override(data, item)
    return config_from_dict(data)


def apply_override(data: dict, item: str) -> dict:
    if "=" not in item:
        raise ConfigError(f"override {item!r} is not of the form key.path=value")
    key, raw = item.split("=", 1)
    key = key.strip()
    if not key:
        raise ConfigError(f"override {item!r} has an empty key path")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    node = data
    parts = key.split(".")
    for part in parts[:-1]:
        node = node.setdefault(part, {})
        if not isinstance(node, dict):
            raise ConfigError(f"override path {key!r} crosses a non-object field")
    node[parts[-1]] = value
    return data


def validate_config(cfg: RunConfig) -> None:
    if cfg.task not in TASKS:
        raise ConfigError(f"task: {cfg.task!r} is not one of {TASKS}")
    if cfg.model not in MODEL_CHOICES:
        raise ConfigError(f"model: {cfg.model!r} is not one of {MODEL_CHOICES}")
    if cfg.physical.g <= 0:
        raise ConfigError(f"physical.g: must be > 0, got {cfg.physical.g}")
    if cfg.physical.omega_l < 0:
        raise ConfigError(f"physical.omega_l: must be >= 0, got {cfg.physical.omega_l}")
    if cfg.physical.delta == 0:
        raise ConfigError("physical.delta: must be nonzero")
    if cfg.space.fock_cutoff < 2:
        raise ConfigError(f"space.fock_cutoff: must be >= 2, got {cfg.space.fock_cutoff}")
    if cfg.space.atom_dim not in (2, 3):
        raise ConfigError(f"space.atom_dim: must be 2 or 3, got {cfg.space.atom_dim}")
    if cfg.gate.m < 1:
        raise ConfigError(f"gate.m: must be >= 1, got {cfg.gate.m}")
    if cfg.gate.k < 1 or cfg.gate.k > cfg.gate.m:
        raise ConfigError(f"gate.k: need 1 <= k <= m, got k={cfg.gate.k}, m={cfg.gate.m}")
    if cfg.task == "gate" and cfg.gate.k != 1:
        raise ConfigError(
            "gate.k: the gate task models the single-quantum case; build k > 1 "
            "couplings through the library API"
        )
    if cfg.gate.m + 2 > cfg.space.fock_cutoff:
        raise ConfigError(
            f"gate.m: level {cfg.gate.m} needs fock_cutoff >= {cfg.gate.m + 2} "
            f"(guard level), got {cfg.space.fock_cutoff}"
        )
    if not cfg.sweep.ratios:
        raise ConfigError("sweep.ratios: grid must not be empty")
    if any(r <= 0 for r in cfg.sweep.ratios):
        raise ConfigError("sweep.ratios: all ratios must be > 0")
    if cfg.sweep.samples < 1:
        raise ConfigError(f"sweep.samples: must be >= 1, got {cfg.sweep.samples}")
    if cfg.seed < 0:
        raise ConfigError(f"seed: must be >= 0, got {cfg.seed}")
    target_levels = _target_support(cfg)
    if target_levels and max(target_levels) + 2 > cfg.space.fock_cutoff:
        raise ConfigError(
            f"target: support reaches level {max(target_levels)} but fock_cutoff "
            f"{cfg.space.fock_cutoff} requires support <= {cfg.space.fock_cutoff - 3} "
            "(guard level)"
        )


def _parse_amplitude(value: Any, where: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ConfigError(f"{where}: amplitudes must be numbers or [re, im] pairs")


def target_state(cfg: RunConfig) -> np.ndarray:
    """Normalized oscillator target amplitudes from the target block."""
    t = cfg.target
    if t.amplitudes is not None:
        amps = np.array(
            [_parse_amplitude(v, "target.amplitudes") for v in t.amplitudes], dtype=complex
        )
    elif t.preset == "vacuum":
        amps = np.array([1.0], dtype=complex)
    elif t.preset == "fock":
        amps = np.zeros(t.n + 1, dtype=complex)
        amps[t.n] = 1.0
    elif t.preset == "pair":
        amps = np.zeros(t.n + 1, dtype=complex)
        amps[0] = _parse_amplitude(t.alpha, "target.alpha")
        amps[t.n] = _parse_amplitude(t.beta, "target.beta")
    else:
        raise ConfigError(
            f"target.preset: {t.preset!r} is not one of ('vacuum', 'fock', 'pair') "
            "and no amplitude list was given"
        )
    nrm = np.linalg.norm(amps)
    if nrm == 0:
        raise ConfigError("target: amplitudes are all zero")
    return amps / nrm


def _target_support(cfg: RunConfig) -> list[int]:
    try:
        amps = target_state(cfg)
    except ConfigError:
        if cfg.task == "synthesize":
            raise
        return []
    return [int(i) for i in np.nonzero(np.abs(amps) > 1e-12)[0]]


def to_raman(cfg: RunConfig, m: int | None = None, omega_l: float | None = None) -> RamanParams:
    ph = cfg.physical
    return RamanParams(
        g=ph.g,
        omega_l=ph.omega_l if omega_l is None else omega_l,
        theta=ph.theta,
        delta=ph.delta,
        m=cfg.gate.m if m is None else m,
        include_shift=ph.include_shift,
    )


def to_space(cfg: RunConfig, atom_dim: int | None = None) -> HilbertSpace:
    return HilbertSpace(
        atom_dim if atom_dim is not None else cfg.space.atom_dim, cfg.space.fock_cutoff
    )
