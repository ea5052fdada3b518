# hfbgeo/control_plane/config/experiment_config.py
"""
Experiment Configuration

One ExperimentConfig drives every subcommand. Values come from three layers,
highest first:

  1. explicit command-line flags
  2. a config file (YAML or JSON, optional top-level ``experiment:`` key)
  3. dataclass defaults (plus HFBGEO_THREADS / HFBGEO_RECORD_DIR)

Config file layout:

    experiment:
      command: section-test
      dimensions: {n: 4, spectrum: [0.4, 0.0]}
      sampling:   {trials: 1000, seed: 7, scale: 1.0, epsilon: 0.02, t_values: [0.5, 4.0], suite_trials: 50}
      tolerances: {tol: 1.0e-10, section_tol: 1.0e-9}
      output:     {in_path: g.json, out_path: rows.csv, record_dir: runs}
      runtime:    {threads: 4, fock_cap: 6}
      hubbard:    {sites: 2, hopping: 1.0, u_int: 4.0, mu: 0.0, convention: spinful}
      hfb:        {step: 0.5, max_iter: 200, gradient_mode: fd}

Flat keys (``n: 4`` at the top level) are accepted as well.

``suite_trials`` overrides every suite step's trial count (manifest steps and
their defaults included); ``trials`` only fills in for steps that set none.
"""
from __future__ import annotations

import json
import logging
import os
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Mapping, Optional

import yaml

from hfbgeo.core.errors import ConfigError, NoTrials
from hfbgeo.core.hfbopt import CONVENTIONS, GRADIENT_MODES, HfbParams

logger = logging.getLogger(__name__)

COMMANDS = (
    "diagonalize",
    "orbit-check",
    "section-test",
    "constants",
    "cocycle-test",
    "radical-test",
    "polarization-test",
    "geodesic",
    "fock-verify",
    "hfb-minimize",
    "suite",
)

ENV_THREADS = "HFBGEO_THREADS"
ENV_RECORD_DIR = "HFBGEO_RECORD_DIR"

_SEED_LIMIT = 2 ** 64


@dataclass(frozen=True)
class HubbardSettings:
    sites: int = 2
    hopping: float = 1.0
    u_int: float = 4.0
    mu: float = 0.0
    convention: str = "spinful"
    periodic: bool = False


@dataclass(frozen=True)
class HfbSettings:
    step: float = 0.5
    max_iter: int = 200
    grad_tol: float = 1e-6
    fd_step: float = 1e-5
    restarts: int = 2
    search_spectrum: bool = True
    outer_sweeps: int = 2
    grid_points: int = 6
    gradient_mode: str = "fd"

    def to_params(self, seed: int) -> HfbParams:
        return HfbParams(seed=seed, **asdict(self))


@dataclass(frozen=True)
class ExperimentConfig:
    command: str = "suite"
    n: int = 4
    spectrum: tuple[float, ...] = (0.4, 0.0)
    trials: int = 100
    seed: int = 0
    suite_trials: Optional[int] = None
    tol: float = 1e-10
    section_tol: float = 1e-9
    scale: float = 1.0
    epsilon: float = 0.02
    t_values: tuple[float, ...] = (0.25, 0.5, 1.0, 2.0, 4.0)
    in_path: Optional[str] = None
    out_path: Optional[str] = None
    record_dir: Optional[str] = None
    suite_path: Optional[str] = None
    threads: int = 1
    fock_cap: int = 6
    hubbard: HubbardSettings = field(default_factory=HubbardSettings)
    hfb: HfbSettings = field(default_factory=HfbSettings)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["spectrum"] = list(self.spectrum)
        out["t_values"] = list(self.t_values)
        return out


_SCALAR_FIELDS = {f.name for f in fields(ExperimentConfig)} - {"hubbard", "hfb"}
_HUBBARD_FIELDS = {f.name for f in fields(HubbardSettings)}
_HFB_FIELDS = {f.name for f in fields(HfbSettings)}

# config-file section -> keys it may carry
_SECTIONS = {
    "dimensions": {"n", "spectrum"},
    "sampling": {"trials", "suite_trials", "seed", "scale", "epsilon", "t_values"},
    "tolerances": {"tol", "section_tol"},
    "output": {"in_path", "out_path", "record_dir", "suite_path"},
    "runtime": {"threads", "fock_cap"},
}


# =========================================================================
# FILE LOADING
# =========================================================================

def load_config_file(path: str | Path) -> dict:
    """
    Read a YAML or JSON config file (chosen by suffix).

    Raises:
        ConfigError: missing file, unknown suffix, malformed content or a non-mapping root
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Config file not found: {path}")
    suffix = path.suffix.lower()
    try:
        with open(path, "r") as f:
            if suffix == ".json":
                data = json.load(f)
            elif suffix in (".yaml", ".yml"):
                data = yaml.safe_load(f)
            else:
                raise ConfigError(f"Unsupported config format '{suffix}' (use .json, .yaml or .yml)")
    except json.JSONDecodeError as e:
        raise ConfigError(f"Malformed JSON in {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"Malformed YAML in {path}: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"Config root in {path} must be a mapping, got {type(data).__name__}")
    return data


def parse_floats(value: Any, name: str) -> tuple[float, ...]:
    """'0.4,0' or [0.4, 0] -> (0.4, 0.0)."""
    if isinstance(value, str):
        items = [v for v in value.replace(" ", "").split(",") if v]
    elif isinstance(value, (list, tuple)):
        items = list(value)
    else:
        items = [value]
    try:
        return tuple(float(v) for v in items)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{name}: cannot parse {value!r} as a list of numbers") from e


# =========================================================================
# PARSER
# =========================================================================

class ExperimentConfigParser:
    """
    Typed access to a raw config mapping.

    Getters return only the keys the file actually sets, so the result can be
    layered over defaults and under command-line flags.
    """

    def __init__(self, raw: Mapping[str, Any]):
        if "experiment" in raw:
            if len(raw) != 1:
                raise ConfigError("Config with an 'experiment' root must not carry other top-level keys")
            raw = raw["experiment"] or {}
        if not isinstance(raw, Mapping):
            raise ConfigError("Config 'experiment' block must be a mapping")
        self._raw = dict(raw)
        self._validate_keys()

    def _validate_keys(self) -> None:
        allowed = _SCALAR_FIELDS | set(_SECTIONS) | {"hubbard", "hfb"}
        unknown = sorted(set(self._raw) - allowed)
        if unknown:
            raise ConfigError(f"Unknown config keys: {unknown}")
        for section, keys in _SECTIONS.items():
            block = self._section(section)
            extra = sorted(set(block) - keys)
            if extra:
                raise ConfigError(f"Unknown keys in '{section}': {extra}")
        for section, keys in (("hubbard", _HUBBARD_FIELDS), ("hfb", _HFB_FIELDS)):
            extra = sorted(set(self._section(section)) - keys)
            if extra:
                raise ConfigError(f"Unknown keys in '{section}': {extra}")

    def _section(self, name: str) -> dict:
        block = self._raw.get(name) or {}
        if not isinstance(block, Mapping):
            raise ConfigError(f"Config section '{name}' must be a mapping")
        return dict(block)

    # =========================================================================
    # SCALAR SECTIONS
    # =========================================================================

    def get_command(self) -> Optional[str]:
        return self._raw.get("command")

    def get_dimensions(self) -> dict:
        return self._pick("dimensions")

    def get_sampling(self) -> dict:
        return self._pick("sampling")

    def get_tolerances(self) -> dict:
        return self._pick("tolerances")

    def get_output(self) -> dict:
        return self._pick("output")

    def get_runtime(self) -> dict:
        return self._pick("runtime")

    def _pick(self, section: str) -> dict:
        keys = _SECTIONS[section]
        out = {k: v for k, v in self._raw.items() if k in keys}
        out.update(self._section(section))
        return out

    # =========================================================================
    # NESTED BLOCKS
    # =========================================================================

    def get_hubbard(self) -> dict:
        return self._section("hubbard")

    def get_hfb(self) -> dict:
        return self._section("hfb")

    def overrides(self) -> dict:
        """Every value set by the file, flattened to ExperimentConfig field names."""
        out: dict[str, Any] = {}
        if self.get_command() is not None:
            out["command"] = self.get_command()
        for getter in (self.get_dimensions, self.get_sampling, self.get_tolerances,
                       self.get_output, self.get_runtime):
            out.update(getter())
        if self.get_hubbard():
            out["hubbard"] = self.get_hubbard()
        if self.get_hfb():
            out["hfb"] = self.get_hfb()
        return out


# =========================================================================
# LAYERING / VALIDATION
# =========================================================================

def _env_defaults(env: Mapping[str, str]) -> dict:
    out: dict[str, Any] = {}
    if env.get(ENV_THREADS):
        out["threads"] = env[ENV_THREADS]
    if env.get(ENV_RECORD_DIR):
        out["record_dir"] = env[ENV_RECORD_DIR]
    return out


def _coerce(name: str, value: Any, kind) -> Any:
    if kind is bool:
        if isinstance(value, bool):
            return value
        if isinstance(value, str) and value.lower() in ("true", "false", "yes", "no", "1", "0"):
            return value.lower() in ("true", "yes", "1")
        raise ConfigError(f"{name}: expected a boolean, got {value!r}")
    try:
        if kind is int:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(value)
            return int(value)
        return kind(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{name}: cannot interpret {value!r} as {kind.__name__}") from e


_SCALAR_KINDS = {
    "command": str,
    "n": int,
    "trials": int,
    "suite_trials": int,
    "seed": int,
    "tol": float,
    "section_tol": float,
    "scale": float,
    "epsilon": float,
    "in_path": str,
    "out_path": str,
    "record_dir": str,
    "suite_path": str,
    "threads": int,
    "fock_cap": int,
}


def _nested(settings, values: Mapping[str, Any], label: str):
    kinds = {f.name: f.type for f in fields(settings)}
    typed = {}
    for key, value in values.items():
        if key not in kinds:
            raise ConfigError(f"Unknown key '{key}' in {label}")
        kind = {"int": int, "float": float, "bool": bool, "str": str}[kinds[key]]
        typed[key] = _coerce(f"{label}.{key}", value, kind)
    return replace(settings, **typed)


def _apply(cfg: ExperimentConfig, layer: Mapping[str, Any]) -> ExperimentConfig:
    updates: dict[str, Any] = {}
    for key, value in layer.items():
        if value is None:
            continue
        if key == "spectrum":
            updates[key] = parse_floats(value, "spectrum")
        elif key == "t_values":
            updates[key] = parse_floats(value, "t_values")
        elif key == "hubbard":
            updates[key] = _nested(updates.get("hubbard", cfg.hubbard), value, "hubbard")
        elif key == "hfb":
            updates[key] = _nested(updates.get("hfb", cfg.hfb), value, "hfb")
        elif key in _SCALAR_KINDS:
            updates[key] = _coerce(key, value, _SCALAR_KINDS[key])
        else:
            raise ConfigError(f"Unknown configuration key '{key}'")
    return replace(cfg, **updates)


def validate_config(cfg: ExperimentConfig) -> ExperimentConfig:
    """
    Raises:
        NoTrials: trials == 0 or suite_trials == 0
        ConfigError: any other out-of-range value
    """
    if cfg.command not in COMMANDS:
        raise ConfigError(f"Unknown command '{cfg.command}'. Supported: {list(COMMANDS)}")
    if cfg.n < 1:
        raise ConfigError(f"n must be >= 1, got {cfg.n}")
    if cfg.trials == 0:
        raise NoTrials("trials = 0: nothing to run")
    if cfg.trials < 0:
        raise ConfigError(f"trials must be >= 1, got {cfg.trials}")
    if cfg.suite_trials == 0:
        raise NoTrials("suite_trials = 0: nothing to run")
    if cfg.suite_trials is not None and cfg.suite_trials < 0:
        raise ConfigError(f"suite_trials must be >= 1, got {cfg.suite_trials}")
    if not 0 <= cfg.seed < _SEED_LIMIT:
        raise ConfigError(f"seed must fit in 64 bits, got {cfg.seed}")
    for name in ("tol", "section_tol", "scale", "epsilon"):
        if getattr(cfg, name) <= 0:
            raise ConfigError(f"{name} must be > 0, got {getattr(cfg, name)}")
    if not cfg.spectrum:
        raise ConfigError("spectrum must list at least one value")
    if any(not 0.0 <= v <= 0.5 for v in cfg.spectrum):
        raise ConfigError(f"spectrum values must lie in [0, 1/2], got {list(cfg.spectrum)}")
    if len(cfg.spectrum) > cfg.n:
        raise ConfigError(f"spectrum lists {len(cfg.spectrum)} values for n={cfg.n}")
    if cfg.threads < 1:
        raise ConfigError(f"threads must be >= 1, got {cfg.threads}")
    if cfg.fock_cap < 1:
        raise ConfigError(f"fock_cap must be >= 1, got {cfg.fock_cap}")
    if cfg.hubbard.convention not in CONVENTIONS:
        raise ConfigError(f"hubbard.convention must be one of {CONVENTIONS}, got {cfg.hubbard.convention!r}")
    if cfg.hubbard.sites < 1:
        raise ConfigError(f"hubbard.sites must be >= 1, got {cfg.hubbard.sites}")
    if cfg.hfb.gradient_mode not in GRADIENT_MODES:
        raise ConfigError(f"hfb.gradient_mode must be one of {GRADIENT_MODES}, got {cfg.hfb.gradient_mode!r}")
    if cfg.hfb.max_iter < 1 or cfg.hfb.step <= 0 or cfg.hfb.fd_step <= 0:
        raise ConfigError("hfb.max_iter, hfb.step and hfb.fd_step must be positive")
    return cfg


def build_config(
    command: Optional[str] = None,
    file_data: Optional[Mapping[str, Any]] = None,
    flags: Optional[Mapping[str, Any]] = None,
    env: Optional[Mapping[str, str]] = None,
) -> ExperimentConfig:
    """
    Layer defaults < environment < config file < flags, then validate.

    ``flags`` uses ExperimentConfig field names; None values mean "not given".
    The positional command wins over a command named in the file.
    """
    env = os.environ if env is None else env
    cfg = _apply(ExperimentConfig(), _env_defaults(env))
    if file_data:
        cfg = _apply(cfg, ExperimentConfigParser(file_data).overrides())
    cfg = _apply(cfg, dict(flags or {}))
    if command is not None:
        cfg = replace(cfg, command=command)
    logger.debug("config: %s", cfg)
    return validate_config(cfg)
