"""Run configuration: a single YAML document parsed into typed blocks.

Unknown keys are rejected everywhere — a silently ignored typo in a rate
name is the dominant user error this layer exists to prevent.  All numeric
fields reject booleans and strings.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

import yaml

from .calibrate import FitConfig, FreeValue, ParameterSpec
from .errors import ConfigError
from .model import COMPARTMENTS, PARAMETER_NAMES, ModelParameters
from .simulate import IntegratorConfig

_TOP_LEVEL_KEYS = ("parameters", "initial", "integrator", "fit", "scenario",
                   "forecast", "stability")


@dataclass(frozen=True)
class ScenarioConfig:
    rho_values: tuple[float, ...] = (0.2, 0.4, 0.6, 0.8)
    horizon: float = 365.0

    def __post_init__(self):
        if not self.rho_values:
            raise ConfigError("scenario.rho_values must be nonempty")
        if any(not 0.0 <= r <= 1.0 for r in self.rho_values):
            raise ConfigError("scenario.rho_values must lie in [0, 1]")
        if self.horizon < 1.0:
            raise ConfigError("scenario.horizon must be at least one day")


@dataclass(frozen=True)
class StabilityConfig:
    audit_seeds: int = 20
    audit_horizon: float = 2000.0
    seed: int = 0
    seed_scale: float = 2e-6

    def __post_init__(self):
        if self.audit_seeds < 1:
            raise ConfigError("stability.audit_seeds must be positive")
        if self.audit_horizon <= 0 or self.seed_scale <= 0:
            raise ConfigError("stability horizon and seed_scale must be positive")


@dataclass(frozen=True)
class RunConfig:
    spec: ParameterSpec
    integrator: IntegratorConfig
    fit: FitConfig
    scenario: ScenarioConfig
    stability: StabilityConfig
    forecast_horizon: int = 120

    def fixed_parameters(self) -> tuple[ModelParameters, Any]:
        """The fully pinned (parameters, initial state) of this config.

        Commands that simulate a single known configuration require every
        entry to be fixed; free entries are a config error there.
        """
        if self.spec.free_names:
            raise ConfigError(
                "this command requires fully fixed parameters and initial "
                f"state; free entries: {', '.join(self.spec.free_names)}")
        return self.spec.assemble([])


def _require_mapping(value, where: str) -> Mapping:
    if not isinstance(value, Mapping):
        raise ConfigError(f"{where} must be a mapping, got {type(value).__name__}")
    return value


def _reject_unknown(mapping: Mapping, allowed, where: str) -> None:
    unknown = set(mapping) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {', '.join(sorted(map(str, unknown)))}")


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number, got {value!r}")
    return float(value)


def _integer(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{where} must be an integer, got {value!r}")
    return value


def _entry(value, where: str):
    """A parameter/initial entry: a number or {free: {lo, hi, guess}}."""
    if isinstance(value, Mapping):
        _reject_unknown(value, ("free",), where)
        if "free" not in value:
            raise ConfigError(f"{where} mapping must contain a 'free' block")
        block = _require_mapping(value["free"], f"{where}.free")
        _reject_unknown(block, ("lo", "hi", "guess"), f"{where}.free")
        for key in ("lo", "hi", "guess"):
            if key not in block:
                raise ConfigError(f"{where}.free is missing {key!r}")
        try:
            return FreeValue(lo=_number(block["lo"], f"{where}.free.lo"),
                             hi=_number(block["hi"], f"{where}.free.hi"),
                             guess=_number(block["guess"], f"{where}.free.guess"))
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from exc
    return _number(value, where)


def _parse_spec(raw: Mapping) -> ParameterSpec:
    params_block = _require_mapping(raw.get("parameters"), "parameters")
    _reject_unknown(params_block, PARAMETER_NAMES, "parameters")
    params = {name: _entry(value, f"parameters.{name}")
              for name, value in params_block.items()}
    initial_block = raw.get("initial", {})
    if initial_block is None:
        initial_block = {}
    initial_block = _require_mapping(initial_block, "initial")
    _reject_unknown(initial_block, COMPARTMENTS, "initial")
    initial = {name: _entry(value, f"initial.{name}")
               for name, value in initial_block.items()}
    try:
        return ParameterSpec(params=params, initial=initial)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_integrator(raw: Mapping) -> IntegratorConfig:
    block = raw.get("integrator", {}) or {}
    block = _require_mapping(block, "integrator")
    allowed = ("method", "step", "rtol", "atol", "sample_per_day", "t0", "t_end")
    _reject_unknown(block, allowed, "integrator")
    kwargs: dict[str, Any] = {}
    if "method" in block:
        if block["method"] not in ("adaptive", "rk4"):
            raise ConfigError("integrator.method must be 'adaptive' or 'rk4'")
        kwargs["method"] = block["method"]
    for key in ("step", "rtol", "t0", "t_end"):
        if key in block:
            kwargs[key] = _number(block[key], f"integrator.{key}")
    if "atol" in block and block["atol"] is not None:
        kwargs["atol"] = _number(block["atol"], "integrator.atol")
    if "sample_per_day" in block:
        kwargs["sample_per_day"] = _integer(block["sample_per_day"],
                                            "integrator.sample_per_day")
    try:
        return IntegratorConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"integrator: {exc}") from exc


def _parse_fit(raw: Mapping) -> FitConfig:
    block = raw.get("fit", {}) or {}
    block = _require_mapping(block, "fit")
    allowed = ("restarts", "max_evals", "diameter_tol", "jitter", "seed")
    _reject_unknown(block, allowed, "fit")
    kwargs: dict[str, Any] = {}
    for key in ("restarts", "max_evals", "seed"):
        if key in block:
            kwargs[key] = _integer(block[key], f"fit.{key}")
    for key in ("diameter_tol", "jitter"):
        if key in block:
            kwargs[key] = _number(block[key], f"fit.{key}")
    try:
        return FitConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"fit: {exc}") from exc


def _parse_scenario(raw: Mapping) -> ScenarioConfig:
    block = raw.get("scenario", {}) or {}
    block = _require_mapping(block, "scenario")
    _reject_unknown(block, ("rho_values", "horizon"), "scenario")
    kwargs: dict[str, Any] = {}
    if "rho_values" in block:
        values = block["rho_values"]
        if not isinstance(values, (list, tuple)):
            raise ConfigError("scenario.rho_values must be a list")
        kwargs["rho_values"] = tuple(
            _number(v, "scenario.rho_values") for v in values)
    if "horizon" in block:
        kwargs["horizon"] = _number(block["horizon"], "scenario.horizon")
    return ScenarioConfig(**kwargs)


def _parse_stability(raw: Mapping) -> StabilityConfig:
    block = raw.get("stability", {}) or {}
    block = _require_mapping(block, "stability")
    allowed = ("audit_seeds", "audit_horizon", "seed", "seed_scale")
    _reject_unknown(block, allowed, "stability")
    kwargs: dict[str, Any] = {}
    for key in ("audit_seeds", "seed"):
        if key in block:
            kwargs[key] = _integer(block[key], f"stability.{key}")
    for key in ("audit_horizon", "seed_scale"):
        if key in block:
            kwargs[key] = _number(block[key], f"stability.{key}")
    return StabilityConfig(**kwargs)


def _parse_forecast(raw: Mapping) -> int:
    block = raw.get("forecast", {}) or {}
    block = _require_mapping(block, "forecast")
    _reject_unknown(block, ("horizon",), "forecast")
    horizon = _integer(block.get("horizon", 120), "forecast.horizon")
    if horizon < 1:
        raise ConfigError("forecast.horizon must be at least 1 day")
    return horizon


def parse_config(raw: Any) -> RunConfig:
    raw = _require_mapping(raw, "configuration")
    _reject_unknown(raw, _TOP_LEVEL_KEYS, "configuration")
    if "parameters" not in raw:
        raise ConfigError("configuration is missing the 'parameters' block")
    return RunConfig(
        spec=_parse_spec(raw),
        integrator=_parse_integrator(raw),
        fit=_parse_fit(raw),
        scenario=_parse_scenario(raw),
        stability=_parse_stability(raw),
        forecast_horizon=_parse_forecast(raw),
    )


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config {path} is not valid YAML: {exc}") from exc
    return parse_config(raw)
