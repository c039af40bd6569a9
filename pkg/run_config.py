import json
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional

from Levenshtein import distance

from algebra.codecs import read_json
from algebra.errors import ConfigError
from dynamics.integrators import METHODS
from dynamics.search import SearchSettings

DEFAULT_CONFIG_PATH = Path("config/run_defaults.json")
SUGGESTION_DISTANCE = 3


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run settings: defaults file, then --config file, then command-line flags"""
    dt: float = 1e-4
    t_end: float = 5.0
    method: str = "RK4"
    rk45_rtol: float = 1e-8
    rk45_atol: float = 1e-10
    sample_every: int = 1
    seeds: int = 64
    max_iters: int = 500
    search_tol: float = 1e-10
    seed: int = 0
    workers: int = 1
    tol: float = 1e-10
    drift_tol: float = 1e-6
    slope_tol: float = 1e-4
    output_dir: str = "output"

    def search_settings(self) -> SearchSettings:
        return SearchSettings(seeds=self.seeds, max_iters=self.max_iters, tol=self.search_tol,
                              base_seed=self.seed, workers=self.workers)

    def to_json(self) -> Dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _field_types() -> Dict[str, type]:
    return {f.name: type(f.default) for f in fields(RunConfig)}


def suggest_key(key: str) -> Optional[str]:
    """Closest known key within SUGGESTION_DISTANCE edits"""
    best = min(_field_types(), key=lambda known: distance(key, known))
    return best if distance(key, best) <= SUGGESTION_DISTANCE else None


def _coerce(key: str, value: Any, source: str) -> Any:
    types = _field_types()
    if key not in types:
        hint = suggest_key(key)
        raise ConfigError(f"{source}: unknown key '{key}'" + (f" (did you mean '{hint}'?)" if hint else ""))
    wanted = types[key]
    try:
        if wanted is int and isinstance(value, float) and not value.is_integer():
            raise ValueError("not an integer")
        return wanted(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{source}: '{key}' must be {wanted.__name__}, got {value!r}")


def _validate(config: RunConfig) -> RunConfig:
    if config.dt <= 0 or config.t_end <= 0:
        raise ConfigError(f"dt and t_end must be positive (dt={config.dt}, t_end={config.t_end})")
    if config.method not in METHODS:
        raise ConfigError(f"method must be one of {', '.join(METHODS)}, got '{config.method}'")
    for key in ("sample_every", "seeds", "max_iters", "workers"):
        if getattr(config, key) < 1:
            raise ConfigError(f"'{key}' must be at least 1")
    if min(config.tol, config.search_tol, config.drift_tol, config.slope_tol) <= 0:
        raise ConfigError("tolerances must be positive")
    return config


def _load_defaults(path: Path) -> Dict[str, Any]:
    """Read the defaults file, writing the built-in defaults first when it is missing"""
    if not path.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w') as f:
            json.dump(RunConfig().to_json(), f, indent=4)
        return RunConfig().to_json()
    return read_json(path)


def _apply(config: RunConfig, values: Dict[str, Any], source: str) -> RunConfig:
    if not isinstance(values, dict):
        raise ConfigError(f"{source}: expected a JSON object")
    return replace(config, **{key: _coerce(key, value, source) for key, value in values.items()})


def load_config(defaults_path: Path = DEFAULT_CONFIG_PATH, user_file: Optional[Path] = None,
                overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """
    Raises:
        ConfigError: unknown keys, wrong types or out-of-range values
        json.JSONDecodeError: malformed JSON in either file
    """
    config = _apply(RunConfig(), _load_defaults(defaults_path), str(defaults_path))
    if user_file is not None:
        if not user_file.exists():
            raise ConfigError(f"config file {user_file} not found")
        config = _apply(config, read_json(user_file), str(user_file))
    if overrides:
        given = {key: value for key, value in overrides.items() if value is not None}
        config = _apply(config, given, "command line")
    return _validate(config)
