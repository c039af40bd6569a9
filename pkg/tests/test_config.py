import json

import pytest

from algebra.errors import ConfigError
from run_config import RunConfig, load_config, suggest_key


@pytest.fixture
def defaults(tmp_path):
    return tmp_path / "config" / "run_defaults.json"


def _write(path, data):
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return path


def test_defaults_file_is_created(defaults):
    config = load_config(defaults)
    assert config == RunConfig()
    assert json.loads(defaults.read_text())["dt"] == 1e-4


def test_user_file_and_overrides(defaults, tmp_path):
    user = _write(tmp_path / "run.json", {"t_end": 2, "seeds": 8.0, "method": "RK45"})
    config = load_config(defaults, user, {"dt": 0.01, "seeds": None})
    assert (config.t_end, config.seeds, config.method, config.dt) == (2.0, 8, "RK45", 0.01)
    settings = config.search_settings()
    assert (settings.seeds, settings.base_seed, settings.workers) == (8, 0, 1)


def test_unknown_key_suggests_a_fix(defaults, tmp_path):
    user = _write(tmp_path / "run.json", {"dtt": 0.1})
    with pytest.raises(ConfigError, match="did you mean 'dt'"):
        load_config(defaults, user)


def test_suggest_key():
    assert suggest_key("sead") == "seed"
    assert suggest_key("completely_unrelated") is None


@pytest.mark.parametrize("values", [{"seeds": "many"}, {"seeds": 2.5}, {"method": "Euler"}, {"dt": -1},
                                    {"workers": 0}, {"drift_tol": 0}])
def test_bad_values(defaults, tmp_path, values):
    user = _write(tmp_path / "run.json", values)
    with pytest.raises(ConfigError):
        load_config(defaults, user)


def test_missing_user_file(defaults, tmp_path):
    with pytest.raises(ConfigError):
        load_config(defaults, tmp_path / "absent.json")


def test_user_file_must_be_an_object(defaults, tmp_path):
    with pytest.raises(ConfigError):
        load_config(defaults, _write(tmp_path / "run.json", [1, 2]))


def test_malformed_json(defaults, tmp_path):
    with pytest.raises(json.JSONDecodeError, match="run.json"):
        load_config(defaults, _write(tmp_path / "run.json", "{\"dt\": "))
