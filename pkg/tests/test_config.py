from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest
from joblib.parallel import cpu_count

from harmonia.config import StabilityConfig, load_settings, load_stability_config
from harmonia.parallel import parallel_map, resolve_n_jobs


def test_settings_defaults(tmp_path: Path) -> None:
    settings = load_settings(tmp_path / "missing.env")

    assert settings.threads is None
    assert settings.backend == "sparse"
    assert settings.log_level == "INFO"
    assert settings.n_jobs == -1


def test_settings_from_env_file(tmp_path: Path) -> None:
    env_file = tmp_path / ".env"
    env_file.write_text(
        "HARMONIA_THREADS=2\nHARMONIA_BACKEND=Dense\nHARMONIA_LOG_LEVEL=debug\n",
        encoding="utf-8",
    )

    settings = load_settings(env_file)

    assert settings.threads == 2
    assert settings.backend == "dense"
    assert settings.log_level == "DEBUG"
    assert settings.n_jobs == 2


def test_invalid_settings_raise(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("HARMONIA_THREADS", "0")

    with pytest.raises(ValueError, match="HARMONIA_"):
        load_settings(None)


def test_stability_yaml(tmp_path: Path) -> None:
    path = tmp_path / "stability.yaml"
    path.write_text("trials: 5\neps: 1/10\nkind: lower_star\nmax_vertices: 6\n", encoding="utf-8")

    config = load_stability_config(path)

    assert config.trials == 5
    assert config.eps == Fraction(1, 10)
    assert config.kind == "lower_star"
    assert config.max_vertices == 6
    assert config.dimension == 1


def test_stability_yaml_errors(tmp_path: Path) -> None:
    assert load_stability_config(None) == StabilityConfig()
    with pytest.raises(FileNotFoundError):
        load_stability_config(tmp_path / "nope.yaml")

    path = tmp_path / "bad.yaml"
    path.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_stability_config(path)

    path.write_text("max_vertices: 40\n", encoding="utf-8")
    with pytest.raises(ValueError):
        load_stability_config(path)


def test_float_eps_is_read_as_decimal() -> None:
    assert StabilityConfig(eps=0.1).eps == Fraction(1, 10)  # type: ignore[arg-type]
    with pytest.raises(ValueError):
        StabilityConfig(eps="-1")  # type: ignore[arg-type]


def test_thread_count(monkeypatch: pytest.MonkeyPatch) -> None:
    assert resolve_n_jobs(1) == 1
    assert resolve_n_jobs(-1) == cpu_count()
    monkeypatch.setenv("HARMONIA_THREADS", "4")
    assert resolve_n_jobs() == min(cpu_count(), 4)
    with pytest.raises(ValueError):
        resolve_n_jobs(0)


def test_parallel_map_keeps_order() -> None:
    items = list(range(40))

    assert parallel_map(lambda x: x * x, items, 4) == [x * x for x in items]
    assert parallel_map(lambda x: -x, [1, 2], None) == [-1, -2]
