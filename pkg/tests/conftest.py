"""Shared fixtures: every test gets a private config and log directory."""

import json

import pytest

from ergmlab.model import ErgmSpec
from ergmlab.utils.config import reset_config


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Point logs at a temp dir and drop the cached global config."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("ERGMLAB_LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.setenv("ERGMLAB_RUN_LOG_PATH", str(tmp_path / "logs" / "runs.log"))
    reset_config()
    yield
    reset_config()


@pytest.fixture
def edge_triangle():
    """Subcritical, Dobrushin edge+triangle model."""
    return ErgmSpec.named([("edge", -0.2), ("triangle", 0.1)])


@pytest.fixture
def write_spec(tmp_path):
    """Write a model file and return its path."""
    def _write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return _write
