import pytest

from config.config_loader import config_loader
from services.repositories import get_qexpansion_repository


@pytest.fixture
def fresh_config():
    config_loader.reload()
    yield config_loader
    config_loader.reload()


def test_numeric_from_file(fresh_config):
    assert fresh_config.get_numeric("qforms", "lattice_bound", 1) == 300
    assert fresh_config.get_numeric("no_such_section", "key", 7) == 7


def test_environment_override(fresh_config, monkeypatch):
    monkeypatch.setenv("MODFORMS_QUADRATURE_ORDER", "24")
    value = fresh_config.get_numeric("quadrature", "order", 48)
    assert value == 24
    assert isinstance(value, int)


def test_environment_override_complex(fresh_config, monkeypatch):
    monkeypatch.setenv("MODFORMS_SECONDORDER_BASE_POINT", "0.5+2i")
    assert fresh_config.get_numeric("secondorder", "base_point", 1.5j) == 0.5 + 2j


def test_messages(fresh_config):
    message = fresh_config.get_message("errors", "bad_weight", minimum=4, weight=3)
    assert message == "Weight must be an even integer >= 4, got 3"
    assert fresh_config.get_message("errors", "nope").startswith("Missing message")
    assert fresh_config.get_message("errors", "bad_weight", weight=3).startswith("Message formatting error")


def test_cache_directory(monkeypatch, tmp_path):
    monkeypatch.delenv("MODFORMS_CACHE_DIR", raising=False)
    assert get_qexpansion_repository() is None
    monkeypatch.setenv("MODFORMS_CACHE_DIR", str(tmp_path))
    assert get_qexpansion_repository() is not None
