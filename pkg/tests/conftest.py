"""Shared fixtures"""

import pytest

import config
from core import settings_manager
from core.quadfield import different, make_context, ring

_CONFIG_CLASSES = (
    config.FieldConfig, config.ThetaConfig, config.OracleConfig,
    config.OutputConfig, config.LogConfig, config.PerformanceConfig,
)


@pytest.fixture
def ctx12():
    return make_context(12)


@pytest.fixture
def ctx5():
    return make_context(5)


@pytest.fixture
def ctx8():
    return make_context(8)


@pytest.fixture
def different12(ctx12):
    return different(ctx12)


@pytest.fixture
def ring12(ctx12):
    return ring(ctx12)


@pytest.fixture
def isolated_settings(tmp_path, monkeypatch):
    """SettingsManager on a temp file; config class attributes restored afterwards"""
    for cls in _CONFIG_CLASSES:
        for name, value in list(vars(cls).items()):
            if name.isupper():
                monkeypatch.setattr(cls, name, value)
    manager = settings_manager.SettingsManager(tmp_path / "settings.json")
    monkeypatch.setattr(settings_manager, "_settings_manager", manager)
    return manager
