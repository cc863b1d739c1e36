from src import config


def test_defaults_are_valid():
    assert config.validate_config() == []


def test_every_bad_setting_is_reported(monkeypatch):
    monkeypatch.setattr(config, 'DEFAULT_BACKEND', 'sql')
    monkeypatch.setattr(config, 'SERVICE_PORT', 0)
    monkeypatch.setattr(config, 'LOG_LEVEL', 'LOUD')
    errors = config.validate_config()
    assert len(errors) == 3
    assert errors[0].startswith('ATL_BACKEND must be one of direct, relational')
