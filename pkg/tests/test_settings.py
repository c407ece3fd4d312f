"""Tests for resources/lib/settings.py: settings sources and precedence."""
import pytest

from resources.lib.constants import DEFAULT_CAPACITY_LIMIT, DEFAULT_SEARCH_BUDGET
from resources.lib.errors import UsageError
from resources.lib.settings import ToolSettings, load_settings, parse_config_text


def _config(tmp_path, text):
    path = tmp_path / "oarrays.conf"
    path.write_text(text, encoding="utf-8")
    return str(path)


# ── parse_config_text ────────────────────────────────────────────────

class TestParseConfig:
    def test_values_and_comments(self):
        values = parse_config_text(
            "# budget for search\n"
            "search_budget = 5_000  # inline comment\n"
            "\n"
            "debug_logging = yes\n"
            "log_dir = /tmp/oa\n"
        )
        assert values == {"search_budget": 5000, "debug_logging": True, "log_dir": "/tmp/oa"}

    def test_unknown_key_skipped(self, mocker):
        log = mocker.MagicMock()
        mocker.patch("resources.lib.settings._get_log", return_value=log)
        assert parse_config_text("colour = blue\nworkers = 2\n") == {"workers": 2}
        assert log.warning.call_args.kwargs["event"] == "settings.unknown_key"

    def test_missing_equals(self):
        with pytest.raises(UsageError, match=":1:"):
            parse_config_text("search_budget 5")

    def test_bad_integer(self):
        with pytest.raises(UsageError, match="search_budget"):
            parse_config_text("search_budget = lots")

    def test_non_positive(self):
        with pytest.raises(UsageError):
            parse_config_text("workers = 0")

    def test_bad_boolean(self):
        with pytest.raises(UsageError):
            parse_config_text("debug_logging = maybe")


# ── load_settings ────────────────────────────────────────────────────

class TestLoadSettings:
    def test_defaults(self):
        settings = load_settings(environ={})
        assert settings == ToolSettings()
        assert settings.search_budget == DEFAULT_SEARCH_BUDGET
        assert settings.capacity_limit == DEFAULT_CAPACITY_LIMIT

    def test_environment(self):
        settings = load_settings(environ={
            "OARRAYS_SEARCH_BUDGET": "1234",
            "OARRAYS_CAPACITY_LIMIT": "99",
            "OARRAYS_LOG_DIR": "/var/log/oa",
        })
        assert settings.search_budget == 1234
        assert settings.capacity_limit == 99
        assert settings.log_dir == "/var/log/oa"

    def test_bad_environment(self):
        with pytest.raises(UsageError):
            load_settings(environ={"OARRAYS_SEARCH_BUDGET": "many"})

    def test_config_beats_environment(self, tmp_path):
        path = _config(tmp_path, "search_budget = 50\n")
        settings = load_settings(config_path=path, environ={"OARRAYS_SEARCH_BUDGET": "1234"})
        assert settings.search_budget == 50

    def test_flag_beats_config(self, tmp_path):
        path = _config(tmp_path, "search_budget = 50\nworkers = 4\n")
        settings = load_settings({"search_budget": 7, "workers": None}, config_path=path, environ={})
        assert settings.search_budget == 7
        assert settings.workers == 4

    def test_missing_config_file(self, tmp_path):
        with pytest.raises(UsageError, match="cannot read"):
            load_settings(config_path=str(tmp_path / "absent.conf"), environ={})

    def test_unknown_override(self):
        with pytest.raises(UsageError):
            load_settings({"colour": "blue"}, environ={})
