"""Tests for resources/lib/utils.py: structured logger and formatting helpers."""
import io
import os

import pytest

from resources.lib.constants import LOG_FILENAME, LOG_MAX_SIZE_BYTES
from resources.lib.utils import (
    StructuredLogger,
    format_count,
    format_orders,
    get_logger,
    log_timing,
    parse_orders,
    sanitize_filename,
)


@pytest.fixture
def terminal():
    """Fresh logger state writing terminal lines to a StringIO."""
    stream = io.StringIO()
    StructuredLogger.shutdown()
    yield stream
    StructuredLogger.shutdown()


# ── StructuredLogger routing ─────────────────────────────────────────

class TestLoggerRouting:
    def test_info_quiet_by_default(self, terminal):
        StructuredLogger.initialize(stream=terminal)
        get_logger("search").info("Search finished", event="search.done", found=2)
        assert terminal.getvalue() == ""

    def test_info_shown_when_verbose(self, terminal):
        StructuredLogger.initialize(verbose=True, stream=terminal)
        get_logger("search").info("Search finished", event="search.done", found=2)
        assert terminal.getvalue() == "[OArrays.search] Search finished | event=search.done, found=2\n"

    def test_warning_always_shown(self, terminal):
        StructuredLogger.initialize(stream=terminal)
        get_logger("search").warning("Search budget exhausted", event="search.budget")
        assert "[OArrays.search] Search budget exhausted" in terminal.getvalue()

    def test_missing_event_injected(self, terminal):
        StructuredLogger.initialize(stream=terminal)
        get_logger("cli").error("Boom")
        line = terminal.getvalue()
        assert "event=misc.error" in line
        assert "_missing_event=True" in line

    def test_debug_never_on_terminal(self, terminal, tmp_path):
        StructuredLogger.initialize(debug_enabled=True, verbose=True, log_dir=str(tmp_path),
                                    stream=terminal)
        get_logger("oarray").debug("Complete fill drawn", attempt=1)
        assert terminal.getvalue() == ""
        with open(tmp_path / LOG_FILENAME, encoding="utf-8") as f:
            content = f.read()
        assert "[DEBUG] [OArrays.oarray] Complete fill drawn | attempt=1" in content

    def test_no_file_without_debug(self, terminal, tmp_path):
        StructuredLogger.initialize(log_dir=str(tmp_path), stream=terminal)
        get_logger("cli").warning("Command failed", event="cli.fail")
        assert not os.path.exists(tmp_path / LOG_FILENAME)

    def test_exception_includes_trace(self, terminal):
        StructuredLogger.initialize(stream=terminal)
        log = get_logger("cli")
        try:
            raise RuntimeError("kaput")
        except RuntimeError:
            log.exception("Unexpected error", event="cli.crash")
        assert "RuntimeError: kaput" in terminal.getvalue()

    def test_long_values_truncated(self, terminal):
        StructuredLogger.initialize(stream=terminal)
        get_logger("cli").warning("Long", event="x.y", detail="z" * 500)
        assert "z" * 200 + "..." in terminal.getvalue()
        assert "z" * 201 not in terminal.getvalue()

    def test_rotation_on_start(self, terminal, tmp_path):
        with open(tmp_path / LOG_FILENAME, "w", encoding="utf-8") as f:
            f.write("x" * (LOG_MAX_SIZE_BYTES + 1))
        StructuredLogger.initialize(debug_enabled=True, log_dir=str(tmp_path), stream=terminal)
        assert os.path.exists(tmp_path / "oarrays.1.log")
        assert os.path.getsize(tmp_path / LOG_FILENAME) == 0

    def test_get_logger_auto_initializes(self):
        StructuredLogger.shutdown()
        get_logger("groups")
        assert StructuredLogger._initialized
        StructuredLogger.shutdown()


# ── log_timing ───────────────────────────────────────────────────────

class TestLogTiming:
    def test_logs_duration_and_phases(self, mocker):
        log = mocker.MagicMock()
        with log_timing(log, "catalog_build", rows=3) as timer:
            timer.mark("construct")
        args, kwargs = log.debug.call_args
        assert args == ("catalog_build completed",)
        assert "duration_ms" in kwargs
        assert "construct_ms" in kwargs
        assert kwargs["rows"] == 3

    def test_logs_even_on_error(self, mocker):
        log = mocker.MagicMock()
        with pytest.raises(ValueError):
            with log_timing(log, "search"):
                raise ValueError("stop")
        assert log.debug.called


# ── formatting helpers ───────────────────────────────────────────────

class TestOrders:
    def test_format(self):
        assert format_orders((6, 2, 2)) == "6x2x2"

    @pytest.mark.parametrize("text", ["6x2x2", "6,2,2", "6 2 2", " 6 x 2 x 2 ", "6*2*2", "6×2×2", "6X2X2"])
    def test_parse(self, text):
        assert parse_orders(text) == (6, 2, 2)

    def test_parse_empty(self):
        with pytest.raises(ValueError):
            parse_orders("  ")

    def test_parse_garbage(self):
        with pytest.raises(ValueError):
            parse_orders("6xa")


class TestFormatCount:
    def test_thousands(self):
        assert format_count(1728) == "1,728"
        assert format_count(96) == "96"


class TestSanitizeFilename:
    def test_spaces_to_underscores(self):
        assert sanitize_filename("hello world") == "hello_world"

    def test_lowercased(self):
        assert sanitize_filename("HELLO") == "hello"

    def test_special_chars_removed(self):
        result = sanitize_filename("test!@#$%file")
        assert "!" not in result
        assert "@" not in result
        assert "#" not in result

    def test_catalog_label(self):
        assert sanitize_filename("8x4x4") == "8x4x4"

    def test_empty_input(self):
        assert sanitize_filename("") == ""
