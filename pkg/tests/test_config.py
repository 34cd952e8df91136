"""Tests for src/config.py"""

import os
from dataclasses import FrozenInstanceError
from pathlib import Path
from unittest.mock import patch

import pytest

import src.polyring as polyring
from src.config import (
    MONOMIAL_ORDERS,
    Config,
    _get_project_root,
    _parse_int_env,
    _validate_log_level,
    _validate_order,
    get_config,
)


def _config(**overrides) -> Config:
    values = {
        "project_root": Path("/tmp/test"),
        "output_dir": Path("/tmp/test/reports"),
        "problems_dir": Path("/tmp/test/problems"),
        "monomial_order": "grevlex",
        "parallel_workers": 4,
        "random_seed": 1,
        "log_level": "WARNING",
    }
    values.update(overrides)
    return Config(**values)


class TestParseIntEnv:
    """Tests for _parse_int_env helper function."""

    def test_returns_default_when_not_set(self):
        """Should return default when env var is not set."""
        with patch.dict(os.environ, {}, clear=True):
            assert _parse_int_env("NONEXISTENT_VAR", 42) == 42

    def test_parses_valid_integer(self):
        """Should parse valid integer string."""
        with patch.dict(os.environ, {"TEST_INT": "123"}, clear=True):
            assert _parse_int_env("TEST_INT", 0) == 123

    def test_returns_default_for_invalid_integer(self):
        """Should return default when value is not a valid integer."""
        with patch.dict(os.environ, {"TEST_INT": "not_a_number"}, clear=True):
            assert _parse_int_env("TEST_INT", 99) == 99

    def test_handles_float_string(self):
        """Should return default for float strings (not valid int)."""
        with patch.dict(os.environ, {"TEST_INT": "3.14"}, clear=True):
            assert _parse_int_env("TEST_INT", 0) == 0

    def test_below_minimum_returns_default(self):
        """Values under the minimum fall back to the default."""
        with patch.dict(os.environ, {"TEST_INT": "0"}, clear=True):
            assert _parse_int_env("TEST_INT", 4, minimum=1) == 4

    def test_negative_allowed_without_minimum(self):
        """Negative values pass when no minimum is given."""
        with patch.dict(os.environ, {"TEST_INT": "-10"}, clear=True):
            assert _parse_int_env("TEST_INT", 0) == -10


class TestValidators:
    """Tests for _validate_order and _validate_log_level."""

    def test_known_orders(self):
        """grevlex and lex are accepted case-insensitively."""
        assert _validate_order("grevlex") == "grevlex"
        assert _validate_order(" LEX ") == "lex"

    def test_unknown_order_warns(self, capsys):
        """Unknown orders fall back to the default with a warning."""
        assert _validate_order("deglex") == "grevlex"
        assert "Warning" in capsys.readouterr().out

    def test_orders_shared_with_polyring(self):
        """Polynomial orders and config validation use one order list."""
        assert polyring.MONOMIAL_ORDERS is MONOMIAL_ORDERS
        for order in MONOMIAL_ORDERS:
            assert _validate_order(order) == order
            assert polyring.order_key(order) is not None

    def test_log_levels(self):
        """Known levels are upper-cased, unknown ones fall back."""
        assert _validate_log_level("debug") == "DEBUG"
        assert _validate_log_level("chatty") == "WARNING"


class TestConfig:
    """Tests for the Config dataclass."""

    def test_config_is_frozen(self):
        """Config should be immutable (frozen dataclass)."""
        config = _config()
        with pytest.raises(FrozenInstanceError):
            config.monomial_order = "lex"

    def test_config_equality(self):
        """Two configs with same values should be equal."""
        assert _config() == _config()
        assert _config() != _config(parallel_workers=8)


class TestGetProjectRoot:
    """Tests for _get_project_root function."""

    def test_finds_project_root(self):
        """Should find the project root containing pyproject.toml."""
        root = _get_project_root()
        assert (root / "pyproject.toml").exists()
        assert (root / "src").is_dir()


class TestGetConfig:
    """Tests for get_config defaults and overrides."""

    @pytest.fixture(autouse=True)
    def clear_config_cache(self):
        """Clear config cache before and after each test."""
        get_config.cache_clear()
        yield
        get_config.cache_clear()

    def test_caching_returns_same_instance(self):
        """Repeated calls return the cached instance."""
        assert get_config() is get_config()

    def test_defaults(self):
        """Defaults apply when nothing is set."""
        with patch.dict(os.environ, {}, clear=True):
            get_config.cache_clear()
            config = get_config()
            assert config.monomial_order == "grevlex"
            assert config.parallel_workers == 4
            assert config.random_seed == 20240601
            assert config.log_level == "WARNING"
            assert config.output_dir == config.project_root / "reports"

    def test_environment_overrides(self, temp_dir):
        """HODGE_* variables override the defaults."""
        env = {
            "HODGE_MONOMIAL_ORDER": "lex",
            "HODGE_WORKERS": "2",
            "HODGE_SEED": "7",
            "HODGE_LOG_LEVEL": "info",
            "HODGE_OUTPUT_DIR": str(temp_dir),
        }
        with patch.dict(os.environ, env, clear=True):
            get_config.cache_clear()
            config = get_config()
            assert config.monomial_order == "lex"
            assert config.parallel_workers == 2
            assert config.random_seed == 7
            assert config.log_level == "INFO"
            assert config.output_dir == temp_dir

    def test_invalid_workers_fall_back(self):
        """A worker count below one uses the default."""
        with patch.dict(os.environ, {"HODGE_WORKERS": "0"}, clear=True):
            get_config.cache_clear()
            assert get_config().parallel_workers == 4
