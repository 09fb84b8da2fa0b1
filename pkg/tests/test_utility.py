import os
import sys
from unittest.mock import patch

import pytest

from src.utility import Registry, configure_logging, dget, dotexists, dotexpand, dotget, dotset, env2dict, replace_env_vars


class TestDotNotationUtilities:
    """Tests for dot notation utility functions."""

    def test_dotexpand_forms(self):
        """Colon paths expand to dot and underscore forms, commas separate paths."""
        assert dotexpand("options.fock.tol") == ["options.fock.tol"]
        assert dotexpand("fock:tol") == ["fock.tol", "fock_tol"]
        assert dotexpand("a:b, c.d,,") == ["a.b", "a_b", "c.d"]
        assert not dotexpand("")

    def test_dotexpand_rejects_other_types(self):
        """Only strings and lists of strings are paths."""
        with pytest.raises(ValueError):
            dotexpand(42)  # type: ignore

    def test_dotget(self):
        """Nested lookup with colon notation and underscore fallback."""
        data = {"options": {"radial": {"truncation": 200}}, "fock_tol": 1e-10}
        assert dotget(data, "options:radial:truncation") == 200
        assert dotget(data, "fock:tol") == 1e-10
        assert dotget(data, "options.radial.missing", default="none") == "none"

    def test_dotset_creates_and_extends(self):
        """dotset builds missing levels and modifies the dict in place."""
        data = {"options": {"fock": {"tol": 1.0}}}
        result = dotset(data, "options:fock:truncation", 4)
        assert result is data
        assert data == {"options": {"fock": {"tol": 1.0, "truncation": 4}}}

    def test_dotexists(self):
        """dotexists is true when any path resolves."""
        data = {"options": {"verify": {"seed": 0}}}
        assert dotexists(data, "options.verify.seed") is True
        assert dotexists(data, "x.y", "options:verify:seed") is True
        assert dotexists(data, "x.y") is False

    def test_dget(self):
        """dget returns the first non-None value along the given paths."""
        data = {"a_b": 1, "c": {"d": None}}
        assert dget(data, "c.d", "a:b") == 1
        assert dget(data, None, default="d") == "d"
        assert dget({}, "a", default=0) == 0


class TestEnv2Dict:
    """Tests for env2dict function."""

    def test_prefixed_variables_become_paths(self):
        """RADIAL_MULTIPLIERS_OPTIONS_FOCK_TRUNCATION becomes options.fock.truncation."""
        with patch.dict(os.environ, {"RADIAL_MULTIPLIERS_OPTIONS_FOCK_TRUNCATION": "6"}):
            result = env2dict("RADIAL_MULTIPLIERS", {"existing": 1})
        assert result["options"]["fock"]["truncation"] == "6"
        assert result["existing"] == 1

    def test_no_match_and_empty_prefix(self):
        """Unrelated variables and an empty prefix leave the data untouched."""
        with patch.dict(os.environ, {"OTHER_A_B": "x"}):
            assert env2dict("APA") == {}
        assert env2dict("", {"k": "v"}) == {"k": "v"}

    def test_no_lower_key(self):
        """Keys keep their case when lower_key is False."""
        with patch.dict(os.environ, {"APA_A_B": "value1"}):
            assert env2dict("APA", lower_key=False) == {"A": {"B": "value1"}}


class TestReplaceEnvVars:
    """Tests for ${VAR} substitution."""

    def test_nested_substitution(self):
        """Strings of the form ${VAR} are replaced anywhere in the structure."""
        with patch.dict(os.environ, {"LOG_FOLDER": "/tmp/logs"}):
            data = {"logging": {"folder": "${LOG_FOLDER}", "handlers": [{"sink": "${LOG_FOLDER}"}, "plain"]}}
            result = replace_env_vars(data)
        assert result["logging"]["folder"] == "/tmp/logs"
        assert result["logging"]["handlers"] == [{"sink": "/tmp/logs"}, "plain"]
        assert data["logging"]["folder"] == "${LOG_FOLDER}"

    def test_missing_variable_is_empty(self):
        """Unknown variables become empty strings, partial patterns are kept."""
        assert replace_env_vars("${SURELY_NOT_DEFINED_ANYWHERE}") == ""
        assert replace_env_vars("prefix ${X}") == "prefix ${X}"
        assert replace_env_vars(3.5) == 3.5


class TestConfigureLogging:
    """Tests for configure_logging function."""

    @patch("src.utility.logger")
    def test_configure_logging_no_opts(self, mock_logger):
        """Without options only the stderr sink is installed."""
        configure_logging(None)
        mock_logger.remove.assert_called_once()
        mock_logger.add.assert_called_once_with(sys.stderr, level="INFO", format="{time:YYYY-MM-DD HH:mm:ss} | {level} | {message}")
        mock_logger.configure.assert_not_called()

    @patch("src.utility.logger")
    def test_stream_names_are_mapped(self, mock_logger):
        """sys.stderr and sys.stdout names are mapped to the streams."""
        configure_logging({"handlers": [{"sink": "sys.stderr", "level": "DEBUG"}, {"sink": "sys.stdout"}]})
        handlers = mock_logger.configure.call_args[1]["handlers"]
        assert handlers[0]["sink"] is sys.stderr
        assert handlers[1]["sink"] is sys.stdout

    @patch("src.utility.logger")
    @patch("src.utility.datetime")
    def test_log_files_go_to_folder(self, mock_datetime, mock_logger):
        """*.log sinks are placed in the folder with a date prefix."""
        mock_datetime.now.return_value.strftime.return_value = "20260101"
        configure_logging({"folder": "logs", "handlers": [{"sink": "radial_multipliers.log", "level": "DEBUG"}]})
        handlers = mock_logger.configure.call_args[1]["handlers"]
        assert handlers[0]["sink"] == os.path.join("logs", "20260101_radial_multipliers.log")

    @patch("src.utility.logger")
    def test_handlers_without_sink_are_skipped(self, mock_logger):
        """Handlers without a sink are dropped."""
        configure_logging({"handlers": [{"level": "DEBUG"}]})
        mock_logger.configure.assert_called_once_with(handlers=[])


class TestRegistry:
    """Tests for the Registry base class."""

    @pytest.fixture
    def registry(self) -> type[Registry]:
        class SampleRegistry(Registry):
            items: dict = {}
            kind: str = "sample"

        return SampleRegistry

    def test_register_function(self, registry):
        """A function is registered under its key."""

        @registry.register(key="double")
        def double(x):
            return 2 * x

        assert registry.is_registered("double")
        assert registry.get("double")(3) == 6

    def test_register_without_key(self, registry):
        """The name is the default key."""

        @registry.register()
        def triple(x):
            return 3 * x

        assert registry.keys() == ["triple"]

    def test_register_factory(self, registry):
        """type="factory" registers the result of calling the object."""

        @registry.register(key="answer", type="factory")
        def answer():
            return 42

        assert registry.get("answer") == 42

    def test_register_class_has_key(self, registry):
        """Registered classes know their key."""

        @registry.register(key="thing")
        class Thing:  # pylint: disable=unused-variable
            pass

        assert registry.get("thing")().key == "thing"

    def test_unknown_key(self, registry):
        """Unknown keys raise KeyError naming the kind and the known keys."""

        @registry.register(key="known")
        def known():
            return None

        with pytest.raises(KeyError, match="sample 'missing' is not registered"):
            registry.get("missing")
        assert registry.is_registered("missing") is False

    def test_registries_do_not_share_items(self, registry):
        """Each subclass has its own items."""

        @registry.register(key="local")
        def local():
            return None

        assert not Registry.is_registered("local")
