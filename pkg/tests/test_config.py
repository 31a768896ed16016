"""Tests for solver configuration loading."""
import json

import pytest

from mst_cover.config import SolverConfig, load_config
from mst_cover.exceptions import MalformedInstanceError


class TestSolverConfig:
    """Test schema defaults and validation."""

    def test_defaults(self):
        """Test an empty mapping gives sequential WARNING-level settings."""
        config = SolverConfig.from_dict({})

        assert config == SolverConfig(parallel_agents=False, max_workers=None, log_level="WARNING")

    def test_log_level_is_case_insensitive(self):
        """Test lower-case level names are accepted."""
        assert SolverConfig.from_dict({"log_level": "debug"}).log_level == "DEBUG"

    @pytest.mark.parametrize("data", [
        {"max_workers": 0},
        {"parallel_agents": "yes"},
        {"log_level": "LOUD"},
        {"threads": 4},
    ])
    def test_invalid(self, data):
        """Test bad values and unknown keys."""
        with pytest.raises(MalformedInstanceError):
            SolverConfig.from_dict(data)


class TestLoadConfig:
    """Test merging a configuration file with overrides."""

    def test_file_and_overrides(self, tmp_path):
        """Test overrides win and None overrides keep the file value."""
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"parallel_agents": True, "max_workers": 3}), encoding="utf-8")

        config = load_config(path, {"max_workers": None, "log_level": "INFO"})

        assert config.parallel_agents is True
        assert config.max_workers == 3
        assert config.log_level == "INFO"

    def test_no_file(self):
        """Test overrides alone."""
        assert load_config(None, {"parallel_agents": True}).parallel_agents is True

    @pytest.mark.parametrize("content", ["{", "[]"])
    def test_unreadable(self, tmp_path, content):
        """Test broken JSON and non-object files."""
        path = tmp_path / "config.json"
        path.write_text(content, encoding="utf-8")

        with pytest.raises(MalformedInstanceError):
            load_config(path)

    def test_missing_file(self, tmp_path):
        """Test a path that does not exist."""
        with pytest.raises(MalformedInstanceError):
            load_config(tmp_path / "absent.json")
