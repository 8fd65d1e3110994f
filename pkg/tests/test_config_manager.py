#!/usr/bin/env python3
"""
Tests for the configuration manager.
"""

import json
import logging
import os
import sys

import pytest

# Add the project root to the Python path
project_root = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
sys.path.insert(0, project_root)

from src.utils.config_manager import MINIMAL_CONFIG, ConfigManager

logger = logging.getLogger(__name__)


def test_defaults_are_loaded(tmp_path):
    config_manager = ConfigManager(config_path=str(tmp_path / "none.json"))
    assert config_manager.get("numerics.cut_tol") == pytest.approx(1e-6)
    assert config_manager.get("numerics.file_tol") == pytest.approx(1e-3)
    assert config_manager.get("sampling.seed") == 42
    assert config_manager.get("sweep.t_grid")[0] == "1/4"
    assert config_manager.get("missing.key", "fallback") == "fallback"


def test_shipped_defaults_match_minimal_config(tmp_path):
    config_manager = ConfigManager(config_path=str(tmp_path / "none.json"))
    assert config_manager.config == MINIMAL_CONFIG


def test_user_overlay_is_deep_merged(tmp_path):
    user = tmp_path / "config.json"
    user.write_text(json.dumps({"numerics": {"cut_tol": 1e-5}, "sweep": {"workers": 4}}))
    config_manager = ConfigManager(config_path=str(user))
    assert config_manager.get("numerics.cut_tol") == pytest.approx(1e-5)
    assert config_manager.get("numerics.point_tol") == pytest.approx(1e-8)
    assert config_manager.get("sweep.workers") == 4


def test_invalid_user_config_falls_back(tmp_path):
    user = tmp_path / "config.json"
    user.write_text("{not json")
    config_manager = ConfigManager(config_path=str(user))
    assert config_manager.get("sampling.seed") == 42


def test_missing_defaults_use_minimal_config(tmp_path):
    config_manager = ConfigManager(
        config_path=str(tmp_path / "none.json"),
        default_config_path=str(tmp_path / "also_missing.json"),
    )
    assert config_manager.config == MINIMAL_CONFIG
    assert config_manager.config is not MINIMAL_CONFIG

