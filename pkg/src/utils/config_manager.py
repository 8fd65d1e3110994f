#!/usr/bin/env python3
"""
Configuration manager for GrassMean.
Loads the shipped defaults and overlays an optional user configuration.
"""
import copy
import json
import logging
import os

logger = logging.getLogger(__name__)

PROJECT_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", ".."))

MINIMAL_CONFIG = {
    "numerics": {
        "cut_tol": 1e-6,
        "file_tol": 1e-3,
        "point_tol": 1e-8,
        "residual_eps": 1e-9,
        "witness_eps": 1e-6
    },
    "sampling": {
        "seed": 42,
        "default_count": 10
    },
    "sweep": {
        "radii": [0.1, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4],
        "samples_per_radius": 200,
        "t_grid": ["1/4", "1/3", "1/2", "2/3", "3/4", "9/10"],
        "workers": 1
    },
    "paths": {
        "golden_dir": "config/golden"
    },
    "system": {
        "log_level": "INFO",
        "log_file": ""
    }
}


class ConfigManager:
    """Manages configuration for GrassMean"""

    def __init__(self, config_path="config/config.json", default_config_path="config/default_config.json"):
        """Initialize the configuration manager

        Relative paths are resolved against the project root. A missing user
        config is not an error; the defaults are used as they are.
        """
        self.config_path = self._resolve(config_path)
        self.default_config_path = self._resolve(default_config_path)
        self.config = self.load_config()

    @staticmethod
    def _resolve(path):
        if path is None or os.path.isabs(path):
            return path
        return os.path.join(PROJECT_ROOT, path)

    def load_config(self):
        """Load the defaults, then deep-merge the user config if there is one"""
        config = self._load_default_config()
        if not self.config_path or not os.path.exists(self.config_path):
            logger.debug(f"No user config at {self.config_path}, using defaults")
            return config

        try:
            with open(self.config_path, "r") as f:
                overrides = json.load(f)
            self._deep_update(config, overrides)
            logger.info(f"Loaded configuration from {self.config_path}")
        except Exception as e:
            logger.error(f"Error loading configuration: {e}")
            logger.info("Continuing with default configuration")
        return config

    def _load_default_config(self):
        """Load the default configuration"""
        try:
            if os.path.exists(self.default_config_path):
                with open(self.default_config_path, "r") as f:
                    config = json.load(f)
                logger.debug(f"Loaded default configuration from {self.default_config_path}")
                return config
            logger.error(f"Default config file not found: {self.default_config_path}")
        except Exception as e:
            logger.error(f"Error loading default configuration: {e}")
        return copy.deepcopy(MINIMAL_CONFIG)

    def _deep_update(self, target, source):
        """Deep update a nested dictionary"""
        for key, value in source.items():
            if key in target and isinstance(target[key], dict) and isinstance(value, dict):
                self._deep_update(target[key], value)
            else:
                target[key] = value

    def get(self, path, default=None):
        """Get a configuration value by path (e.g., 'numerics.cut_tol')"""
        try:
            value = self.config
            for key in path.split("."):
                value = value[key]
            return value
        except (KeyError, TypeError):
            return default

    def resolve_path(self, path_key):
        """A paths.* entry as an absolute path"""
        return self._resolve(self.get(f"paths.{path_key}"))
