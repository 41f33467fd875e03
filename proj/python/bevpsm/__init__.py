# Copyright 2026 The bevpsm Authors
# SPDX-License-Identifier: Apache-2.0
"""BEV profile sampling and power-sector model experiments."""

import json
import os

from . import _core
from ._core import BevpsmError, ConfigError, InputError, IoError, ParseError

__all__ = [
    "BevpsmError", "ConfigError", "InputError", "IoError", "ParseError",
    "version", "build_info", "load_config", "config_hash", "generate_pool",
    "draw_samples", "run_scenario", "sweep", "report", "solve_mps", "validate",
]

__version__ = _core.version()


def _dump(config):
    return config if isinstance(config, str) else json.dumps(config)


def version():
    return _core.version()


def build_info():
    return json.loads(_core.build_info())


def load_config(path, overrides=()):
    """Config file with `extends` resolved and `key.path=value` overrides applied."""
    return json.loads(_core.load_config(os.fspath(path), list(overrides)))


def config_hash(config):
    return _core.config_hash(_dump(config))


def generate_pool(config, directory):
    """Generates the profile pool described by `config` into `directory`; returns its size."""
    return _core.generate_pool(_dump(config), os.fspath(directory))


def draw_samples(config, pool_size):
    """Profile id lists for every configured sample size, in sweep order."""
    return _core.draw_samples(_dump(config), pool_size)


def run_scenario(config, base_dir, pool_dir, strategy="reference", fleet_size=0.0,
                 profile_ids=(), sample_id=0):
    result = _core.run_scenario(_dump(config), os.fspath(base_dir), os.fspath(pool_dir),
                                strategy, float(fleet_size), list(profile_ids), sample_id)
    return json.loads(result)


def sweep(config, base_dir, pool_dir, out_dir):
    """Reference plus every scenario; writes results.csv, failures.csv and spikes.csv."""
    return json.loads(_core.sweep(_dump(config), os.fspath(base_dir), os.fspath(pool_dir),
                                  os.fspath(out_dir)))


def report(in_dir, out_dir=None):
    return json.loads(_core.report(os.fspath(in_dir), os.fspath(out_dir or in_dir)))


def solve_mps(path):
    return json.loads(_core.solve_mps(os.fspath(path)))


def validate(model, solution, tolerance=1e-6):
    return json.loads(_core.validate(os.fspath(model), os.fspath(solution), tolerance))
