"""Shared fixtures: presets and solved moment tables, cached per session.

Solving a moment table is the expensive step (seconds at cutoff 8), so all
test modules share one cache keyed by (preset name, cutoff).
"""

import pytest

from momenta.model import load_preset
from momenta.reduce import solve_moments

_models = {}
_tables = {}


@pytest.fixture(scope="session")
def preset():
    def get(name):
        if name not in _models:
            _models[name] = load_preset(name)
        return _models[name]
    return get


@pytest.fixture(scope="session")
def table(preset):
    def get(name, cutoff):
        key = (name, cutoff)
        if key not in _tables:
            _tables[key] = solve_moments(preset(name), cutoff)
        return _tables[key]
    return get
