"""Shared fixtures: parsed suite entries and a quiet hypothesis profile."""

from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from specdiff.suite import SuiteEntry, get_suite

settings.register_profile(
    "suite",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def finite_set_entry() -> SuiteEntry:
    return get_suite("finite_set")


@pytest.fixture(scope="session")
def bst_map_entry() -> SuiteEntry:
    return get_suite("bst_map")


@pytest.fixture(scope="session")
def counter_entry() -> SuiteEntry:
    return get_suite("counter")


@pytest.fixture(scope="session")
def finite_set_sig(finite_set_entry):
    return finite_set_entry.signature


@pytest.fixture(scope="session")
def bst_map_sig(bst_map_entry):
    return bst_map_entry.signature


@pytest.fixture(scope="session")
def counter_sig(counter_entry):
    return counter_entry.signature
