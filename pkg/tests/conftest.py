import warnings

import pytest

from fluxcat import load_catalog
from fluxcat.bcs import Material


@pytest.fixture(scope="session")
def presets():
    return load_catalog()


@pytest.fixture(scope="session")
def al(presets):
    return presets.materials["Al"]


@pytest.fixture(scope="session")
def nb(presets):
    return presets.materials["Nb"]


@pytest.fixture
def thin_gap():
    """Aluminium-like material with gap = 1e-3 E_F."""
    return Material.from_gap_ratio("thin", 2.02e6, 1e-3)


def wide_gap(ratio):
    """Exaggerated-gap material; the gap-ratio warning is expected and silenced."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return Material.from_gap_ratio("wide", 2.02e6, ratio)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
