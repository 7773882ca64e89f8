import numpy as np
import pytest

from spectral_gmm.model import MixtureModel
from spectral_gmm.scenarios import random_orthogonal


def random_spd(rng, n, jitter=0.1):
    m = rng.standard_normal((n, n))
    return m @ m.T + jitter * np.eye(n)


def random_model(rng, n):
    mu = rng.standard_normal(n)
    return MixtureModel(mu, random_spd(rng, n), random_spd(rng, n))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def worked_model():
    # mu=(2,0), Sigma_+ = diag(4,1), Sigma_- = I
    return MixtureModel([2.0, 0.0], np.eye(2), np.diag([4.0, 1.0]))


__all__ = ["random_spd", "random_model", "random_orthogonal"]


# ---- acceptance reporting: one PASS/FAIL line per criterion ----

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, description): acceptance criterion")


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE[report.nodeid] = report.outcome


_LABELS = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark is not None:
            _LABELS[item.nodeid] = mark.args


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (number, description) in sorted(_LABELS.items(), key=lambda kv: kv[1][0]):
        outcome = _ACCEPTANCE.get(nodeid)
        if outcome is None:
            continue
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {description}")
