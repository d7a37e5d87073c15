import json
import pathlib

import pytest

ORACLE_PATH = pathlib.Path(__file__).parent / "oracles" / "frozen.json"


@pytest.fixture(scope="session")
def oracle():
    """Frozen high-precision reference values (see oracles/make_oracles.py)."""
    return json.loads(ORACLE_PATH.read_text())


@pytest.fixture(scope="session")
def tw():
    from kacrice.tracy_widom import default_evaluator

    return default_evaluator()


def within_stderr(est, target, k=3.0, extra=0.0):
    """|mean - target| <= k * combined standard error."""
    se = (est.stderr**2 + extra**2) ** 0.5
    return abs(est.mean - target) <= k * se


# -- acceptance bookkeeping ------------------------------------------------------------

ACCEPTANCE_LINES = {}


def pytest_sessionstart(session):
    import time

    session.config._kacrice_t0 = time.monotonic()


def pytest_collection_modifyitems(config, items):
    # acceptance criteria run last so the runtime criterion sees the whole session
    items.sort(key=lambda it: it.nodeid.startswith("tests/test_acceptance.py") or "test_acceptance.py::" in it.nodeid)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
