import numpy as np
import pytest

from nlqm.verification import reference_spec


@pytest.fixture(scope="session")
def ref_spec():
    """dim-4 random H (seed 42), g = 1 + 0.5i, w0 = 1, vartheta = 0.3, theta = 0.7."""
    return reference_spec()


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


_AC_RESULTS = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        _AC_RESULTS[props["criterion"]] = (report.passed, props.get("detail", ""))


def pytest_terminal_summary(terminalreporter):
    if not _AC_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_AC_RESULTS, key=lambda s: int(s.split("-")[1])):
        ok, detail = _AC_RESULTS[name]
        terminalreporter.write_line(f"{name}: {'PASS' if ok else 'FAIL'}  {detail}")
