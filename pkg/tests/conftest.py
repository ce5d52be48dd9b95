import functools

import pytest

from cmnorms.cmext import CMExtension
from cmnorms.lattice import build_quaternion_model
from cmnorms.numfield import zeta7_field

# outcomes of tests tagged with @pytest.mark.criterion(n), keyed by n
CRITERIA = {n: [] for n in range(1, 8)}


@pytest.fixture(scope="session")
def F():
    return zeta7_field()


@functools.lru_cache(maxsize=None)
def model_for(d):
    F = zeta7_field()
    d = F(list(d)) if isinstance(d, tuple) else F(d)
    return build_quaternion_model(F, CMExtension(F, d))


@pytest.fixture(scope="session")
def models():
    return model_for


@pytest.fixture(scope="session")
def criteria():
    return CRITERIA


def pytest_collection_modifyitems(items):
    # acceptance checks go last so they can see the property-suite outcomes
    items.sort(key=lambda it: it.path.name == "test_acceptance.py")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        for mark in item.iter_markers("criterion"):
            CRITERIA[mark.args[0]].append((item.nodeid, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if not any(CRITERIA.values()):
        return
    terminalreporter.section("acceptance criteria")
    for n, results in CRITERIA.items():
        if not results:
            terminalreporter.write_line(f"criterion {n}: NOT RUN")
            continue
        bad = [nid for nid, ok in results if not ok]
        verdict = "PASS" if not bad else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {verdict} ({len(results)} checks)")
        for nid in bad:
            terminalreporter.write_line(f"    failed: {nid}")
