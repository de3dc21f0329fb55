import mpmath
import pytest
from mpmath import mpf

from kleintrace import PrecisionConfig, QuantizationSpec

HALF = mpf(1) / 2


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config._criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        results = item.config._criteria.setdefault(number, [title, True])
        results[1] = results[1] and report.outcome == "passed"


def pytest_terminal_summary(terminalreporter, config):
    results = config._criteria
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, ok = results[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")


@pytest.fixture(autouse=True)
def _fixed_precision():
    # every test starts from the same global precision
    with mpmath.workprec(256):
        yield


@pytest.fixture
def cfg():
    return PrecisionConfig(precision_bits=256)


def n1_spec(c=HALF, epsilon=1):
    return QuantizationSpec([0], c=c, epsilon=epsilon)


def n2_spec(beta=0, c=0, epsilon=-1):
    b = mpmath.mpmathify(beta)
    return QuantizationSpec([1j * b, -1j * b], c=c, epsilon=epsilon)


def n3_spec(beta=HALF, epsilon=-1):
    b = mpmath.mpmathify(beta)
    return QuantizationSpec([0, 1j * b, -1j * b], c=HALF, epsilon=epsilon)


def n4_spec(beta=mpf("0.3"), gamma=mpf("0.7"), epsilon=1):
    b, g = mpmath.mpmathify(beta), mpmath.mpmathify(gamma)
    return QuantizationSpec([1j * b, -1j * b, 1j * g, -1j * g], c=0, epsilon=epsilon)


# the four worked examples with their positive numerators (unit-cosine scale)
FAMILIES = {
    "n1": (n1_spec, [1]),
    "n2": (n2_spec, [0, 1]),
    "n3": (n3_spec, [0, 8]),
    "n4": (n4_spec, [0, 0, 16]),
}
