import math
import os
import re
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from periodlab.numerics import PrecisionCtx

# derandomized: every run draws the same examples, so failures reproduce
settings.register_profile(
    "repro",
    derandomize=True,
    max_examples=12,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", max_examples=60, deadline=None)
settings.load_profile(os.environ.get("PERIODLAB_HYPOTHESIS", "repro"))


@pytest.fixture
def ctx30():
    return PrecisionCtx.from_digits(30)


@pytest.fixture
def ctx50():
    return PrecisionCtx.from_digits(50)


def fractions(lo, hi, max_den=24):
    """Rationals in [lo, hi] with bounded denominators."""
    lo, hi = Fraction(lo), Fraction(hi)

    def with_den(q):
        return st.integers(math.ceil(lo * q), math.floor(hi * q)).map(lambda p: Fraction(p, q))

    dens = [q for q in range(1, max_den + 1) if math.ceil(lo * q) <= math.floor(hi * q)]
    return st.sampled_from(dens).flatmap(with_den)


def noninteger_fractions(lo, hi, max_den=12):
    lo, hi = Fraction(lo), Fraction(hi)

    def with_den(q):
        nums = st.integers(math.ceil(lo * q), math.floor(hi * q)).filter(lambda p: p % q != 0)
        return nums.map(lambda p: Fraction(p, q))

    dens = [q for q in range(2, max_den + 1)
            if any(p % q for p in range(math.ceil(lo * q), math.floor(hi * q) + 1))]
    return st.sampled_from(dens).flatmap(with_den)


# one line per acceptance criterion at the end of the run
_ACCEPTANCE = {}
_AC_NODE = re.compile(r"test_acceptance\.py::test_ac(\d+)_")


def pytest_runtest_logreport(report):
    m = _AC_NODE.search(report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    detail = dict(report.user_properties).get("detail", "")
    if report.when == "call" or (report.failed and n not in _ACCEPTANCE):
        _ACCEPTANCE[n] = ("PASS" if report.passed else "FAIL", detail or report.when + " error")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        status, detail = _ACCEPTANCE[n]
        terminalreporter.write_line(f"AC{n:<3} {status}  {detail}")
