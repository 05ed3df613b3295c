import random

import pytest
from hypothesis import HealthCheck, settings

from alterknot.builders import double_twist, random_alternating
from alterknot.diagram import parse_pd
from alterknot.dt import parse_dt

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

TREFOIL_PD = "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]"
FIGURE_EIGHT_DT = "4 6 8 2"
FIVE_TWO_DT = "4 8 10 2 6"
# 6_2, the stand-in for a diagram of twist number three
SIX_TWO_DT = "4 8 10 12 2 6"
# twist equivalent crossings 3 and 6 sit in different regions
UNREDUCED_DT = "8 6 12 10 14 4 2"


@pytest.fixture
def trefoil():
    return parse_pd(TREFOIL_PD)


@pytest.fixture
def figure_eight():
    return parse_dt(FIGURE_EIGHT_DT)


@pytest.fixture
def five_two():
    return parse_dt(FIVE_TWO_DT)


@pytest.fixture
def six_two():
    return parse_dt(SIX_TWO_DT)


@pytest.fixture
def unreduced():
    return parse_dt(UNREDUCED_DT)


@pytest.fixture(scope="session")
def long_121_3():
    # a 121-crossing twist next to a 3-crossing one closes up into a two-component link
    return double_twist(121, 3, allow_links=True)


@pytest.fixture(scope="session")
def long_122_3():
    return double_twist(122, 3)


def diagram_from_seed(seed: int, lo: int = 3, hi: int = 10):
    rng = random.Random(seed)
    return random_alternating(rng.randint(lo, hi), rng), rng


def pytest_terminal_summary(terminalreporter):
    acceptance = __import__("sys").modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[n])
