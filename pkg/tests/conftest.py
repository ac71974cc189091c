import os
import sys
import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from sposet import corpus
from sposet.generate import random_poset
from sposet.linalg import GF2, QQ

settings.register_profile(
    "default",
    deadline=None,
    max_examples=int(os.environ.get("SPOSET_HYPOTHESIS_EXAMPLES", "30")),
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("default")

FIELDS = [QQ, GF2]


@st.composite
def posets(draw, max_vertices=4, max_facets=3, max_rank=3):
    seed = draw(st.integers(0, 10**6))
    n = draw(st.integers(1, max_vertices))
    k = draw(st.integers(1, max_facets))
    glue = draw(st.sampled_from([0.0, 0.3, 1.0]))
    return random_poset(random.Random(seed), n, k, max_rank, glue)


@pytest.fixture(params=corpus.names())
def fixture_poset(request):
    return corpus.get(request.param)


@pytest.fixture(params=FIELDS, ids=lambda f: f.name)
def field(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
