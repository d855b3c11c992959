import random

import pytest
from hypothesis import HealthCheck, settings

from subhit.graph import SimpleGraph

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> SimpleGraph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return SimpleGraph(range(n), edges)


def random_coloring(rng: random.Random, g: SimpleGraph, h: SimpleGraph) -> dict:
    colors = h.sorted_vertices()
    return {v: rng.choice(colors) for v in g.sorted_vertices()}


def colored_instance(seed: int, h: SimpleGraph, max_n: int = 9):
    """Random host on 4..max_n vertices with a uniform random coloring."""
    rng = random.Random(seed)
    n = rng.randint(max(len(h), 4), max_n)
    g = random_graph(rng, n, rng.choice([0.35, 0.5, 0.7]))
    return g, random_coloring(rng, g, h)


def plain_instance(seed: int, max_n: int = 9) -> SimpleGraph:
    rng = random.Random(seed)
    n = rng.randint(4, max_n)
    return random_graph(rng, n, rng.choice([0.3, 0.45, 0.6]))


@pytest.fixture
def rng():
    return random.Random(1234)


# acceptance criteria record one line each; printed at the end of the session
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[num])
