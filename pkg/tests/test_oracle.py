import random

import pytest
from hypothesis import given, strategies as st

from conftest import random_graph
from subhit.config import Caps
from subhit.errors import ResourceLimitError
from subhit.graph import ColoredGraph, Piece, enumerate_embeddings
from subhit.oracle import exhaustive_hitting_set, min_hitting_set, occurrences, solve_oracle
from subhit.patterns import clique, cycle, path


def test_edges_of_triangle():
    assert len(occurrences(clique(3), None, path(2))) == 3


def test_missing_color_gives_no_occurrences():
    g = path(3)
    sigma = {0: 0, 1: 1, 2: 1}
    assert occurrences(g, sigma, path(3)) == []


def test_empty_family():
    assert min_hitting_set([]) == (0, frozenset())


def test_shared_element():
    assert min_hitting_set([{1, 2}, {2, 3}]) == (1, frozenset({2}))


def test_empty_set_is_rejected():
    with pytest.raises(ValueError):
        min_hitting_set([set()])


def test_caps():
    with pytest.raises(ResourceLimitError):
        occurrences(clique(15), None, path(2))
    with pytest.raises(ResourceLimitError):
        min_hitting_set([{i} for i in range(30)], Caps(oracle_sets=10))


@pytest.mark.parametrize("seed", range(20))
def test_occurrence_sets_match_embedding_images(seed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(4, 9), 0.5)
    sigma = {v: rng.randrange(4) for v in g.adj}
    h = cycle(4)
    embs = enumerate_embeddings(Piece(h, colored=True), ColoredGraph(g, sigma))
    assert occurrences(g, sigma, h) == sorted({frozenset(e.values()) for e in embs},
                                              key=lambda s: (len(s), sorted(s)))
    for s in occurrences(g, None, h):
        assert len(s) == 4


@given(st.lists(st.sets(st.integers(0, 15), min_size=1, max_size=5), max_size=25))
def test_branch_and_bound_matches_exhaustive(family):
    size, chosen = min_hitting_set(family)
    assert all(s & chosen for s in family)
    assert size == exhaustive_hitting_set(family)


def test_hitting_set_is_valid_on_graphs():
    rng = random.Random(5)
    for _ in range(30):
        g = random_graph(rng, 9, 0.6)
        opt, chosen = solve_oracle(g, cycle(4))
        rest = g.without(chosen)
        assert not occurrences(rest, None, cycle(4))
