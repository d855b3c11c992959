import itertools
import math
import random

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from subhit.config import Caps
from subhit.errors import ContractError, ResourceLimitError
from subhit.graph import SimpleGraph
from subhit.pattern import (analyze, boundary_of, core_slice_and_peelings, cutvertices,
                            enumerate_t_chunks, make_slice, minimal_separators)
from subhit.patterns import (biclique, clique, clique_minus_edge, cycle, double_star, hh,
                             named_pattern, path, paw, subdivided_star)

# (mu, mu*) read off the pattern figures
FIGURE_TABLE = [
    (path(5), 1, 2),
    (double_star(), 1, 1),
    (subdivided_star(3), 1, 3),
    (clique_minus_edge(5), 3, 3),
    (biclique(2, 3), 3, 3),
    (hh(2), 2, 2),
]


@pytest.mark.parametrize("h,mu,mu_star", FIGURE_TABLE)
def test_figure_values(h, mu, mu_star):
    a = analyze(h)
    assert (a.mu, a.mu_star) == (mu, mu_star)


def test_clique_has_nothing():
    a = analyze(clique(4))
    assert a.mu == a.mu_star == 0
    assert a.is_clique and not a.separators


def test_path_separators():
    assert minimal_separators(path(3)) == {frozenset({1})}


def brute_minimal_separators(h: SimpleGraph) -> set:
    """S is a minimal ab-separator for some pair a, b: a and b split, and every proper subset fails."""
    verts = h.sorted_vertices()

    def separates(s, a, b):
        rest = h.without(s)
        return not any(a in c and b in c for c in rest.components())

    out = set()
    for a, b in itertools.combinations(verts, 2):
        if h.has_edge(a, b):
            continue
        others = [v for v in verts if v not in (a, b)]
        for r in range(len(others) + 1):
            for s in itertools.combinations(others, r):
                s = frozenset(s)
                if separates(s, a, b) and not any(separates(s - {x}, a, b) for x in s):
                    out.add(s)
    return out


def test_c4_antipodal_pairs():
    assert minimal_separators(cycle(4)) == {frozenset({0, 2}), frozenset({1, 3})}


@pytest.mark.parametrize("h", [cycle(5), paw(), biclique(2, 3), hh(2), path(4), subdivided_star(3)])
def test_separators_match_pairwise_definition(h):
    assert minimal_separators(h) == brute_minimal_separators(h)


def test_disconnected_pattern_has_empty_separator():
    h = named_pattern("K_3+P_2")
    assert frozenset() in minimal_separators(h)
    assert analyze(h).mu == 0


def test_slice_condition():
    h = path(4)
    assert make_slice(h, {0, 1}) is not None
    # both vertices of {1, 3} see outside, so the interior is empty but the boundary is not
    assert make_slice(h, {1, 3}) is None
    assert boundary_of(h, {0, 1}) == {1}


def test_chunk_invariants():
    for h in [paw(), biclique(2, 3), hh(2), cycle(5)]:
        a = analyze(h)
        for sl in a.slices:
            assert sl.boundary | sl.interior == sl.vertices
            assert h.neighborhood(sl.interior) == sl.boundary
        for c in a.chunks:
            assert h.induced(c.interior).is_connected()
            outside = h.without(c.vertices).components()
            assert c.separator == any(h.neighborhood(b) == c.boundary for b in outside)
            if c.separator:
                assert c.boundary in a.separators


def test_core_slice_full_and_empty():
    h = cycle(5)
    core, peel = core_slice_and_peelings(h, h.vertices)
    assert core.vertices == h.vertices and not peel
    core, peel = core_slice_and_peelings(h, {0, 2})
    assert not core.vertices and peel == {0, 2}


@given(st.sets(st.integers(0, 4)))
def test_core_slice_on_c5(p):
    h = cycle(5)
    p = frozenset(p)
    inner = {v for v in p if all(u in p for u in h.adj[v])}
    core = set(inner)
    for v in inner:
        core |= h.adj[v]
    sl, peel = core_slice_and_peelings(h, p)
    assert sl.interior == inner
    assert sl.vertices == core
    assert peel == p - core


def test_t_chunk_counts():
    a = analyze(path(3))
    assert all(not tc.part.boundary for tc in enumerate_t_chunks(a, []))
    middle_leaf = [tc for tc in enumerate_t_chunks(a, [1, 2]) if tc.part.interior == {0}]
    assert len(middle_leaf) == 2


def test_k22_t_chunk_count_is_permutation_sum():
    a = analyze(biclique(2, 2))
    t = 3
    want = sum(math.perm(t, len(c.boundary)) for c in a.chunks)
    assert len(enumerate_t_chunks(a, range(1, t + 1))) == want


def test_pattern_cap():
    with pytest.raises(ResourceLimitError):
        analyze(path(6), Caps(pattern_vertices=5))


def test_cutvertices():
    assert cutvertices(path(4)) == {1, 2}
    assert cutvertices(paw()) == {0}


@pytest.mark.parametrize("name,n,m", [("P_4", 4, 3), ("C_5", 5, 5), ("K_{2,3}", 5, 6), ("K5-e", 5, 9),
                                      ("H_2", 8, 10), ("paw", 4, 4), ("K_3+P_2", 5, 4)])
def test_named_patterns(name, n, m):
    h = named_pattern(name)
    assert (len(h), h.num_edges()) == (n, m)


def test_unknown_pattern_name():
    with pytest.raises(ContractError):
        named_pattern("Q_7")


@given(st.integers(0, 500))
def test_mu_at_most_mu_star_random(seed):
    rng = random.Random(seed)
    g = nx.gnp_random_graph(rng.randint(1, 7), 0.5, seed=seed)
    h = SimpleGraph(g.nodes, g.edges)
    a = analyze(h)
    assert a.mu <= a.mu_star
    assert (a.mu == 0) == a.all_cliques
    assert a.mu == max((len(s) for s in a.separators), default=0)
