"""Named pattern graphs, always on vertex ids 0..n-1."""
from __future__ import annotations

import re

from .errors import ContractError
from .graph import SimpleGraph, disjoint_union


def path(k: int) -> SimpleGraph:
    return SimpleGraph(range(k), [(i, i + 1) for i in range(k - 1)])


def cycle(k: int) -> SimpleGraph:
    if k < 3:
        raise ContractError("cycles need at least 3 vertices")
    return SimpleGraph(range(k), [(i, (i + 1) % k) for i in range(k)])


def clique(k: int) -> SimpleGraph:
    return SimpleGraph(range(k), [(i, j) for i in range(k) for j in range(i + 1, k)])


def biclique(a: int, b: int) -> SimpleGraph:
    return SimpleGraph(range(a + b), [(i, a + j) for i in range(a) for j in range(b)])


def hh(h: int) -> SimpleGraph:
    """K_{2,h} plus a triangle on each of the two hubs.

    Ids: hub a = 0, hub b = 1, middle vertices 2..h+1, triangle on a uses
    h+2, h+3 and triangle on b uses h+4, h+5.
    """
    if h < 2:
        raise ContractError("H_h needs h >= 2")
    edges = [(0, 2 + i) for i in range(h)] + [(1, 2 + i) for i in range(h)]
    a1, a2, b1, b2 = h + 2, h + 3, h + 4, h + 5
    edges += [(0, a1), (0, a2), (a1, a2), (1, b1), (1, b2), (b1, b2)]
    return SimpleGraph(range(h + 6), edges)


def paw() -> SimpleGraph:
    """Triangle 0-1-2 with a pendant vertex 3 on 0."""
    return SimpleGraph(range(4), [(0, 1), (1, 2), (0, 2), (0, 3)])


def clique_minus_edge(k: int) -> SimpleGraph:
    return SimpleGraph(range(k), [(i, j) for i in range(k) for j in range(i + 1, k) if (i, j) != (0, 1)])


def double_star(left: int = 2, right: int = 2) -> SimpleGraph:
    """Two adjacent centres 0 and 1 with ``left`` and ``right`` leaves."""
    edges = [(0, 1)]
    nxt = 2
    for c, cnt in ((0, left), (1, right)):
        for _ in range(cnt):
            edges.append((c, nxt))
            nxt += 1
    return SimpleGraph(range(nxt), edges)


def subdivided_star(arms: int = 3) -> SimpleGraph:
    """Centre 0 with ``arms`` paths of length two."""
    edges = []
    for i in range(arms):
        mid, leaf = 1 + 2 * i, 2 + 2 * i
        edges += [(0, mid), (mid, leaf)]
    return SimpleGraph(range(1 + 2 * arms), edges)


_NAMED = [
    (r"P_?(\d+)", lambda m: path(int(m[1]))),
    (r"C_?(\d+)", lambda m: cycle(int(m[1]))),
    (r"K_?\{?(\d+),(\d+)\}?", lambda m: biclique(int(m[1]), int(m[2]))),
    (r"K_?(\d+)-e", lambda m: clique_minus_edge(int(m[1]))),
    (r"K_?(\d+)", lambda m: clique(int(m[1]))),
    (r"H_?(\d+)", lambda m: hh(int(m[1]))),
    (r"paw", lambda m: paw()),
    (r"double[-_]?star(?:\((\d+),(\d+)\))?",
     lambda m: double_star(int(m[1] or 2), int(m[2] or 2))),
    (r"sub(?:divided)?[-_]?star(?:\((\d+)\))?", lambda m: subdivided_star(int(m[1] or 3))),
]


def named_pattern(name: str) -> SimpleGraph:
    """Parse names like ``P_4``, ``K_{2,3}``, ``K5-e``, ``H_2`` or ``K_3+P_2``."""
    parts = [p.strip() for p in name.split("+")]
    graphs = []
    for p in parts:
        for rx, make in _NAMED:
            m = re.fullmatch(rx, p, flags=re.IGNORECASE)
            if m:
                graphs.append(make(m))
                break
        else:
            raise ContractError(f"unknown pattern name {p!r}")
    if len(graphs) == 1:
        return graphs[0]
    return disjoint_union(*graphs)[0]
