"""Static analysis of a pattern graph H: slices, chunks and separators.

All enumerations are exhaustive over subsets of V(H), so the pattern size is
capped (``Caps.pattern_vertices``).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .config import Caps, default_caps
from .errors import ResourceLimitError
from .graph import Piece, SimpleGraph


@dataclass(frozen=True)
class Slice:
    """Induced subgraph H[D] whose interior sees exactly its boundary."""

    vertices: frozenset
    boundary: frozenset
    interior: frozenset

    def sort_key(self) -> tuple:
        return (len(self.vertices), tuple(sorted(self.vertices)))


@dataclass(frozen=True)
class Chunk(Slice):
    """A slice with connected, nonempty interior."""

    separator: bool = False


@dataclass(frozen=True)
class TPart:
    """A slice or chunk together with an injective boundary labeling.

    ``labels`` is stored as a sorted tuple of (pattern vertex, label) pairs
    so that instances hash and compare structurally.
    """

    part: Slice
    labels: tuple

    @property
    def label_map(self) -> dict:
        return dict(self.labels)

    @property
    def label_set(self) -> frozenset:
        return frozenset(l for _, l in self.labels)

    @property
    def vertices(self) -> frozenset:
        return self.part.vertices

    def piece(self, h: SimpleGraph, colored: bool = False) -> Piece:
        return Piece(h.induced(self.part.vertices), self.label_map, colored)

    def sort_key(self) -> tuple:
        return (self.part.sort_key(), self.labels)


# a t-chunk and a t-slice share one representation
TChunk = TPart
TSlice = TPart


def boundary_of(h: SimpleGraph, d: Iterable[int]) -> frozenset:
    """Vertices of D with a neighbour outside D."""
    d = frozenset(d)
    return frozenset(v for v in d if h.adj[v] - d)


def make_slice(h: SimpleGraph, d: Iterable[int]) -> Optional[Slice]:
    """H[D] as a Slice, or None when N(int) differs from the boundary."""
    d = frozenset(d)
    bd = boundary_of(h, d)
    inner = d - bd
    if h.neighborhood(inner) != bd:
        return None
    return Slice(d, bd, inner)


def _is_connected(h: SimpleGraph, vs: frozenset) -> bool:
    if not vs:
        return False
    return len(h.induced(vs).components()) == 1


def minimal_separators(h: SimpleGraph, caps: Caps | None = None) -> set:
    """All minimal ab-separators, over all pairs a, b.

    A set S is a minimal separator exactly when H - S has at least two full
    components, i.e. components whose neighbourhood is all of S.
    """
    _check_size(h, caps)
    verts = h.sorted_vertices()
    out = set()
    for r in range(len(verts) + 1):
        for s in itertools.combinations(verts, r):
            s = frozenset(s)
            rest = h.without(s)
            full = sum(1 for c in rest.components() if h.neighborhood(c) == s)
            if full >= 2:
                out.add(s)
    return out


def cutvertices(h: SimpleGraph) -> frozenset:
    base = len(h.components())
    return frozenset(v for v in h.adj if len(h.without([v]).components()) > base)


def core_slice_and_peelings(h: SimpleGraph, p: Iterable[int]) -> tuple[Slice, frozenset]:
    """Largest slice inside P, and the boundary vertices of H[P] it leaves out."""
    p = frozenset(p)
    inner = p - boundary_of(h, p)
    core = h.closed_neighborhood(inner)
    sl = make_slice(h, core)
    assert sl is not None and sl.interior == inner
    return sl, p - core


def _check_size(h: SimpleGraph, caps: Caps | None) -> None:
    caps = caps or default_caps()
    if len(h) > caps.pattern_vertices:
        raise ResourceLimitError(
            f"pattern has {len(h)} vertices; pattern_vertices cap is {caps.pattern_vertices}")


@dataclass
class PatternAnalysis:
    h: SimpleGraph
    components: list
    cutvertices: frozenset
    slices: list
    chunks: list
    separator_chunks: list
    mu: int
    mu_star: int
    separators: set = field(default_factory=set)

    @property
    def n(self) -> int:
        return len(self.h)

    @property
    def connected(self) -> bool:
        return len(self.components) == 1

    @property
    def all_cliques(self) -> bool:
        return all(self.h.induced(c).is_clique() for c in self.components)

    @property
    def is_clique(self) -> bool:
        return self.connected and self.h.is_clique()

    @property
    def is_path(self) -> bool:
        h = self.h
        if not self.connected:
            return False
        degs = sorted(h.degree(v) for v in h.adj)
        if len(h) == 1:
            return True
        return h.num_edges() == len(h) - 1 and degs[-1] <= 2

    def path_order(self) -> list:
        """Vertices of a path pattern from one end to the other."""
        if not self.is_path:
            raise ValueError("pattern is not a path")
        h = self.h
        if len(h) == 1:
            return h.sorted_vertices()
        start = min(v for v in h.adj if h.degree(v) == 1)
        order = [start]
        prev = None
        while len(order) < len(h):
            cur = order[-1]
            nxt = [u for u in h.adj[cur] if u != prev]
            prev = cur
            order.append(nxt[0])
        return order

    def slice_by_vertices(self, d: Iterable[int]) -> Optional[Slice]:
        return self._by_vertices.get(frozenset(d))

    def __post_init__(self):
        self._by_vertices = {s.vertices: s for s in self.slices}

    def summary(self) -> dict:
        return {
            "vertices": len(self.h),
            "edges": self.h.num_edges(),
            "components": len(self.components),
            "connected": self.connected,
            "clique": self.is_clique,
            "allComponentsCliques": self.all_cliques,
            "path": self.is_path,
            "cutvertices": sorted(self.cutvertices),
            "slices": len(self.slices),
            "chunks": len(self.chunks),
            "separatorChunks": len(self.separator_chunks),
            "mu": self.mu,
            "muStar": self.mu_star,
        }


def analyze(h: SimpleGraph, caps: Caps | None = None) -> PatternAnalysis:
    if len(h) == 0:
        raise ValueError("pattern must be nonempty")
    _check_size(h, caps)
    verts = h.sorted_vertices()
    slices: dict[frozenset, Slice] = {}
    chunks = []
    for r in range(len(verts) + 1):
        for a in itertools.combinations(verts, r):
            a = frozenset(a)
            d = h.closed_neighborhood(a)
            sl = make_slice(h, d)
            if sl is None or sl.interior != a or d in slices:
                continue
            if _is_connected(h, a):
                outside = h.without(d).components()
                sep = any(h.neighborhood(b) == sl.boundary for b in outside)
                sl = Chunk(sl.vertices, sl.boundary, sl.interior, sep)
                chunks.append(sl)
            slices[d] = sl
    ordered = sorted(slices.values(), key=Slice.sort_key)
    chunks.sort(key=Slice.sort_key)
    sep_chunks = [c for c in chunks if c.separator]
    seps = minimal_separators(h, caps)
    mu = max((len(c.boundary) for c in sep_chunks), default=0)
    mu_star = max((len(c.boundary) for c in chunks), default=0)
    return PatternAnalysis(h, h.components(), cutvertices(h), ordered, chunks,
                           sep_chunks, mu, mu_star, seps)


def labelings(boundary: Iterable[int], label_pool: Iterable[int]):
    """Injective labelings of ``boundary`` from ``label_pool`` as sorted pair tuples."""
    bd = sorted(boundary)
    pool = sorted(label_pool)
    for perm in itertools.permutations(pool, len(bd)):
        yield tuple(zip(bd, perm))


def enumerate_t_chunks(analysis: PatternAnalysis, label_pool: Iterable[int],
                       separator_only: bool = False) -> list[TPart]:
    pool = sorted(set(label_pool))
    chunks = analysis.separator_chunks if separator_only else analysis.chunks
    return [TPart(c, lab) for c in chunks for lab in labelings(c.boundary, pool)]


def enumerate_t_slices(analysis: PatternAnalysis, label_pool: Iterable[int],
                       max_vertices: int | None = None) -> list[TPart]:
    pool = sorted(set(label_pool))
    out = []
    for s in analysis.slices:
        if max_vertices is not None and len(s.vertices) > max_vertices:
            continue
        out.extend(TPart(s, lab) for lab in labelings(s.boundary, pool))
    return out
