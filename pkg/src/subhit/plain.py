"""Exact solver for the uncolored hitting problem via witness graphs.

A boundaried graph is summarised by its extended profile: for every small
set Y of boundary vertices, which labeled slices of H still embed once Y is
removed.  The DP keeps, per bag, one compact witness graph for every
extended profile reachable from the leaves, together with the cheapest
deletion cost that produces it.
"""
from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .colorful import SolveResult, bag_subset_dp
from .config import Caps, default_caps
from .errors import ContractError, DispatchError, ResourceLimitError
from .graph import (BoundariedGraph, Piece, SimpleGraph, find_embedding, glue,
                    iter_embeddings, iter_free_boundary_embeddings, renumber_internal)
from .pattern import PatternAnalysis, enumerate_t_chunks
from .treedecomp import FORGET, INTRODUCE, JOIN, LEAF, NiceDecomposition

log = logging.getLogger(__name__)


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _submasks_by_size(mask: int, limit: int) -> list[int]:
    """All submasks of ``mask`` with at most ``limit`` bits."""
    bits = [1 << i for i in range(mask.bit_length()) if (mask >> i) & 1]
    out = [0]
    for b in bits:
        out += [m | b for m in out if _popcount(m) < limit]
    return out


def witness_size_constant(h: SimpleGraph) -> int:
    """Size constant of the witness construction: 2^n (n + m) n^n."""
    n = len(h)
    return 2 ** n * (n + h.num_edges()) * n ** n


def witness_size(g: BoundariedGraph) -> int:
    """Vertices plus edges outside the boundary-induced subgraph."""
    return len(g.graph) + g.graph.num_edges() - g.boundary_graph().num_edges()


# ---------------------------------------------------------------- profiles

class _Embeddings:
    """All slice embeddings of a boundaried graph, as bitmask records.

    Each record is (slice index, boundary labeling, mask of boundary labels
    hit, mask of vertices hit); vertex bits follow ascending vertex id.
    """

    def __init__(self, g: BoundariedGraph, analysis: PatternAnalysis):
        self.g = g
        self.slices = analysis.slices
        self.n = len(analysis.h)
        self.vindex = {v: i for i, v in enumerate(g.graph.sorted_vertices())}
        self.records = []
        h = analysis.h
        labels = g.labels
        for si, sl in enumerate(self.slices):
            bd = sorted(sl.boundary)
            for emb in iter_free_boundary_embeddings(h.induced(sl.vertices), sl.boundary, g):
                lab = tuple((a, labels[emb[a]]) for a in bd)
                bmask = 0
                vmask = 0
                for x in emb.values():
                    vmask |= 1 << self.vindex[x]
                    l = labels.get(x)
                    if l is not None:
                        bmask |= 1 << l
                self.records.append((si, lab, bmask, vmask))

    def key(self, alive: Optional[int] = None) -> frozenset:
        """Extended profile as a set of (Y label mask, slice index, labeling)."""
        groups: dict = {}
        for si, lab, bmask, vmask in self.records:
            if alive is not None and vmask & ~alive:
                continue
            groups.setdefault((si, lab), set()).add(bmask)
        full = 0
        for l in self.g.labels.values():
            full |= 1 << l
        cache: dict = {}
        out = set()
        for (si, lab), masks in groups.items():
            limit = self.n - len(self.slices[si].vertices)
            ys = cache.get(limit)
            if ys is None:
                ys = cache[limit] = _submasks_by_size(full, limit)
            for y in ys:
                if any(not (m & y) for m in masks):
                    out.add((y, si, lab))
        return frozenset(out)


@dataclass(frozen=True)
class ExtendedProfile:
    """Set of (Y labels, slice vertex set, boundary labeling) triples."""

    entries: frozenset

    def fingerprint(self) -> str:
        rows = sorted((tuple(sorted(y)), tuple(sorted(d)), lab) for y, d, lab in self.entries)
        return hashlib.sha256(repr(rows).encode()).hexdigest()[:16]

    def profile(self, y=frozenset()) -> frozenset:
        y = frozenset(y)
        return frozenset((d, lab) for yy, d, lab in self.entries if yy == y)

    def __le__(self, other: "ExtendedProfile") -> bool:
        return self.entries <= other.entries


def _mask_labels(mask: int) -> frozenset:
    return frozenset(i for i in range(mask.bit_length()) if (mask >> i) & 1)


def _check_profile_size(g: BoundariedGraph, caps: Caps | None) -> None:
    caps = caps or default_caps()
    if len(g.graph) > caps.profile_host_vertices:
        raise ResourceLimitError(
            f"graph has {len(g.graph)} vertices; profile_host_vertices cap is {caps.profile_host_vertices}")


def extended_profile(g: BoundariedGraph, analysis: PatternAnalysis, caps: Caps | None = None) -> ExtendedProfile:
    _check_profile_size(g, caps)
    embs = _Embeddings(g, analysis)
    slices = analysis.slices
    return ExtendedProfile(frozenset((_mask_labels(y), slices[si].vertices, lab)
                                     for y, si, lab in embs.key()))


def witness_subgraph_check(g1: BoundariedGraph, g2: BoundariedGraph, analysis: PatternAnalysis) -> bool:
    """True when every profile of g1 - Y is contained in that of g2 - Y."""
    if g1.labels != g2.labels:
        raise ContractError("witness-subgraph check needs equal boundaries and labelings")
    return extended_profile(g1, analysis) <= extended_profile(g2, analysis)


def equivalent(g1: BoundariedGraph, g2: BoundariedGraph, analysis: PatternAnalysis) -> bool:
    if g1.labels != g2.labels:
        raise ContractError("equivalence needs equal boundaries and labelings")
    return extended_profile(g1, analysis) == extended_profile(g2, analysis)


# ---------------------------------------------------------------- witness construction

class _Lazy:
    """Embeddings pulled on demand from a deterministic generator."""

    def __init__(self, it: Iterator, vindex: dict):
        self.it = it
        self.items: list = []
        self.vindex = vindex
        self.done = False

    def first_avoiding(self, xmask: int):
        for emb, m in self.items:
            if not m & xmask:
                return emb, m
        while not self.done:
            try:
                emb = next(self.it)
            except StopIteration:
                self.done = True
                break
            m = 0
            for x in emb.values():
                m |= 1 << self.vindex[x]
            self.items.append((emb, m))
            if not m & xmask:
                return emb, m
        return None


def build_witness(g: BoundariedGraph, analysis: PatternAnalysis) -> BoundariedGraph:
    """Subgraph of ``g`` collected by recursive chunk search.

    Start from g[boundary].  For every t-chunk over the boundary labels run
    enhance(c, X): take the first c-embedding avoiding X, add its image, and
    while |X| < |V(H)| recurse on X + {v} for each image vertex v.
    """
    h = analysis.h
    n = len(h)
    order = g.graph.sorted_vertices()
    vindex = {v: i for i, v in enumerate(order)}
    keep_v = set(g.labels)
    keep_e = set(g.boundary_graph().edges)
    for tc in enumerate_t_chunks(analysis, sorted(g.labels.values())):
        piece = tc.piece(h)
        piece_edges = list(piece.graph.edges)
        lazy = _Lazy(iter_embeddings(piece, g), vindex)
        seen: set = set()
        stack = [(0, 0)]
        # explicit stack; visiting order does not change the union of images
        while stack:
            xmask, depth = stack.pop()
            if xmask in seen:
                continue
            seen.add(xmask)
            found = lazy.first_avoiding(xmask)
            if found is None:
                continue
            emb, m = found
            keep_v.update(emb.values())
            for a, b in piece_edges:
                u, v = emb[a], emb[b]
                keep_e.add((u, v) if u < v else (v, u))
            if depth < n:
                for x in sorted(emb.values(), reverse=True):
                    stack.append((xmask | (1 << vindex[x]), depth + 1))
    graph = SimpleGraph(sorted(keep_v), sorted(keep_e))
    return BoundariedGraph(graph, g.labels, g.t)


def minimize_witness(g: BoundariedGraph, analysis: PatternAnalysis,
                     embs: Optional[_Embeddings] = None) -> tuple[BoundariedGraph, frozenset]:
    """Greedily drop non-boundary vertices (ascending id) that do not change the profile.

    Returns the minimized graph and its (internal) extended-profile key.
    One pass suffices: a vertex kept once stays necessary in every subgraph
    with the same profile.
    """
    embs = embs or _Embeddings(g, analysis)
    alive = (1 << len(embs.vindex)) - 1
    key = embs.key(alive)
    for v in g.graph.sorted_vertices():
        if v in g.labels:
            continue
        trial = alive & ~(1 << embs.vindex[v])
        k2 = embs.key(trial)
        if k2 == key:
            alive = trial
    keep = [v for v, i in embs.vindex.items() if (alive >> i) & 1]
    out = BoundariedGraph(g.graph.induced(keep), g.labels, g.t)
    return out, key


# ---------------------------------------------------------------- the DP

@dataclass
class _Entry:
    cost: int
    witness: BoundariedGraph
    ptr: object = None


@dataclass
class PlainStats:
    state_counts: list = field(default_factory=list)
    witness_sizes: list = field(default_factory=list)
    canonicalizations: int = 0


class PlainDP:
    def __init__(self, g: SimpleGraph, analysis: PatternAnalysis, nd: NiceDecomposition,
                 caps: Caps | None = None):
        if analysis.all_cliques:
            raise DispatchError("every pattern component is a clique; the witness DP needs a non-clique component")
        self.g, self.analysis, self.nd = g, analysis, nd
        self.caps = caps or default_caps()
        self.n = len(analysis.h)
        self.base = max(g.adj, default=-1) + 1
        full = [i for i, s in enumerate(analysis.slices) if len(s.vertices) == self.n]
        self.full_entry = (0, full[0], ())
        self._canon: dict = {}
        self.stats = PlainStats()
        self.tables: list = []

    def canonical(self, bg: BoundariedGraph) -> tuple[BoundariedGraph, frozenset]:
        """Compact representative with the same extended profile, plus its key."""
        k = bg.key()
        hit = self._canon.get(k)
        if hit is not None:
            return hit
        self.stats.canonicalizations += 1
        _check_profile_size(bg, self.caps)
        built = build_witness(bg, self.analysis)
        small, key = minimize_witness(built, self.analysis)
        small = renumber_internal(small, self.base)
        assert small.boundary_graph() == bg.boundary_graph()
        self._canon[k] = (small, key)
        return small, key

    def run(self, keep_tables: bool = False) -> SolveResult:
        nd, g = self.nd, self.g
        t = nd.t
        tables: list = [None] * len(nd)
        empty_graph = BoundariedGraph(SimpleGraph(), {}, t)
        for w in range(len(nd)):
            kind, bag = nd.kind[w], nd.bags[w]
            table: dict = {}

            def offer(xh, graph, key, cost, ptr):
                if self.full_entry in key:
                    return  # an H-subgraph that no later deletion can hit
                s = (xh, key)
                old = table.get(s)
                if old is None or cost < old.cost:
                    table[s] = _Entry(cost, graph, ptr)

            if kind == LEAF:
                wit, key = self.canonical(empty_graph)
                offer(frozenset(), wit, key, 0, None)
            elif kind == INTRODUCE:
                v = nd.vertex[w]
                for s, e in tables[nd.children[w][0]].items():
                    xh = s[0]
                    offer(xh | {v}, e.witness, s[1], e.cost, (s, False))
                    wg = e.witness
                    nbrs = g.adj[v] & wg.labels.keys()
                    grown = BoundariedGraph(wg.graph.with_vertex(v, nbrs),
                                            {**wg.labels, v: nd.lam[v]}, t)
                    wit, key = self.canonical(grown)
                    offer(xh, wit, key, e.cost, (s, False))
            elif kind == FORGET:
                v = nd.vertex[w]
                for s, e in tables[nd.children[w][0]].items():
                    xh = s[0]
                    if v in xh:
                        offer(xh - {v}, e.witness, s[1], e.cost + 1, (s, True))
                    else:
                        wg = e.witness
                        labels = {u: l for u, l in wg.labels.items() if u != v}
                        wit, key = self.canonical(BoundariedGraph(wg.graph, labels, t))
                        offer(xh, wit, key, e.cost, (s, False))
            else:
                t1, t2 = tables[nd.children[w][0]], tables[nd.children[w][1]]
                by_x: dict = {}
                for s2, e2 in t2.items():
                    by_x.setdefault(s2[0], []).append((s2, e2))
                for s1, e1 in t1.items():
                    for s2, e2 in by_x.get(s1[0], ()):
                        wit, key = self.canonical(glue(e1.witness, e2.witness))
                        offer(s1[0], wit, key, e1.cost + e2.cost, (s1, s2))
            tables[w] = table
            self.stats.state_counts.append(len(table))
            self.stats.witness_sizes.append(max((witness_size(e.witness) for e in table.values()), default=0))
        self.tables = tables if keep_tables else []
        root = tables[nd.root]
        best_state = min(root, key=lambda s: root[s].cost)
        best = root[best_state]
        cert = self.trace_states(tables, best_state)[1]
        peak = max(self.stats.state_counts, default=0)
        log.debug("plain DP: %d nodes, peak %d states, %d canonicalizations",
                  len(nd), peak, self.stats.canonicalizations)
        return SolveResult(best.cost, "witness-dp", frozenset(cert), peak, self.stats.state_counts,
                           self.stats.witness_sizes)

    def trace_states(self, back: list, root_state) -> tuple[dict, set]:
        """Walk back-pointers: node -> state on the optimal path, and the deleted set."""
        nd = self.nd
        chosen: set = set()
        states: dict = {}
        stack = [(nd.root, root_state)]
        while stack:
            node, s = stack.pop()
            states[node] = s
            e = back[node][s]
            kind = nd.kind[node]
            if kind == LEAF:
                continue
            if kind == JOIN:
                s1, s2 = e.ptr
                stack.append((nd.children[node][0], s1))
                stack.append((nd.children[node][1], s2))
                continue
            child, deleted = e.ptr
            if deleted:
                chosen.add(nd.vertex[node])
            stack.append((nd.children[node][0], child))
        return states, chosen


def solve_plain(g: SimpleGraph, analysis: PatternAnalysis, nd: NiceDecomposition,
                caps: Caps | None = None) -> SolveResult:
    return PlainDP(g, analysis, nd, caps).run()


def solve_plain_clique(g: SimpleGraph, nd: NiceDecomposition, h: int) -> SolveResult:
    """Bag-subset DP for K_h (an uncolored clique lies inside one bag)."""
    from .patterns import clique

    piece = Piece(clique(h))

    def blocked(rest):
        return find_embedding(piece, g.induced(rest)) is not None

    value, cert, counts = bag_subset_dp(nd, blocked)
    return SolveResult(value, "clique-dp", cert, max(counts, default=0), counts)
