"""Exact solvers for the colorful hitting problem.

A colored host ``(G, sigma)`` assigns every vertex a pattern vertex; an
occurrence must send each pattern vertex ``a`` to a host vertex of color
``a``.  Entry point: :func:`solve_colorful`, which splits by pattern
component and dispatches paths to a min-cut, cliques to a bag-subset DP and
everything else to the separator-chunk DP.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import ContractError, DispatchError
from .graph import ColoredGraph, Piece, SimpleGraph, find_embedding
from .pattern import PatternAnalysis, TPart, analyze, labelings
from .treedecomp import (FORGET, INTRODUCE, JOIN, LEAF, NiceDecomposition, TreeDecomposition,
                         heuristic_decompose, make_nice)

log = logging.getLogger(__name__)

INF = float("inf")


@dataclass
class SolveResult:
    value: int
    solver: str
    certificate: Optional[frozenset] = None
    peak_states: int = 0
    state_counts: list = field(default_factory=list)
    witness_sizes: list = field(default_factory=list)  # plain DP only: largest witness per node

    def as_dict(self) -> dict:
        return {
            "optimum": self.value,
            "solver": self.solver,
            "certificate": None if self.certificate is None else sorted(self.certificate),
            "peakStates": self.peak_states,
        }


# ---------------------------------------------------------------- component split

@dataclass
class SubInstance:
    component: frozenset  # vertices of H
    pattern: SimpleGraph
    graph: SimpleGraph
    sigma: dict


def split_components(g: SimpleGraph, sigma: dict, h: SimpleGraph) -> tuple[list[SubInstance], Callable]:
    """One sub-instance per component C of H, restricted to colors in C.

    The whole instance's optimum is the minimum of the sub-instance optima;
    the returned combiner takes the list of per-part values.
    """
    parts = []
    for comp in h.components():
        keep = [v for v in g.sorted_vertices() if sigma[v] in comp]
        sub = g.induced(keep)
        parts.append(SubInstance(comp, h.induced(comp), sub, {v: sigma[v] for v in keep}))
    return parts, min


# ---------------------------------------------------------------- path: min vertex cut

def solve_path(g: SimpleGraph, sigma: dict, h: SimpleGraph,
               path_order: list | None = None) -> tuple[int, frozenset]:
    """Minimum vertex cut between the first and last color layer.

    Every colored path a_1..a_h in G is an s-t path in the layered digraph;
    vertices are split into unit-capacity in/out arcs, layer arcs are
    uncapacitated.
    """
    import networkx as nx

    order = path_order or analyze(h).path_order()
    pos = {a: i for i, a in enumerate(order)}
    last = len(order) - 1
    d = nx.DiGraph()
    d.add_node("s")
    d.add_node("t")
    for u in g.sorted_vertices():
        if sigma[u] not in pos:
            continue
        d.add_edge(("in", u), ("out", u), capacity=1)
        if pos[sigma[u]] == 0:
            d.add_edge("s", ("in", u))
        if pos[sigma[u]] == last:
            d.add_edge(("out", u), "t")
    for u, v in sorted(g.edges):
        for x, y in ((u, v), (v, u)):
            if sigma[x] in pos and sigma[y] in pos and pos[sigma[y]] == pos[sigma[x]] + 1:
                d.add_edge(("out", x), ("in", y))
    value, (reach, _) = nx.minimum_cut(d, "s", "t")
    cut = frozenset(u for u in g.adj if ("in", u) in reach and ("out", u) not in reach)
    assert len(cut) == value
    return int(value), cut


# ---------------------------------------------------------------- shared DP plumbing

def _sorted_items(table: dict, key=None):
    return sorted(table.items(), key=lambda kv: key(kv[0]) if key else kv[0])


def _trace(nd: NiceDecomposition, back: list, root_state) -> frozenset:
    """Follow back-pointers from the root, collecting deleted vertices."""
    chosen = set()
    stack = [(nd.root, root_state)]
    while stack:
        node, state = stack.pop()
        ptr = back[node][state]
        kind = nd.kind[node]
        if kind == LEAF:
            continue
        if kind == JOIN:
            stack.append((nd.children[node][0], state))
            stack.append((nd.children[node][1], state))
            continue
        child_state, deleted = ptr
        if deleted:
            chosen.add(nd.vertex[node])
        stack.append((nd.children[node][0], child_state))
    return frozenset(chosen)


def bag_subset_dp(nd: NiceDecomposition, blocked: Callable[[frozenset], bool]) -> tuple[int, frozenset, list]:
    """DP over subsets of each bag for patterns that must sit inside one bag.

    ``blocked(S)`` says whether the induced subgraph on bag subset S holds
    an occurrence.  Returns (optimum, one optimal set, per-node state counts).
    """
    tables: list = [None] * len(nd)
    back: list = [None] * len(nd)
    counts = []
    cache: dict = {}

    def is_blocked(rest):
        if rest not in cache:
            cache[rest] = blocked(rest)
        return cache[rest]

    for w in range(len(nd)):
        kind = nd.kind[w]
        table, ptr = {}, {}
        if kind == LEAF:
            table[frozenset()] = 0
            ptr[frozenset()] = None
        elif kind == INTRODUCE:
            v, child = nd.vertex[w], tables[nd.children[w][0]]
            for xh, cost in child.items():
                table[xh | {v}] = cost
                ptr[xh | {v}] = (xh, False)
                if not is_blocked(nd.bags[w] - xh):
                    table[xh] = cost
                    ptr[xh] = (xh, False)
        elif kind == FORGET:
            v, child = nd.vertex[w], tables[nd.children[w][0]]
            for xh, cost in child.items():
                if v in xh:
                    key, c, src = xh - {v}, cost + 1, (xh, True)
                else:
                    key, c, src = xh, cost, (xh, False)
                if c < table.get(key, INF):
                    table[key] = c
                    ptr[key] = src
        else:
            t1, t2 = tables[nd.children[w][0]], tables[nd.children[w][1]]
            for xh, cost in t1.items():
                if xh in t2:
                    table[xh] = cost + t2[xh]
                    ptr[xh] = None
        tables[w] = table
        back[w] = ptr
        counts.append(len(table))
        for c in nd.children[w]:
            tables[c] = None
    root = tables[nd.root]
    value = root[frozenset()]
    return value, _trace(nd, back, frozenset()), counts


def solve_clique(g: SimpleGraph, sigma: dict, h: SimpleGraph, nd: NiceDecomposition) -> SolveResult:
    """Bag-subset DP for a complete pattern (every occurrence lies in a bag)."""
    if not h.is_clique():
        raise DispatchError("solve_clique needs a complete pattern")
    piece = Piece(h, colored=True)

    def blocked(rest):
        sub = g.induced(rest)
        return find_embedding(piece, ColoredGraph(sub, {v: sigma[v] for v in sub.adj})) is not None

    value, cert, counts = bag_subset_dp(nd, blocked)
    return SolveResult(value, "clique-dp", cert, max(counts, default=0), counts)


# ---------------------------------------------------------------- general separator-chunk DP

class ColorfulDP:
    """Separator-chunk DP over a nice decomposition.

    A state is ``(X_hat, chunks)``: the deleted part of the bag and the set
    of separator t-chunks assumed present in the final graph.  States are
    generated bottom-up from reachable child states only.
    """

    def __init__(self, g: SimpleGraph, sigma: dict, analysis: PatternAnalysis, nd: NiceDecomposition):
        h = analysis.h
        if not analysis.connected:
            raise DispatchError("general colorful DP needs a connected pattern; split components first")
        if analysis.is_clique:
            raise DispatchError("pattern is a clique; use the clique DP")
        bad = {v for v in g.adj if sigma.get(v) not in h}
        if bad:
            raise ContractError(f"vertices {sorted(bad)[:5]} carry colors outside the pattern")
        self.g, self.sigma, self.analysis, self.nd = g, sigma, analysis, nd
        self.h = h
        self.lam = nd.lam
        self.sep_chunks = analysis.separator_chunks
        self.h_piece = Piece(h, colored=True)
        self._valid_cache: dict = {}
        self._check_cache: dict = {}
        self.glued_checks = 0
        self.max_states = 0
        self.state_counts: list = []

    # chunks that may appear in a state with boundary ``live`` (bag minus X_hat)
    def valid_chunks(self, live: frozenset) -> tuple:
        hit = self._valid_cache.get(live)
        if hit is not None:
            return hit
        g, sigma, lam, h = self.g, self.sigma, self.lam, self.h
        by_color: dict = {}
        for u in sorted(live):
            by_color.setdefault(sigma[u], []).append(u)
        out = []
        for c in self.sep_chunks:
            bd = sorted(c.boundary)
            pools = [by_color.get(x, []) for x in bd]
            for choice in itertools.product(*pools):
                img = dict(zip(bd, choice))
                if all(g.has_edge(img[x], img[y]) for x in bd for y in h.adj[x] if y in img and x < y):
                    out.append(TPart(c, tuple((x, lam[img[x]]) for x in bd)))
        out.sort(key=TPart.sort_key)
        out = tuple(out)
        self._valid_cache[live] = out
        return out

    def glued_bag_graph(self, live: frozenset, chunks) -> ColoredGraph:
        """G[live] plus one copy of every chunk glued on equal labels."""
        g, sigma, lam = self.g, self.sigma, self.lam
        by_label = {lam[u]: u for u in live}
        adj = {u: set(g.adj[u] & live) for u in live}
        col = {u: sigma[u] for u in live}
        fresh = max(g.adj, default=-1) + 1
        for tc in sorted(chunks, key=TPart.sort_key):
            lab = tc.label_map
            ren = {}
            for a in sorted(tc.part.vertices):
                if a in lab:
                    ren[a] = by_label[lab[a]]
                else:
                    ren[a] = fresh
                    adj[fresh] = set()
                    col[fresh] = a
                    fresh += 1
            for a in tc.part.vertices:
                for b in self.h.adj[a]:
                    if b in tc.part.vertices:
                        adj[ren[a]].add(ren[b])
        graph = SimpleGraph._from_adj({u: frozenset(ns) for u, ns in adj.items()})
        # chunk copies never add edges inside the bag
        assert graph.induced(live) == g.induced(live)
        return ColoredGraph(graph, col, {u: lam[u] for u in live})

    def corner_case(self, live: frozenset, chunks: frozenset) -> bool:
        """True when no deletion inside the subtree can make the state feasible."""
        key = (live, chunks)
        hit = self._check_cache.get(key)
        if hit is not None:
            return hit
        self.glued_checks += 1
        glued = self.glued_bag_graph(live, chunks)
        bad = find_embedding(self.h_piece, glued) is not None
        if not bad:
            for tc in self.valid_chunks(live):
                if tc in chunks:
                    continue
                if find_embedding(tc.piece(self.h, colored=True), glued) is not None:
                    bad = True
                    break
        self._check_cache[key] = bad
        return bad

    def state_bound(self, bag: frozenset) -> int:
        k = len(bag)
        n_chunks = sum(_perm(k, len(c.boundary)) for c in self.sep_chunks)
        return 2 ** k * 2 ** n_chunks

    def run(self) -> SolveResult:
        nd = self.nd
        tables: list = [None] * len(nd)
        back: list = [None] * len(nd)
        empty = (frozenset(), frozenset())
        for w in range(len(nd)):
            kind, bag = nd.kind[w], nd.bags[w]
            table: dict = {}
            ptr: dict = {}
            if kind == LEAF:
                table[empty] = 0
                ptr[empty] = None
            elif kind == INTRODUCE:
                v = nd.vertex[w]
                lv = self.lam[v]
                for (xh, cs), cost in tables[nd.children[w][0]].items():
                    s = (xh | {v}, cs)
                    table[s] = cost
                    ptr[s] = ((xh, cs), False)
                    live = bag - xh
                    new = [tc for tc in self.valid_chunks(live) if lv in tc.label_set]
                    for r in range(len(new) + 1):
                        for extra in itertools.combinations(new, r):
                            full = cs | frozenset(extra)
                            if self.corner_case(live, full):
                                continue
                            s = (xh, full)
                            table[s] = cost
                            ptr[s] = ((xh, cs), False)
            elif kind == FORGET:
                v = nd.vertex[w]
                lv = self.lam[v]
                for (xh, cs), cost in tables[nd.children[w][0]].items():
                    if v in xh:
                        s, c, src = (xh - {v}, cs), cost + 1, ((xh, cs), True)
                    else:
                        kept = frozenset(tc for tc in cs if lv not in tc.label_set)
                        s, c, src = (xh, kept), cost, ((xh, cs), False)
                    if c < table.get(s, INF):
                        table[s] = c
                        ptr[s] = src
            else:
                t1, t2 = tables[nd.children[w][0]], tables[nd.children[w][1]]
                for s, cost in t1.items():
                    if s in t2:
                        table[s] = cost + t2[s]
                        ptr[s] = None
            assert len(table) <= self.state_bound(bag)
            tables[w] = table
            back[w] = ptr
            self.state_counts.append(len(table))
            self.max_states = max(self.max_states, len(table))
            for c in nd.children[w]:
                tables[c] = None
        root = tables[nd.root]
        value = root[empty]
        cert = _trace(nd, back, empty)
        log.debug("colorful DP: %d nodes, peak %d states, %d glued checks",
                  len(nd), self.max_states, self.glued_checks)
        return SolveResult(value, "separator-chunk-dp", cert, self.max_states, self.state_counts)


def _perm(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return max(out, 0) if k <= n else 0


def solve_general(g: SimpleGraph, sigma: dict, analysis: PatternAnalysis, nd: NiceDecomposition) -> SolveResult:
    return ColorfulDP(g, sigma, analysis, nd).run()


def glued_graph(g: SimpleGraph, sigma: dict, nd: NiceDecomposition, node: int, state,
                h: SimpleGraph) -> ColoredGraph:
    """The full graph G[gamma(w)] - X_hat with the state's chunks glued on.

    Only used for checking structural claims in tests; the DP never builds it.
    """
    xh, chunks = state
    gamma = nd.gammas()[node]
    live = nd.bags[node] - xh
    keep = gamma - xh
    base = g.induced(keep)
    by_label = {nd.lam[u]: u for u in live}
    adj = {u: set(base.adj[u]) for u in keep}
    col = {u: sigma[u] for u in keep}
    fresh = max(g.adj, default=-1) + 1
    for tc in sorted(chunks, key=TPart.sort_key):
        lab = tc.label_map
        ren = {}
        for a in sorted(tc.part.vertices):
            if a in lab:
                ren[a] = by_label[lab[a]]
            else:
                ren[a], adj[fresh], col[fresh] = fresh, set(), a
                fresh += 1
        for a in tc.part.vertices:
            for b in h.adj[a] & tc.part.vertices:
                adj[ren[a]].add(ren[b])
    graph = SimpleGraph._from_adj({u: frozenset(ns) for u, ns in adj.items()})
    return ColoredGraph(graph, col, {u: nd.lam[u] for u in live})


# ---------------------------------------------------------------- dispatch

def _restrict_td(td: TreeDecomposition, keep) -> TreeDecomposition:
    keep = frozenset(keep)
    return TreeDecomposition({k: b & keep for k, b in td.bags.items()}, list(td.edges), td.root)


def solve_colorful(g: SimpleGraph, sigma: dict, h: SimpleGraph,
                   td: TreeDecomposition | None = None, method: str = "auto") -> SolveResult:
    """Split by pattern component; paths by min cut, cliques and the rest by DP.

    ``method`` forces one solver on connected patterns: "path", "clique" or
    "general" (the latter two need ``td`` or fall back to the heuristic).
    """
    bad = {v for v in g.adj if v not in sigma}
    if bad:
        raise ContractError("coloring must be total")
    if td is None:
        td = heuristic_decompose(g)
    parts, combine = split_components(g, sigma, h)
    results = []
    for part in parts:
        a = analyze(part.pattern)
        choice = method
        if choice == "auto":
            choice = "path" if a.is_path else "clique" if a.is_clique else "general"
        if choice == "path":
            if not a.is_path:
                raise DispatchError("pattern is not a path")
            val, cert = solve_path(part.graph, part.sigma, part.pattern, a.path_order())
            results.append(SolveResult(val, "path-mincut", cert))
            continue
        nd = make_nice(_restrict_td(td, part.graph.adj), part.graph)
        if choice == "clique":
            results.append(solve_clique(part.graph, part.sigma, part.pattern, nd))
        elif choice == "general":
            results.append(solve_general(part.graph, part.sigma, a, nd))
        else:
            raise ContractError(f"unknown method {method!r}")
    values = [r.value for r in results]
    best = values.index(combine(values))
    res = results[best]
    peak = max(r.peak_states for r in results)
    solver = res.solver if len(results) == 1 else "split:" + "+".join(r.solver for r in results)
    return SolveResult(res.value, solver, res.certificate, peak, res.state_counts)
