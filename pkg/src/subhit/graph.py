"""Graph types, injective embeddings and boundary gluing.

Vertex ids are opaque integers.  Every object here is treated as immutable
once built; transformations return new objects.
"""
from __future__ import annotations

from collections import deque
from typing import Dict, Iterable, Iterator, Mapping, Optional

from .config import Caps, default_caps
from .errors import ContractError, ResourceLimitError

Embedding = Dict[int, int]


class SimpleGraph:
    """Undirected simple graph stored as an adjacency map."""

    __slots__ = ("_adj", "_sorted", "_key")

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[Iterable[int]] = ()):
        adj: dict[int, set[int]] = {v: set() for v in vertices}
        for e in edges:
            u, v = e
            if u == v:
                raise ContractError(f"self-loop at {u}")
            if u not in adj or v not in adj:
                raise ContractError(f"edge {u}-{v} has an endpoint outside the vertex set")
            adj[u].add(v)
            adj[v].add(u)
        self._adj = {v: frozenset(n) for v, n in adj.items()}
        self._sorted = None
        self._key = None

    @classmethod
    def _from_adj(cls, adj: dict) -> "SimpleGraph":
        g = cls.__new__(cls)
        g._adj = adj
        g._sorted = None
        g._key = None
        return g

    # basic accessors
    @property
    def vertices(self) -> frozenset:
        return frozenset(self._adj)

    @property
    def edges(self) -> frozenset:
        return frozenset((u, v) for u, ns in self._adj.items() for v in ns if u < v)

    @property
    def adj(self) -> Mapping[int, frozenset]:
        return self._adj

    def sorted_vertices(self) -> list[int]:
        return sorted(self._adj)

    def sorted_adj(self) -> dict[int, tuple]:
        if self._sorted is None:
            self._sorted = {v: tuple(sorted(ns)) for v, ns in self._adj.items()}
        return self._sorted

    def neighbors(self, v: int) -> frozenset:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def __contains__(self, v) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def num_edges(self) -> int:
        return sum(len(n) for n in self._adj.values()) // 2

    def key(self) -> tuple:
        if self._key is None:
            self._key = (tuple(sorted(self._adj)), tuple(sorted(self.edges)))
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, SimpleGraph) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"SimpleGraph(n={len(self)}, edges={sorted(self.edges)})"

    # derived graphs
    def induced(self, keep: Iterable[int]) -> "SimpleGraph":
        keep = frozenset(keep) & self._adj.keys()
        return SimpleGraph._from_adj({v: self._adj[v] & keep for v in keep})

    def without(self, drop: Iterable[int]) -> "SimpleGraph":
        drop = frozenset(drop)
        if not drop & self._adj.keys():
            return self
        return self.induced(self._adj.keys() - drop)

    def relabel(self, mapping: Mapping[int, int]) -> "SimpleGraph":
        """Rename vertices; vertices missing from ``mapping`` keep their id."""
        f = lambda v: mapping.get(v, v)
        adj = {f(v): frozenset(f(u) for u in ns) for v, ns in self._adj.items()}
        if len(adj) != len(self._adj):
            raise ContractError("relabel mapping is not injective")
        return SimpleGraph._from_adj(adj)

    def with_vertex(self, v: int, neighbors: Iterable[int] = ()) -> "SimpleGraph":
        if v in self._adj:
            raise ContractError(f"vertex {v} already present")
        neighbors = frozenset(neighbors)
        if not neighbors <= self._adj.keys():
            raise ContractError("new vertex attached to unknown vertices")
        adj = dict(self._adj)
        adj[v] = neighbors
        for u in neighbors:
            adj[u] = adj[u] | {v}
        return SimpleGraph._from_adj(adj)

    def components(self) -> list[frozenset]:
        seen: set[int] = set()
        out = []
        for s in sorted(self._adj):
            if s in seen:
                continue
            comp = {s}
            queue = [s]
            while queue:
                x = queue.pop()
                for y in self._adj[x]:
                    if y not in comp:
                        comp.add(y)
                        queue.append(y)
            seen |= comp
            out.append(frozenset(comp))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def is_clique(self) -> bool:
        n = len(self._adj)
        return all(len(ns) == n - 1 for ns in self._adj.values())

    def neighborhood(self, vs: Iterable[int]) -> frozenset:
        """Open neighbourhood N(S) of a vertex set."""
        vs = frozenset(vs)
        out: set[int] = set()
        for v in vs:
            out |= self._adj[v]
        return frozenset(out - vs)

    def closed_neighborhood(self, vs: Iterable[int]) -> frozenset:
        vs = frozenset(vs)
        return vs | self.neighborhood(vs)


def disjoint_union(*graphs: SimpleGraph) -> tuple[SimpleGraph, list[dict]]:
    """Disjoint union with vertices renumbered 0..n-1; returns the renamings."""
    adj: dict[int, frozenset] = {}
    maps = []
    offset = 0
    for g in graphs:
        m = {v: offset + i for i, v in enumerate(g.sorted_vertices())}
        for v, ns in g.adj.items():
            adj[m[v]] = frozenset(m[u] for u in ns)
        offset += len(g)
        maps.append(m)
    return SimpleGraph._from_adj(adj), maps


class BoundariedGraph:
    """A graph with an injectively labeled boundary, labels in ``1..t``."""

    __slots__ = ("graph", "labels", "t", "by_label")
    sigma = None

    def __init__(self, graph: SimpleGraph, labels: Mapping[int, int] | None = None, t: int | None = None):
        labels = dict(labels or {})
        if t is None:
            t = max(labels.values(), default=0)
        by_label = {l: v for v, l in labels.items()}
        if len(by_label) != len(labels):
            raise ContractError("boundary labeling is not injective")
        if not labels.keys() <= graph.adj.keys():
            raise ContractError("boundary vertex outside the graph")
        if any(not 1 <= l <= t for l in labels.values()):
            raise ContractError(f"labels must lie in 1..{t}")
        self.graph = graph
        self.labels = labels
        self.t = t
        self.by_label = by_label

    @property
    def boundary(self) -> frozenset:
        return frozenset(self.labels)

    def boundary_graph(self) -> SimpleGraph:
        return self.graph.induced(self.labels)

    def without(self, drop: Iterable[int]) -> "BoundariedGraph":
        drop = frozenset(drop)
        return BoundariedGraph(self.graph.without(drop),
                               {v: l for v, l in self.labels.items() if v not in drop}, self.t)

    def key(self) -> tuple:
        return (self.graph.key(), tuple(sorted(self.labels.items())), self.t)

    def __eq__(self, other) -> bool:
        return isinstance(other, BoundariedGraph) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"BoundariedGraph({self.graph!r}, labels={dict(sorted(self.labels.items()))}, t={self.t})"


class ColoredGraph:
    """A graph with a total coloring ``sigma`` by pattern vertices.

    An optional boundary labeling makes it a colored boundaried graph, the
    host type used when testing chunk containment in the colorful solver.
    """

    __slots__ = ("graph", "sigma", "labels", "t", "by_label")

    def __init__(self, graph: SimpleGraph, sigma: Mapping[int, int],
                 labels: Mapping[int, int] | None = None, t: int | None = None):
        sigma = dict(sigma)
        if sigma.keys() != graph.adj.keys():
            raise ContractError("coloring must be total on V(G)")
        labels = dict(labels or {})
        by_label = {l: v for v, l in labels.items()}
        if len(by_label) != len(labels):
            raise ContractError("boundary labeling is not injective")
        if not labels.keys() <= graph.adj.keys():
            raise ContractError("boundary vertex outside the graph")
        self.graph = graph
        self.sigma = sigma
        self.labels = labels
        self.t = max(labels.values(), default=0) if t is None else t
        self.by_label = by_label

    def check_pattern(self, h: SimpleGraph) -> None:
        bad = {c for c in self.sigma.values() if c not in h}
        if bad:
            raise ContractError(f"colors {sorted(bad)} are not vertices of the pattern")

    def restrict(self, keep: Iterable[int]) -> "ColoredGraph":
        g = self.graph.induced(keep)
        return ColoredGraph(g, {v: self.sigma[v] for v in g.adj},
                            {v: l for v, l in self.labels.items() if v in g}, self.t)

    def without(self, drop: Iterable[int]) -> "ColoredGraph":
        return self.restrict(self.graph.adj.keys() - frozenset(drop))

    def __repr__(self) -> str:
        return f"ColoredGraph({self.graph!r}, sigma={dict(sorted(self.sigma.items()))})"


class Piece:
    """A piece of the pattern: an induced subgraph of H, keeping H's vertex ids.

    ``labels`` maps the piece's boundary vertices to labels; for a colored
    piece every vertex ``a`` must land on a host vertex of color ``a``.
    """

    __slots__ = ("graph", "labels", "colored", "_order")

    def __init__(self, graph: SimpleGraph, labels: Mapping[int, int] | None = None, colored: bool = False):
        labels = dict(labels or {})
        if not labels.keys() <= graph.adj.keys():
            raise ContractError("piece boundary outside the piece")
        if len(set(labels.values())) != len(labels):
            raise ContractError("piece labeling is not injective")
        self.graph = graph
        self.labels = labels
        self.colored = colored
        self._order = None

    def order(self, boundary: Iterable[int] | None = None) -> list[int]:
        """Search order: BFS from the boundary (by label), then from high-degree roots."""
        if boundary is None and self._order is not None:
            return self._order
        g = self.graph
        if boundary is None:
            start = sorted(self.labels, key=lambda a: (self.labels[a], a))
        else:
            start = sorted(boundary)
        order: list[int] = []
        seen: set[int] = set()

        def bfs(roots):
            queue = deque(r for r in roots if r not in seen)
            seen.update(queue)
            while queue:
                x = queue.popleft()
                order.append(x)
                for y in g.sorted_adj()[x]:
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)

        bfs(start)
        while len(order) < len(g):
            rest = [v for v in g.sorted_vertices() if v not in seen]
            bfs([max(rest, key=lambda v: (g.degree(v), -v))])
        if boundary is None:
            self._order = order
        return order


def _as_host(host):
    if isinstance(host, SimpleGraph):
        return BoundariedGraph(host, {}, 0)
    return host


def _check_compat(piece: Piece, host) -> None:
    if piece.colored != (host.sigma is not None):
        kind = "colored" if piece.colored else "uncolored"
        raise ContractError(f"{kind} piece cannot be matched against this host")


def _search(piece: Piece, host, forbidden: frozenset, free_boundary: frozenset | None = None) -> Iterator[Embedding]:
    """Backtracking over injective homomorphisms ``piece -> host``.

    With ``free_boundary`` set, those piece vertices may map to any host
    boundary vertex (the induced labeling is read off the result) and the
    piece's own labels are ignored.
    """
    pg = piece.graph
    n = len(pg)
    if n == 0:
        yield {}
        return
    hg = host.graph
    hadj = hg.adj
    hsorted = hg.sorted_adj()
    if n > len(hg):
        return
    sigma = host.sigma if piece.colored else None
    if free_boundary is None:
        order = piece.order()
        fixed = piece.labels
    else:
        order = piece.order(free_boundary)
        fixed = {}
    pos = {a: i for i, a in enumerate(order)}
    back = [[b for b in pg.sorted_adj()[a] if pos[b] < i] for i, a in enumerate(order)]
    need = [pg.degree(a) for a in order]
    all_host = hg.sorted_vertices()
    host_boundary = sorted(host.labels)

    cand_src = []
    for i, a in enumerate(order):
        if a in fixed:
            target = host.by_label.get(fixed[a])
            cand_src.append(("fixed", () if target is None else (target,)))
        elif free_boundary is not None and a in free_boundary:
            cand_src.append(("list", host_boundary))
        elif back[i]:
            cand_src.append(("nbr", back[i][0]))
        else:
            cand_src.append(("list", all_host))

    image = [0] * n
    used: set[int] = set()

    def rec(i):
        if i == n:
            yield {order[j]: image[j] for j in range(n)}
            return
        a = order[i]
        kind, src = cand_src[i]
        cands = hsorted[image[pos[src]]] if kind == "nbr" else src
        for x in cands:
            if x in used or x in forbidden:
                continue
            if sigma is not None and sigma[x] != a:
                continue
            nx = hadj[x]
            if len(nx) < need[i]:
                continue
            ok = True
            for b in back[i]:
                if image[pos[b]] not in nx:
                    ok = False
                    break
            if not ok:
                continue
            image[i] = x
            used.add(x)
            yield from rec(i + 1)
            used.discard(x)

    yield from rec(0)


def find_embedding(piece: Piece, host, forbidden: Iterable[int] = ()) -> Optional[Embedding]:
    """First embedding of ``piece`` into ``host`` avoiding ``forbidden``, or None."""
    host = _as_host(host)
    _check_compat(piece, host)
    for emb in _search(piece, host, frozenset(forbidden)):
        return emb
    return None


def iter_embeddings(piece: Piece, host, forbidden: Iterable[int] = ()) -> Iterator[Embedding]:
    host = _as_host(host)
    _check_compat(piece, host)
    return _search(piece, host, frozenset(forbidden))


def enumerate_embeddings(piece: Piece, host, caps: Caps | None = None) -> list[Embedding]:
    """All embeddings in deterministic search order."""
    caps = caps or default_caps()
    host = _as_host(host)
    if len(host.graph) > caps.enumerate_host_vertices:
        raise ResourceLimitError(
            f"host has {len(host.graph)} vertices; enumerate_host_vertices cap is {caps.enumerate_host_vertices}")
    return list(iter_embeddings(piece, host))


def iter_free_boundary_embeddings(piece_graph: SimpleGraph, boundary: frozenset, host,
                                  colored: bool = False) -> Iterator[Embedding]:
    """Embeddings sending ``boundary`` into the host boundary with any labels."""
    host = _as_host(host)
    piece = Piece(piece_graph, {}, colored)
    _check_compat(piece, host)
    return _search(piece, host, frozenset(), frozenset(boundary))


def is_embedding(piece: Piece, host, emb: Mapping[int, int]) -> bool:
    """Check injectivity, edge preservation, colors and boundary labels."""
    host = _as_host(host)
    pg, hg = piece.graph, host.graph
    if set(emb) != set(pg.adj) or len(set(emb.values())) != len(emb):
        return False
    if any(x not in hg for x in emb.values()):
        return False
    if any(not hg.has_edge(emb[u], emb[v]) for u, v in pg.edges):
        return False
    if piece.colored and any(host.sigma[emb[a]] != a for a in emb):
        return False
    return all(host.labels.get(emb[a]) == l for a, l in piece.labels.items())


def glue(g1: BoundariedGraph, g2: BoundariedGraph) -> BoundariedGraph:
    """Disjoint union with equally-labeled boundary vertices identified.

    ``g1`` keeps its vertex ids; the remaining vertices of ``g2`` get fresh
    ids above ``max(V(g1))`` in ascending order of their old ids.
    """
    if g1.t != g2.t:
        raise ContractError(f"cannot glue graphs with t={g1.t} and t={g2.t}")
    fresh = max(g1.graph.adj, default=-1) + 1
    ren: dict[int, int] = {}
    for v in g2.graph.sorted_vertices():
        l = g2.labels.get(v)
        if l is not None and l in g1.by_label:
            ren[v] = g1.by_label[l]
        else:
            ren[v] = fresh
            fresh += 1
    adj = {v: set(ns) for v, ns in g1.graph.adj.items()}
    for v in g2.graph.adj:
        adj.setdefault(ren[v], set())
    for v, ns in g2.graph.adj.items():
        adj[ren[v]].update(ren[u] for u in ns)
    labels = dict(g1.labels)
    for v, l in g2.labels.items():
        labels.setdefault(ren[v], l)
    graph = SimpleGraph._from_adj({v: frozenset(ns) for v, ns in adj.items()})
    return BoundariedGraph(graph, labels, g1.t)


def renumber_internal(g: BoundariedGraph, base: int) -> BoundariedGraph:
    """Move non-boundary vertices onto ``base, base+1, ...`` in id order."""
    inner = [v for v in g.graph.sorted_vertices() if v not in g.labels]
    mapping = {v: base + i for i, v in enumerate(inner)}
    if all(mapping[v] == v for v in inner):
        return g
    if any(v >= base for v in g.labels):
        raise ContractError("boundary ids collide with the internal id range")
    return BoundariedGraph(g.graph.relabel(mapping), g.labels, g.t)


def isomorphic(g1, g2) -> bool:
    """Label-preserving isomorphism test for small (boundaried) graphs."""
    import networkx as nx

    def to_nx(g):
        g = _as_host(g)
        x = nx.Graph()
        for v in g.graph.adj:
            x.add_node(v, label=g.labels.get(v))
        x.add_edges_from(g.graph.edges)
        return x

    return nx.is_isomorphic(to_nx(g1), to_nx(g2), node_match=lambda a, b: a["label"] == b["label"])
