"""Tree decompositions: validation, a min-fill heuristic and nice normal form.

Internally a decomposition has "width t" when every bag has at most t
vertices; the usual maxbag-1 width is reported by ``TreeDecomposition.width``
and used in file formats.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import ContractError
from .graph import SimpleGraph

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"

# node-count bound of make_nice: at most NICE_NODE_FACTOR * t * max(|V|, 1)
NICE_NODE_FACTOR = 5


@dataclass
class TreeDecomposition:
    bags: dict  # node id -> frozenset of vertices
    edges: list = field(default_factory=list)
    root: Optional[int] = None

    def __post_init__(self):
        self.bags = {k: frozenset(v) for k, v in self.bags.items()}
        self.edges = [tuple(e) for e in self.edges]
        if self.root is None and self.bags:
            self.root = min(self.bags)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    @property
    def max_bag(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0)

    def adjacency(self) -> dict:
        adj = {k: [] for k in self.bags}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        for k in adj:
            adj[k].sort()
        return adj


@dataclass
class Violation:
    kind: str
    message: str
    witness: tuple = ()

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


def _tree_violation(td: TreeDecomposition) -> Optional[Violation]:
    nodes = set(td.bags)
    for a, b in td.edges:
        if a not in nodes or b not in nodes:
            return Violation("tree", f"tree edge {a}-{b} names an unknown node", (a, b))
        if a == b:
            return Violation("tree", f"tree edge {a}-{b} is a loop", (a, b))
    if len({frozenset(e) for e in td.edges}) != len(td.edges):
        return Violation("tree", "duplicate tree edge")
    if nodes and len(td.edges) != len(nodes) - 1:
        return Violation("tree", f"{len(nodes)} nodes but {len(td.edges)} tree edges")
    if nodes:
        adj = td.adjacency()
        seen = {td.root}
        stack = [td.root]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != nodes:
            return Violation("tree", "decomposition tree is disconnected", tuple(sorted(nodes - seen)))
    return None


def _subtree_violation(td: TreeDecomposition) -> Optional[Violation]:
    adj = td.adjacency()
    occ: dict[int, list] = {}
    for node, bag in td.bags.items():
        for v in bag:
            occ.setdefault(v, []).append(node)
    for v in sorted(occ):
        nodes = set(occ[v])
        start = min(nodes)
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in nodes and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != nodes:
            return Violation("connectivity", f"bags containing vertex {v} are not connected", (v,))
    return None


def validate(td: TreeDecomposition, g: SimpleGraph) -> Optional[Violation]:
    """Return None when ``td`` is a tree decomposition of ``g``, else the first violation."""
    if not td.bags:
        if len(g):
            return Violation("coverage", "empty decomposition of a nonempty graph")
        return None
    bad = _tree_violation(td)
    if bad:
        return bad
    covered = set()
    for node in sorted(td.bags):
        extra = td.bags[node] - g.adj.keys()
        if extra:
            v = min(extra)
            return Violation("unknown-vertex", f"bag {node} contains {v}, not a vertex of the graph", (node, v))
        covered |= td.bags[node]
    missing = g.adj.keys() - covered
    if missing:
        v = min(missing)
        return Violation("coverage", f"vertex {v} lies in no bag", (v,))
    bag_list = list(td.bags.values())
    for u, v in sorted(g.edges):
        if not any(u in b and v in b for b in bag_list):
            return Violation("edge-coverage", f"edge {u}-{v} lies in no bag", (u, v))
    return _subtree_violation(td)


def trivial_decomposition(g: SimpleGraph) -> TreeDecomposition:
    return TreeDecomposition({0: g.vertices}, [], 0)


def min_fill_order(g: SimpleGraph) -> list:
    """Greedy elimination order minimising fill-in; ties by degree, then id."""
    adj = {v: set(ns) for v, ns in g.adj.items()}
    order = []
    while adj:
        best = None
        for v in sorted(adj):
            ns = sorted(adj[v])
            fill = sum(1 for i, a in enumerate(ns) for b in ns[i + 1:] if b not in adj[a])
            key = (fill, len(ns), v)
            if best is None or key < best:
                best = key
        v = best[2]
        ns = adj.pop(v)
        for a in ns:
            adj[a].discard(v)
            adj[a] |= ns - {a}
        order.append(v)
    return order


def heuristic_decompose(g: SimpleGraph) -> TreeDecomposition:
    """Decomposition from a min-fill elimination ordering."""
    if not len(g):
        return TreeDecomposition({0: frozenset()}, [], 0)
    order = min_fill_order(g)
    pos = {v: i for i, v in enumerate(order)}
    adj = {v: set(ns) for v, ns in g.adj.items()}
    bags = {}
    later: dict[int, set] = {}
    for i, v in enumerate(order):
        up = {u for u in adj[v] if pos[u] > i}
        later[i] = up
        bags[i] = frozenset(up | {v})
        for a in up:
            adj[a] |= up - {a}
    edges = []
    roots = []
    for i in range(len(order)):
        if later[i]:
            edges.append((i, min(pos[u] for u in later[i])))
        else:
            roots.append(i)
    # several components: chain their roots so the result is one tree
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    return TreeDecomposition(bags, edges, roots[-1])


@dataclass
class NiceDecomposition:
    """Nice decomposition with nodes stored children-before-parents.

    ``vertex[i]`` is the introduced or forgotten vertex (None for leaf/join).
    ``lam`` is the bag-injective labeling into 1..t.
    """

    kind: list
    vertex: list
    bags: list
    children: list
    t: int
    lam: dict = field(default_factory=dict)

    @property
    def root(self) -> int:
        return len(self.kind) - 1

    def __len__(self) -> int:
        return len(self.kind)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def gammas(self) -> list:
        """gamma(w): union of bags in the subtree of w."""
        out = []
        for i in range(len(self.kind)):
            g = set(self.bags[i])
            for c in self.children[i]:
                g |= out[c]
            out.append(frozenset(g))
        return out

    def to_tree_decomposition(self) -> TreeDecomposition:
        edges = [(c, i) for i in range(len(self.kind)) for c in self.children[i]]
        return TreeDecomposition({i: b for i, b in enumerate(self.bags)}, edges, self.root)


def _contract_redundant(td: TreeDecomposition) -> tuple[dict, dict, int]:
    """Merge neighbouring bags where one contains the other."""
    bags = dict(td.bags)
    adj = {k: set(v) for k, v in td.adjacency().items()}
    root = td.root
    changed = True
    while changed:
        changed = False
        for a in sorted(adj):
            if a not in adj:
                continue
            for b in sorted(adj[a]):
                if bags[b] <= bags[a]:
                    keep, drop = a, b
                elif bags[a] <= bags[b]:
                    keep, drop = b, a
                else:
                    continue
                for c in adj.pop(drop):
                    adj[c].discard(drop)
                    if c != keep:
                        adj[c].add(keep)
                        adj[keep].add(c)
                del bags[drop]
                if root == drop:
                    root = keep
                changed = True
                break
    return bags, adj, root


def check_shape(td: TreeDecomposition) -> None:
    bad = _tree_violation(td) or _subtree_violation(td)
    if bad:
        raise ContractError(f"invalid tree decomposition: {bad}")


def make_nice(td: TreeDecomposition, g: SimpleGraph | None = None) -> NiceDecomposition:
    """Nice decomposition of the same width, with labeling computed.

    Node count is at most ``NICE_NODE_FACTOR * t * max(|V|, 1)``.
    """
    if g is not None:
        bad = validate(td, g)
        if bad:
            raise ContractError(f"invalid tree decomposition: {bad}")
    elif td.bags:
        check_shape(td)
    if not td.bags:
        td = TreeDecomposition({0: frozenset()}, [], 0)
    bags, adj, root = _contract_redundant(td)
    t = max(1, max(len(b) for b in bags.values()))

    kind, vertex, nbags, children = [], [], [], []

    def add(k, v, bag, ch):
        kind.append(k)
        vertex.append(v)
        nbags.append(frozenset(bag))
        children.append(tuple(ch))
        return len(kind) - 1

    def chain(node, cur, target):
        """Forget cur - target, then introduce target - cur, above ``node``."""
        cur = set(cur)
        for v in sorted(cur - target):
            cur.discard(v)
            node = add(FORGET, v, cur, [node])
        for v in sorted(target - cur):
            cur.add(v)
            node = add(INTRODUCE, v, cur, [node])
        return node

    # iterative post-order over the contracted tree
    parent = {root: None}
    order = []
    stack = [root]
    while stack:
        x = stack.pop()
        order.append(x)
        for y in sorted(adj[x], reverse=True):
            if y != parent[x]:
                parent[y] = x
                stack.append(y)
    kids = {x: sorted(y for y in adj[x] if y != parent[x]) for x in order}
    top: dict[int, int] = {}
    for x in reversed(order):
        bag = bags[x]
        if not kids[x]:
            node = chain(add(LEAF, None, (), []), frozenset(), bag)
        else:
            branches = [chain(top.pop(c), bags[c], bag) for c in kids[x]]
            node = branches[0]
            for b in branches[1:]:
                node = add(JOIN, None, bag, [node, b])
        top[x] = node
    chain(top[root], bags[root], frozenset())
    nd = NiceDecomposition(kind, vertex, nbags, children, t)
    nd.lam = compute_lambda(nd)
    return nd


def compute_lambda(nd: NiceDecomposition) -> dict:
    """Label each vertex where it is first met walking down from the root.

    That first meeting is the vertex's unique forget node; it receives the
    smallest label unused by the rest of that bag.
    """
    lam: dict = {}
    for i in range(len(nd.kind) - 1, -1, -1):
        if len(nd.bags[i]) > nd.t:
            raise ContractError(f"bag of node {i} has {len(nd.bags[i])} > t={nd.t} vertices")
        if nd.kind[i] != FORGET:
            continue
        v = nd.vertex[i]
        if v in lam:
            raise ContractError(f"vertex {v} forgotten twice")
        used = {lam[u] for u in nd.bags[i]}
        lam[v] = next(l for l in range(1, nd.t + 1) if l not in used)
    return lam


def validate_nice(nd: NiceDecomposition, g: SimpleGraph | None = None) -> Optional[Violation]:
    """Check node-kind relations, empty root/leaves, t bound and lambda."""
    n = len(nd.kind)
    if n == 0:
        return Violation("nice", "no nodes")
    if nd.bags[nd.root]:
        return Violation("nice", "root bag is not empty", (nd.root,))
    seen_parent = {}
    for i in range(n):
        for c in nd.children[i]:
            if c >= i:
                return Violation("nice", f"node {i} has child {c} stored after it", (i, c))
            if c in seen_parent:
                return Violation("nice", f"node {c} has two parents", (c,))
            seen_parent[c] = i
    if set(seen_parent) != set(range(n - 1)):
        return Violation("nice", "nodes are not all connected to the root")
    gammas = nd.gammas()
    for i in range(n):
        k, v, b, ch = nd.kind[i], nd.vertex[i], nd.bags[i], nd.children[i]
        if len(b) > nd.t:
            return Violation("nice", f"bag {i} exceeds t={nd.t}", (i,))
        if k == LEAF:
            ok = not ch and not b
        elif k == INTRODUCE:
            ok = len(ch) == 1 and v in b and nd.bags[ch[0]] == b - {v} and v not in gammas[ch[0]]
        elif k == FORGET:
            ok = len(ch) == 1 and v not in b and nd.bags[ch[0]] == b | {v}
        elif k == JOIN:
            ok = len(ch) == 2 and nd.bags[ch[0]] == b and nd.bags[ch[1]] == b
        else:
            ok = False
        if not ok:
            return Violation("nice", f"node {i} ({k}) breaks its bag relation", (i,))
    for i in range(n):
        labels = [nd.lam.get(u) for u in nd.bags[i]]
        if None in labels or len(set(labels)) != len(labels):
            return Violation("labeling", f"labeling not injective on bag {i}", (i,))
        if any(not 1 <= l <= nd.t for l in labels):
            return Violation("labeling", f"label outside 1..{nd.t} on bag {i}", (i,))
    if g is not None:
        return validate(nd.to_tree_decomposition(), g)
    return None


def decompose(g: SimpleGraph, td: TreeDecomposition | None = None) -> NiceDecomposition:
    """Nice decomposition from ``td`` if given, else from the heuristic."""
    return make_nice(td if td is not None else heuristic_decompose(g), g)


def path_decomposition(bags: Iterable[Iterable[int]]) -> TreeDecomposition:
    bags = [frozenset(b) for b in bags]
    return TreeDecomposition(dict(enumerate(bags)), [(i, i + 1) for i in range(len(bags) - 1)], 0)
