"""Instance generators for the hitting problems, built from 3-CNF formulas or graphs.

Every generator returns a :class:`ReductionOutput` carrying the host graph,
an optional coloring, the budget, and a tree decomposition whose width is
certified against a closed-form bound.  Vertex ids are assigned in creation
order; ``names`` keeps a readable tag per vertex.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ContractError
from .graph import SimpleGraph
from .pattern import analyze, cutvertices
from .patterns import hh as hh_pattern
from .treedecomp import TreeDecomposition, path_decomposition, validate

# clean_3cnf output has at most CLEAN_SIZE_FACTOR * (literal count) literals,
# or the fixed dummy formula, whichever is larger
CLEAN_SIZE_FACTOR = 3


@dataclass(frozen=True)
class CnfFormula:
    """Variables are 1..num_vars; a clause is a tuple of DIMACS literals."""

    num_vars: int
    clauses: tuple

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        for c in self.clauses:
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ContractError(f"literal {lit} references an undeclared variable")

    @property
    def size(self) -> int:
        return sum(len(c) for c in self.clauses)

    def occurrences(self) -> dict:
        occ: dict = {}
        for ci, c in enumerate(self.clauses):
            for lit in c:
                occ.setdefault(abs(lit), []).append((ci, lit))
        return occ


def is_clean(phi: CnfFormula) -> bool:
    occ = phi.occurrences()
    for c in phi.clauses:
        if len(c) not in (2, 3) or len({abs(l) for l in c}) != len(c):
            return False
    for x in range(1, phi.num_vars + 1):
        lits = [l for _, l in occ.get(x, [])]
        if len(lits) != 3 or all(l > 0 for l in lits) or all(l < 0 for l in lits):
            return False
    return True


def satisfiable(phi: CnfFormula) -> bool:
    """Brute force over all assignments, vectorised with numpy."""
    n = phi.num_vars
    if any(len(c) == 0 for c in phi.clauses):
        return False
    if n == 0:
        return True
    if n > 24:
        raise ContractError("brute-force satisfiability is limited to 24 variables")
    rows = np.arange(1 << n, dtype=np.int64)
    ok = np.ones(1 << n, dtype=bool)
    for c in phi.clauses:
        sat = np.zeros(1 << n, dtype=bool)
        for lit in c:
            bit = (rows >> (abs(lit) - 1)) & 1
            sat |= bit.astype(bool) if lit > 0 else ~bit.astype(bool)
        ok &= sat
        if not ok.any():
            return False
    return bool(ok.any())


def _expand_cycles(clauses: Sequence[tuple], variables: Sequence[int]) -> CnfFormula:
    """Give every occurrence its own variable and chain the copies in a cycle."""
    new_id = {}
    copies: dict = {x: [] for x in variables}
    nxt = 1
    for ci, c in enumerate(clauses):
        for pos, lit in enumerate(c):
            new_id[(ci, pos)] = nxt
            copies[abs(lit)].append(nxt)
            nxt += 1
    out = [tuple(new_id[(ci, pos)] * (1 if lit > 0 else -1) for pos, lit in enumerate(c))
           for ci, c in enumerate(clauses)]
    for x in variables:
        cyc = copies[x]
        for i, v in enumerate(cyc):
            out.append((-v, cyc[(i + 1) % len(cyc)]))
    return CnfFormula(nxt - 1, out)


def dummy_unsat() -> CnfFormula:
    """Clean unsatisfiable formula: cycle expansion of all four 2-clauses on x, y."""
    return _expand_cycles([(1, 2), (1, -2), (-1, 2), (-1, -2)], [1, 2])


def clean_3cnf(phi: CnfFormula) -> CnfFormula:
    """Equisatisfiable clean formula.

    Steps: drop tautologies and repeated literals; fix pure literals and
    propagate unit clauses until neither applies; an empty clause yields the
    dummy unsatisfiable formula; finally split every variable into one copy
    per occurrence, tied together by a cycle of implications.
    """
    for c in phi.clauses:
        if len(c) > 3:
            raise ContractError(f"clause {c} has more than three literals")
    clauses = []
    for c in phi.clauses:
        if any(-l in c for l in c):
            continue
        clauses.append(tuple(dict.fromkeys(c)))
    if any(len(c) == 0 for c in clauses):
        return dummy_unsat()
    while True:
        signs: dict = {}
        for c in clauses:
            for l in c:
                signs.setdefault(abs(l), set()).add(l > 0)
        pure = next((x for x in sorted(signs) if len(signs[x]) == 1), None)
        if pure is not None:
            lit = pure if True in signs[pure] else -pure
            clauses = [c for c in clauses if lit not in c]
            continue
        unit = next((c[0] for c in clauses if len(c) == 1), None)
        if unit is not None:
            clauses = [tuple(l for l in c if l != -unit) for c in clauses if unit not in c]
            if any(len(c) == 0 for c in clauses):
                return dummy_unsat()
            continue
        break
    variables = sorted({abs(l) for c in clauses for l in c})
    out = _expand_cycles(clauses, variables)
    assert is_clean(out)
    return out


# ---------------------------------------------------------------- shared builder

class _Builder:
    def __init__(self):
        self.names: list = []
        self.color: list = []
        self.edges: set = set()

    def vertex(self, name, color=None) -> int:
        self.names.append(name)
        self.color.append(color)
        return len(self.names) - 1

    def edge(self, u: int, v: int) -> None:
        if u != v:
            self.edges.add((min(u, v), max(u, v)))

    def copy(self, h: SimpleGraph, keep, tag, fixed: dict | None = None) -> dict:
        """Add H[keep] colored by pattern vertex; ``fixed`` maps pattern vertices to existing ids."""
        fixed = fixed or {}
        m = {}
        for a in sorted(keep):
            m[a] = fixed[a] if a in fixed else self.vertex((tag, a), a)
        for a in keep:
            for b in h.adj[a]:
                if b in keep:
                    self.edge(m[a], m[b])
        return m

    def graph(self) -> SimpleGraph:
        return SimpleGraph(range(len(self.names)), sorted(self.edges))

    def sigma(self) -> dict:
        return {v: c for v, c in enumerate(self.color)}


@dataclass
class ReductionOutput:
    graph: SimpleGraph
    sigma: Optional[dict]
    k: Optional[int]
    decomposition: TreeDecomposition
    width_certificate: int
    pattern: SimpleGraph
    pattern_name: str
    names: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def check(self) -> None:
        bad = validate(self.decomposition, self.graph)
        if bad:
            raise AssertionError(f"emitted decomposition is invalid: {bad}")
        if self.decomposition.width > self.width_certificate:
            raise AssertionError("decomposition exceeds its width certificate")

    def manifest(self) -> dict:
        out = {
            "pattern": self.pattern_name,
            "colored": self.sigma is not None,
            "vertices": len(self.graph),
            "edges": self.graph.num_edges(),
            "k": self.k,
            "width": self.decomposition.width,
            "widthCertificate": self.width_certificate,
        }
        out.update(self.extra)
        return out


def _occurrence_order(phi: CnfFormula, x: int) -> tuple[list, int]:
    """The three occurrences of x as (C1, C2, C3): C1, C3 share a sign, C2 has the other."""
    occ = phi.occurrences()[x]
    pos = [o for o in occ if o[1] > 0]
    neg = [o for o in occ if o[1] < 0]
    same, other = (pos, neg) if len(pos) == 2 else (neg, pos)
    return [same[0], other[0], same[1]], same[0][1]


def _functions(domain: Sequence, s: int, count: int) -> list[dict]:
    """First ``count`` functions domain -> 1..s in lexicographic order."""
    out = []
    for vals in itertools.product(range(1, s + 1), repeat=len(domain)):
        if len(out) == count:
            break
        out.append(dict(zip(domain, vals)))
    return out


def _smallest_base(n: int, e: int) -> int:
    s = 1
    while s ** e < 3 * n:
        s += 1
    return s


# ---------------------------------------------------------------- H_h reduction (plain)

def gen_hh(phi: CnfFormula, h: int) -> ReductionOutput:
    """Plain instance for the pattern H_h with budget 5n - m."""
    if h < 2:
        raise ContractError("gen_hh needs h >= 2")
    if not is_clean(phi):
        raise ContractError("gen_hh needs a clean formula")
    pat = hh_pattern(h)
    n, m = phi.num_vars, len(phi.clauses)
    s = _smallest_base(n, h)
    b = _Builder()
    w = {(j, i): b.vertex(("w", j, i)) for j in range(1, s + 1) for i in range(1, h + 1)}
    mset = sorted(w.values())
    pairs = [(ci, lit) for ci, c in enumerate(phi.clauses) for lit in c]
    funcs = dict(zip(pairs, _functions(list(range(1, h + 1)), s, len(pairs))))
    segments = []  # (hub vertices, [vertex sets of attached copies])

    def attach(u, v, tag):
        fresh = [b.vertex((tag, a)) for a in range(2, h + 6)]
        ids = {0: u, 1: v, **{a: fresh[a - 2] for a in range(2, h + 6)}}
        for x, y in pat.edges:
            b.edge(ids[x], ids[y])
        return fresh

    def hub(name, f):
        v = b.vertex(name)
        for i in range(1, h + 1):
            b.edge(v, w[(f[i], i)])
        return v

    for x in range(1, n + 1):
        order, _ = _occurrence_order(phi, x)
        hubs = [hub(("a", x, ci, lit), funcs[(ci, lit)]) for ci, lit in order]
        ax = b.vertex(("a", x))
        c1, c2, c3 = hubs
        copies = [attach(p, q, ("Hx", x, j)) for j, (p, q) in enumerate([(c1, c2), (c3, c2), (c1, ax), (c3, ax)])]
        segments.append((hubs + [ax], copies))
    for ci, c in enumerate(phi.clauses):
        hubs = [hub(("b", ci, lit), funcs[(ci, lit)]) for lit in c]
        copies = [attach(hubs[i], hubs[j], ("HC", ci, i, j))
                  for i in range(len(c)) for j in range(i + 1, len(c))]
        segments.append((hubs, copies))
    g = b.graph()
    bags = [set(mset)]
    for hubs, copies in segments:
        for cp in copies:
            bags.append(set(mset) | set(hubs) | set(cp))
    td = path_decomposition(bags)
    out = ReductionOutput(g, None, 5 * n - m, td, len(mset) + 3 * len(pat), pat, f"H_{h}", b.names,
                          {"n": n, "m": m, "s": s, "M": len(mset)})
    out.check()
    return out


# ---------------------------------------------------------------- colorful reduction

@dataclass
class SeparatorChoice:
    a: int
    b: int
    separator: tuple
    comp: frozenset  # component of H containing a and b
    side_a: frozenset
    side_b: frozenset


def choose_separator(h: SimpleGraph) -> SeparatorChoice:
    """First (a, b, S) in lexicographic order with a, b non-cutvertices and S a minimal ab-separator of size mu."""
    an = analyze(h)
    mu = an.mu
    if mu < 2:
        raise ContractError(f"gen_colorful needs mu(H) >= 2, got {mu}; use gen_vc for the mu = 1 case")
    cut = cutvertices(h)
    seps = sorted((tuple(sorted(s)) for s in an.separators if len(s) == mu))
    for a in h.sorted_vertices():
        if a in cut:
            continue
        for bb in h.sorted_vertices():
            if bb <= a or bb in cut:
                continue
            for s in seps:
                if a in s or bb in s:
                    continue
                rest = h.without(s)
                comps = {v: c for c in rest.components() for v in c}
                ca, cb = comps[a], comps[bb]
                if ca != cb and h.neighborhood(ca) == set(s) and h.neighborhood(cb) == set(s):
                    comp = next(c for c in h.components() if a in c)
                    return SeparatorChoice(a, bb, s, comp, ca, cb)
    raise ContractError("no pair of non-cutvertices a, b has a minimal ab-separator of size mu(H)")


class _Gadgets:
    """OR-gadgets and alpha-r-cycles over a builder, for a fixed separator choice.

    ``middles`` records, per gadget in creation order, the ids of the c- and
    d-vertex of its middle copy.
    """

    def __init__(self, builder: _Builder, h: SimpleGraph, choice: SeparatorChoice):
        self.b, self.h, self.ch = builder, h, choice
        self.c, self.d = choice.separator[0], choice.separator[1]
        self.middles: list = []

    def or_gadget(self, alpha: int, u: int, v: int, tag) -> list:
        """Three copies of H[comp]; returns the new (non-attachment) vertices."""
        comp = self.ch.comp
        before = len(self.b.names)
        d1 = self.b.copy(self.h, comp, (tag, 1), {alpha: u})
        d0 = self.b.copy(self.h, comp, (tag, 0), {self.c: d1[self.c]})
        self.b.copy(self.h, comp, (tag, 2), {alpha: v, self.d: d0[self.d]})
        self.middles.append((d0[self.c], d0[self.d]))
        return list(range(before, len(self.b.names)))

    def cycle(self, alpha: int, us: Sequence[int], tag) -> list:
        """OR-gadgets between consecutive attachment vertices (cyclically)."""
        r = len(us)
        return [self.or_gadget(alpha, us[i], us[(i + 1) % r], (tag, i)) for i in range(r)]


@dataclass
class GadgetInstance:
    """A standalone gadget: colored host, the pattern H[comp] it must hit, and its attachments."""

    graph: SimpleGraph
    sigma: dict
    pattern: SimpleGraph
    attachments: list
    middles: list  # (c-vertex, d-vertex) of each gadget's middle copy

    def or_solution(self, side: int) -> set:
        """Two vertices hitting a single OR-gadget: an attachment plus one middle vertex.

        Taking attachment u (side 0) leaves the middle and far copies, which
        share the d-vertex; taking v (side 1) pairs with the c-vertex.
        """
        c, d = self.middles[0]
        return {self.attachments[0], d} if side == 0 else {self.attachments[1], c}

    def cycle_solution(self, chosen: set) -> set:
        """X^I: the chosen attachments plus one middle vertex per gadget.

        Gadget i joins u_i and u_{i+1}; it takes its d-vertex when u_i is
        chosen and otherwise its c-vertex (then u_{i+1} must be chosen).
        """
        r = len(self.attachments)
        x = {self.attachments[i] for i in chosen}
        for i, (c, d) in enumerate(self.middles):
            if i in chosen:
                x.add(d)
            else:
                if (i + 1) % r not in chosen:
                    raise ContractError("chosen attachments must cover every gadget of the cycle")
                x.add(c)
        return x


def _standalone(h: SimpleGraph, alpha: str, r: Optional[int]) -> GadgetInstance:
    ch = choose_separator(h)
    col = ch.a if alpha == "a" else ch.b
    b = _Builder()
    gad = _Gadgets(b, h, ch)
    if r is None:
        us = [b.vertex("u", col), b.vertex("v", col)]
        gad.or_gadget(col, us[0], us[1], "or")
    else:
        us = [b.vertex(("u", i), col) for i in range(r)]
        gad.cycle(col, us, "cyc")
    return GadgetInstance(b.graph(), b.sigma(), h.induced(ch.comp), us, gad.middles)


def or_gadget_instance(h: SimpleGraph, alpha: str = "a") -> GadgetInstance:
    return _standalone(h, alpha, None)


def cycle_instance(h: SimpleGraph, r: int, alpha: str = "a") -> GadgetInstance:
    if r < 2:
        raise ContractError("cycles need r >= 2")
    return _standalone(h, alpha, r)


def gen_colorful(phi: CnfFormula, h: SimpleGraph, pattern_name: str = "H") -> ReductionOutput:
    """Colored instance with budget 12n - m built from OR-gadgets and cycles."""
    if not is_clean(phi):
        raise ContractError("gen_colorful needs a clean formula")
    an = analyze(h)
    ok = any(not an.h.induced(c).is_clique() and not analyze(an.h.induced(c)).is_path
             for c in an.components)
    if not ok:
        raise ContractError("gen_colorful needs a component that is neither a path nor a clique")
    ch = choose_separator(h)
    mu = len(ch.separator)
    n, m = phi.num_vars, len(phi.clauses)
    s = _smallest_base(n, mu)
    b = _Builder()
    gad = _Gadgets(b, h, ch)
    sep = list(ch.separator)
    w = {(i, c): b.vertex(("w", i, c), c) for i in range(1, s + 1) for c in sep}
    mset = sorted(w.values())
    pairs = [(ci, lit) for ci, c in enumerate(phi.clauses) for lit in c]
    funcs = dict(zip(pairs, _functions(sep, s, len(pairs))))
    side_a = ch.side_a | frozenset(sep)
    side_b = ch.side_b | frozenset(sep)
    segments = []  # (hub vertices, [extra vertex groups])

    def attach_side(side, f, tag):
        fixed = {c: w[(f[c], c)] for c in sep}
        before = len(b.names)
        mp = b.copy(h, side, tag, fixed)
        return mp, list(range(before, len(b.names)))

    k = 12 * n - m
    for x in range(1, n + 1):
        order, _ = _occurrence_order(phi, x)
        groups = []
        hubs = []
        for ci, lit in order:
            mp, fresh = attach_side(side_a, funcs[(ci, lit)], ("Dx", x, ci, lit))
            hubs.append(mp[ch.a])
            groups.append(fresh)
        ax = b.vertex(("a", x), ch.a)
        hubs.append(ax)
        groups += gad.cycle(ch.a, hubs, ("cycx", x))
        segments.append((hubs, groups))
    for ci, c in enumerate(phi.clauses):
        groups = []
        hubs = []
        for lit in c:
            mp, fresh = attach_side(side_b, funcs[(ci, lit)], ("DC", ci, lit))
            hubs.append(mp[ch.b])
            groups.append(fresh)
        groups += gad.cycle(ch.b, hubs, ("cycC", ci))
        segments.append((hubs, groups))
    rest = h.induced(ch.comp).without(sep)
    for comp in rest.components():
        if comp == ch.side_a or comp == ch.side_b:
            continue
        nbrs = sorted(h.neighborhood(comp))
        for vals in itertools.product(range(1, s + 1), repeat=len(nbrs)):
            f = dict(zip(nbrs, vals))
            fixed = {c: w[(f[c], c)] for c in nbrs}
            before = len(b.names)
            b.copy(h, comp | frozenset(nbrs), ("DL", min(comp), vals), fixed)
            segments.append(([], [list(range(before, len(b.names)))]))
    others = frozenset(h.adj) - ch.comp
    if others:
        for i in range(k + 1):
            before = len(b.names)
            b.copy(h, others, ("rest", i))
            segments.append(([], [list(range(before, len(b.names)))]))
    g = b.graph()
    bags = [set(mset)]
    for hubs, groups in segments:
        for grp in groups:
            bags.append(set(mset) | set(hubs) | set(grp))
    td = path_decomposition(bags)
    cert = s * mu + 4 + 3 * len(h)
    out = ReductionOutput(g, b.sigma(), k, td, cert, h, pattern_name, b.names,
                          {"n": n, "m": m, "s": s, "mu": mu, "M": len(mset),
                           "a": ch.a, "b": ch.b, "separator": list(sep)})
    out.check()
    return out


# ---------------------------------------------------------------- vertex cover reduction

def gen_vc(g0: SimpleGraph, h: SimpleGraph, pattern_name: str = "H") -> ReductionOutput:
    """Colored instance whose optimum is vc(g0) + |E(g0)|."""
    an = analyze(h)
    comp = None
    for c in an.components:
        if not analyze(h.induced(c)).is_path:
            comp = c
            break
    if comp is None:
        raise ContractError("gen_vc needs a pattern component that is not a path")
    hc = h.induced(comp)
    cut = cutvertices(hc)
    free = [v for v in hc.sorted_vertices() if v not in cut]
    if len(free) < 3:
        raise ContractError("the chosen component has fewer than three non-cutvertices")
    a, bb, cc = free[:3]
    b = _Builder()
    base = {v: b.vertex(("g0", v), a) for v in g0.sorted_vertices()}
    segments = []
    for u, v in sorted(g0.edges):
        before = len(b.names)
        mid = b.copy(h, comp, ("C", u, v))
        b.copy(h, comp, ("Cu", u, v), {a: base[u], bb: mid[bb]})
        b.copy(h, comp, ("Cv", u, v), {a: base[v], cc: mid[cc]})
        segments.append(list(range(before, len(b.names))))
    others = frozenset(h.adj) - comp
    ecount, vcount = g0.num_edges(), len(g0)
    if others:
        for i in range(ecount + vcount + 1):
            before = len(b.names)
            b.copy(h, others, ("rest", i))
            segments.append(list(range(before, len(b.names))))
    g = b.graph()
    core = set(base.values())
    bags = [core] + [core | set(seg) for seg in segments]
    td = path_decomposition(bags)
    from .oracle import min_hitting_set

    vc = min_hitting_set([frozenset(e) for e in g0.edges])[0] if ecount else 0
    out = ReductionOutput(g, b.sigma(), None, td, vcount + 3 * len(h), h, pattern_name, b.names,
                          {"vertexCover": vc, "edgesG0": ecount, "expectedOptimum": vc + ecount,
                           "a": a, "b": bb, "c": cc})
    out.check()
    return out
