"""Readers and writers for PACE ``.gr``/``.td``, coloring sidecars and DIMACS CNF.

Files use 1-based vertex ids; in memory vertex ``i`` of a file is id ``i-1``.
Writers renumber arbitrary ids to ``1..n`` in ascending order.
"""
from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .errors import ParseError
from .graph import SimpleGraph
from .treedecomp import TreeDecomposition


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("c"):
            yield no, line.split()


def _ints(tokens, no):
    try:
        return [int(x) for x in tokens]
    except ValueError:
        raise ParseError(f"line {no}: expected integers, got {' '.join(tokens)!r}") from None


def parse_gr(text: str) -> SimpleGraph:
    n = None
    edges = []
    for no, tok in _lines(text):
        if tok[0] == "p":
            if n is not None or len(tok) < 4:
                raise ParseError(f"line {no}: bad or repeated header")
            n, m = _ints(tok[2:4], no)
            continue
        if n is None:
            raise ParseError(f"line {no}: edge before the 'p' header")
        vals = _ints(tok, no)
        if len(vals) != 2:
            raise ParseError(f"line {no}: an edge line needs two vertex ids")
        u, v = vals
        if not (1 <= u <= n and 1 <= v <= n) or u == v:
            raise ParseError(f"line {no}: bad edge {u} {v}")
        edges.append((u - 1, v - 1))
    if n is None:
        raise ParseError("missing 'p' header")
    if len(edges) != m:
        raise ParseError(f"header announces {m} edges, found {len(edges)}")
    if len({frozenset(e) for e in edges}) != len(edges):
        raise ParseError("duplicate edge")
    return SimpleGraph(range(n), edges)


def numbering(g: SimpleGraph) -> dict:
    return {v: i + 1 for i, v in enumerate(g.sorted_vertices())}


def format_gr(g: SimpleGraph, kind: str = "tw") -> str:
    num = numbering(g)
    edges = sorted((min(num[u], num[v]), max(num[u], num[v])) for u, v in g.edges)
    out = [f"p {kind} {len(g)} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(out) + "\n"


def parse_coloring(text: str, g: SimpleGraph) -> dict:
    """Sidecar lines ``vertex color``, both 1-based; returns 0-based sigma."""
    sigma = {}
    for no, tok in _lines(text):
        vals = _ints(tok, no)
        if len(vals) != 2:
            raise ParseError(f"line {no}: expected 'vertex color'")
        v, c = vals[0] - 1, vals[1] - 1
        if v not in g:
            raise ParseError(f"line {no}: unknown vertex {vals[0]}")
        if v in sigma:
            raise ParseError(f"line {no}: vertex {vals[0]} colored twice")
        sigma[v] = c
    if sigma.keys() != g.adj.keys():
        missing = sorted(g.adj.keys() - sigma.keys())
        raise ParseError(f"coloring misses vertices {[v + 1 for v in missing[:5]]}")
    return sigma


def format_coloring(g: SimpleGraph, sigma: dict) -> str:
    num = numbering(g)
    return "".join(f"{num[v]} {sigma[v] + 1}\n" for v in g.sorted_vertices())


def parse_td(text: str) -> TreeDecomposition:
    bags = {}
    edges = []
    header = None
    for no, tok in _lines(text):
        if tok[0] == "s":
            if len(tok) != 5 or tok[1] != "td":
                raise ParseError(f"line {no}: expected 's td <bags> <width+1> <vertices>'")
            header = _ints(tok[2:], no)
        elif tok[0] == "b":
            vals = _ints(tok[1:], no)
            if not vals:
                raise ParseError(f"line {no}: bag line without id")
            if vals[0] in bags:
                raise ParseError(f"line {no}: bag {vals[0]} repeated")
            bags[vals[0]] = frozenset(v - 1 for v in vals[1:])
        else:
            if header is None:
                raise ParseError(f"line {no}: content before the 's td' header")
            vals = _ints(tok, no)
            if len(vals) != 2:
                raise ParseError(f"line {no}: a tree edge needs two bag ids")
            edges.append((vals[0], vals[1]))
    if header is None:
        raise ParseError("missing 's td' header")
    nb, w1, _ = header
    if len(bags) != nb:
        raise ParseError(f"header announces {nb} bags, found {len(bags)}")
    if bags and max(len(b) for b in bags.values()) > w1:
        raise ParseError("a bag is larger than the announced width+1")
    for a, b in edges:
        if a not in bags or b not in bags:
            raise ParseError(f"tree edge {a} {b} names an unknown bag")
    return TreeDecomposition(bags, edges, min(bags) if bags else None)


def format_td(td: TreeDecomposition, g: SimpleGraph) -> str:
    num = numbering(g)
    ids = {node: i + 1 for i, node in enumerate(sorted(td.bags))}
    lines = [f"s td {len(td.bags)} {td.max_bag} {len(g)}"]
    for node in sorted(td.bags):
        vs = " ".join(str(x) for x in sorted(num[v] for v in td.bags[node]))
        lines.append(f"b {ids[node]} {vs}".rstrip())
    for a, b in sorted((ids[a], ids[b]) for a, b in td.edges):
        lines.append(f"{a} {b}")
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str):
    """Return ``(num_vars, clauses)`` with clauses as lists of nonzero ints."""
    from .hardness import CnfFormula

    nvars = None
    clauses = []
    cur: list[int] = []
    for no, tok in _lines(text):
        if tok[0] == "p":
            if len(tok) != 4 or tok[1] != "cnf":
                raise ParseError(f"line {no}: expected 'p cnf <vars> <clauses>'")
            nvars, ncl = _ints(tok[2:], no)
            continue
        if tok[0] == "%":
            break
        if nvars is None:
            raise ParseError(f"line {no}: clause before the header")
        for lit in _ints(tok, no):
            if lit == 0:
                clauses.append(cur)
                cur = []
            elif abs(lit) > nvars:
                raise ParseError(f"line {no}: literal {lit} exceeds {nvars} variables")
            else:
                cur.append(lit)
    if nvars is None:
        raise ParseError("missing 'p cnf' header")
    if cur:
        clauses.append(cur)
    if len(clauses) != ncl:
        raise ParseError(f"header announces {ncl} clauses, found {len(clauses)}")
    return CnfFormula(nvars, [tuple(c) for c in clauses])


def format_dimacs(phi) -> str:
    lines = [f"p cnf {phi.num_vars} {len(phi.clauses)}"]
    lines += [" ".join(str(l) for l in c) + " 0" for c in phi.clauses]
    return "\n".join(lines) + "\n"


def read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def write(path, text: str) -> None:
    Path(path).write_text(text)


def edges_to_gr(n: int, edges: Iterable) -> str:
    return format_gr(SimpleGraph(range(n), edges))
