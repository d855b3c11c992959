"""Brute-force ground truth: enumerate occurrences, then exact minimum hitting set."""
from __future__ import annotations

from typing import Iterable, Optional

from .config import Caps, default_caps
from .errors import ResourceLimitError
from .graph import ColoredGraph, Piece, SimpleGraph, iter_embeddings


def occurrences(g: SimpleGraph, sigma: Optional[dict], h: SimpleGraph,
                caps: Caps | None = None) -> list[frozenset]:
    """Vertex sets of all (sigma-)H-subgraphs of ``g``, deduplicated, sorted."""
    caps = caps or default_caps()
    if len(g) > caps.oracle_vertices:
        raise ResourceLimitError(
            f"host has {len(g)} vertices; oracle_vertices cap is {caps.oracle_vertices}")
    if sigma is None:
        host = g
        piece = Piece(h)
    else:
        host = ColoredGraph(g, sigma)
        piece = Piece(h, colored=True)
    seen = set()
    for emb in iter_embeddings(piece, host):
        seen.add(frozenset(emb.values()))
        if len(seen) > caps.oracle_sets:
            raise ResourceLimitError(f"more than {caps.oracle_sets} occurrences; raise oracle_sets")
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class _Solver:
    def __init__(self, nodes_limit: int | None = None):
        self.nodes = 0
        self.nodes_limit = nodes_limit

    def reduce(self, sets: list[int]) -> tuple[list[int], int]:
        """Apply forced units, superset removal and element domination.

        Returns the reduced family and the bitmask of forced elements.
        """
        forced = 0
        while True:
            changed = False
            sets = sorted(set(sets), key=lambda s: (_popcount(s), s))
            units = 0
            for s in sets:
                if _popcount(s) == 1:
                    units |= s
            if units:
                forced |= units
                sets = [s for s in sets if not s & units]
                changed = True
                continue
            # drop supersets
            kept: list[int] = []
            for s in sets:
                if not any(k & s == k for k in kept):
                    kept.append(s)
            if len(kept) != len(sets):
                changed = True
            sets = kept
            # an element whose sets are a subset of another element's sets is useless
            occ: dict[int, int] = {}
            for i, s in enumerate(sets):
                for e in _bits(s):
                    occ[e] = occ.get(e, 0) | (1 << i)
            drop = 0
            for e in sorted(occ):
                for f in sorted(occ):
                    if f == e or (drop >> f) & 1:
                        continue
                    if not occ[e] & ~occ[f] and (occ[e] != occ[f] or f < e):
                        drop |= 1 << e
                        break
            if drop:
                sets = [s & ~drop for s in sets]
                changed = True
            if not changed:
                return sets, forced

    @staticmethod
    def components(sets: list[int]) -> list[list[int]]:
        comps: list[tuple[int, list[int]]] = []
        for s in sets:
            merged_mask, merged = s, [s]
            rest = []
            for mask, members in comps:
                if mask & merged_mask:
                    merged_mask |= mask
                    merged += members
                else:
                    rest.append((mask, members))
            comps = rest + [(merged_mask, merged)]
        return [m for _, m in comps]

    @staticmethod
    def lower_bound(sets: list[int]) -> int:
        used = 0
        lb = 0
        for s in sorted(sets, key=lambda s: (_popcount(s), s)):
            if not s & used:
                used |= s
                lb += 1
        return lb

    @staticmethod
    def greedy(sets: list[int]) -> int:
        sol = 0
        live = list(sets)
        while live:
            cnt: dict[int, int] = {}
            for s in live:
                for e in _bits(s):
                    cnt[e] = cnt.get(e, 0) + 1
            e = max(cnt, key=lambda x: (cnt[x], -x))
            sol |= 1 << e
            live = [s for s in live if not (s >> e) & 1]
        return sol

    def solve(self, sets: list[int], ub: int) -> Optional[int]:
        """Optimal hitting set mask of size < ub, or None if none exists."""
        self.nodes += 1
        if self.nodes_limit and self.nodes > self.nodes_limit:
            raise ResourceLimitError("branch-and-bound node limit reached")
        if any(s == 0 for s in sets):
            return None
        sets, forced = self.reduce(sets)
        nf = _popcount(forced)
        if nf >= ub:
            return None
        if not sets:
            return forced
        comps = self.components(sets)
        if len(comps) > 1:
            total = forced
            budget = ub - nf
            lbs = [self.lower_bound(c) for c in comps]
            if sum(lbs) >= budget:
                return None
            for i, c in enumerate(comps):
                rest_lb = sum(lbs[i + 1:])
                sub = self.solve(c, budget - rest_lb)
                if sub is None:
                    return None
                total |= sub
                budget -= _popcount(sub)
            return total
        if nf + self.lower_bound(sets) >= ub:
            return None
        g = self.greedy(sets)
        best = None
        if nf + _popcount(g) < ub:
            best = g
            ub = nf + _popcount(g)
        # branch: the smallest set must be hit; exclude earlier choices in later branches
        pivot = min(sets, key=lambda s: (_popcount(s), s))
        excluded = 0
        for e in _bits(pivot):
            bit = 1 << e
            sub_sets = [s & ~excluded for s in sets if not s & bit]
            sub = self.solve(sub_sets, ub - nf - 1)
            if sub is not None:
                best = sub | bit
                ub = nf + _popcount(best)
            excluded |= bit
        return None if best is None else best | forced


def min_hitting_set(family: Iterable[Iterable[int]], caps: Caps | None = None) -> tuple[int, frozenset]:
    """Exact minimum hitting set by branch and bound; returns (size, one optimum)."""
    caps = caps or default_caps()
    family = [frozenset(s) for s in family]
    if len(family) > caps.oracle_sets:
        raise ResourceLimitError(f"{len(family)} sets; oracle_sets cap is {caps.oracle_sets}")
    if any(not s for s in family):
        raise ValueError("an empty set cannot be hit")
    elems = sorted(set().union(*family)) if family else []
    index = {e: i for i, e in enumerate(elems)}
    sets = [sum(1 << index[e] for e in s) for s in family]
    solver = _Solver()
    mask = solver.solve(sets, len(elems) + 1)
    assert mask is not None
    chosen = frozenset(elems[i] for i in _bits(mask))
    assert all(s & chosen for s in family)
    return len(chosen), chosen


def exhaustive_hitting_set(family: Iterable[Iterable[int]]) -> int:
    """Reference optimum by trying subsets in order of size (small ground sets only)."""
    import itertools

    family = [frozenset(s) for s in family]
    elems = sorted(set().union(*family)) if family else []
    for r in range(len(elems) + 1):
        for combo in itertools.combinations(elems, r):
            c = set(combo)
            if all(s & c for s in family):
                return r
    raise ValueError("an empty set cannot be hit")


def solve_oracle(g: SimpleGraph, h: SimpleGraph, sigma: Optional[dict] = None,
                 caps: Caps | None = None) -> tuple[int, frozenset]:
    return min_hitting_set(occurrences(g, sigma, h, caps), caps)
