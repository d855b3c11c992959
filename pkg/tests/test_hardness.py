import itertools
import math
import random

import pytest
from hypothesis import given, strategies as st

from subhit.config import Caps
from subhit.errors import ContractError
from subhit.graph import SimpleGraph
from subhit.hardness import (CLEAN_SIZE_FACTOR, CnfFormula, choose_separator, clean_3cnf,
                             cycle_instance, dummy_unsat, gen_colorful, gen_hh, gen_vc, is_clean,
                             or_gadget_instance, satisfiable)
from subhit.oracle import min_hitting_set, occurrences
from subhit.patterns import biclique, clique, cycle, named_pattern, paw, path
from subhit.treedecomp import validate

BIG = Caps(oracle_vertices=10 ** 5, oracle_sets=10 ** 6)
GADGET_PATTERNS = ["C_4", "K_{2,3}", "H_2", "K5-e"]


def optimum(graph, sigma, h):
    return min_hitting_set(occurrences(graph, sigma, h, BIG), BIG)[0]


def brute_sat(phi):
    for bits in itertools.product([False, True], repeat=phi.num_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in phi.clauses):
            return True
    return not phi.clauses


def random_formula(rng, max_vars=4, max_clauses=5):
    n = rng.randint(1, max_vars)
    clauses = []
    for _ in range(rng.randint(0, max_clauses)):
        r = rng.randint(1, min(3, n))
        vs = rng.sample(range(1, n + 1), r)
        clauses.append(tuple(v * rng.choice([1, -1]) for v in vs))
    return CnfFormula(n, clauses)


# ---------------------------------------------------------------- formulas

def test_formula_rejects_bad_literal():
    with pytest.raises(ContractError):
        CnfFormula(2, [(1, 3)])


def test_dummy_is_clean_and_unsat():
    d = dummy_unsat()
    assert is_clean(d) and not satisfiable(d)
    assert (d.num_vars, len(d.clauses), d.size) == (8, 12, 24)


def test_clean_examples():
    assert clean_3cnf(CnfFormula(2, [(1, -1)])) == CnfFormula(0, [])
    assert clean_3cnf(CnfFormula(1, [(1,), (-1,)])) == dummy_unsat()
    out = clean_3cnf(CnfFormula(2, [(1, 2), (-1, -2)]))
    assert out.num_vars == 4 and is_clean(out) and satisfiable(out)


def test_clean_two_opposite_triples():
    phi = CnfFormula(3, [(1, 2, 3), (-1, -2, -3)])
    out = clean_3cnf(phi)
    assert is_clean(out) and satisfiable(out) == brute_sat(phi)


def test_clean_rejects_long_clause():
    with pytest.raises(ContractError):
        clean_3cnf(CnfFormula(4, [(1, 2, 3, 4)]))


@given(st.integers(0, 100_000))
def test_clean_is_equisatisfiable_and_small(seed):
    phi = random_formula(random.Random(seed))
    out = clean_3cnf(phi)
    assert is_clean(out)
    assert satisfiable(out) == brute_sat(phi) == satisfiable(phi)
    assert out.size <= max(CLEAN_SIZE_FACTOR * phi.size, dummy_unsat().size)


def test_clean_is_deterministic():
    phi = CnfFormula(3, [(1, 2, 3), (-1, -2), (2, -3), (-2, 3)])
    assert clean_3cnf(phi) == clean_3cnf(phi)


# ---------------------------------------------------------------- H_h reduction

CLEAN_SAMPLES = [
    CnfFormula(2, [(1, 2), (-1, -2)]),
    CnfFormula(2, [(1, 2), (-1, 2), (1, -2)]),
    CnfFormula(3, [(1, 2, 3), (-1, -2), (-3, 2)]),
    CnfFormula(1, [(1,), (-1,)]),
]


def test_hh_budget_and_m_size():
    phi = clean_3cnf(CnfFormula(3, [(1, 2, 3), (-1, -2), (-3, 2)]))
    for h in (2, 3):
        out = gen_hh(phi, h)
        assert out.k == 5 * phi.num_vars - len(phi.clauses)
        assert out.extra["M"] == out.extra["s"] * h
        assert out.extra["s"] ** h >= 3 * phi.num_vars
        assert validate(out.decomposition, out.graph) is None
        assert out.decomposition.width <= out.width_certificate


def test_budgets_for_n6_m9():
    phi = clean_3cnf(CnfFormula(2, [(1, 2), (-1, 2), (1, -2)]))
    assert (phi.num_vars, len(phi.clauses)) == (6, 9)
    assert gen_hh(phi, 2).k == 21
    assert gen_colorful(phi, cycle(4)).k == 63


def test_hh_rejects_unclean_and_small_h():
    with pytest.raises(ContractError):
        gen_hh(CnfFormula(1, [(1,)]), 2)
    with pytest.raises(ContractError):
        gen_hh(dummy_unsat(), 1)


@pytest.mark.parametrize("idx", range(len(CLEAN_SAMPLES)))
def test_hh_optimum_tracks_satisfiability(idx):
    phi = clean_3cnf(CLEAN_SAMPLES[idx])
    out = gen_hh(phi, 2)
    opt = optimum(out.graph, None, out.pattern)
    assert (opt <= out.k) == satisfiable(phi)
    assert opt in (out.k, out.k + 1)


def test_hh_is_deterministic():
    phi = clean_3cnf(CLEAN_SAMPLES[2])
    a, b = gen_hh(phi, 2), gen_hh(phi, 2)
    assert a.graph == b.graph and a.names == b.names and a.manifest() == b.manifest()


# ---------------------------------------------------------------- gadgets

@pytest.mark.parametrize("name", GADGET_PATTERNS)
def test_separator_choice(name):
    h = named_pattern(name)
    ch = choose_separator(h)
    assert ch.a not in ch.separator and ch.b not in ch.separator
    rest = h.without(ch.separator)
    assert not any(ch.a in c and ch.b in c for c in rest.components())


def test_separator_needs_mu_two():
    with pytest.raises(ContractError):
        choose_separator(paw())


@pytest.mark.parametrize("name", GADGET_PATTERNS)
@pytest.mark.parametrize("alpha", ["a", "b"])
def test_or_gadget(name, alpha):
    gi = or_gadget_instance(named_pattern(name), alpha)
    occ = occurrences(gi.graph, gi.sigma, gi.pattern, BIG)
    assert min_hitting_set(occ, BIG)[0] == 2
    u, v = gi.attachments
    assert any(u not in o and v not in o for o in occ)
    for side in (0, 1):
        x = gi.or_solution(side)
        assert len(x) == 2 and all(o & x for o in occ)


@pytest.mark.parametrize("name", GADGET_PATTERNS)
@pytest.mark.parametrize("r", [2, 3, 4])
def test_cycle_gadget(name, r):
    gi = cycle_instance(named_pattern(name), r)
    occ = occurrences(gi.graph, gi.sigma, gi.pattern, BIG)
    assert min_hitting_set(occ, BIG)[0] == r + math.ceil(r / 2)
    for size in range(1, r + 1):
        for chosen in itertools.combinations(range(r), size):
            if all(i in chosen or (i + 1) % r in chosen for i in range(r)):
                x = gi.cycle_solution(set(chosen))
                assert len(x) == size + r and all(o & x for o in occ)


def test_cycle_solution_needs_cover():
    gi = cycle_instance(cycle(4), 4)
    with pytest.raises(ContractError):
        gi.cycle_solution({0})
    with pytest.raises(ContractError):
        cycle_instance(cycle(4), 1)


# ---------------------------------------------------------------- colorful reduction

def test_colorful_budget_and_shape():
    phi = clean_3cnf(CLEAN_SAMPLES[0])
    out = gen_colorful(phi, cycle(4), "C_4")
    assert out.k == 12 * phi.num_vars - len(phi.clauses)
    assert out.extra["M"] == out.extra["s"] * out.extra["mu"]
    assert validate(out.decomposition, out.graph) is None
    assert out.decomposition.width <= out.width_certificate
    assert set(out.sigma.values()) <= set(range(4))
    assert out.manifest()["colored"] is True


def test_colorful_rejects_paths_and_cliques():
    phi = clean_3cnf(CLEAN_SAMPLES[0])
    with pytest.raises(ContractError):
        gen_colorful(phi, path(5))
    with pytest.raises(ContractError):
        gen_colorful(phi, clique(4))


@pytest.mark.parametrize("idx", [0, 1, 2])
def test_colorful_sat_reaches_budget(idx):
    # the unsatisfiable sample needs ~15 s of oracle time and lives in the acceptance run
    phi = clean_3cnf(CLEAN_SAMPLES[idx])
    out = gen_colorful(phi, cycle(4))
    assert optimum(out.graph, out.sigma, cycle(4)) == out.k


def test_colorful_with_extra_component():
    phi = clean_3cnf(CLEAN_SAMPLES[0])
    h = named_pattern("C_4+P_2")
    out = gen_colorful(phi, h)
    assert validate(out.decomposition, out.graph) is None
    # k + 1 disjoint P_2 copies: too many to delete, so only the C_4 part matters
    rest = {v for v, name in enumerate(out.names) if isinstance(name[0], tuple) and name[0][0] == "rest"}
    assert len(rest) == 2 * (out.k + 1)
    core = out.graph.without(rest)
    assert optimum(core, {v: out.sigma[v] for v in core.adj}, cycle(4)) == out.k


def test_colorful_is_deterministic():
    phi = clean_3cnf(CLEAN_SAMPLES[1])
    a, b = gen_colorful(phi, biclique(2, 3)), gen_colorful(phi, biclique(2, 3))
    assert a.graph == b.graph and a.sigma == b.sigma and a.names == b.names


# ---------------------------------------------------------------- vertex cover reduction

def test_vc_examples():
    out = gen_vc(clique(2), named_pattern("K_3+P_2"))
    assert optimum(out.graph, out.sigma, out.pattern) == out.extra["expectedOptimum"] == 2
    out = gen_vc(clique(2), named_pattern("paw+P_2"))
    assert out.extra["expectedOptimum"] == 2
    assert optimum(out.graph, out.sigma, out.pattern) == 2
    out = gen_vc(clique(3), paw())
    assert out.extra["expectedOptimum"] == 5
    assert optimum(out.graph, out.sigma, out.pattern) == 5


def test_vc_on_edgeless_graph():
    out = gen_vc(SimpleGraph(range(3)), paw())
    assert out.extra["expectedOptimum"] == 0
    assert not occurrences(out.graph, out.sigma, paw())


@pytest.mark.parametrize("seed", range(5))
def test_vc_random(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    g0 = SimpleGraph(range(n), [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.5])
    out = gen_vc(g0, paw())
    assert validate(out.decomposition, out.graph) is None
    assert out.decomposition.width <= out.width_certificate
    assert optimum(out.graph, out.sigma, paw()) == out.extra["expectedOptimum"]


def test_vc_rejects_path_patterns():
    with pytest.raises(ContractError):
        gen_vc(clique(2), path(4))
