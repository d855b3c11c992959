"""Command-line front end.

Exit codes: 0 success, 1 failed check (invalid decomposition), 2 parse or
input error, 3 pattern outside the solver's class, 4 solver and oracle
disagree, 5 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import io
from .colorful import SolveResult, solve_colorful
from .config import Caps, default_caps, parse_caps
from .errors import ContractError, DispatchError, ParseError, ResourceLimitError
from .graph import SimpleGraph
from .oracle import solve_oracle
from .pattern import analyze
from .patterns import named_pattern
from .plain import solve_plain, solve_plain_clique
from .treedecomp import (LEAF, INTRODUCE, FORGET, JOIN, TreeDecomposition, heuristic_decompose,
                         make_nice, validate, validate_nice)

EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_UNSUPPORTED = 3
EXIT_DISAGREE = 4
EXIT_RESOURCE = 5

log = logging.getLogger("subhit")


@dataclass
class RunConfig:
    command: str
    graph: Optional[str] = None
    pattern: Optional[str] = None
    coloring: Optional[str] = None
    td: Optional[str] = None
    cnf: Optional[str] = None
    out: Optional[str] = None
    method: str = "auto"
    check_oracle: bool = False
    dump_states: Optional[str] = None
    verify: bool = False
    threads: int = 1
    caps: Caps = field(default_factory=default_caps)
    extra: dict = field(default_factory=dict)


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def load_pattern(spec: str) -> SimpleGraph:
    """A ``.gr`` file path or a built-in name such as ``C_4`` or ``K_3+P_2``."""
    if Path(spec).is_file():
        return io.parse_gr(io.read(spec))
    try:
        return named_pattern(spec)
    except ContractError as exc:
        raise ParseError(f"{exc}; pass a .gr file or a built-in name") from None


def _load_instance(cfg: RunConfig):
    g = io.parse_gr(io.read(cfg.graph))
    sigma = io.parse_coloring(io.read(cfg.coloring), g) if cfg.coloring else None
    td = io.parse_td(io.read(cfg.td)) if cfg.td else None
    if td is not None:
        bad = validate(td, g)
        if bad:
            raise ContractError(f"decomposition does not fit the graph: {bad}")
    return g, sigma, td


def solve_instance(g: SimpleGraph, h: SimpleGraph, sigma: Optional[dict], td: Optional[TreeDecomposition],
                   method: str = "auto", caps: Caps | None = None) -> SolveResult:
    """Dispatch to the colored or plain solvers."""
    if sigma is not None:
        return solve_colorful(g, sigma, h, td, method)
    a = analyze(h, caps)
    nd = make_nice(td if td is not None else heuristic_decompose(g), g)
    if a.is_clique:
        return solve_plain_clique(g, nd, len(h))
    if a.all_cliques:
        raise DispatchError("plain patterns whose components are all cliques (and not one clique) are unsupported")
    return solve_plain(g, a, nd, caps)


def cmd_analyze(cfg: RunConfig) -> int:
    h = load_pattern(cfg.pattern)
    a = analyze(h, cfg.caps)
    s = a.summary()
    if cfg.extra.get("json"):
        _emit(s)
        return 0
    head = f"mu={a.mu} muStar={a.mu_star}"
    if a.is_clique:
        head += "; pattern is a clique"
    elif a.is_path:
        head += "; pattern is a path"
    print(head)
    print(f"components={s['components']} allComponentsCliques={str(a.all_cliques).lower()}")
    print(f"slices={s['slices']} chunks={s['chunks']} separatorChunks={s['separatorChunks']}")
    return 0


def _check_against_oracle(cfg, g, h, sigma, value) -> dict:
    opt, _ = solve_oracle(g, h, sigma, cfg.caps)
    return {"oracle": opt, "agrees": opt == value}


def cmd_solve(cfg: RunConfig) -> int:
    g, sigma, td = _load_instance(cfg)
    h = load_pattern(cfg.pattern)
    res = solve_instance(g, h, sigma, td, cfg.method, cfg.caps)
    out = res.as_dict()
    if out["certificate"] is not None:
        out["certificate"] = [v + 1 for v in out["certificate"]]
    out["colored"] = sigma is not None
    if cfg.dump_states:
        dump = {"stateCounts": res.state_counts}
        if res.witness_sizes:
            dump["witnessSizes"] = res.witness_sizes
        io.write(cfg.dump_states, json.dumps(dump, sort_keys=True) + "\n")
    code = 0
    if cfg.check_oracle:
        chk = _check_against_oracle(cfg, g, h, sigma, res.value)
        out.update(chk)
        if not chk["agrees"]:
            code = EXIT_DISAGREE
    _emit(out)
    return code


def cmd_oracle(cfg: RunConfig) -> int:
    g, sigma, _ = _load_instance(cfg)
    h = load_pattern(cfg.pattern)
    opt, chosen = solve_oracle(g, h, sigma, cfg.caps)
    _emit({"optimum": opt, "certificate": sorted(v + 1 for v in chosen), "solver": "oracle"})
    return 0


def _write_instance(out_dir: Path, result) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    io.write(out_dir / "instance.gr", io.format_gr(result.graph))
    if result.sigma is not None:
        io.write(out_dir / "instance.color", io.format_coloring(result.graph, result.sigma))
    io.write(out_dir / "instance.td", io.format_td(result.decomposition, result.graph))


def cmd_gen(cfg: RunConfig) -> int:
    from . import hardness

    kind = cfg.extra["kind"]
    satisfiable = None
    if kind == "vc":
        g0 = io.parse_gr(io.read(cfg.graph))
        h = load_pattern(cfg.pattern)
        result = hardness.gen_vc(g0, h, cfg.pattern)
    else:
        phi = io.parse_dimacs(io.read(cfg.cnf))
        clean = phi if hardness.is_clean(phi) else hardness.clean_3cnf(phi)
        if kind == "hh":
            hval = cfg.extra["h"]
            result = hardness.gen_hh(clean, hval)
            h = hardness.hh_pattern(hval)
        else:
            h = load_pattern(cfg.pattern)
            result = hardness.gen_colorful(clean, h, cfg.pattern)
        if cfg.verify:
            satisfiable = hardness.satisfiable(phi)
    manifest = result.manifest()
    manifest["kind"] = kind
    code = 0
    if cfg.verify:
        caps = cfg.caps.replace(oracle_vertices=cfg.caps.verify_vertices,
                                oracle_sets=cfg.caps.verify_sets)
        opt, _ = solve_oracle(result.graph, h, result.sigma, caps)
        manifest["oracleOptimum"] = opt
        if kind == "vc":
            ok = opt == manifest["expectedOptimum"]
        else:
            manifest["satisfiable"] = satisfiable
            ok = (opt <= result.k) == satisfiable
        manifest["verified"] = ok
        if not ok:
            code = EXIT_DISAGREE
    if cfg.out:
        out_dir = Path(cfg.out)
        _write_instance(out_dir, result)
        io.write(out_dir / "manifest.json", json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    _emit(manifest)
    return code


def _nice_summary(nd) -> dict:
    kinds = {LEAF: 0, INTRODUCE: 0, FORGET: 0, JOIN: 0}
    for k in nd.kind:
        kinds[k] += 1
    return {"nodes": len(nd), "width": nd.width, "kinds": {str(k): v for k, v in kinds.items()}}


def cmd_td(cfg: RunConfig) -> int:
    g = io.parse_gr(io.read(cfg.graph))
    action = cfg.extra["action"]
    if action == "heuristic":
        td = heuristic_decompose(g)
        text = io.format_td(td, g)
        if cfg.out:
            io.write(cfg.out, text)
        else:
            sys.stdout.write(text)
        return 0
    if not cfg.td:
        raise ContractError(f"td {action} needs --td")
    td = io.parse_td(io.read(cfg.td))
    bad = validate(td, g)
    if action == "validate":
        _emit({"valid": bad is None, "width": td.width,
               "violation": None if bad is None else {"kind": bad.kind, "message": bad.message}})
        return 0 if bad is None else EXIT_CHECK_FAILED
    if bad is not None:
        raise ContractError(f"decomposition does not fit the graph: {bad}")
    nd = make_nice(td, g)
    problem = validate_nice(nd, g)
    out = _nice_summary(nd)
    out["valid"] = problem is None
    if cfg.out:
        io.write(cfg.out, io.format_td(nd.to_tree_decomposition(), g))
    _emit(out)
    return 0 if problem is None else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="subhit", description="Exact (colorful) H-subgraph hitting on bounded-treewidth graphs.")
    p.add_argument("--caps", help="override resource caps, e.g. oracle_vertices=20 (also SUBHIT_CAPS)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="pattern invariants")
    a.add_argument("pattern")
    a.add_argument("--json", action="store_true")

    for name in ("solve", "oracle"):
        s = sub.add_parser(name, help=f"{name} an instance")
        s.add_argument("--graph", required=True)
        s.add_argument("--pattern", required=True)
        s.add_argument("--coloring")
        s.add_argument("--td")
        if name == "solve":
            s.add_argument("--method", choices=["auto", "path", "clique", "general"], default="auto")
            s.add_argument("--check-oracle", action="store_true")
            s.add_argument("--dump-states")
            s.add_argument("--threads", type=int, default=1)

    gen = sub.add_parser("gen", help="hardness instance generators")
    gsub = gen.add_subparsers(dest="kind", required=True)
    for kind in ("hh", "colorful", "vc"):
        gk = gsub.add_parser(kind)
        if kind == "vc":
            gk.add_argument("--graph", required=True, help="base graph g0 (.gr)")
        else:
            gk.add_argument("--cnf", required=True, help="DIMACS CNF file")
        if kind == "hh":
            gk.add_argument("--h", type=int, default=2)
        else:
            gk.add_argument("--pattern", required=True)
        gk.add_argument("--out")
        gk.add_argument("--verify", action="store_true")

    td = sub.add_parser("td", help="tree decomposition utilities")
    tsub = td.add_subparsers(dest="action", required=True)
    for action in ("validate", "make-nice", "heuristic"):
        ta = tsub.add_parser(action)
        ta.add_argument("--graph", required=True)
        if action != "heuristic":
            ta.add_argument("--td", required=(action == "validate"))
        ta.add_argument("--out")
    return p


def _config(ns) -> RunConfig:
    caps = default_caps()
    if ns.caps:
        caps = parse_caps(ns.caps, caps)
    cfg = RunConfig(ns.command, caps=caps)
    for name in ("graph", "pattern", "coloring", "td", "cnf", "out", "method", "check_oracle",
                 "dump_states", "verify", "threads"):
        if hasattr(ns, name) and getattr(ns, name) is not None:
            setattr(cfg, name, getattr(ns, name))
    for name in ("json", "kind", "action", "h"):
        if hasattr(ns, name):
            cfg.extra[name] = getattr(ns, name)
    if cfg.threads < 1:
        raise ContractError("--threads must be at least 1")
    return cfg


COMMANDS = {"analyze": cmd_analyze, "solve": cmd_solve, "oracle": cmd_oracle, "gen": cmd_gen, "td": cmd_td}


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _config(ns)
        return COMMANDS[cfg.command](cfg)
    except DispatchError as exc:
        print(f"unsupported pattern: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ResourceLimitError as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ParseError, ContractError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
