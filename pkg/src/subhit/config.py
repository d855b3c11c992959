"""Resource caps shared by the exhaustive routines.

Caps can be overridden through the ``SUBHIT_CAPS`` environment variable,
e.g. ``SUBHIT_CAPS="oracle_vertices=600,oracle_sets=50000"``.
"""
from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass

from .errors import ContractError


@dataclass(frozen=True)
class Caps:
    pattern_vertices: int = 10
    oracle_vertices: int = 14
    oracle_sets: int = 20000
    enumerate_host_vertices: int = 64
    profile_host_vertices: int = 200
    # oracle size limits used by ``gen --verify``; generated instances are larger than desk-size hosts
    verify_vertices: int = 2000
    verify_sets: int = 200000

    def replace(self, **kw) -> "Caps":
        return dataclasses.replace(self, **kw)


def parse_caps(text: str, base: Caps | None = None) -> Caps:
    base = base or Caps()
    names = {f.name for f in dataclasses.fields(Caps)}
    updates = {}
    for item in filter(None, (p.strip() for p in text.split(","))):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in names:
            raise ContractError(f"bad cap entry {item!r}; known caps: {sorted(names)}")
        try:
            updates[key] = int(value)
        except ValueError:
            raise ContractError(f"cap {key} needs an integer, got {value!r}") from None
    return base.replace(**updates)


def default_caps() -> Caps:
    env = os.environ.get("SUBHIT_CAPS", "")
    return parse_caps(env) if env else Caps()
