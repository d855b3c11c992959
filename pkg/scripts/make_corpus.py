"""Write the regression corpus: small colored and plain instances with oracle optima.

Usage: python3 scripts/make_corpus.py [OUT_DIR]   (default: corpus/)
"""
import json
import random
import sys
from pathlib import Path

from subhit import io
from subhit.oracle import solve_oracle
from subhit.patterns import named_pattern

PATTERNS = ["P_3", "P_4", "C_4", "K_3", "K_{2,2}", "paw"]
PER_PATTERN = 4


def random_graph(rng, n, p):
    from subhit.graph import SimpleGraph

    return SimpleGraph(range(n), [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def main(out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(2024)
    index = []
    for name in PATTERNS:
        h = named_pattern(name)
        for i in range(PER_PATTERN):
            g = random_graph(rng, rng.randint(5, 9), rng.choice([0.35, 0.5, 0.65]))
            colored = i % 2 == 0
            sigma = {v: rng.randrange(len(h)) for v in g.sorted_vertices()} if colored else None
            stem = f"{name.replace('{', '').replace('}', '').replace(',', '-')}_{i}"
            io.write(out / f"{stem}.gr", io.format_gr(g))
            if colored:
                io.write(out / f"{stem}.color", io.format_coloring(g, sigma))
            index.append({"name": stem, "pattern": name, "colored": colored,
                          "optimum": solve_oracle(g, h, sigma)[0]})
    io.write(out / "index.json", json.dumps(index, indent=2, sort_keys=True) + "\n")
    print(f"wrote {len(index)} instances to {out}")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "corpus")
