"""Minimized witness size against boundary size t for P_4 on the growth host family.

Usage: python3 scripts/growth_curve.py [--tmax 8] [--copies 3] [--csv out.csv]
"""
import argparse
import csv
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
from test_acceptance import growth_host  # noqa: E402

from subhit.pattern import analyze  # noqa: E402
from subhit.patterns import path  # noqa: E402
from subhit.plain import build_witness, witness_size_constant, minimize_witness, witness_size  # noqa: E402


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--tmax", type=int, default=8)
    ap.add_argument("--copies", type=int, default=3)
    ap.add_argument("--csv")
    args = ap.parse_args()
    a = analyze(path(4))
    rows = []
    for t in range(2, args.tmax + 1):
        bg = growth_host(t, args.copies)
        w = build_witness(bg, a)
        small, _ = minimize_witness(w, a)
        rows.append((t, witness_size(bg), witness_size(w), witness_size(small),
                     witness_size_constant(a.h) * t ** a.mu_star))
    print(f"{'t':>3} {'host':>6} {'witness':>8} {'minimized':>10} {'bound':>10}")
    for r in rows:
        print(f"{r[0]:>3} {r[1]:>6} {r[2]:>8} {r[3]:>10} {r[4]:>10}")
    slope, icept = np.polyfit([r[0] for r in rows], [r[3] for r in rows], 1)
    print(f"least-squares fit: minimized = {slope:.2f} t + {icept:.2f}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["t", "host", "witness", "minimized", "bound"])
            wr.writerows(rows)


if __name__ == "__main__":
    main()
