"""Length-16 search sweep (n = k = 4) over target distances, with and without GC.

    python scripts/length16_sweep.py --budget 3000 --seed 1 --out results/length16.json

Each row reports the best verified code size next to a reference lower bound.
"""

import argparse
import json
import logging
import time
from pathlib import Path

from gkdna.search import SearchParams, reverify, run_search

# d -> (HD+RC size, HD+RC+GC size at w = 8)
REFERENCE = {4: (65536, 33152), 5: (65536, 26720), 6: (65536, 26720), 7: (4096, 2496),
             8: (4096, 1728), 9: (256, 60), 11: (256, 60)}


def run_row(d, constraints, seed, budget, workers):
    p = SearchParams(n=4, k=4, target_d=d, constraints=constraints, seed=seed, budget=budget)
    t = time.perf_counter()
    r = run_search(p, workers=workers)
    ok = bool(r.bound) and reverify(r.bound).passed
    return {
        "d": d, "constraints": constraints, "size": r.fitness.size if r.feasible else 0,
        "verified": ok, "rank": r.fitness.rank, "seconds": round(time.perf_counter() - t, 2),
        "grid": r.to_dict()["grid"],
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--budget", type=int, default=3000)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--d", type=int, nargs="*", default=sorted(REFERENCE))
    ap.add_argument("--out", type=Path)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    rows = []
    print(f"{'d':>3} {'RC':>7} {'ref':>7} {'RC,GC':>7} {'ref':>7}  verified")
    for d in args.d:
        a = run_row(d, "HD,RC", args.seed, args.budget, args.workers)
        b = run_row(d, "HD,RC,GC", args.seed, args.budget, args.workers)
        ref = REFERENCE.get(d, (None, None))
        print(f"{d:>3} {a['size']:>7} {ref[0] or '-':>7} {b['size']:>7} {ref[1] or '-':>7}  "
              f"{a['verified'] and b['verified']}")
        rows += [a, b]
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(json.dumps({"seed": args.seed, "budget": args.budget, "rows": rows}, indent=2) + "\n")


if __name__ == "__main__":
    main()
