"""Survey which block translations preserve generated codes.

For random grids over a dihedral outer group, count how often translating
coordinate blocks by ``g_i -> g_i x`` (right) and ``g_i -> x g_i`` (left)
maps the code onto itself for every ``x``.

    python scripts/invariance_survey.py --n 6 --k 2 --samples 200
"""

import argparse

import numpy as np

from gkdna.construct import build_generator, dihedral_grid, invariance_report


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    hits = {"left": 0, "right": 0}
    for _ in range(args.samples):
        cg = dihedral_grid(rng.integers(0, 4, (args.n, args.k)))
        for side, ok in invariance_report(build_generator(cg), cg.outer).items():
            hits[side] += ok
    for side, c in hits.items():
        print(f"{side:>5}: {c}/{args.samples} codes invariant under every translation")


if __name__ == "__main__":
    main()
