"""Write the worked length-8 example artifacts and print its parameters.

    python scripts/worked_example.py --out-dir results/worked_example
"""

import argparse
import sys

from gkdna import linalg
from gkdna.cli import data_text, main as cli_main
from gkdna.construct import build_generator, check_block_reversibility, invariance_report, parse_grid
from gkdna.dnacode import cwe, gc_subset, gcw, verify_linear


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="results/worked_example")
    args = ap.parse_args()

    cg = parse_grid(data_text("example_grid.txt"))
    gm = build_generator(cg)
    code = linalg.reduce(gm.entries)
    print(f"rank {code.rank}, {code.size} words")
    print("GCW", gcw(code))
    print("CWE", cwe(code))
    print(f"GC-weight 4 subcode: {len(gc_subset(code, 4))} words")
    for line in verify_linear(code, 4, "HD,RV,RC").lines():
        print(line)
    print("block reversible:", check_block_reversibility(gm))
    print("translation invariance:", invariance_report(gm, cg.outer))
    return cli_main(["example", "--out-dir", args.out_dir])


if __name__ == "__main__":
    sys.exit(main())
