"""Command-line entry point: ``gkdna construct | verify | search | example``.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import logging
import sys
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__, linalg
from .construct import CoefficientGrid, build_generator, parse_grid, parse_grid_rows
from .dnacode import (
    DnaCode, gc_subset, gcw, parse_constraints, rc_min_distance, rv_min_distance, scan, verify,
)
from .field import format_dna_words, format_matrix, parse_dna_words, parse_matrix
from .group import dihedral_listed, parse_group
from .search import SearchParams, run_search

OK, FAIL, USAGE = 0, 1, 2
EXAMPLE_GCW = "16a^8 + 224a^4b^4 + 16b^8"

log = logging.getLogger("gkdna")


class UsageError(Exception):
    pass


def data_text(name: str) -> str:
    return resources.files("gkdna").joinpath("data", name).read_text()


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(path: Path, command: str, inputs: list, params: dict, seed, artifacts: list):
    manifest = {
        "command": command,
        "inputs": [str(p) for p in inputs],
        "parameters": params,
        "seed": seed,
        "artifacts": {str(p): _sha256(Path(p)) for p in artifacts},
        "tool_version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _group_arg(spec: Optional[str], order: int, what: str):
    if spec in (None, "dihedral"):
        if order % 2:
            raise UsageError(f"{what} order {order} is odd; the dihedral {what} group needs an even order")
        return dihedral_listed(order // 2)
    try:
        g = parse_group(_read(spec))
    except ValueError as e:
        raise UsageError(f"{spec}: {e}") from None
    if g.order != order:
        raise UsageError(f"{what} group has order {g.order}, grid needs {order}")
    return g


# -- construct ----------------------------------------------------------------

def code_summary(code: linalg.LinearCode, cap: int) -> list:
    lines = [f"length {code.length}", f"rank {code.rank}"]
    if code.rank == 0:
        lines.append("size 1 (zero code); distances undefined")
        return lines
    lines.append(f"size {code.size}")
    if code.size > cap:
        lines.append(f"not enumerated: 4^{code.rank} words exceeds cap {cap}")
        return lines
    st = scan(code, cap)
    lines.append(f"min_weight {st.min_weight}")
    lines.append(f"rc_distance {rc_min_distance(code, cap=cap)}")
    lines.append(f"rv_distance {rv_min_distance(code, cap=cap)}")
    lines.append(f"GCW {gcw(code, cap)}")
    return lines


def cmd_construct(args) -> int:
    try:
        g = parse_grid_rows(_read(args.grid))
    except ValueError as e:
        raise UsageError(f"{args.grid}: {e}") from None
    n, k = g.shape
    outer = _group_arg(args.group, n, "outer")
    block = _group_arg(args.block, k, "block")
    try:
        gm = build_generator(CoefficientGrid(outer, block, g))
    except ValueError as e:
        raise UsageError(str(e)) from None
    text = format_matrix(gm.entries)
    if args.out:
        Path(args.out).write_text(text)
    print("matrix:")
    sys.stdout.write(text)
    code = linalg.reduce(gm.entries)
    for line in code_summary(code, args.cap):
        print(line)
    return OK


# -- verify ---------------------------------------------------------------------

def load_dna_code(path) -> DnaCode:
    try:
        return DnaCode.from_words(parse_dna_words(_read(path)))
    except ValueError as e:
        raise UsageError(f"{path}: {e}") from None


def cmd_verify(args) -> int:
    code = load_dna_code(args.code)
    try:
        cs = parse_constraints(args.constraints)
    except ValueError as e:
        raise UsageError(str(e)) from None
    rep = verify(code, args.d, cs, args.w)
    for line in rep.lines():
        print(line)
    if args.json:
        Path(args.json).write_text(json.dumps(rep.to_dict(), indent=2, sort_keys=True) + "\n")
    return OK if rep.passed else FAIL


# -- search ---------------------------------------------------------------------

def cmd_search(args) -> int:
    try:
        params = SearchParams(
            n=args.n, k=args.k, target_d=args.d, w=args.w, constraints=args.constraints,
            seed=args.seed, budget=args.budget, restarts=args.restarts, cap=args.cap, stall=args.stall,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None
    result = run_search(params, workers=args.workers)
    text = json.dumps(result.to_dict(), indent=2, sort_keys=True) + "\n"
    artifacts = []
    if args.out:
        out = Path(args.out)
        out.write_text(text)
        artifacts.append(out)
    else:
        sys.stdout.write(text)
    if result.bound and args.out and result.fitness.size <= args.dump_cap:
        code = linalg.reduce(build_generator(result.best_grid).entries)
        dna = gc_subset(code, params.w, params.cap) if "GC" in params.constraints else DnaCode.from_linear(code, params.cap)
        dump = Path(args.dump) if args.dump else out.with_suffix(".dna.txt")
        dump.write_text(format_dna_words(dna.sorted_words()))
        artifacts.append(dump)
    if args.out:
        write_manifest(Path(str(args.out) + ".manifest.json"), "search", [], params.to_dict(), params.seed, artifacts)
    log.info("best %s after %d evaluations", result.fitness.key, result.evaluations_used)
    return OK if result.feasible else FAIL


# -- example --------------------------------------------------------------------

EXAMPLE_FILES = ("matrix.txt", "code_rc.txt", "code_gc.txt", "gcw.txt")


def example_artifacts() -> dict:
    cg = parse_grid(data_text("example_grid.txt"))
    gm = build_generator(cg)
    code = linalg.reduce(gm.entries)
    full = DnaCode.from_linear(code)
    sub = gc_subset(code, 4)
    return {
        "matrix.txt": format_matrix(gm.entries),
        "code_rc.txt": format_dna_words(full.sorted_words()),
        "code_gc.txt": format_dna_words(sub.sorted_words()),
        "gcw.txt": f"{gcw(code)}\n",
    }


def check_example(out_dir: Path, fixtures: Optional[Path] = None) -> list:
    """Compare the artifacts in ``out_dir`` with the golden data; list of (name, ok, msg)."""

    def golden(name):
        return (fixtures / name).read_text() if fixtures else data_text(name)

    checks = []

    def rd(name):
        p = out_dir / name
        if not p.exists():
            checks.append((name, False, "missing"))
            return None
        return p.read_text()

    t = rd("matrix.txt")
    if t is not None:
        try:
            ok = np.array_equal(parse_matrix(t), parse_matrix(golden("example_matrix.txt")))
            checks.append(("matrix.txt", ok, "8x8 generator" if ok else "differs from the golden matrix"))
        except ValueError as e:
            checks.append(("matrix.txt", False, str(e)))
    for name, fixture, size in (("code_rc.txt", "example_rc_words.txt", 256), ("code_gc.txt", "example_gc_words.txt", 224)):
        t = rd(name)
        if t is None:
            continue
        try:
            words = parse_dna_words(t)
            want = set(parse_dna_words(golden(fixture)))
        except ValueError as e:
            checks.append((name, False, str(e)))
            continue
        ok = set(words) == want and len(words) == size
        checks.append((name, ok, f"{len(words)} words" + ("" if ok else f", expected the {size}-word golden set")))
        if ok:
            cs = "HD,RC" if size == 256 else "HD,RC,GC"
            rep = verify(DnaCode.from_words(words), 4, cs, 4)
            checks.append((f"{name} constraints", rep.passed, f"{cs} at d=4"))
    t = rd("gcw.txt")
    if t is not None:
        ok = t.strip() == EXAMPLE_GCW
        checks.append(("gcw.txt", ok, t.strip()))
    return checks


def cmd_example(args) -> int:
    out = Path(args.out_dir)
    fixtures = Path(args.fixtures) if args.fixtures else None
    if not args.check_only:
        out.mkdir(parents=True, exist_ok=True)
        for name, text in example_artifacts().items():
            (out / name).write_text(text)
        write_manifest(out / "manifest.json", "example", [], {}, None, [out / n for n in EXAMPLE_FILES])
    checks = check_example(out, fixtures)
    for name, ok, msg in checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {msg}")
    return OK if all(ok for _, ok, _ in checks) else FAIL


# -- argument parsing -----------------------------------------------------------

def _positive(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    cap = linalg.default_cap()
    p = argparse.ArgumentParser(prog="gkdna", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build the generator of a coefficient grid")
    c.add_argument("--grid", required=True, help="coefficient grid file ('n k' then n rows)")
    c.add_argument("--group", help="'dihedral' (default) or a group file, listed reversibly")
    c.add_argument("--block", help="'dihedral' (default) or a group file for the block group")
    c.add_argument("--out", help="write the matrix here")
    c.add_argument("--cap", type=_positive, default=cap)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check DNA constraints on a word file")
    v.add_argument("code", help="one ACGT word per line")
    v.add_argument("--d", type=_positive, required=True)
    v.add_argument("--constraints", default="HD,RC")
    v.add_argument("--w", type=int)
    v.add_argument("--json", help="write the report as JSON")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", help="search coefficient grids for a large code")
    s.add_argument("--n", type=_positive, required=True)
    s.add_argument("--k", type=_positive, required=True)
    s.add_argument("--d", type=_positive, required=True)
    s.add_argument("--w", type=int)
    s.add_argument("--constraints", default="HD,RC")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--budget", type=_positive, default=10_000)
    s.add_argument("--restarts", type=_positive, default=1_000_000)
    s.add_argument("--stall", type=_positive, default=200)
    s.add_argument("--cap", type=_positive, default=cap)
    s.add_argument("--workers", type=_positive, default=1, help="threads scoring candidates (result is unchanged)")
    s.add_argument("--out", help="SearchResult JSON path (stdout if omitted)")
    s.add_argument("--dump", help="DNA word file for the best code")
    s.add_argument("--dump-cap", type=int, default=4**8)
    s.set_defaults(func=cmd_search)

    e = sub.add_parser("example", help="write and self-check the worked length-8 example")
    e.add_argument("--out-dir", default="worked_example")
    e.add_argument("--check-only", action="store_true", help="check existing artifacts without rewriting")
    e.add_argument("--fixtures", help="directory overriding the packaged golden fixtures")
    e.set_defaults(func=cmd_example)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as e:
        print(f"gkdna {args.command}: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
