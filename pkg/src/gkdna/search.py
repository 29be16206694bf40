"""Seeded search over coefficient grids for large DNA codes at a target distance.

Grids are ``n x k`` arrays over GF(4) for the dihedral outer group ``D_n``
and block group ``D_k``.  Every random draw comes from a stream keyed by
``(seed, restart, step)``, so a result depends only on the parameters.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import total_ordering
from typing import Optional

import numpy as np

from . import linalg
from .construct import CoefficientGrid, build_generator, check_row_reversibility, format_grid, parse_grid
from .dnacode import BoundRecord, format_constraints, parse_constraints, scan, verify_linear
from .group import dihedral_listed

log = logging.getLogger(__name__)

SPOT_CHECK_EVERY = 100


@dataclass(frozen=True)
class SearchParams:
    n: int
    k: int
    target_d: int
    w: Optional[int] = None
    constraints: frozenset = frozenset({"HD", "RC"})
    seed: int = 0
    budget: int = 10_000
    restarts: int = 1_000_000
    cap: int = linalg.DEFAULT_CAP
    stall: int = 200

    def __post_init__(self):
        object.__setattr__(self, "constraints", parse_constraints(self.constraints))
        for name in ("n", "k"):
            v = getattr(self, name)
            if v < 2 or v % 2:
                raise ValueError(f"{name} must be a positive even integer, got {v}")
        if self.budget < 1:
            raise ValueError("budget must be at least 1")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.target_d < 1:
            raise ValueError("target distance must be positive")
        if self.w is not None and "GC" not in self.constraints:
            raise ValueError("w given without the GC constraint")
        if "GC" in self.constraints and self.w is None:
            object.__setattr__(self, "w", self.length // 2)

    @property
    def length(self) -> int:
        return self.n * self.k

    def to_dict(self) -> dict:
        return {
            "n": self.n, "k": self.k, "d": self.target_d, "w": self.w,
            "constraints": format_constraints(self.constraints), "seed": self.seed,
            "budget": self.budget, "restarts": self.restarts, "cap": self.cap, "stall": self.stall,
        }


@total_ordering
@dataclass(frozen=True)
class Fitness:
    feasible: bool
    size: int  # words in the constrained code
    distance: Optional[int]  # least of the requested distance minima
    rank: int
    verified: bool = True
    min_weight: Optional[int] = None
    rc_distance: Optional[int] = None

    @property
    def key(self) -> tuple:
        if self.feasible:
            return (1, self.size, self.distance or 0)
        if not self.verified:
            return (0, -1, 0)
        # short of the target, distance first: size alone pulls toward low-distance codes
        return (0, self.distance or 0, self.size)

    def __lt__(self, other: "Fitness"):
        return self.key < other.key

    def __eq__(self, other):
        return isinstance(other, Fitness) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible, "size": self.size, "distance": self.distance,
            "rank": self.rank, "verified": self.verified,
            "min_weight": self.min_weight, "rc_distance": self.rc_distance,
        }


def groups_for(params: SearchParams) -> tuple:
    return dihedral_listed(params.n // 2), dihedral_listed(params.k // 2)


def evaluate(grid: CoefficientGrid, params: SearchParams) -> Fitness:
    if grid.grid.shape != (params.n, params.k):
        raise ValueError(f"grid is {grid.grid.shape}, params want {(params.n, params.k)}")
    code = linalg.reduce(build_generator(grid).entries)
    if code.rank == 0:
        return Fitness(False, 0, None, 0)
    if code.size > params.cap:
        return Fitness(False, 0, None, code.rank, verified=False)
    st = scan(code, params.cap)
    cs = params.constraints
    # the construction is reversible, so RV coincides with the minimum weight
    dists = []
    if "HD" in cs or "RV" in cs:
        dists.append(st.min_weight)
    if "RC" in cs:
        dists.append(st.rc_fast if st.rc_fast is not None else params.length)
    distance = min(dists) if dists else None
    if "GC" in cs:
        size = int(st.gc_hist[params.w]) if 0 <= params.w <= params.length else 0
    else:
        size = code.size
    feasible = size > 0 and (distance is None or distance >= params.target_d)
    return Fitness(feasible, size, distance, code.rank, True, st.min_weight, st.rc_fast)


def random_grid(params: SearchParams, rng: np.random.Generator) -> CoefficientGrid:
    outer, block = groups_for(params)
    return CoefficientGrid(outer, block, rng.integers(0, 4, size=(params.n, params.k), dtype=np.uint8))


def mutate(grid: CoefficientGrid, rng: np.random.Generator, count: Optional[int] = None) -> CoefficientGrid:
    """Replace 1..3 distinct entries, each by one of the three other symbols."""
    g = grid.grid.copy()
    flat = g.reshape(-1)
    if count is None:
        count = int(rng.integers(1, 4))
    count = min(count, flat.size)
    pos = rng.choice(flat.size, size=count, replace=False)
    flat[pos] ^= rng.integers(1, 4, size=count, dtype=np.uint8)
    return grid.replace(g)


def stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed % 2**64, spawn_key=key))


class Evaluator:
    """Budget-counting wrapper around :func:`evaluate`.

    ``batch`` scores candidates, possibly on a thread pool, without charging
    the budget; ``charge`` books one evaluation when its result is consumed.
    Every ``SPOT_CHECK_EVERY``-th charged evaluation also confirms the
    generator's row space is closed under reversal.
    """

    def __init__(self, params: SearchParams, workers: int = 1):
        if workers < 1:
            raise ValueError("workers must be at least 1")
        self.params = params
        self.workers = workers
        self.used = 0
        self.spot_checks = 0
        self._pool = ThreadPoolExecutor(workers) if workers > 1 else None

    @property
    def remaining(self) -> int:
        return self.params.budget - self.used

    def charge(self, grid: CoefficientGrid):
        if self.remaining <= 0:
            raise RuntimeError("evaluation budget exhausted")
        self.used += 1
        if self.used % SPOT_CHECK_EVERY == 0:
            self.spot_checks += 1
            if not check_row_reversibility(build_generator(grid)):
                raise AssertionError(f"non-reversible generator from grid:\n{format_grid(grid)}")

    def batch(self, grids: list) -> list:
        if self._pool is None or len(grids) < 2:
            return [evaluate(g, self.params) for g in grids]
        return list(self._pool.map(evaluate, grids, [self.params] * len(grids)))

    def __call__(self, grid: CoefficientGrid) -> Fitness:
        self.charge(grid)
        return evaluate(grid, self.params)

    def close(self):
        if self._pool is not None:
            self._pool.shutdown()


@dataclass
class HillClimb:
    """Random-restart hill climbing: accept any non-worse mutation.

    A restart ends after ``stall`` consecutive steps without strict
    improvement; the run ends when the budget or restart count runs out.
    With several workers the next few steps' candidates are scored together
    and consumed in step order up to the first accepted move, so the
    trajectory does not depend on the worker count.
    """

    record_trace: bool = False
    trace: list = field(default_factory=list)
    name: str = "hill-climb"

    def run(self, params: SearchParams, ev: Evaluator) -> tuple:
        best_grid, best = None, None
        restarts = 0
        for r in range(params.restarts):
            if ev.remaining <= 0:
                break
            restarts += 1
            grid = random_grid(params, stream(params.seed, r))
            fit = ev(grid)
            if best is None or fit > best:
                best_grid, best = grid, fit
            self._note(r, 0, fit)
            stall = step = 0
            while ev.remaining > 0 and stall < params.stall:
                m = min(ev.workers, ev.remaining, params.stall - stall)
                cands = [mutate(grid, stream(params.seed, r, step + 1 + i)) for i in range(m)]
                for cand, cf in zip(cands, ev.batch(cands)):
                    step += 1
                    ev.charge(cand)
                    if cf > best:
                        best_grid, best = cand, cf
                    if cf >= fit:
                        stall = 0 if cf > fit else stall + 1
                        grid, fit = cand, cf
                        self._note(r, step, fit)
                        break  # later candidates were drawn from the old grid
                    stall += 1
            log.debug("restart %d: %d steps, best %s", r, step, best.key)
        return best_grid, best, restarts

    def _note(self, r, step, fit):
        if self.record_trace:
            self.trace.append((r, step, fit.key))


@dataclass
class SearchResult:
    best_grid: CoefficientGrid
    fitness: Fitness
    bound: Optional[BoundRecord]
    evaluations_used: int
    seed: int
    params: SearchParams
    restarts_used: int = 0
    spot_checks: int = 0

    @property
    def feasible(self) -> bool:
        return self.fitness.feasible

    def to_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "seed": self.seed,
            "evaluations_used": self.evaluations_used,
            "restarts_used": self.restarts_used,
            "spot_checks": self.spot_checks,
            "params": self.params.to_dict(),
            "fitness": self.fitness.to_dict(),
            "grid": format_grid(self.best_grid),
            "bound": self.bound.to_dict() if self.bound else None,
        }


def provenance(grid: CoefficientGrid, params: SearchParams, strategy: str, used: int) -> dict:
    return {
        "construction": "dihedral-circulant",
        "outer_order": grid.n,
        "block_order": grid.k,
        "grid": format_grid(grid),
        "strategy": strategy,
        "seed": params.seed,
        "budget": params.budget,
        "evaluations": used,
    }


def run_search(params: SearchParams, strategy=None, workers: int = 1) -> SearchResult:
    """Run ``strategy`` (default :class:`HillClimb`) under the params' budget.

    ``workers`` only changes how candidates are scheduled, never the result.
    """
    strategy = strategy if strategy is not None else HillClimb()
    ev = Evaluator(params, workers)
    try:
        grid, fit, restarts = strategy.run(params, ev)
    finally:
        ev.close()
    bound = None
    if fit.feasible:
        bound = BoundRecord(
            n=params.length, d=params.target_d, w=params.w, constraints=params.constraints,
            size=fit.size, provenance=provenance(grid, params, getattr(strategy, "name", "custom"), ev.used),
            k=fit.rank, min_weight=fit.min_weight, rc_distance=fit.rc_distance, rv_distance=fit.min_weight,
        )
    return SearchResult(grid, fit, bound, ev.used, params.seed, params, restarts, ev.spot_checks)


def grid_from_provenance(prov: dict) -> CoefficientGrid:
    if prov.get("construction") != "dihedral-circulant":
        raise ValueError(f"unknown construction {prov.get('construction')!r}")
    outer = dihedral_listed(prov["outer_order"] // 2)
    block = dihedral_listed(prov["block_order"] // 2)
    return parse_grid(prov["grid"], outer, block)


def reverify(bound: BoundRecord, cap: Optional[int] = None):
    """Rebuild the code from ``bound.provenance`` and verify it from scratch.

    Returns the verification report; ``report.passed`` together with a
    matching size means the bound stands.
    """
    grid = grid_from_provenance(bound.provenance)
    code = linalg.reduce(build_generator(grid).entries)
    rep = verify_linear(code, bound.d, bound.constraints, bound.w, cap=cap)
    return rep
