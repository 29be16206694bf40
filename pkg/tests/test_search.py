import json

import numpy as np
import pytest

from gkdna import linalg
from gkdna.construct import build_generator, dihedral_grid
from gkdna.search import (
    Evaluator, Fitness, HillClimb, SearchParams, evaluate, grid_from_provenance, mutate,
    random_grid, reverify, run_search, stream,
)

# chi-square 0.999 quantiles, 15 and 7 degrees of freedom
CHI2_999_15 = 37.697
CHI2_999_7 = 24.322


def test_params_validation():
    with pytest.raises(ValueError):
        SearchParams(n=3, k=2, target_d=4)
    with pytest.raises(ValueError):
        SearchParams(n=4, k=2, target_d=4, budget=0)
    with pytest.raises(ValueError):
        SearchParams(n=4, k=2, target_d=4, w=4)
    p = SearchParams(n=4, k=4, target_d=4, constraints="HD,RC,GC")
    assert p.w == 8 and p.length == 16


def test_evaluate_examples(example_grid):
    p = SearchParams(n=4, k=2, target_d=4)
    f = evaluate(example_grid, p)
    assert f.feasible and f.size == 256 and f.distance == 4 and f.rank == 4
    assert not evaluate(example_grid, SearchParams(n=4, k=2, target_d=5)).feasible
    gc = evaluate(example_grid, SearchParams(n=4, k=2, target_d=4, constraints="HD,RC,GC", w=4))
    assert gc.feasible and gc.size == 224
    zero = evaluate(dihedral_grid(np.zeros((4, 2), dtype=np.uint8)), p)
    assert not zero.feasible and zero.size == 0
    with pytest.raises(ValueError):
        evaluate(example_grid, SearchParams(n=4, k=4, target_d=4))


def test_fitness_order():
    feas_small = Fitness(True, 256, 4, 4)
    feas_big = Fitness(True, 4096, 4, 6)
    near = Fitness(False, 65536, 3, 8)
    far = Fitness(False, 65536, 2, 8)
    unverified = Fitness(False, 0, None, 14, verified=False)
    assert feas_big > feas_small > near > far > unverified


def test_evaluate_over_cap():
    p = SearchParams(n=4, k=4, target_d=1, cap=4)
    f = evaluate(dihedral_grid(np.eye(4, dtype=np.uint8)), p)
    assert not f.verified and not f.feasible


def test_mutate_changes_entries(rng):
    p = SearchParams(n=4, k=4, target_d=4)
    g = random_grid(p, rng)
    for count in (1, 2, 3):
        m = mutate(g, rng, count)
        assert np.count_nonzero(m.grid != g.grid) == count
    assert np.array_equal(mutate(g, stream(7, 0, 1)).grid, mutate(g, stream(7, 0, 1)).grid)


def test_mutate_is_uniform():
    p = SearchParams(n=4, k=4, target_d=4)
    g = dihedral_grid(np.zeros((4, 4), dtype=np.uint8))
    rng = np.random.default_rng(5)
    pos = np.zeros(16)
    val = np.zeros(4)
    draws = 10_000
    for _ in range(draws):
        d = mutate(g, rng, 1).grid.reshape(-1)
        i = int(np.nonzero(d)[0][0])
        pos[i] += 1
        val[d[i]] += 1
    exp = draws / 16
    assert ((pos - exp) ** 2 / exp).sum() < CHI2_999_15
    assert val[0] == 0
    exp = draws / 3
    assert ((val[1:] - exp) ** 2 / exp).sum() < CHI2_999_7


def test_budget_one():
    r = run_search(SearchParams(n=4, k=2, target_d=4, budget=1))
    assert r.evaluations_used == 1 and r.restarts_used == 1


def test_budget_is_respected():
    p = SearchParams(n=4, k=2, target_d=9, budget=250, stall=20)
    r = run_search(p)
    assert r.evaluations_used == 250 and not r.feasible and r.bound is None
    assert r.restarts_used > 1 and r.spot_checks == 2


def test_trace_is_monotone_within_restarts():
    hc = HillClimb(record_trace=True)
    run_search(SearchParams(n=4, k=4, target_d=6, seed=3, budget=400, stall=50), hc)
    assert hc.trace
    for (r0, _, k0), (r1, _, k1) in zip(hc.trace, hc.trace[1:]):
        if r0 == r1:
            assert k1 >= k0


@pytest.mark.parametrize("workers", [1, 3])
def test_determinism(workers):
    p = SearchParams(n=4, k=4, target_d=5, seed=11, budget=300, stall=40)
    a = json.dumps(run_search(p).to_dict(), sort_keys=True)
    b = json.dumps(run_search(p, workers=workers).to_dict(), sort_keys=True)
    assert a == b


def test_seeds_differ():
    p = dict(n=4, k=4, target_d=5, budget=50)
    a = run_search(SearchParams(seed=1, **p)).best_grid
    b = run_search(SearchParams(seed=2, **p)).best_grid
    assert a != b


def test_small_search_is_sound():
    r = run_search(SearchParams(n=4, k=2, target_d=4, seed=1, budget=2000))
    assert r.feasible and r.fitness.size >= 256
    b = r.bound
    assert grid_from_provenance(b.provenance) == r.best_grid
    rep = reverify(b)
    assert rep.passed
    code = linalg.reduce(build_generator(r.best_grid).entries)
    assert code.size == b.size


def test_gc_search_is_sound():
    p = SearchParams(n=4, k=2, target_d=3, constraints="HD,RC,GC", seed=4, budget=500)
    r = run_search(p)
    assert r.feasible
    rep = reverify(r.bound)
    assert rep.passed and rep.size == r.bound.size


def test_evaluator_exhaustion():
    p = SearchParams(n=4, k=2, target_d=4, budget=1)
    ev = Evaluator(p)
    ev(random_grid(p, stream(0)))
    with pytest.raises(RuntimeError):
        ev(random_grid(p, stream(0)))
    with pytest.raises(ValueError):
        Evaluator(p, workers=0)


def test_grid_from_provenance_rejects_unknown():
    with pytest.raises(ValueError):
        grid_from_provenance({"construction": "other"})
