import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gkdna import linalg
from gkdna.construct import (
    CoefficientGrid, GroupRingElement, build_generator, check_block_reversibility,
    check_row_reversibility, circulant, dihedral_block, dihedral_grid, format_grid,
    group_action_invariance, invariance_report, parse_grid, sigma,
)
from gkdna.field import MUL, Gf4Vector
from gkdna.group import GroupSpec, cyclic, dihedral_listed

SMALL_GROUPS = [cyclic(n) for n in range(1, 9)] + [dihedral_listed(p) for p in range(1, 5)]


def convolve(g: GroupSpec, a, b):
    out = [0] * g.order
    for i in range(g.order):
        for j in range(g.order):
            out[g.mul(i, j)] ^= int(MUL[a[i], b[j]])
    return out


def matmul4(x, y):
    out = np.zeros((x.shape[0], y.shape[1]), dtype=np.uint8)
    for i in range(x.shape[0]):
        for j in range(y.shape[1]):
            acc = 0
            for t in range(x.shape[1]):
                acc ^= int(MUL[x[i, t], y[t, j]])
            out[i, j] = acc
    return out


def test_sigma_identity_element():
    for g in SMALL_GROUPS:
        v = np.zeros(g.order, dtype=np.uint8)
        v[0] = 1
        assert np.array_equal(sigma(GroupRingElement(g, Gf4Vector(v))), np.eye(g.order, dtype=np.uint8))


def test_sigma_cyclic_is_circulant():
    c3 = cyclic(3)
    for coeffs in itertools.product(range(4), repeat=3):
        assert np.array_equal(sigma(GroupRingElement(c3, Gf4Vector(coeffs))), circulant(coeffs))
    assert circulant([1, 2, 3]).tolist() == [[1, 2, 3], [3, 1, 2], [2, 3, 1]]


def test_sigma_order_two():
    s = sigma(GroupRingElement(dihedral_listed(1), Gf4Vector.parse("0 W")))
    assert s.tolist() == [[0, 3], [3, 0]]


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(SMALL_GROUPS).flatmap(lambda g: st.tuples(
    st.just(g),
    st.lists(st.integers(0, 3), min_size=g.order, max_size=g.order),
    st.lists(st.integers(0, 3), min_size=g.order, max_size=g.order))))
def test_sigma_is_multiplicative(case):
    g, a, b = case
    u, v = GroupRingElement(g, Gf4Vector(a)), GroupRingElement(g, Gf4Vector(b))
    uv = Gf4Vector(convolve(g, a, b))
    assert (u * v).coeffs == uv
    assert np.array_equal(sigma(GroupRingElement(g, uv)), matmul4(sigma(u), sigma(v)))


def test_dihedral_block_examples():
    assert dihedral_block(Gf4Vector.parse("0 W")).tolist() == [[0, 3], [3, 0]]
    assert dihedral_block([2, 0]).tolist() == [[2, 0], [0, 2]]
    a, b, c, d = 0, 1, 2, 3
    want = [[a, b, c, d], [b, a, d, c], [c, d, a, b], [d, c, b, a]]
    assert dihedral_block([a, b, c, d]).tolist() == want
    with pytest.raises(ValueError):
        dihedral_block([1, 2, 3])


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_dihedral_block_equals_sigma(m, rng):
    g = dihedral_listed(m)
    for _ in range(20):
        row = rng.integers(0, 4, 2 * m)
        assert np.array_equal(dihedral_block(row), sigma(GroupRingElement(g, Gf4Vector(row))))


def test_example_generator_matches_golden(example_gm, golden_matrix):
    assert np.array_equal(example_gm.entries, golden_matrix)
    assert str(Gf4Vector(example_gm.entries[0])) == "0 W w W w 1 0 1"


def test_dihedral_circulant_form(rng):
    # every block of the dihedral generator has the [[A, B], [B^T, A^T]] form
    for n, k in [(4, 2), (4, 4), (6, 6)]:
        cg = dihedral_grid(rng.integers(0, 4, (n, k)))
        gm = build_generator(cg)
        q = cg.outer.quotient_table()
        for i in range(n):
            for j in range(n):
                assert np.array_equal(gm.block(i, j), dihedral_block(cg.grid[q[i, j]]))


def test_k1_generator_is_sigma(rng):
    for p in (1, 2, 3):
        g = dihedral_listed(p)
        coeffs = rng.integers(0, 4, 2 * p)
        cg = CoefficientGrid(g, cyclic(1), coeffs[:, None])
        assert np.array_equal(build_generator(cg).entries, sigma(GroupRingElement(g, Gf4Vector(coeffs))))


def test_generator_block_structure(rng):
    for n, k in [(4, 2), (6, 4), (8, 2)]:
        cg = dihedral_grid(rng.integers(0, 4, (n, k)))
        gm = build_generator(cg)
        q = cg.outer.quotient_table()
        diag = gm.block(0, 0)
        for i in range(n):
            assert np.array_equal(gm.block(i, i), diag)
            # first block row is sigma(v_{g_1}), ..., sigma(v_{g_n})
            assert np.array_equal(gm.block(0, i), dihedral_block(cg.grid[i]))
        for (i, j), (a, b) in itertools.product(itertools.product(range(n), repeat=2), repeat=2):
            if q[i, j] == q[a, b]:
                assert np.array_equal(gm.block(i, j), gm.block(a, b))


def test_build_generator_rejects_bad_listing():
    c4 = cyclic(4)
    cg = CoefficientGrid(c4, dihedral_listed(1), np.zeros((4, 2), dtype=np.uint8))
    with pytest.raises(ValueError, match="reversible"):
        build_generator(cg)


def test_row_reversibility_examples(example_gm):
    assert check_row_reversibility(example_gm)
    assert check_row_reversibility(np.eye(8, dtype=np.uint8))
    e1 = np.zeros((1, 8), dtype=np.uint8)
    e1[0, 0] = 1
    assert not check_row_reversibility(e1)


@pytest.mark.parametrize("n, k", [(4, 2), (4, 4), (6, 2), (6, 4), (8, 4)])
def test_random_grids_are_reversible(n, k, rng):
    for _ in range(30):
        gm = build_generator(dihedral_grid(rng.integers(0, 4, (n, k))))
        code = linalg.reduce(gm.entries)
        assert check_row_reversibility(gm, code)
        assert check_block_reversibility(gm, code)


@pytest.mark.parametrize("p", [2, 3, 4])
def test_group_codes_are_reversible(p, rng):
    g = dihedral_listed(p)
    for _ in range(30):
        s = sigma(GroupRingElement(g, Gf4Vector(rng.integers(0, 4, 2 * p))))
        code = linalg.reduce(s)
        assert linalg.contains_all(code, s[:, ::-1])


def test_block_reversibility_examples(example_gm):
    assert check_block_reversibility(example_gm)
    c2 = dihedral_listed(1)
    a, b = np.array([[1, 2], [0, 3]]), np.array([[3, 3], [1, 0]])
    # v = A e + B g over C2: block rows (A, B), (B, A)
    from gkdna.construct import GeneratorMatrix

    gm = GeneratorMatrix(np.block([[a, b], [b, a]]).astype(np.uint8), 2, 2)
    assert check_block_reversibility(gm)
    z, i2 = np.zeros((2, 2)), np.eye(2)
    bad = GeneratorMatrix(np.block([[i2, z], [z, z]]).astype(np.uint8), 2, 2)
    assert not check_block_reversibility(bad)


def codeword_set(code):
    return {v.entries.tobytes() for v in linalg.enumerate_codewords(code)}


def test_block_translation_example_by_enumeration(example_gm, example_grid):
    code = linalg.reduce(example_gm.entries)
    words = linalg.codeword_array(code)
    a = 1
    perm = [example_grid.outer.mul(i, a) for i in range(4)]
    moved = np.empty_like(words)
    blocks = words.reshape(-1, 4, 2)
    moved.reshape(-1, 4, 2)[:, perm, :] = blocks
    assert {w.tobytes() for w in moved} == {w.tobytes() for w in words}
    assert group_action_invariance(example_gm, example_grid.outer, a)
    assert group_action_invariance(example_gm, example_grid.outer, 0)


def test_full_space_is_invariant():
    from gkdna.construct import GeneratorMatrix

    gm = GeneratorMatrix(np.eye(8, dtype=np.uint8), 4, 2)
    assert all(group_action_invariance(gm, dihedral_listed(2), x) for x in range(4))


def test_left_translation_always_preserves_code(rng):
    right_failures = 0
    for _ in range(30):
        cg = dihedral_grid(rng.integers(0, 4, (6, 2)))
        rep = invariance_report(build_generator(cg), cg.outer)
        assert rep["left"]
        right_failures += not rep["right"]
    # D6 is not abelian, so right translation need not preserve the code
    assert right_failures > 0


def test_grid_format_roundtrip(example_grid):
    text = format_grid(example_grid)
    assert text == "4 2\n0 W\nw W\nw 1\n0 1\n"
    assert parse_grid(text) == example_grid
    for bad in ["", "4 2\n0 W\n", "x y\n", "2 3\n0 1 w\n0 1 w\n"]:
        with pytest.raises(ValueError):
            parse_grid(bad)
