"""Group ring matrices and the block generator of a reversible G^k-code.

For a group ``G = {g_1..g_n}`` and ``v = sum a_i g_i`` the group matrix
``sigma(v)`` has entry ``(i, j) = a at g_i^-1 g_j``.  The generator for a
coefficient grid replaces each entry with the ``k x k`` matrix
``sigma(v_h)`` of a block group ring element, giving a ``kn x kn`` matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linalg
from .field import MUL, Gf4Vector, parse_matrix, format_matrix
from .group import GroupSpec, dihedral_listed, is_reversible_listing


@dataclass(frozen=True, eq=False)
class GroupRingElement:
    group: GroupSpec
    coeffs: Gf4Vector  # coefficient of g_i at position i

    def __post_init__(self):
        object.__setattr__(self, "coeffs", Gf4Vector(self.coeffs))
        if len(self.coeffs) != self.group.order:
            raise ValueError("need one coefficient per group element")

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        """Convolution: the coefficient of g_k is the sum over g_i g_j = g_k of a_i b_j."""
        if other.group != self.group:
            raise ValueError("elements of different group rings")
        n = self.group.order
        out = np.zeros(n, dtype=np.uint8)
        a, b = self.coeffs.entries, other.coeffs.entries
        for i in range(n):
            for j in range(n):
                out[self.group.mul(i, j)] ^= MUL[a[i], b[j]]
        return GroupRingElement(self.group, Gf4Vector(out))


@dataclass(frozen=True, eq=False)
class CoefficientGrid:
    """Row ``i`` holds the coefficients of ``v_{g_i}`` in the block group listing."""

    outer: GroupSpec
    block: GroupSpec
    grid: np.ndarray

    def __post_init__(self):
        g = np.array(self.grid, dtype=np.uint8)
        if g.shape != (self.outer.order, self.block.order):
            raise ValueError(f"grid must be {self.outer.order} x {self.block.order}, got {g.shape}")
        if g.size and g.max() > 3:
            raise ValueError("GF(4) encodings must lie in 0..3")
        g.setflags(write=False)
        object.__setattr__(self, "grid", g)

    @property
    def n(self) -> int:
        return self.outer.order

    @property
    def k(self) -> int:
        return self.block.order

    def replace(self, grid: np.ndarray) -> "CoefficientGrid":
        return CoefficientGrid(self.outer, self.block, grid)

    def __eq__(self, other):
        return (
            isinstance(other, CoefficientGrid)
            and self.outer == other.outer
            and self.block == other.block
            and np.array_equal(self.grid, other.grid)
        )

    def __hash__(self):
        return hash(self.grid.tobytes())


@dataclass(frozen=True, eq=False)
class GeneratorMatrix:
    entries: np.ndarray  # (k*n, k*n)
    n: int
    k: int

    def block(self, i: int, j: int) -> np.ndarray:
        k = self.k
        return self.entries[i * k : (i + 1) * k, j * k : (j + 1) * k]

    def block_row(self, i: int) -> np.ndarray:
        return self.entries[i * self.k : (i + 1) * self.k]


def dihedral_grid(rows) -> CoefficientGrid:
    """Grid over dihedral outer and block groups, both in the reversible listing."""
    g = np.array([Gf4Vector(r).entries for r in rows], dtype=np.uint8)
    n, k = g.shape
    if n % 2 or k % 2:
        raise ValueError(f"dihedral grid needs even n and k, got {n} x {k}")
    return CoefficientGrid(dihedral_listed(n // 2), dihedral_listed(k // 2), g)


def sigma(v: GroupRingElement) -> np.ndarray:
    return v.coeffs.entries[v.group.quotient_table()]


def circulant(row) -> np.ndarray:
    row = np.asarray(Gf4Vector(row).entries)
    m = row.size
    idx = (np.arange(m)[None, :] - np.arange(m)[:, None]) % m
    return row[idx]


def dihedral_block(row) -> np.ndarray:
    """``[[A, B], [B^T, A^T]]`` with ``A = circ(first half)``, ``B = circ(second half)``."""
    row = Gf4Vector(row).entries
    k = row.size
    if k % 2:
        raise ValueError(f"dihedral block needs even length, got {k}")
    m = k // 2
    a, b = circulant(row[:m]), circulant(row[m:])
    return np.block([[a, b], [b.T, a.T]])


def _listing_ok(g: GroupSpec) -> bool:
    return g.order == 1 or is_reversible_listing(g)


def build_generator(cg: CoefficientGrid, check_listing: bool = True) -> GeneratorMatrix:
    """Flatten the block matrix whose ``(i, j)`` block is ``sigma(v at g_i^-1 g_j)``."""
    if check_listing:
        for what, g in (("outer", cg.outer), ("block", cg.block)):
            if not _listing_ok(g):
                raise ValueError(f"{what} group is not in a reversible listing")
    n, k = cg.n, cg.k
    blocks = cg.grid[:, cg.block.quotient_table()]  # (n, k, k): sigma(v_h) for each h
    big = blocks[cg.outer.quotient_table()]  # (n, n, k, k)
    return GeneratorMatrix(big.transpose(0, 2, 1, 3).reshape(n * k, n * k), n, k)


def generator_code(gm: GeneratorMatrix) -> linalg.LinearCode:
    return linalg.reduce(gm.entries)


def check_row_reversibility(gm, basis: Optional[linalg.LinearCode] = None) -> bool:
    """True iff the reverse of every generator row lies in the row space."""
    m = gm.entries if isinstance(gm, GeneratorMatrix) else np.atleast_2d(np.asarray(gm, np.uint8))
    code = basis if basis is not None else linalg.reduce(m)
    return linalg.contains_all(code, m[:, ::-1])


def is_reversible(code: linalg.LinearCode) -> bool:
    """Closure of a linear code under coordinate reversal."""
    if code.rank == 0:
        return True
    return linalg.contains_all(code, code.basis[:, ::-1])


def check_block_reversibility(gm: GeneratorMatrix, basis: Optional[linalg.LinearCode] = None) -> bool:
    """Each block row read with its blocks in reverse order lies in the span.

    Over a field, membership in the left ``M_k``-span of the block rows is the
    same as every scalar row of the block-reversed row lying in the row space.
    """
    code = basis if basis is not None else linalg.reduce(gm.entries)
    n, k = gm.n, gm.k
    rows = gm.entries.reshape(n * k, n, k)[:, ::-1, :].reshape(n * k, n * k)
    return linalg.contains_all(code, rows)


def block_permutation(g: GroupSpec, x: int, side: str = "right") -> np.ndarray:
    """``perm[i]`` = index of ``g_i x`` (right) or ``x g_i`` (left)."""
    if side == "right":
        return g.cayley[:, x].copy()
    if side == "left":
        return g.cayley[x, :].copy()
    raise ValueError("side must be 'left' or 'right'")


def group_action_invariance(gm: GeneratorMatrix, outer: GroupSpec, x: int, side: str = "right",
                            basis: Optional[linalg.LinearCode] = None) -> bool:
    """Does moving coordinate block ``i`` to block ``perm[i]`` preserve the code?"""
    code = basis if basis is not None else linalg.reduce(gm.entries)
    n, k = gm.n, gm.k
    perm = block_permutation(outer, x, side)
    blocks = code.basis.reshape(code.rank, n, k)
    moved = np.empty_like(blocks)
    moved[:, perm, :] = blocks
    return linalg.contains_all(code, moved.reshape(code.rank, n * k)) if code.rank else True


def invariance_report(gm: GeneratorMatrix, outer: GroupSpec) -> dict:
    """Check every element under both left and right block translations."""
    code = linalg.reduce(gm.entries)
    return {
        side: all(group_action_invariance(gm, outer, x, side, code) for x in range(outer.order))
        for side in ("right", "left")
    }


# -- grid text format --------------------------------------------------------

def format_grid(cg: CoefficientGrid) -> str:
    return f"{cg.n} {cg.k}\n" + format_matrix(cg.grid)


def parse_grid_rows(text: str) -> np.ndarray:
    """Parse ``"n k"`` followed by ``n`` lines of ``k`` symbols."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty grid file")
    head = lines[0].split()
    try:
        n, k = (int(x) for x in head)
    except ValueError:
        raise ValueError(f"grid header must be 'n k', got {lines[0]!r}") from None
    if n < 1 or k < 1:
        raise ValueError("grid dimensions must be positive")
    if len(lines) - 1 != n:
        raise ValueError(f"grid header says {n} rows, found {len(lines) - 1}")
    g = parse_matrix("\n".join(lines[1:]))
    if g.shape != (n, k):
        raise ValueError(f"grid rows must have {k} symbols")
    return g


def parse_grid(text: str, outer: Optional[GroupSpec] = None, block: Optional[GroupSpec] = None) -> CoefficientGrid:
    g = parse_grid_rows(text)
    n, k = g.shape
    if outer is None:
        if n % 2:
            raise ValueError(f"default dihedral outer group needs even n, got {n}")
        outer = dihedral_listed(n // 2)
    if block is None:
        if k % 2:
            raise ValueError(f"default dihedral block group needs even k, got {k}")
        block = dihedral_listed(k // 2)
    return CoefficientGrid(outer, block, g)
