"""Linear algebra over GF(4): row reduction, membership and codeword scans.

Codeword enumeration runs on a bit-packed form: each vector is two bit
planes ``lo``/``hi`` (``value = lo + hi*w``) stored as ``uint64`` words.
Addition is XOR on both planes, Hamming weight is ``popcount(lo | hi)``.
Enumeration order is an odometer over coefficient tuples with the last
basis row varying fastest, so any range split of the index space gives the
same merged result.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .field import INV, MUL, Gf4Vector

DEFAULT_CAP = 4**12
CAP_ENV = "GKDNA_ENUM_CAP"
_INNER_ROWS = 9  # 4**9 words per chunk


class CapExceeded(ValueError):
    """Raised when an operation would enumerate more than ``cap`` codewords."""

    def __init__(self, rank: int, cap: int):
        self.rank = rank
        self.cap = cap
        super().__init__(f"code of rank {rank} has 4**{rank} = {4**rank} words, above the enumeration cap {cap}")


def default_cap() -> int:
    v = os.environ.get(CAP_ENV)
    return int(v) if v else DEFAULT_CAP


@dataclass(frozen=True, eq=False)
class LinearCode:
    """A linear code given by a basis in reduced row-echelon form."""

    length: int
    basis: np.ndarray  # (rank, length) uint8, RREF

    @property
    def rank(self) -> int:
        return self.basis.shape[0]

    @property
    def size(self) -> int:
        return 4**self.rank

    @property
    def pivots(self) -> list:
        return [int(np.argmax(row != 0)) for row in self.basis]

    def __eq__(self, other):
        return (
            isinstance(other, LinearCode)
            and self.length == other.length
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.length, self.basis.tobytes()))


def as_matrix(rows) -> np.ndarray:
    if isinstance(rows, np.ndarray):
        m = rows
    else:
        rows = list(rows)
        m = np.array([r.entries if isinstance(r, Gf4Vector) else r for r in rows], dtype=np.uint8)
    m = np.atleast_2d(np.asarray(m, dtype=np.uint8))
    if m.size and m.max() > 3:
        raise ValueError("GF(4) encodings must lie in 0..3")
    return m


def reduce(matrix, length: Optional[int] = None) -> LinearCode:
    """Row-reduce ``matrix`` to the RREF basis of its row space.

    An empty matrix gives the rank-0 code; ``length`` must then be supplied.
    """
    if isinstance(matrix, (list, tuple)) and len(matrix) == 0:
        if length is None:
            raise ValueError("length required for an empty matrix")
        return LinearCode(length, np.zeros((0, length), dtype=np.uint8))
    m = as_matrix(matrix).copy()
    if length is not None and m.shape[1] != length:
        raise ValueError(f"rows have length {m.shape[1]}, expected {length}")
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + nz[0]
        if p != r:
            m[[r, p]] = m[[p, r]]
        m[r] = MUL[INV[m[r, c]], m[r]]
        f = m[:, c].copy()
        f[r] = 0
        hit = np.nonzero(f)[0]
        if hit.size:
            m[hit] ^= MUL[f[hit][:, None], m[r][None, :]]
        r += 1
    basis = m[:r].copy()
    basis.setflags(write=False)
    return LinearCode(cols, basis)


def residue(code: LinearCode, vectors) -> np.ndarray:
    """Reduce each row of ``vectors`` against the basis; zero rows are members."""
    v = np.atleast_2d(as_matrix(vectors)).copy()
    if v.shape[1] != code.length:
        raise ValueError(f"vector length {v.shape[1]} != code length {code.length}")
    for row, c in zip(code.basis, code.pivots):
        f = v[:, c].copy()
        hit = np.nonzero(f)[0]
        if hit.size:
            v[hit] ^= MUL[f[hit][:, None], row[None, :]]
    return v


def contains(code: LinearCode, v) -> bool:
    if isinstance(v, Gf4Vector):
        v = v.entries
    v = np.asarray(v, dtype=np.uint8)
    if v.ndim != 1:
        raise ValueError("contains expects a single vector")
    return not residue(code, v[None, :]).any()


def contains_all(code: LinearCode, vectors) -> bool:
    return not residue(code, vectors).any()


# -- packed representation --------------------------------------------------

def n_words(length: int) -> int:
    return (length + 63) // 64


def pack(rows: np.ndarray) -> tuple:
    """Pack an ``(N, length)`` array into ``(lo, hi)`` planes of shape ``(N, W)``."""
    rows = np.atleast_2d(np.asarray(rows, dtype=np.uint8))
    n, length = rows.shape
    w = n_words(length)
    pad = np.zeros((n, w * 64), dtype=np.uint8)
    pad[:, :length] = rows
    bits = 1 << np.arange(64, dtype=np.uint64)

    def plane(b):
        return ((b.reshape(n, w, 64).astype(np.uint64)) * bits).sum(axis=2, dtype=np.uint64)

    return plane(pad & 1), plane(pad >> 1)


def unpack(lo: np.ndarray, hi: np.ndarray, length: int) -> np.ndarray:
    lo = np.atleast_2d(lo)
    hi = np.atleast_2d(hi)
    n, w = lo.shape
    shifts = np.arange(64, dtype=np.uint64)
    lb = ((lo[:, :, None] >> shifts) & np.uint64(1)).reshape(n, w * 64)
    hb = ((hi[:, :, None] >> shifts) & np.uint64(1)).reshape(n, w * 64)
    return (lb + 2 * hb).astype(np.uint8)[:, :length]


def _scalar_multiples(lo: np.ndarray, hi: np.ndarray) -> tuple:
    """Planes of ``0*x, 1*x, w*x, w^2*x`` stacked on a new axis 0."""
    z = np.zeros_like(lo)
    los = np.stack([z, lo, hi, lo ^ hi])
    his = np.stack([z, hi, lo ^ hi, lo])
    return los, his


def popcount(a: np.ndarray) -> np.ndarray:
    """Per-row popcount summed over the word axis."""
    return np.bitwise_count(a).sum(axis=-1, dtype=np.int64)


def check_cap(code: LinearCode, cap: Optional[int]) -> int:
    cap = default_cap() if cap is None else cap
    if code.size > cap:
        raise CapExceeded(code.rank, cap)
    return cap


def iter_packed(code: LinearCode, cap: Optional[int] = None, start: int = 0, stop: Optional[int] = None) -> Iterator[tuple]:
    """Yield ``(offset, lo, hi)`` chunks covering codeword indices ``[start, stop)``.

    Index ``t`` is the codeword ``sum_i c_i b_i`` where ``c_0 .. c_{r-1}`` are
    the base-4 digits of ``t`` (``c_{r-1}`` least significant).
    """
    check_cap(code, cap)
    r = code.rank
    total = 4**r
    stop = total if stop is None else min(stop, total)
    if start >= stop:
        return
    w = n_words(code.length)
    blo, bhi = pack(code.basis) if r else (np.zeros((0, w), np.uint64),) * 2
    s = min(r, _INNER_ROWS)
    inner = 4**s
    # table of all combinations of the last s basis rows
    tlo = np.zeros((1, w), dtype=np.uint64)
    thi = np.zeros((1, w), dtype=np.uint64)
    for i in range(r - s, r):
        mlo, mhi = _scalar_multiples(blo[i], bhi[i])
        tlo = (tlo[:, None, :] ^ mlo[None, :, :]).reshape(-1, w)
        thi = (thi[:, None, :] ^ mhi[None, :, :]).reshape(-1, w)
    outer_rows = [_scalar_multiples(blo[i], bhi[i]) for i in range(r - s)]
    for block in range(start // inner, (stop - 1) // inner + 1):
        olo = np.zeros(w, dtype=np.uint64)
        ohi = np.zeros(w, dtype=np.uint64)
        t = block
        for i in range(r - s - 1, -1, -1):
            t, digit = divmod(t, 4)
            olo ^= outer_rows[i][0][digit]
            ohi ^= outer_rows[i][1][digit]
        a = max(start - block * inner, 0)
        b = min(stop - block * inner, inner)
        yield block * inner + a, tlo[a:b] ^ olo, thi[a:b] ^ ohi


def codeword(code: LinearCode, index: int) -> Gf4Vector:
    """The codeword at position ``index`` of the enumeration order."""
    if not 0 <= index < code.size:
        raise IndexError(index)
    v = np.zeros(code.length, dtype=np.uint8)
    for i in range(code.rank - 1, -1, -1):
        index, digit = divmod(index, 4)
        v ^= MUL[digit, code.basis[i]]
    return Gf4Vector(v)


def enumerate_codewords(code: LinearCode, cap: Optional[int] = None) -> Iterator[Gf4Vector]:
    """Yield all ``4**rank`` codewords in enumeration order, zero first."""
    for _, lo, hi in iter_packed(code, cap):
        for row in unpack(lo, hi, code.length):
            yield Gf4Vector(row)


def codeword_array(code: LinearCode, cap: Optional[int] = None) -> np.ndarray:
    """All codewords as an ``(4**rank, length)`` array in enumeration order."""
    parts = [unpack(lo, hi, code.length) for _, lo, hi in iter_packed(code, cap)]
    return np.concatenate(parts) if parts else np.zeros((0, code.length), np.uint8)


def min_weight(code: LinearCode, cap: Optional[int] = None) -> int:
    """Minimum weight of a nonzero codeword, i.e. the minimum distance."""
    if code.rank == 0:
        raise ValueError("minimum weight is undefined for the zero code")
    best = code.length
    for _, lo, hi in iter_packed(code, cap):
        wt = popcount(lo | hi)
        nz = wt[wt > 0]
        if nz.size:
            best = min(best, int(nz.min()))
    return best
