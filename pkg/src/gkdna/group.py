"""Finite groups given by Cayley tables over a fixed element listing.

Element ids are the integers ``0..n-1`` in listing order, so matrices built
from a group index rows and columns by listing position.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np


@dataclass(frozen=True, eq=False)
class GroupSpec:
    cayley: np.ndarray  # cayley[i, j] = index of g_i * g_j
    identity_index: int = 0
    names: Optional[tuple] = None

    def __post_init__(self):
        t = np.array(self.cayley, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise ValueError("Cayley table must be a non-empty square array")
        t.setflags(write=False)
        object.__setattr__(self, "cayley", t)
        if self.names is not None:
            if len(self.names) != t.shape[0]:
                raise ValueError("one name per element required")
            object.__setattr__(self, "names", tuple(self.names))

    @property
    def order(self) -> int:
        return self.cayley.shape[0]

    def mul(self, i: int, j: int) -> int:
        return int(self.cayley[i, j])

    def inverse(self, i: int) -> int:
        return int(np.argmax(self.cayley[i] == self.identity_index))

    def inverses(self) -> np.ndarray:
        return np.argmax(self.cayley == self.identity_index, axis=1)

    def name(self, i: int) -> str:
        return self.names[i] if self.names else f"g{i + 1}"

    def quotient_table(self) -> np.ndarray:
        """``Q[i, j]`` = index of ``g_i^{-1} g_j``."""
        return self.cayley[self.inverses()]

    def relabel(self, perm: Sequence[int]) -> "GroupSpec":
        """The same group listed as ``g'_i = g_{perm[i]}``."""
        perm = np.asarray(perm, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(self.order)):
            raise ValueError("listing must contain each element exactly once")
        pos = np.empty_like(perm)
        pos[perm] = np.arange(perm.size)
        table = pos[self.cayley[np.ix_(perm, perm)]]
        names = tuple(self.names[p] for p in perm) if self.names else None
        return GroupSpec(table, int(pos[self.identity_index]), names)

    def __eq__(self, other):
        return (
            isinstance(other, GroupSpec)
            and self.identity_index == other.identity_index
            and np.array_equal(self.cayley, other.cayley)
        )

    def __hash__(self):
        return hash((self.cayley.tobytes(), self.identity_index))


@dataclass(frozen=True)
class ReversibleListing:
    """A group listed as ``e, h_1..h_{l-1}, beta h_{l-1}, ..., beta h_1, beta``."""

    group: GroupSpec
    subgroup_indices: tuple
    beta_index: int


@dataclass
class GroupReport:
    latin_square: bool
    identity: bool
    inverses: bool
    associative: Optional[bool]  # None when the order is too large to check
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.latin_square and self.identity and self.inverses and self.associative is not False


def validate_group(g: GroupSpec, assoc_limit: int = 64) -> GroupReport:
    t = g.cayley
    n = g.order
    failures = []
    want = np.arange(n)
    in_range = bool(((t >= 0) & (t < n)).all())
    latin = in_range and all(
        np.array_equal(np.sort(t[i]), want) and np.array_equal(np.sort(t[:, i]), want)
        for i in range(n)
    )
    if not latin:
        failures.append("Cayley table is not a Latin square")
    e = g.identity_index
    ident = 0 <= e < n and np.array_equal(t[e], want) and np.array_equal(t[:, e], want)
    if not ident:
        failures.append(f"element {e} is not a two-sided identity")
    inv = ident and all((t[i] == e).any() and (t[:, i] == e).any() for i in range(n))
    if not inv:
        failures.append("some element lacks an inverse")
    assoc = None
    if n <= assoc_limit and in_range:
        # (g_i g_j) g_k == g_i (g_j g_k) for all i, j, k
        left = t[t[:, :, None], np.arange(n)[None, None, :]]
        right = t[np.arange(n)[:, None, None], t[None, :, :]]
        assoc = bool(np.array_equal(left, right))
        if not assoc:
            failures.append("multiplication is not associative")
    return GroupReport(latin, ident, inv, assoc, failures)


def cyclic(n: int) -> GroupSpec:
    if n < 1:
        raise ValueError("cyclic group needs n >= 1")
    i = np.arange(n)
    names = ("e",) + tuple("g" if r == 1 else f"g^{r}" for r in range(1, n))
    return GroupSpec((i[:, None] + i[None, :]) % n, 0, names)


def dihedral_listed(p: int) -> GroupSpec:
    """D_{2p} = <a, b | a^p = b^2 = e, aba = b^-1> listed as
    ``e, a, ..., a^{p-1}, b a^{p-1}, ..., b a, b``."""
    if p < 1:
        raise ValueError("dihedral group needs p >= 1")
    # element b^s a^r stored as (s, r)
    elems = [(0, r) for r in range(p)] + [(1, p - 1 - j) for j in range(p)]
    index = {x: i for i, x in enumerate(elems)}
    n = 2 * p
    table = np.empty((n, n), dtype=np.int64)
    for i, (s, r) in enumerate(elems):
        for j, (t, q) in enumerate(elems):
            # a^r b^t = b^t a^{(-1)^t r}
            table[i, j] = index[((s + t) % 2, ((-r if t else r) + q) % p)]

    def nm(s, r):
        a = "" if r == 0 else ("a" if r == 1 else f"a^{r}")
        return ("b" + a) if s else (a or "e")

    return GroupSpec(table, 0, tuple(nm(s, r) for s, r in elems))


def is_reversible_listing(g: GroupSpec) -> bool:
    """True if ``g`` is listed per the reversible ordering with beta = g_n."""
    n = g.order
    if n % 2 or g.identity_index != 0:
        return False
    beta = n - 1
    t = g.cayley
    if t[beta, beta] != 0:
        return False
    if any(t[beta, i] != n - 1 - i for i in range(n)):
        return False
    half = t[: n // 2, : n // 2]
    return bool((half < n // 2).all())


def build_reversible_listing(g: GroupSpec, subgroup: Sequence[int], beta: int) -> ReversibleListing:
    """Relist ``g`` as ``e, h_1, ..., h_{l-1}, beta h_{l-1}, ..., beta h_1, beta``.

    ``subgroup`` gives H in the desired order; the identity is moved to the
    front if it is not already there.
    """
    n = g.order
    e = g.identity_index
    h = list(dict.fromkeys(int(x) for x in subgroup))
    if len(h) != len(subgroup):
        raise ValueError("subgroup listing repeats an element")
    if 2 * len(h) != n:
        raise ValueError(f"subgroup must have index 2 (size {n // 2}), got size {len(h)}")
    hs = set(h)
    if e not in hs:
        raise ValueError("subgroup must contain the identity")
    if any(g.mul(x, y) not in hs for x in h for y in h):
        raise ValueError("subgroup is not closed under the group operation")
    if beta in hs:
        raise ValueError("beta must lie outside the subgroup")
    if g.mul(beta, beta) != e:
        raise ValueError("beta must be self-inverse")
    h.remove(e)
    h.insert(0, e)
    listing = h + [g.mul(beta, x) for x in reversed(h)]
    relisted = g.relabel(listing)
    return ReversibleListing(relisted, tuple(range(n // 2)), n - 1)


def parse_group(text: str) -> GroupSpec:
    """Group file: ``n``, then ``n`` rows of the Cayley table, then the identity index."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty group file")
    try:
        n = int(lines[0][0])
        if len(lines[0]) != 1 or n < 1:
            raise ValueError
        rows = [[int(x) for x in ln] for ln in lines[1 : n + 1]]
        if len(lines) != n + 2 or len(lines[-1]) != 1:
            raise ValueError
        e = int(lines[-1][0])
    except (ValueError, IndexError):
        raise ValueError("malformed group file") from None
    if any(len(r) != n for r in rows):
        raise ValueError("Cayley table rows must have n entries")
    g = GroupSpec(np.array(rows), e)
    report = validate_group(g)
    if not report.ok:
        raise ValueError("invalid group: " + "; ".join(report.failures))
    return g


def format_group(g: GroupSpec) -> str:
    rows = "".join(" ".join(str(x) for x in row) + "\n" for row in g.cayley)
    return f"{g.order}\n{rows}{g.identity_index}\n"
