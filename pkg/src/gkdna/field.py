"""GF(4) arithmetic, vectors over GF(4) and the DNA alphabet correspondence.

Symbols are encoded in two bits, ``value = lo + hi*w`` with ``w**2 = w + 1``::

    0 -> 0b00    1 -> 0b01    w -> 0b10    w^2 -> 0b11

so field addition is XOR.  The encoding is an implementation detail; callers
should go through :class:`Gf4`, :class:`Gf4Vector` and the helpers here.
"""

from __future__ import annotations

from typing import Iterable, Union

import numpy as np

# value encodings
ZERO, ONE, W, W2 = 0, 1, 2, 3

MUL = np.array(
    [
        [0, 0, 0, 0],
        [0, 1, 2, 3],
        [0, 2, 3, 1],
        [0, 3, 1, 2],
    ],
    dtype=np.uint8,
)
INV = np.array([0, 1, 3, 2], dtype=np.uint8)  # INV[0] unused

SYMBOLS = "01wW"
DNA = "ATCG"  # eta(0)=A, eta(1)=T, eta(w)=C, eta(w^2)=G
_DNA_INDEX = {c: i for i, c in enumerate(DNA)}
_SYMBOL_INDEX = {c: i for i, c in enumerate(SYMBOLS)}
_DNA_LUT = np.frombuffer(DNA.encode(), dtype=np.uint8)
_WC = str.maketrans("ACGT", "TGCA")


class Gf4:
    """An element of GF(4) = {0, 1, w, w^2}."""

    __slots__ = ("value",)

    def __init__(self, value: int):
        value = int(value)
        if not 0 <= value < 4:
            raise ValueError(f"not a GF(4) encoding: {value}")
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("Gf4 is immutable")

    @classmethod
    def parse(cls, s: str) -> "Gf4":
        try:
            return cls(_SYMBOL_INDEX[s])
        except KeyError:
            raise ValueError(f"bad GF(4) symbol {s!r}; expected one of 0 1 w W") from None

    def __add__(self, other: "Gf4") -> "Gf4":
        return Gf4(self.value ^ other.value)

    __sub__ = __add__

    def __mul__(self, other: "Gf4") -> "Gf4":
        return Gf4(MUL[self.value, other.value])

    def inverse(self) -> "Gf4":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in GF(4)")
        return Gf4(INV[self.value])

    def __eq__(self, other):
        return isinstance(other, Gf4) and self.value == other.value

    def __hash__(self):
        return hash(("Gf4", self.value))

    def __repr__(self):
        return f"Gf4({SYMBOLS[self.value]!r})"

    def __str__(self):
        return SYMBOLS[self.value]


ELEMENTS = tuple(Gf4(v) for v in range(4))


def gf4_add(a: Gf4, b: Gf4) -> Gf4:
    return a + b


def gf4_mul(a: Gf4, b: Gf4) -> Gf4:
    return a * b


class Gf4Vector:
    """Immutable fixed-length vector over GF(4).

    Backed by a read-only ``uint8`` array of encodings (see module docstring);
    ``entries`` exposes it for vectorised code.
    """

    __slots__ = ("_a",)

    def __init__(self, entries: Union[Iterable, np.ndarray]):
        if isinstance(entries, Gf4Vector):
            a = entries._a
        else:
            if not isinstance(entries, np.ndarray):
                entries = [x.value if isinstance(x, Gf4) else x for x in entries]
            a = np.asarray(entries, dtype=np.int64)
            if a.size and (a.min() < 0 or a.max() > 3):
                raise ValueError("GF(4) encodings must lie in 0..3")
            a = a.astype(np.uint8)
        if a.ndim != 1 or a.size == 0:
            raise ValueError("a Gf4Vector needs a positive length")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "_a", a)

    def __setattr__(self, name, value):
        raise AttributeError("Gf4Vector is immutable")

    @classmethod
    def parse(cls, text: str) -> "Gf4Vector":
        """Parse whitespace-separated symbols from {0, 1, w, W}."""
        toks = text.split()
        if not toks:
            raise ValueError("empty GF(4) vector")
        return cls([Gf4.parse(t).value for t in toks])

    @classmethod
    def zeros(cls, n: int) -> "Gf4Vector":
        return cls(np.zeros(n, dtype=np.uint8))

    @classmethod
    def ones(cls, n: int) -> "Gf4Vector":
        return cls(np.ones(n, dtype=np.uint8))

    @property
    def entries(self) -> np.ndarray:
        return self._a

    def __len__(self):
        return self._a.size

    def __getitem__(self, i) -> Gf4:
        return Gf4(self._a[i])

    def __iter__(self):
        return (Gf4(v) for v in self._a)

    def __add__(self, other: "Gf4Vector") -> "Gf4Vector":
        _check_len(self, other)
        return Gf4Vector(self._a ^ other._a)

    __sub__ = __add__

    def scale(self, a: Gf4) -> "Gf4Vector":
        return Gf4Vector(MUL[a.value, self._a])

    def reversed(self) -> "Gf4Vector":
        return Gf4Vector(self._a[::-1])

    def weight(self) -> int:
        return int(np.count_nonzero(self._a))

    def __eq__(self, other):
        return isinstance(other, Gf4Vector) and np.array_equal(self._a, other._a)

    def __hash__(self):
        return hash(self._a.tobytes())

    def __str__(self):
        return " ".join(SYMBOLS[v] for v in self._a)

    def __repr__(self):
        return f"Gf4Vector('{self}')"


class DnaWord(str):
    """An uppercase word over {A, C, G, T}.

    Lowercase or any other byte is rejected rather than normalised.
    """

    def __new__(cls, s: str):
        if isinstance(s, DnaWord):
            return s
        if not s or any(c not in _DNA_INDEX for c in s):
            raise ValueError(f"not a DNA word over ACGT: {s!r}")
        return super().__new__(cls, s)


def _check_len(u, v):
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} != {len(v)}")


def to_dna(v: Gf4Vector) -> DnaWord:
    return DnaWord(_DNA_LUT[np.asarray(Gf4Vector(v).entries)].tobytes().decode())


def from_dna(w: str) -> Gf4Vector:
    w = DnaWord(w)
    return Gf4Vector([_DNA_INDEX[c] for c in w])


def dna_array(words: Iterable[str]) -> np.ndarray:
    """Stack equal-length DNA words into an ``(N, n)`` array of GF(4) encodings."""
    words = [DnaWord(w) for w in words]
    if not words:
        return np.zeros((0, 0), dtype=np.uint8)
    n = len(words[0])
    if any(len(w) != n for w in words):
        raise ValueError("DNA words differ in length")
    raw = np.frombuffer("".join(words).encode(), dtype=np.uint8).reshape(len(words), n)
    lut = np.zeros(256, dtype=np.uint8)
    for c, i in _DNA_INDEX.items():
        lut[ord(c)] = i
    return lut[raw]


def array_to_dna(rows: np.ndarray) -> list:
    rows = np.atleast_2d(rows)
    return [DnaWord(_DNA_LUT[r].tobytes().decode()) for r in rows]


def reverse(w: str) -> DnaWord:
    return DnaWord(DnaWord(w)[::-1])


def complement(w: str) -> DnaWord:
    return DnaWord(DnaWord(w).translate(_WC))


def reverse_complement(w: str) -> DnaWord:
    return DnaWord(DnaWord(w).translate(_WC)[::-1])


def hamming(u, v) -> int:
    """Number of coordinates where ``u`` and ``v`` differ.

    Works on two :class:`Gf4Vector` or two DNA words of the same length.
    """
    _check_len(u, v)
    if isinstance(u, Gf4Vector) and isinstance(v, Gf4Vector):
        return int(np.count_nonzero(u.entries != v.entries))
    if isinstance(u, str) and isinstance(v, str):
        return sum(a != b for a, b in zip(DnaWord(u), DnaWord(v)))
    raise TypeError("hamming needs two Gf4Vectors or two DNA words")


def gc_weight(w: str) -> int:
    w = DnaWord(w)
    return w.count("C") + w.count("G")


# -- text formats ----------------------------------------------------------

def format_matrix(m: np.ndarray) -> str:
    """Rows of whitespace-separated symbols, newline-terminated."""
    m = np.atleast_2d(np.asarray(m))
    return "".join(" ".join(SYMBOLS[v] for v in row) + "\n" for row in m)


def parse_matrix(text: str) -> np.ndarray:
    rows = [Gf4Vector.parse(line).entries for line in text.splitlines() if line.strip()]
    if not rows:
        raise ValueError("empty matrix")
    if len({r.size for r in rows}) != 1:
        raise ValueError("matrix rows differ in length")
    return np.array(rows, dtype=np.uint8)


def format_dna_words(words: Iterable[str]) -> str:
    return "".join(DnaWord(w) + "\n" for w in words)


def parse_dna_words(text: str) -> list:
    """Parse one uppercase ACGT word per line.

    Blank lines are rejected, as is trailing whitespace.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ValueError("no DNA words")
    out = []
    for lineno, line in enumerate(lines, 1):
        try:
            out.append(DnaWord(line))
        except ValueError:
            raise ValueError(f"line {lineno}: not an uppercase ACGT word: {line!r}") from None
    return out
