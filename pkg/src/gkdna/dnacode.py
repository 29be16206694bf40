"""DNA code constraints, weight enumerators and bound records.

Reverse and reverse-complement minima use the *exclude-coincident-pairs*
convention: a pair ``(x, y)`` with ``x^r == y`` (resp. ``x^rc == y``) is left
out of the minimisation.  Those are exactly the pairs at distance 0, so each
minimum is the smallest *positive* distance between the transformed code and
the code.

For a linear code closed under reversal the scans collapse:

* ``{x^r - y}`` is the whole code, so the RV minimum is the minimum weight;
* ``x^c = x + 1`` (all-ones vector), so ``x^rc - y`` runs over ``z + 1`` for
  ``z`` in the code and the RC minimum is the least positive weight of ``z + 1``.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Union

import numpy as np

from . import linalg
from .construct import is_reversible
from .field import DnaWord, array_to_dna, dna_array, gc_weight
from .linalg import LinearCode, check_cap, iter_packed, pack, popcount, unpack

CONSTRAINTS = ("HD", "RV", "RC", "GC")
CONVENTION = "exclude-coincident-pairs"
DEFAULT_PAIR_CAP = 4**7


def parse_constraints(spec: Union[str, Iterable[str]]) -> frozenset:
    items = spec.split(",") if isinstance(spec, str) else list(spec)
    out = frozenset(s.strip().upper() for s in items if s.strip())
    bad = out - set(CONSTRAINTS)
    if bad or not out:
        raise ValueError(f"constraints must be a non-empty subset of {','.join(CONSTRAINTS)}; got {sorted(bad)}")
    return out


def format_constraints(cs) -> str:
    return ",".join(c for c in CONSTRAINTS if c in cs)


@dataclass(frozen=True)
class DnaCode:
    length: int
    words: frozenset

    def __post_init__(self):
        words = frozenset(DnaWord(w) for w in self.words)
        if any(len(w) != self.length for w in words):
            raise ValueError(f"all words must have length {self.length}")
        object.__setattr__(self, "words", words)

    @classmethod
    def from_words(cls, words: Iterable[str]) -> "DnaCode":
        words = [DnaWord(w) for w in words]
        if not words:
            raise ValueError("a DNA code needs at least one word")
        return cls(len(words[0]), frozenset(words))

    @classmethod
    def from_linear(cls, code: LinearCode, cap: Optional[int] = None) -> "DnaCode":
        return cls(code.length, frozenset(array_to_dna(linalg.codeword_array(code, cap))))

    def __len__(self):
        return len(self.words)

    def sorted_words(self) -> list:
        return sorted(self.words)

    @cached_property
    def array(self) -> np.ndarray:
        if not self.words:
            return np.zeros((0, self.length), dtype=np.uint8)
        return dna_array(self.sorted_words())


@dataclass(frozen=True)
class WeightEnumerator:
    """``counts`` maps an exponent tuple to the number of codewords.

    Complete enumerators use ``(n_0, n_1, n_w, n_w2)`` exponents of
    ``a, b, c, d``; GC enumerators use ``(n - gc, gc)`` for ``a, b``.
    """

    kind: str
    counts: dict

    def total(self) -> int:
        return sum(self.counts.values())

    def __call__(self, *xs):
        return sum(c * int(np.prod([x**e for x, e in zip(xs, exps)])) for exps, c in self.counts.items())

    def gc_specialization(self) -> "WeightEnumerator":
        if self.kind != "complete":
            raise ValueError("only a complete enumerator specialises to a GC enumerator")
        out = Counter()
        for (n0, n1, nw, nw2), c in self.counts.items():
            out[(n0 + n1, nw + nw2)] += c
        return WeightEnumerator("gc", dict(out))

    def __str__(self):
        letters = "abcd" if self.kind == "complete" else "ab"
        terms = []
        for exps in sorted(self.counts, reverse=True):
            c = self.counts[exps]
            mono = "".join(
                (v if e == 1 else f"{v}^{e}") for v, e in zip(letters, exps) if e
            )
            terms.append(f"{c}{mono}" if c != 1 or not mono else mono)
        return " + ".join(terms) if terms else "0"


# -- linear-code scans ----------------------------------------------------------

@dataclass
class CodeStats:
    """One enumeration pass over a linear code; merged per chunk, order free."""

    size: int
    min_weight: Optional[int]
    min_weight_word: Optional[np.ndarray]
    rc_fast: Optional[int]  # least positive weight of z + 1
    rc_fast_word: Optional[np.ndarray]
    gc_hist: np.ndarray  # gc_hist[i] = words with GC-weight i


def scan(code: LinearCode, cap: Optional[int] = None) -> CodeStats:
    check_cap(code, cap)
    n = code.length
    ones_lo, _ = pack(np.ones((1, n), dtype=np.uint8))
    mw = rc = None
    mw_word = rc_word = None
    hist = np.zeros(n + 1, dtype=np.int64)
    for _, lo, hi in iter_packed(code, cap):
        wt = popcount(lo | hi)
        wt = np.where(wt == 0, n + 1, wt)
        i = int(np.argmin(wt))
        if wt[i] <= n and (mw is None or wt[i] < mw):
            mw, mw_word = int(wt[i]), unpack(lo[i], hi[i], n)[0]
        wr = popcount((lo ^ ones_lo) | hi)
        wr = np.where(wr == 0, n + 1, wr)
        i = int(np.argmin(wr))
        if wr[i] <= n and (rc is None or wr[i] < rc):
            rc, rc_word = int(wr[i]), unpack(lo[i], hi[i], n)[0]
        hist += np.bincount(popcount(hi), minlength=n + 1)
    return CodeStats(code.size, mw, mw_word, rc, rc_word, hist)


def _is_dna(code) -> bool:
    return isinstance(code, DnaCode)


def cwe(code: Union[LinearCode, DnaCode], cap: Optional[int] = None) -> WeightEnumerator:
    counts = Counter()
    if _is_dna(code):
        chunks = [code.array]
        n = code.length
    else:
        n = code.length
        chunks = (unpack(lo, hi, n) for _, lo, hi in iter_packed(code, cap))
    for a in chunks:
        per = np.stack([(a == s).sum(axis=1) for s in range(4)], axis=1)
        keys, cnt = np.unique(per, axis=0, return_counts=True)
        for kk, c in zip(keys, cnt):
            counts[tuple(int(x) for x in kk)] += int(c)
    return WeightEnumerator("complete", dict(counts))


def gcw(code: Union[LinearCode, DnaCode], cap: Optional[int] = None) -> WeightEnumerator:
    n = code.length
    if _is_dna(code):
        hist = np.bincount([gc_weight(w) for w in code.words], minlength=n + 1)
    else:
        hist = scan(code, cap).gc_hist
    return WeightEnumerator("gc", {(n - i, i): int(c) for i, c in enumerate(hist) if c})


# -- pair scans -----------------------------------------------------------------

def _rc_array(a: np.ndarray) -> np.ndarray:
    return (a ^ 1)[:, ::-1]


def pair_min(xs: np.ndarray, ys: np.ndarray, block: int = 256) -> tuple:
    """Least positive Hamming distance between a row of ``xs`` and a row of ``ys``.

    Returns ``(distance, i, j)`` or ``(None, None, None)`` if every pair coincides.
    """
    xlo, xhi = pack(xs)
    ylo, yhi = pack(ys)
    best = (None, None, None)
    n = xs.shape[1]
    for s in range(0, xlo.shape[0], block):
        d = popcount((xlo[s : s + block, None, :] ^ ylo[None]) | (xhi[s : s + block, None, :] ^ yhi[None]))
        d = np.where(d == 0, n + 1, d)
        flat = int(np.argmin(d))
        i, j = divmod(flat, d.shape[1])
        if d[i, j] <= n and (best[0] is None or d[i, j] < best[0]):
            best = (int(d[i, j]), s + i, j)
    return best


def _words_of(code, cap, pair_cap) -> np.ndarray:
    if _is_dna(code):
        a = code.array
    else:
        check_cap(code, cap)
        a = linalg.codeword_array(code, cap)
    if pair_cap is not None and a.shape[0] > pair_cap:
        raise linalg.CapExceeded(int(np.ceil(np.log(a.shape[0]) / np.log(4))), pair_cap)
    return a


def _resolve_reversible(code, reversible):
    if _is_dna(code):
        return False
    return is_reversible(code) if reversible is None else reversible


def rc_min_distance(code, reversible: Optional[bool] = None, cap: Optional[int] = None,
                    pair_cap: Optional[int] = DEFAULT_PAIR_CAP) -> Optional[int]:
    """Least ``d(x^rc, y)`` over pairs with ``x^rc != y``.

    ``reversible=None`` tests a linear code for closure under reversal; a
    reversible linear code takes the single-pass route.
    """
    if _resolve_reversible(code, reversible):
        return scan(code, cap).rc_fast
    a = _words_of(code, cap, pair_cap)
    return pair_min(_rc_array(a), a)[0]


def rv_min_distance(code, reversible: Optional[bool] = None, cap: Optional[int] = None,
                    pair_cap: Optional[int] = DEFAULT_PAIR_CAP) -> Optional[int]:
    """Least ``d(x^r, y)`` over pairs with ``x^r != y``."""
    if _resolve_reversible(code, reversible):
        return linalg.min_weight(code, cap) if code.rank else None
    a = _words_of(code, cap, pair_cap)
    return pair_min(a[:, ::-1], a)[0]


def gc_subset(code, w: int, cap: Optional[int] = None) -> DnaCode:
    if _is_dna(code):
        return DnaCode(code.length, frozenset(x for x in code.words if gc_weight(x) == w))
    n = code.length
    keep = []
    for _, lo, hi in iter_packed(code, cap):
        sel = popcount(hi) == w
        if sel.any():
            keep.extend(array_to_dna(unpack(lo[sel], hi[sel], n)))
    return DnaCode(n, frozenset(keep))


# -- verification ---------------------------------------------------------------

@dataclass
class ConstraintResult:
    name: str
    passed: bool
    value: Optional[int] = None
    witness: Optional[tuple] = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "value": self.value,
            "witness": list(self.witness) if self.witness else None,
            "detail": self.detail,
        }


@dataclass
class VerifyReport:
    length: int
    size: int
    d: int
    w: Optional[int]
    constraints: frozenset
    results: dict = field(default_factory=dict)
    method: str = "pairs"
    convention: str = CONVENTION

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def value(self, name: str) -> Optional[int]:
        r = self.results.get(name)
        return r.value if r else None

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "size": self.size,
            "d": self.d,
            "w": self.w,
            "constraints": format_constraints(self.constraints),
            "passed": self.passed,
            "method": self.method,
            "convention": self.convention,
            "results": {k: self.results[k].to_dict() for k in CONSTRAINTS if k in self.results},
        }

    def lines(self) -> list:
        out = [f"length {self.length}  size {self.size}  d {self.d}  w {self.w}  [{self.convention}]"]
        for k in CONSTRAINTS:
            if k in self.results:
                r = self.results[k]
                s = f"{k}: {'PASS' if r.passed else 'FAIL'}"
                if r.value is not None:
                    s += f"  min {r.value}"
                if r.witness and not r.passed:
                    s += f"  witness {' '.join(r.witness)}"
                if r.detail:
                    s += f"  ({r.detail})"
                out.append(s)
        return out


def _distance_result(name, d, found, xs_words, ys_words):
    dist, i, j = found
    if dist is None:
        return ConstraintResult(name, True, None, None, "no non-coincident pairs")
    wit = (xs_words[i], ys_words[j])
    return ConstraintResult(name, dist >= d, dist, wit)


def verify(code: DnaCode, d: int, constraints, w: Optional[int] = None) -> VerifyReport:
    """Check HD/RV/RC/GC on an explicit DNA word set by exhaustive pair scans."""
    cs = parse_constraints(constraints)
    n = code.length
    if "GC" in cs and w is None:
        w = n // 2
    words = code.sorted_words()
    a = code.array
    rep = VerifyReport(n, len(code), d, w, cs)
    if "HD" in cs:
        rep.results["HD"] = _distance_result("HD", d, pair_min(a, a), words, words)
    if "RV" in cs:
        rep.results["RV"] = _distance_result("RV", d, pair_min(a[:, ::-1], a), words, words)
    if "RC" in cs:
        rep.results["RC"] = _distance_result("RC", d, pair_min(_rc_array(a), a), words, words)
    if "GC" in cs:
        bad = [x for x in words if gc_weight(x) != w]
        detail = f"{len(bad)} words off GC-weight {w}" if bad else ("empty code" if not words else "")
        rep.results["GC"] = ConstraintResult("GC", bool(words) and not bad, None,
                                             tuple(bad[:2]) if bad else None, detail)
    return rep


def verify_linear(code: LinearCode, d: int, constraints, w: Optional[int] = None,
                  cap: Optional[int] = None, pair_cap: Optional[int] = DEFAULT_PAIR_CAP,
                  stats: Optional[CodeStats] = None) -> VerifyReport:
    """Verify ``eta(code)``, or its GC-weight-``w`` subcode when GC is requested.

    A reversible code is checked in one pass over the linear code.  A subcode
    only loses pairs, so the parent minima bound the subcode minima from
    below; a subcode of at most ``pair_cap`` words is rescanned exactly.
    """
    cs = parse_constraints(constraints)
    n = code.length
    if "GC" in cs and w is None:
        w = n // 2
    if not is_reversible(code):
        if code.size > (pair_cap or 0):
            raise ValueError("code is not reversible and too large for a pair scan")
        target = DnaCode.from_linear(code, cap)
        if "GC" in cs:
            target = gc_subset(target, w)
        return verify(target, d, cs, w)
    st = stats if stats is not None else scan(code, cap)
    if "GC" in cs:
        size = int(st.gc_hist[w]) if 0 <= w <= n else 0
        if 0 < size <= (pair_cap or 0):
            exact = verify(gc_subset(code, w, cap), d, cs, w)
            exact.method = "linear+pairs"
            return exact
    rep = VerifyReport(n, code.size, d, w, cs, method="linear")
    if code.rank == 0:
        hd = ConstraintResult("HD", True, None, None, "single word")
        rv = ConstraintResult("RV", True, None, None, "single word")
    else:
        word = array_to_dna(st.min_weight_word)[0]
        hd = ConstraintResult("HD", st.min_weight >= d, st.min_weight, ("A" * n, word))
        rv = ConstraintResult("RV", st.min_weight >= d, st.min_weight, None, "equals minimum weight")
    # x = 0 has x^rc = all-ones, so d(x^rc, z) = wt(z + 1)
    wit = ("A" * n, array_to_dna(st.rc_fast_word)[0]) if st.rc_fast_word is not None else None
    rc = ConstraintResult("RC", st.rc_fast is None or st.rc_fast >= d, st.rc_fast, wit,
                          "least positive weight of z + 1")
    for r in (hd, rv, rc):
        if r.name in cs:
            rep.results[r.name] = r
    if "GC" in cs:
        rep.size = size
        rep.results["GC"] = ConstraintResult("GC", size > 0, None, None, f"{size} words of GC-weight {w}")
        for name in ("HD", "RV", "RC"):
            if name in rep.results:
                rep.results[name].detail = "lower bound from the parent linear code"
    return rep


# -- bound records ---------------------------------------------------------------

@dataclass
class BoundRecord:
    """A lower bound on the size of a DNA code with the stated constraints."""

    n: int  # code length
    d: int
    w: Optional[int]
    constraints: frozenset
    size: int
    provenance: dict
    k: Optional[int] = None  # dimension of the linear code
    min_weight: Optional[int] = None
    rc_distance: Optional[int] = None
    rv_distance: Optional[int] = None

    def __post_init__(self):
        self.constraints = parse_constraints(self.constraints)
        if self.size < 1:
            raise ValueError("a bound record needs size >= 1")
        if self.w is not None and "GC" not in self.constraints:
            raise ValueError("w given without the GC constraint")

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "w": self.w,
            "constraints": format_constraints(self.constraints),
            "size": self.size,
            "rc_distance": self.rc_distance,
            "rv_distance": self.rv_distance,
            "min_weight": self.min_weight,
            "convention": CONVENTION,
            # A^RC(n, d) = A^R(n, d) holds for even n
            "rc_rv_bounds_coincide": self.n % 2 == 0,
            "provenance": self.provenance,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "BoundRecord":
        return cls(
            n=d["n"], d=d["d"], w=d.get("w"), constraints=parse_constraints(d["constraints"]),
            size=d["size"], provenance=d["provenance"], k=d.get("k"),
            min_weight=d.get("min_weight"), rc_distance=d.get("rc_distance"),
            rv_distance=d.get("rv_distance"),
        )
