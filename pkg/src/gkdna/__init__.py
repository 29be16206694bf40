"""Reversible G^k-codes over GF(4) from group matrix rings, and the DNA codes they give."""

__version__ = "0.1.0"
