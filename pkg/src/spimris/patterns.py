"""Spatial pattern books: path-subset enumeration, bit maps, selection matrices.

Patterns are stored 0-indexed; prose and docs count paths from 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .errors import ContractViolation, DomainError

__all__ = [
    "PatternBook",
    "build_pattern_book",
    "bits_to_pattern",
    "pattern_to_bits",
    "selection_matrix",
]


@dataclass(frozen=True)
class PatternBook:
    """Ordered list of the S retained path subsets, each of size L_S."""

    num_paths: int
    paths_per_pattern: int
    patterns: tuple[tuple[int, ...], ...]
    _index: dict = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "_index", {p: i for i, p in enumerate(self.patterns)}
        )

    @property
    def size(self) -> int:
        return len(self.patterns)

    @property
    def bits_per_pattern(self) -> int:
        return self.size.bit_length() - 1

    def index_of(self, subset: tuple[int, ...]) -> int | None:
        """Book index of a subset, or None when the subset was not retained."""
        return self._index.get(tuple(sorted(subset)))


def build_pattern_book(
    l_paths: int, l_select: int, gains: np.ndarray | None = None
) -> PatternBook:
    """Enumerate S = 2^floor(log2(C(L, L_S))) spatial patterns.

    By default the lexicographically first S subsets are retained. When
    `gains` (per-path amplitudes) is given, the S subsets with the largest
    total |gain|^2 are retained instead and then re-sorted lexicographically.
    """
    if l_select < 1 or l_select > l_paths:
        raise DomainError(f"need 1 <= L_S <= L, got L_S={l_select}, L={l_paths}")
    total = comb(l_paths, l_select)
    s = 1 << (total.bit_length() - 1)
    all_subsets = list(combinations(range(l_paths), l_select))
    if gains is None:
        kept = all_subsets[:s]
    else:
        g2 = np.abs(np.asarray(gains)) ** 2
        if g2.shape != (l_paths,):
            raise ContractViolation("gains must have one entry per path")
        order = sorted(range(total), key=lambda k: (-sum(g2[i] for i in all_subsets[k]), k))
        kept = sorted(all_subsets[k] for k in order[:s])
    return PatternBook(l_paths, l_select, tuple(kept))


def bits_to_pattern(book: PatternBook, bits: str) -> int:
    """Map an MSB-first bit string of length log2(S) to a pattern index."""
    if len(bits) != book.bits_per_pattern or any(b not in "01" for b in bits):
        raise ContractViolation(
            f"expected {book.bits_per_pattern} bits, got {bits!r}"
        )
    return int(bits, 2) if bits else 0


def pattern_to_bits(book: PatternBook, index: int) -> str:
    """Inverse of bits_to_pattern."""
    if not 0 <= index < book.size:
        raise ContractViolation(f"pattern index {index} out of range")
    width = book.bits_per_pattern
    return format(index, f"0{width}b") if width else ""


def selection_matrix(book: PatternBook, index: int) -> np.ndarray:
    """L x L_S binary matrix whose columns are the identity columns of the subset."""
    if not 0 <= index < book.size:
        raise ContractViolation(f"pattern index {index} out of range")
    e = np.zeros((book.num_paths, book.paths_per_pattern))
    for col, path in enumerate(book.patterns[index]):
        e[path, col] = 1.0
    return e
