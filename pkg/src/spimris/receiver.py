"""SPIM pattern detection from per-path receive-beamformer strengths."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import UlaSpec, ula_steering
from .errors import ContractViolation
from .patterns import PatternBook, pattern_to_bits

__all__ = [
    "PatternLookup",
    "DetectionResult",
    "build_pattern_lookup",
    "detect_pattern",
    "index_bit_error_rate",
]


@dataclass(frozen=True)
class PatternLookup:
    """Per-path receive beamformers shared by transmitter and receiver."""

    receive_vectors: np.ndarray  # (Nbar, L), constant-modulus columns

    @property
    def num_paths(self) -> int:
        return int(self.receive_vectors.shape[1])


@dataclass(frozen=True)
class DetectionResult:
    subset: tuple[int, ...]
    pattern_index: int
    bits: str
    in_book: bool
    correct: bool | None = None
    true_bits: str | None = None


def build_pattern_lookup(ue: UlaSpec, ue_angles_deg) -> PatternLookup:
    """Receive vectors are the conjugate user-side steering vectors."""
    cols = [ula_steering(ue, a).conj() for a in ue_angles_deg]
    return PatternLookup(np.stack(cols, axis=1))


def _nearest_pattern(book: PatternBook, subset: tuple[int, ...]) -> int:
    """Most-overlapping book pattern; lexicographic (book-order) tie-break."""
    target = set(subset)
    overlaps = [len(target.intersection(p)) for p in book.patterns]
    return int(np.argmax(overlaps))


def detect_pattern(
    y: np.ndarray,
    lookup: PatternLookup,
    book: PatternBook,
    true_pattern: int | None = None,
) -> DetectionResult:
    """Detect the active pattern from nu_l = |c_l^H y| / Nbar.

    The L_S largest strengths name the detected subset (ties resolve to the
    lower path index); a subset outside the book maps to the nearest book
    pattern by overlap, then lexicographic order.
    """
    if lookup.num_paths != book.num_paths:
        raise ContractViolation("lookup path count must match the book")
    nu = np.abs(lookup.receive_vectors.conj().T @ y) / lookup.receive_vectors.shape[0]
    order = np.argsort(-nu, kind="stable")
    subset = tuple(sorted(int(i) for i in order[: book.paths_per_pattern]))
    idx = book.index_of(subset)
    in_book = idx is not None
    if idx is None:
        idx = _nearest_pattern(book, subset)
    return DetectionResult(
        subset=subset,
        pattern_index=idx,
        bits=pattern_to_bits(book, idx),
        in_book=in_book,
        correct=None if true_pattern is None else idx == true_pattern,
        true_bits=None if true_pattern is None else pattern_to_bits(book, true_pattern),
    )


def index_bit_error_rate(results: list[DetectionResult], book: PatternBook) -> float:
    """Fraction of wrong index bits against the stored truth flags' patterns.

    Bit errors are counted between each result's bits and the bits of the
    pattern it should have carried; results must have been produced with
    true_pattern set. A book with S = 1 carries zero bits, giving rate 0.
    """
    if not results:
        raise ContractViolation("no detection results")
    width = book.bits_per_pattern
    if width == 0:
        return 0.0
    wrong = 0
    for res in results:
        if res.true_bits is None:
            raise ContractViolation("results must carry ground truth")
        wrong += sum(a != b for a, b in zip(res.bits, res.true_bits))
    return wrong / (width * len(results))
