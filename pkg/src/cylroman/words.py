"""Correct words: column labelings of the cylinder over the alphabet a, b, c, d.

Letters encode one vertex each: ``a`` has value 2, ``b`` value 1, ``c`` is a
0-vertex already dominated (from its own column or the previous one) and
``d`` a 0-vertex that still needs the next column. A word is correct when no
two vertically adjacent letters form ``ad``, ``da``, ``ab``, ``ba`` or ``bb``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ALPHABET = "abcd"
A, B, C, D = range(4)
FORBIDDEN_PAIRS = frozenset({"ad", "da", "ab", "ba", "bb"})

STANDARD = "standard"
BORDER = "border"
VARIANTS = (STANDARD, BORDER)
BORDER_HEIGHT = 4

# allowed successor letters below each letter, in alphabet order
_NEXT = {x: [y for y in ALPHABET if x + y not in FORBIDDEN_PAIRS] for x in ALPHABET}


def is_correct(word: str) -> bool:
    return all(c in ALPHABET for c in word) and not any(word[i : i + 2] in FORBIDDEN_PAIRS for i in range(len(word) - 1))


def letter_counts(word: str) -> tuple[int, int]:
    """Number of ``a`` and ``b`` letters."""
    return word.count("a"), word.count("b")


@dataclass(frozen=True)
class WordTable:
    m: int
    variant: str
    words: tuple[str, ...]
    index: dict = field(repr=False, compare=False)

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def codes(self) -> np.ndarray:
        """Letters as a ``(len, m)`` uint8 array with a=0 .. d=3."""
        if not self.words:
            return np.zeros((0, self.m), dtype=np.uint8)
        raw = np.frombuffer("".join(self.words).encode("ascii"), dtype=np.uint8)
        return (raw - ord("a")).reshape(len(self.words), self.m)

    def packed(self) -> np.ndarray:
        """Each word packed as 2-bit letter codes, most significant letter first."""
        weights = 4 ** np.arange(self.m - 1, -1, -1, dtype=np.int64)
        return self.codes().astype(np.int64) @ weights

    def dump(self) -> str:
        return "".join(w + "\n" for w in self.words)


def generate_words(m: int, variant: str = STANDARD) -> WordTable:
    """All correct words of length ``m`` in lexicographic order.

    The border variant always uses length 4 and the same word set.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if variant == BORDER:
        if m not in (None, BORDER_HEIGHT):
            raise ValueError(f"border variant has fixed length {BORDER_HEIGHT}, got m={m}")
        m = BORDER_HEIGHT
    if m < 2:
        raise ValueError(f"word length must be >= 2, got {m}")
    level = list(ALPHABET)
    for _ in range(m - 1):
        level = [w + y for w in level for y in _NEXT[w[-1]]]
    words = tuple(level)
    return WordTable(m=m, variant=variant, words=words, index={w: i for i, w in enumerate(words)})
