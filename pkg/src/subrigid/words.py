"""Finite words over indexed alphabets.

Letters are dense indices ``0..d-1`` throughout the package; display symbols
exist only at the I/O boundary, carried by :class:`Alphabet`.  A word is a
plain tuple of letter indices, so words are immutable, hashable and cheap to
slice.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import RejectedInput

Word = tuple[int, ...]

EMPTY: Word = ()


@dataclass(frozen=True)
class Alphabet:
    """Display symbols for the letters ``0..d-1``."""

    symbols: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.symbols) < 1:
            raise RejectedInput("alphabet must contain at least one symbol")
        if len(set(self.symbols)) != len(self.symbols):
            raise RejectedInput("alphabet symbols must be pairwise distinct")
        if any(s == "" for s in self.symbols):
            raise RejectedInput("alphabet symbols must be nonempty strings")

    @property
    def size(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise RejectedInput(f"unknown symbol {symbol!r}") from None

    def word(self, text: str) -> Word:
        """Parse a display string into a word.

        When every symbol is a single character the string is read character
        by character; otherwise the text must be comma-separated tokens.
        """
        if text == "":
            return EMPTY
        if all(len(s) == 1 for s in self.symbols):
            return tuple(self.index(ch) for ch in text)
        return tuple(self.index(tok) for tok in text.split(","))

    def format(self, word: Word) -> str:
        if all(len(s) == 1 for s in self.symbols):
            return "".join(self.symbols[a] for a in word)
        return ",".join(self.symbols[a] for a in word)


def alphabet_of_size(d: int) -> Alphabet:
    """Default alphabet 0,1,...,d-1."""
    return Alphabet(tuple(str(i) for i in range(d)))


def is_complete(word: Word) -> bool:
    """A word is complete when it has length at least 2 and returns to its first letter."""
    return len(word) >= 2 and word[0] == word[-1]


def abelianize(word: Word, size: int) -> tuple[int, ...]:
    """Letter-count vector of ``word`` over an alphabet of ``size`` letters."""
    counts = [0] * size
    for a in word:
        counts[a] += 1
    return tuple(counts)


def occurrences(pattern: Word, word: Word) -> int:
    """Number of (possibly overlapping) occurrences of ``pattern`` in ``word``."""
    if len(pattern) == 0:
        raise RejectedInput("occurrences of the empty word are not defined")
    n = len(pattern)
    return sum(1 for i in range(len(word) - n + 1) if word[i : i + n] == pattern)


def factors(word: Word, length: int) -> set[Word]:
    """All distinct contiguous subwords of the given length (empty set if too long)."""
    if length <= 0:
        raise RejectedInput("factor length must be positive")
    return {word[i : i + length] for i in range(len(word) - length + 1)}
