"""Exact invariant measures of cylinder sets for primitive substitutions.

The unique invariant measure of a primitive substitution subshift assigns to
every cylinder a value determined by three layers:

* letter frequencies: the normalized Perron-Frobenius eigenvector of the
  incidence matrix;
* two-letter measures: the unique solution of the linear fixed-point system
  transferring mass from interior and boundary occurrences inside images;
* longer words: the de-substitution recursion
  ``mu([w]) = (1/lambda) * sum over interpretations s of mu([ancestor(s)])``
  which terminates because ancestors are strictly shorter once every image
  has length at least two.

Exact (big-rational) arithmetic is available exactly when the substitution
has constant length, so the eigenvalue is the integer image length; all other
primitive substitutions are served in float mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ExactModeUnavailable, NotPrimitiveError, RejectedInput
from .language import LanguageTable, get_language
from .morphisms import Morphism, require_primitive
from .words import Word, occurrences

Scalar = Fraction | float

EXACT = "exact"
FLOAT = "float"

_GUARD_CAP = 64


@dataclass(frozen=True)
class Interpretation:
    """Pre-image description of a word: sigma(ancestor) with ``front_cut``
    letters removed at the front and ``back_cut`` at the back."""

    ancestor: Word
    front_cut: int
    back_cut: int


def _solve_linear(matrix: list[list[Scalar]], rhs: list[Scalar]) -> list[Scalar]:
    """Gaussian elimination with partial pivoting; exact over Fractions."""
    n = len(matrix)
    a = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(a[r][col]))
        if a[pivot][col] == 0:
            raise RejectedInput("singular linear system (non-primitive or degenerate input)")
        a[col], a[pivot] = a[pivot], a[col]
        inv = a[col][col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col] / inv
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


def _pf_exact_constant(matrix, length: int) -> list[Fraction]:
    """Kernel of (M - length*I) over the rationals, normalized to sum 1."""
    d = len(matrix)
    rows = [[Fraction(matrix[b][a]) - (Fraction(length) if a == b else 0) for a in range(d)] for b in range(d)]
    # Replace one dependent equation by the normalization sum(v) = 1.
    rows[-1] = [Fraction(1)] * d
    rhs = [Fraction(0)] * (d - 1) + [Fraction(1)]
    solution = _solve_linear(rows, rhs)
    if any(x <= 0 for x in solution):
        raise NotPrimitiveError("Perron-Frobenius vector is not positive")
    return solution


def _pf_float(matrix) -> tuple[float, list[float]]:
    """Dominant eigenpair by power iteration to sup-norm tolerance 1e-13."""
    d = len(matrix)
    vector = [1.0 / d] * d
    value = 0.0
    for _ in range(100_000):
        image = [sum(matrix[b][a] * vector[a] for a in range(d)) for b in range(d)]
        total = sum(image)
        if total == 0:
            raise NotPrimitiveError("incidence matrix is not primitive")
        fresh = [x / total for x in image]
        if max(abs(x - y) for x, y in zip(fresh, vector)) < 1e-13:
            return total, fresh
        vector, value = fresh, total
    return value, vector


class MeasureTable:
    """Memoized cylinder measures ``word -> scalar`` for one substitution.

    Population of a missing entry is idempotent (the recursion is
    deterministic), so the memo may be shared across threads in a
    session-confined way; concurrent reads are always safe.
    """

    def __init__(self, sigma: Morphism, mode: str = "auto"):
        profile = require_primitive(sigma)
        self.substitution = sigma
        if mode == "auto":
            mode = EXACT if profile.constant_length is not None else FLOAT
        if mode == EXACT and profile.constant_length is None:
            raise ExactModeUnavailable("exact mode requires a constant length substitution")
        if mode not in (EXACT, FLOAT):
            raise RejectedInput(f"unknown mode {mode!r}")
        self.mode = mode
        # Termination guard: pass to a power so every image has >= 2 letters,
        # making every ancestor strictly shorter than its descendant.  The
        # subshift and its measure are unchanged.
        guarded = sigma
        power = 1
        while guarded.min_image_length < 2:
            if power > _GUARD_CAP or guarded.norm == 1:
                raise RejectedInput("image lengths do not grow; degenerate substitution")
            guarded = sigma.power(power + 1)
            power += 1
        self.morphism = guarded
        self.power = power
        self.language: LanguageTable = get_language(sigma)
        matrix = guarded.incidence_matrix()
        if self.mode == EXACT:
            self.lam: Scalar = Fraction(guarded.constant_length)
            self.frequencies: tuple[Scalar, ...] = tuple(
                _pf_exact_constant(matrix, guarded.constant_length)
            )
        else:
            lam, vec = _pf_float(matrix)
            self.lam = lam
            self.frequencies = tuple(vec)
        self.two_word: dict[Word, Scalar] = self._solve_two_word()
        self._memo: dict[Word, Scalar] = {}

    # -- base layers ------------------------------------------------------

    def _zero(self) -> Scalar:
        return Fraction(0) if self.mode == EXACT else 0.0

    def _solve_two_word(self) -> dict[Word, Scalar]:
        """Fixed-point system for length-2 cylinders.

        For the guarded substitution, a length-2 word occurs in an image
        either fully inside the image of one ancestor letter or straddling
        the boundary between two consecutive images; both transfers are
        linear, and the resulting system lambda*x - N2*x = N1*freq has a
        unique solution because the spectral radius of the boundary transfer
        is at most 1 < lambda.
        """
        sigma = self.morphism
        pairs = sorted(self.language.words_of_length(2))
        index = {w: i for i, w in enumerate(pairs)}
        n = len(pairs)
        zero = self._zero()
        one = Fraction(1) if self.mode == EXACT else 1.0
        matrix = [[zero for _ in range(n)] for _ in range(n)]
        rhs = [zero for _ in range(n)]
        for w, i in index.items():
            matrix[i][i] = self.lam * one
            for c in range(sigma.source.size):
                count = occurrences(w, sigma.images[c])
                if count:
                    rhs[i] = rhs[i] + count * self.frequencies[c]
        for cd, j in index.items():
            c, d = cd
            straddle = (sigma.images[c][-1], sigma.images[d][0])
            i = index.get(straddle)
            if i is None:
                raise RejectedInput("language is not closed under the substitution")
            matrix[i][j] = matrix[i][j] - one
        solution = _solve_linear(matrix, rhs)
        return {w: solution[i] for w, i in index.items()}

    # -- interpretations and the recursion ---------------------------------

    def interpretations(self, word: Word) -> frozenset[Interpretation]:
        return interpretations(self.morphism, word, self.language)

    def measure(self, word: Word) -> Scalar:
        """Measure of the cylinder of ``word``; 0 off the language."""
        if len(word) == 0:
            return Fraction(1) if self.mode == EXACT else 1.0
        if not self.in_language(word):
            return self._zero()
        if len(word) == 1:
            return self.frequencies[word[0]]
        if len(word) == 2:
            return self.two_word[word]
        cached = self._memo.get(word)
        if cached is None:
            total = self._zero()
            for interp in self.interpretations(word):
                total = total + self.measure(interp.ancestor)
            cached = total / self.lam
            self._memo[word] = cached
        return cached

    def in_language(self, word: Word) -> bool:
        return word in self.language


@lru_cache(maxsize=32)
def _cached_table(sigma: Morphism, mode: str) -> MeasureTable:
    return MeasureTable(sigma, mode)


def build_measure_table(sigma: Morphism, mode: str = "auto") -> MeasureTable:
    """Shared measure table per substitution and mode."""
    if mode == "auto":
        mode = EXACT if sigma.constant_length is not None else FLOAT
    return _cached_table(sigma, mode)


def letter_frequencies(sigma: Morphism, mode: str = "auto") -> tuple[Scalar, ...]:
    return build_measure_table(sigma, mode).frequencies


def two_word_measures(sigma: Morphism, mode: str = "auto") -> dict[Word, Scalar]:
    return dict(build_measure_table(sigma, mode).two_word)


def interpretations(sigma: Morphism, word: Word, language: LanguageTable | None = None) -> frozenset[Interpretation]:
    """All pre-image descriptions (ancestor, front cut, back cut) of ``word``.

    Enumerated by de-substitution: fix the first ancestor letter and the
    front cut, then greedily match successive images against the word,
    branching over every continuation letter whose image matches; a final
    letter absorbs the remainder and fixes the back cut.  Ancestors must be
    language words.
    """
    if len(word) == 0:
        raise RejectedInput("interpretations require a nonempty word")
    if language is None:
        language = get_language(sigma)
    if word not in language:
        raise RejectedInput("word is not in the language")
    found: set[Interpretation] = set()
    d = sigma.source.size

    def extend(ancestor: list[int], remaining: Word, front_cut: int) -> None:
        for letter in range(d):
            image = sigma.images[letter]
            candidate = ancestor + [letter]
            if len(image) >= len(remaining):
                if image[: len(remaining)] == remaining:
                    full = tuple(candidate)
                    if full in language:
                        found.add(Interpretation(full, front_cut, len(image) - len(remaining)))
            elif remaining[: len(image)] == image:
                if tuple(candidate) in language:
                    extend(candidate, remaining[len(image) :], front_cut)

    for first in range(d):
        image = sigma.images[first]
        for cut in range(len(image)):
            tail = image[cut:]
            if len(tail) >= len(word):
                if tail[: len(word)] == word and (first,) in language:
                    found.add(Interpretation((first,), cut, len(image) - cut - len(word)))
            elif word[: len(tail)] == tail:
                extend([first], word[len(tail) :], cut)
    return frozenset(found)


def cylinder_measure(table: MeasureTable, word: Word) -> Scalar:
    return table.measure(word)


def prefix_word(sigma: Morphism, letter: int = 0, min_length: int = 1) -> bytes:
    """Iterated image ``sigma^k(letter)`` as bytes, grown until ``min_length``."""
    if sigma.source.size > 255:
        raise RejectedInput("prefix expansion supports alphabets up to 255 letters")
    images = [bytes(img) for img in sigma.images]
    word = bytes([letter])
    while len(word) < min_length:
        grown = b"".join(images[a] for a in word)
        if len(grown) == len(word):
            raise RejectedInput("image lengths do not grow; degenerate substitution")
        word = grown
    return word


@lru_cache(maxsize=8)
def _cached_prefix(sigma: Morphism, letter: int, depth: int) -> bytes:
    images = [bytes(img) for img in sigma.images]
    word = bytes([letter])
    for _ in range(depth):
        word = b"".join(images[a] for a in word)
    return word


def empirical_frequency(sigma: Morphism, word: Word, depth: int, letter: int = 0) -> float:
    """Sliding-window frequency of ``word`` in ``sigma^depth(letter)``.

    Independent of the exact engine; by unique ergodicity of primitive
    aperiodic substitutions this converges to the cylinder measure.
    """
    require_primitive(sigma)
    text = _cached_prefix(sigma, letter, depth)
    if len(text) < len(word):
        raise RejectedInput("expansion depth yields a prefix shorter than the word")
    pattern = bytes(word)
    count = 0
    start = text.find(pattern)
    while start != -1:
        count += 1
        start = text.find(pattern, start + 1)
    return count / (len(text) - len(word) + 1)


def empirical_block_frequencies(
    sigma: Morphism,
    max_length: int,
    depth: int,
    letter: int = 0,
    truncate: int | None = None,
) -> dict[Word, float]:
    """Frequencies of every block up to ``max_length`` in one expansion pass.

    ``truncate`` counts over the first so-many letters of the expansion only;
    the finite-size bias of a prefix oscillates with its length (driven by the
    subdominant eigenvalue), so a caller chasing a tight tolerance can pick a
    prefix length where the bias is small instead of a full iterate.
    """
    from collections import Counter

    text = _cached_prefix(sigma, letter, depth)
    if truncate is not None:
        if truncate > len(text):
            raise RejectedInput("truncation exceeds the generated prefix")
        text = text[:truncate]
    out: dict[Word, float] = {}
    for n in range(1, max_length + 1):
        windows = len(text) - n + 1
        counts = Counter(text[i : i + n] for i in range(windows))
        for block, count in counts.items():
            out[tuple(block)] = count / windows
    return out
