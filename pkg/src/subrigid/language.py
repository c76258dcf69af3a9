"""Languages of substitution subshifts and ultimately periodic directive sequences.

The language of a primitive substitution is generated by a fixed-point
closure over bounded windows: the set of length-W factors of iterated images
is closed under "apply the substitution and re-extract windows", and every
shorter language word is a factor of some window.  This avoids materializing
exponentially long iterated images.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import NotPrimitiveError, PeriodicInputError, RejectedInput
from .morphisms import Morphism, classify, compose, require_primitive
from .words import Word, is_complete

DEFAULT_N_MAX = 64


class LanguageTable:
    """Per-length factor sets of a primitive substitution subshift.

    Construction is single-writer (growth happens inside ``ensure``); lookups
    on a populated table are read-only and safe to share.
    """

    def __init__(self, sigma: Morphism, n_max: int = 0):
        require_primitive(sigma)
        self.sigma = sigma
        self.closure_iterations = 0
        self._windows: set[Word] = set()
        self._window_length = 0
        self._by_length: dict[int, frozenset[Word]] = {}
        if n_max:
            self.ensure(n_max)

    # -- construction ---------------------------------------------------

    def ensure(self, n: int) -> None:
        """Guarantee that factor sets up to length ``n`` are available."""
        if n < 1:
            raise RejectedInput("length must be positive")
        window = n + 2 * self.sigma.norm
        if window <= self._window_length:
            return
        self._windows = self._closure(window)
        self._window_length = window
        self._by_length.clear()

    def _closure(self, window: int) -> set[Word]:
        sigma = self.sigma
        if sigma.norm == 1:
            # Letter-to-letter substitution: the language is the letters only.
            return {(a,) for a in range(sigma.source.size)}
        seeds = [(a,) for a in range(sigma.source.size)]
        while min(len(w) for w in seeds) < window:
            seeds = [sigma.apply(w) for w in seeds]
        windows: set[Word] = set()
        for seed in seeds:
            windows.update(seed[i : i + window] for i in range(len(seed) - window + 1))
        frontier = set(windows)
        iterations = 0
        while frontier:
            iterations += 1
            fresh: set[Word] = set()
            for w in frontier:
                image = sigma.apply(w)
                for i in range(len(image) - window + 1):
                    piece = image[i : i + window]
                    if piece not in windows:
                        windows.add(piece)
                        fresh.add(piece)
            frontier = fresh
        self.closure_iterations = iterations
        return windows

    # -- queries ---------------------------------------------------------

    def words_of_length(self, n: int) -> frozenset[Word]:
        self.ensure(n)
        cached = self._by_length.get(n)
        if cached is None:
            found: set[Word] = set()
            for w in self._windows:
                found.update(w[i : i + n] for i in range(len(w) - n + 1))
            cached = frozenset(found)
            self._by_length[n] = cached
        return cached

    def __contains__(self, word: Word) -> bool:
        if len(word) == 0:
            return True
        return word in self.words_of_length(len(word))

    def complexity(self, n: int) -> int:
        return len(self.words_of_length(n))

    def complete_count(self, n: int) -> int:
        return sum(1 for w in self.words_of_length(n) if is_complete(w))


@lru_cache(maxsize=64)
def get_language(sigma: Morphism) -> LanguageTable:
    """Shared language table per substitution (idempotent; growth is lazy)."""
    return LanguageTable(sigma)


@dataclass(frozen=True)
class ComplexityProfile:
    """Word counts p(n), complete-word counts q(n) and their ratio."""

    p: tuple[int, ...]
    q: tuple[int, ...]

    def ratio(self, n: int):
        from fractions import Fraction

        return Fraction(self.q[n - 1], self.p[n - 1])


def complexity_profile(sigma: Morphism, n_max: int) -> ComplexityProfile:
    table = get_language(sigma)
    table.ensure(n_max)
    return ComplexityProfile(
        p=tuple(table.complexity(n) for n in range(1, n_max + 1)),
        q=tuple(table.complete_count(n) for n in range(1, n_max + 1)),
    )


APERIODIC_EVIDENCE = "aperiodic_evidence"
PERIODIC = "periodic"
INCONCLUSIVE = "inconclusive"


def aperiodicity_check(sigma: Morphism, n_max: int = 12) -> str:
    """Heuristic aperiodicity verdict from the complexity function.

    A non-increasing step p(n+1) <= p(n) forces every word of that length to
    be uniquely extendable, hence a periodic subshift; strict growth up to
    ``n_max`` is evidence of aperiodicity, never a proof.
    """
    if n_max < 2:
        return INCONCLUSIVE
    profile = complexity_profile(sigma, n_max)
    for n in range(n_max - 1):
        if profile.p[n + 1] <= profile.p[n]:
            return PERIODIC
    return APERIODIC_EVIDENCE


def require_aperiodic(sigma: Morphism, n_max: int = 12) -> None:
    if aperiodicity_check(sigma, n_max) == PERIODIC:
        raise PeriodicInputError("substitution generates a periodic subshift")


@dataclass(frozen=True)
class ReturnWords:
    """Occurrence-aligned return words to ``base``: segments from one
    occurrence of the base word to just before the next occurrence."""

    base: Word
    words: frozenset[Word]
    certified: bool
    window: int


def _returns_in(words: frozenset[Word], base: Word) -> set[Word]:
    found: set[Word] = set()
    n = len(base)
    for w in words:
        hits = [i for i in range(len(w) - n + 1) if w[i : i + n] == base]
        for i, j in zip(hits, hits[1:]):
            found.add(w[i:j])
    return found


def return_words(sigma: Morphism, base: Word, max_window: int = 4096) -> ReturnWords:
    """Return words to ``base`` in the substitution subshift.

    For a single letter b with |sigma(a)|_b > 0 for every a, return words are
    at most 2*norm - 1 long, so one scan over windows of length 2*norm + 1 is
    provably complete; when some image misses b the same bound is applied to
    a power of the substitution (same subshift), as long as the power's
    window stays affordable.  Otherwise the scan window doubles until two
    consecutive windows agree; that result is flagged uncertified.
    """
    table = get_language(sigma)
    if len(base) == 0:
        raise RejectedInput("return words require a nonempty word")
    if base not in table:
        raise RejectedInput("word is not in the language")
    if len(base) == 1:
        bounding = sigma
        for _ in range((sigma.source.size - 1) ** 2 + 1):
            matrix = bounding.incidence_matrix()
            if all(matrix[base[0]][a] > 0 for a in range(sigma.source.size)):
                window = 2 * bounding.norm + 1
                if window <= max_window:
                    found = _returns_in(table.words_of_length(window), base)
                    return ReturnWords(base, frozenset(found), certified=True, window=window)
                break
            bounding = compose(sigma, bounding)
    window = max(4 * sigma.norm, 4 * len(base))
    found = _returns_in(table.words_of_length(window), base)
    while window * 2 <= max_window:
        window *= 2
        wider = _returns_in(table.words_of_length(window), base)
        if wider == found:
            return ReturnWords(base, frozenset(found), certified=False, window=window)
        found = wider
    return ReturnWords(base, frozenset(found), certified=False, window=window)


@dataclass(frozen=True)
class DirectiveSequence:
    """Ultimately periodic directive sequence: a finite prefix followed by a
    finite block of morphisms repeated forever.

    Level n carries the morphism sigma_n mapping level-(n+1) words to level-n
    words; consecutive alphabets must be compatible, including the wrap-around
    of the repeated tail.  A single substitution is the empty prefix plus a
    one-element tail.
    """

    prefix: tuple[Morphism, ...]
    tail: tuple[Morphism, ...]
    _level_cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.tail) == 0:
            raise RejectedInput("directive sequence needs a nonempty repeated tail")
        chain = list(self.prefix) + list(self.tail)
        for left, right in zip(chain, chain[1:]):
            if left.source != right.target:
                raise RejectedInput("consecutive morphisms have incompatible alphabets")
        if self.tail[-1].source != self.tail[0].target:
            raise RejectedInput("repeated tail does not close up on its alphabets")

    def morphism(self, n: int) -> Morphism:
        if n < len(self.prefix):
            return self.prefix[n]
        return self.tail[(n - len(self.prefix)) % len(self.tail)]

    @property
    def prefix_length(self) -> int:
        return len(self.prefix)

    def level_substitution(self, n: int) -> Morphism:
        """One-period composition starting at level n (requires n >= prefix length).

        The level-n subshift of an ultimately periodic sequence is the
        substitution subshift of this composition.
        """
        if n < len(self.prefix):
            raise RejectedInput("level substitution only exists at tail levels")
        rotation = (n - len(self.prefix)) % len(self.tail)
        if rotation not in self._level_cache:
            composed = self.morphism(n)
            for step in range(1, len(self.tail)):
                composed = compose(composed, self.morphism(n + step))
            self._level_cache[rotation] = composed
        return self._level_cache[rotation]

    def check_primitive(self) -> None:
        profile = classify(self.level_substitution(self.prefix_length))
        if not profile.primitive:
            raise NotPrimitiveError("tail composition is not primitive")

    def is_constant_lengths(self) -> bool:
        return all(m.constant_length is not None for m in self.prefix + self.tail)


def constant_sequence(sigma: Morphism) -> DirectiveSequence:
    if not sigma.is_endomorphism:
        raise RejectedInput("a constant directive sequence requires a substitution")
    return DirectiveSequence(prefix=(), tail=(sigma,))


@dataclass(frozen=True)
class LevelLanguage:
    """Finite snapshot of a level language (used below the tail levels)."""

    by_length: dict[int, frozenset[Word]]

    def words_of_length(self, n: int) -> frozenset[Word]:
        if n not in self.by_length:
            raise RejectedInput(f"level language was generated up to length {max(self.by_length)}")
        return self.by_length[n]

    def __contains__(self, word: Word) -> bool:
        return len(word) == 0 or word in self.words_of_length(len(word))


def sadic_language(sequence: DirectiveSequence, level: int, n_max: int = DEFAULT_N_MAX):
    """Level-n language of an ultimately periodic directive sequence.

    Tail levels reuse the substitution machinery for the one-period
    composition.  For levels inside the prefix, the language consists of the
    bounded factors of the images of deep-level words under the composition
    down to the requested level; ancestors of length <= n_max suffice because
    every image has at least one letter per ancestor letter.
    """
    sequence.check_primitive()
    p = sequence.prefix_length
    if level >= p:
        table = get_language(sequence.level_substitution(level))
        table.ensure(n_max)
        return table
    deep = sadic_language(sequence, p, n_max)
    composed = sequence.morphism(level)
    for n in range(level + 1, p):
        composed = compose(composed, sequence.morphism(n))
    collected: dict[int, set[Word]] = {n: set() for n in range(1, n_max + 1)}
    for v in deep.words_of_length(n_max):
        image = composed.apply(v)
        for n in range(1, n_max + 1):
            collected[n].update(image[i : i + n] for i in range(len(image) - n + 1))
    return LevelLanguage({n: frozenset(ws) for n, ws in collected.items()})
