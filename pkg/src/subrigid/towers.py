"""Kakutani-Rokhlin tower arithmetic for S-adic subshifts.

The natural partition at level n has one tower per level-n letter, with base
the image under the first n morphisms of that letter cylinder and height the
image length.  A complete word traces a first-return path through the towers;
two complete words are equivalent when their return times (height sums
excluding the last letter) agree.  Masses of the resulting classes are what
the partial rigidity rate optimizes over.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ExactModeUnavailable, RejectedInput
from .language import DirectiveSequence, sadic_language
from .measures import MeasureTable, Scalar, build_measure_table
from .morphisms import column_sums, matmul
from .words import Word, is_complete


def heights(sequence: DirectiveSequence, level: int) -> tuple[int, ...]:
    """Tower heights at a level: image lengths under the composed prefix.

    Level 0 heights are all 1 (the towers are the letter cylinders); at level
    n the height of letter a is the column-a sum of the product of the first
    n incidence matrices, computed exactly over big integers.
    """
    if level < 0:
        raise RejectedInput("level must be nonnegative")
    if level == 0:
        alphabet = sequence.morphism(0).source
        return tuple(1 for _ in range(alphabet.size))
    product = sequence.morphism(0).incidence_matrix()
    for n in range(1, level):
        product = matmul(product, sequence.morphism(n).incidence_matrix())
    return column_sums(product)


def equiv_key(height_vector: tuple[int, ...], word: Word) -> int:
    """Return time of a complete word: heights summed over all but the last letter.

    Equal keys mean the two return paths close up after the same number of
    steps; equal letter counts on all-but-last already force equal keys.
    """
    if not is_complete(word):
        raise RejectedInput("equivalence keys are defined for complete words")
    return sum(height_vector[a] for a in word[:-1])


def level_measure_table(sequence: DirectiveSequence, level: int) -> MeasureTable:
    """Exact measure table of the level subshift.

    Available at tail levels of an ultimately periodic sequence, where the
    level subshift is the substitution subshift of the one-period
    composition; measures below the tail are out of the exact regime.
    """
    if level < sequence.prefix_length:
        raise ExactModeUnavailable(
            "exact level measures exist only at tail levels of an ultimately periodic sequence"
        )
    return build_measure_table(sequence.level_substitution(level))


def subtower_mass(sequence: DirectiveSequence, level: int, word: Word) -> Scalar:
    """Mass of the subtower traced by a word at a level.

    Equals h(first letter) * mu_n([word]) / sum_a h(a) * mu_n([a]) with mu_n
    the induced measure on the level subshift; for constant heights this is
    just mu_n([word]).  Words off the level language get mass 0.
    """
    table = level_measure_table(sequence, level)
    if not table.in_language(word):
        return Fraction(0) if table.mode == "exact" else 0.0
    hs = heights(sequence, level)
    numerator = hs[word[0]] * table.measure(word)
    denominator = sum(hs[a] * table.measure((a,)) for a in range(len(hs)))
    return numerator / denominator


@dataclass(frozen=True)
class ClassMass:
    """Mass of an equivalence class of complete words at one level."""

    level: int
    key: int
    members: tuple[Word, ...]
    mass: Scalar
    complete_enumeration: bool


def class_mass(
    sequence: DirectiveSequence,
    level: int,
    representative: Word | int,
    length_cap: int | None = None,
) -> ClassMass:
    """Enumerate the equivalence class of a complete word and sum its subtower masses.

    A word of length m has key at least (m-1) * min(heights), so lengths are
    capped at key // min(heights) + 1 and the enumeration is certified
    complete once the cap reaches that bound; with constant heights the key
    determines the length outright.
    """
    hs = heights(sequence, level)
    if isinstance(representative, int):
        key = representative
    else:
        key = equiv_key(hs, representative)
    min_height = min(hs)
    bound = key // min_height + 1
    cap = bound if length_cap is None else min(length_cap, bound)
    table = level_measure_table(sequence, level)
    language = sadic_language(sequence, level, max(cap, 2))
    members: list[Word] = []
    total: Scalar = Fraction(0) if table.mode == "exact" else 0.0
    constant = len(set(hs)) == 1
    lengths: range | list[int]
    if constant:
        height = hs[0]
        if key % height != 0:
            lengths = []
        else:
            exact_length = key // height + 1
            lengths = [exact_length] if 2 <= exact_length <= cap else []
    else:
        lengths = range(2, cap + 1)
    for m in lengths:
        for w in sorted(language.words_of_length(m)):
            if is_complete(w) and equiv_key(hs, w) == key:
                members.append(w)
                total = total + subtower_mass(sequence, level, w)
    return ClassMass(
        level=level,
        key=key,
        members=tuple(members),
        mass=total,
        complete_enumeration=cap >= bound or constant,
    )


def tower_intersection_mass(sequence: DirectiveSequence, level: int, word: Word, letter: int) -> Scalar:
    """Exact mass of (subtower of ``word`` at ``level``) inside the next-level tower of ``letter``.

    Constant-length sequences only: the mass is (1/l) times the induced
    measure of the matching ancestors, counting occurrences of the word fully
    inside the image of the letter plus occurrences straddling into the image
    of one following letter.
    """
    morphism = sequence.morphism(level)
    length = morphism.constant_length
    if length is None or not sequence.is_constant_lengths():
        raise ExactModeUnavailable("intersection masses are computed for constant length sequences")
    if len(word) > length + 1:
        raise RejectedInput("word may straddle at most one image boundary")
    table = level_measure_table(sequence, level + 1)
    image = morphism.images[letter]
    inside = sum(
        1 for i in range(len(image) - len(word) + 1) if image[i : i + len(word)] == word
    )
    total = inside * table.measure((letter,))
    for start in range(max(0, len(image) - len(word) + 1), len(image)):
        head = image[start:]
        if word[: len(head)] != head:
            continue
        rest = word[len(head) :]
        for nxt in range(morphism.source.size):
            if morphism.images[nxt][: len(rest)] == rest:
                total = total + table.measure((letter, nxt))
    return total / length
