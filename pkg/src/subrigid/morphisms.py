"""Free-monoid morphisms, incidence matrices, classification, named families.

A morphism maps each source letter to a nonempty word over the target
alphabet and extends by concatenation.  Substitutions are endomorphisms; the
classification predicates (constant length, proper, positive, primitive,
m-consecutivity) drive everything downstream.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

from .errors import NotPrimitiveError, RejectedInput
from .words import Alphabet, Word, alphabet_of_size

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Morphism:
    """Images of source letters under a non-erasing morphism."""

    source: Alphabet
    target: Alphabet
    images: tuple[Word, ...]

    def __post_init__(self) -> None:
        if len(self.images) != self.source.size:
            raise RejectedInput("one image per source letter is required")
        for a, img in enumerate(self.images):
            if len(img) == 0:
                raise RejectedInput(f"morphism is erasing on letter {self.source.symbols[a]!r}")
            for b in img:
                if not 0 <= b < self.target.size:
                    raise RejectedInput(f"image of {self.source.symbols[a]!r} uses a letter outside the target alphabet")

    @property
    def is_endomorphism(self) -> bool:
        return self.source == self.target

    @property
    def norm(self) -> int:
        """Largest image length."""
        return max(len(img) for img in self.images)

    @property
    def min_image_length(self) -> int:
        return min(len(img) for img in self.images)

    @property
    def constant_length(self) -> int | None:
        lengths = {len(img) for img in self.images}
        return lengths.pop() if len(lengths) == 1 else None

    def apply(self, word: Word) -> Word:
        out: list[int] = []
        for a in word:
            if not 0 <= a < self.source.size:
                raise RejectedInput("letter outside the source alphabet")
            out.extend(self.images[a])
        return tuple(out)

    def __call__(self, word: Word) -> Word:
        return self.apply(word)

    def incidence_matrix(self) -> Matrix:
        """Entry (b, a) counts the letter b in the image of a."""
        rows = []
        for b in range(self.target.size):
            rows.append(tuple(sum(1 for x in img if x == b) for img in self.images))
        return tuple(rows)

    def power(self, k: int) -> "Morphism":
        if not self.is_endomorphism:
            raise RejectedInput("powers require an endomorphism")
        if k < 1:
            raise RejectedInput("power must be >= 1")
        result = self
        for _ in range(k - 1):
            result = compose(self, result)
        return result


def compose(outer: Morphism, inner: Morphism) -> Morphism:
    """(outer ∘ inner)(a) = outer(inner(a)); incidence matrices multiply."""
    if inner.target != outer.source:
        raise RejectedInput("alphabet mismatch: inner target must equal outer source")
    return Morphism(inner.source, outer.target, tuple(outer.apply(img) for img in inner.images))


def matmul(left: Matrix, right: Matrix) -> Matrix:
    cols = len(right[0])
    inner = len(right)
    return tuple(
        tuple(sum(row[k] * right[k][j] for k in range(inner)) for j in range(cols))
        for row in left
    )


def column_sums(matrix: Matrix) -> tuple[int, ...]:
    return tuple(sum(row[j] for row in matrix) for j in range(len(matrix[0])))


def is_positive(matrix: Matrix) -> bool:
    return all(entry > 0 for row in matrix for entry in row)


def is_primitive_matrix(matrix: Matrix) -> bool:
    """Some power of the matrix is entrywise positive.

    Checked over the boolean semiring up to the Wielandt bound (d-1)^2 + 1,
    which decides primitivity exactly without spectral computation.
    """
    d = len(matrix)
    if d != len(matrix[0]):
        raise RejectedInput("primitivity requires a square matrix")
    bools = [[entry > 0 for entry in row] for row in matrix]
    power = bools
    for _ in range((d - 1) ** 2 + 1):
        if all(all(row) for row in power):
            return True
        power = [
            [any(power[i][k] and bools[k][j] for k in range(d)) for j in range(d)]
            for i in range(d)
        ]
    return all(all(row) for row in power)


def _run_lengths(word: Word) -> list[int]:
    return [len(list(group)) for _, group in itertools.groupby(word)]


def max_consecutivity(sigma: Morphism) -> int:
    """Largest m >= 1 such that every image is a concatenation of blocks b^k, k >= m."""
    return min(min(_run_lengths(img)) for img in sigma.images)


@dataclass(frozen=True)
class MorphismProfile:
    """Classification flags used to pick engines and certificates."""

    constant_length: int | None
    proper: bool
    positive: bool
    primitive: bool
    max_consecutivity: int
    norm: int
    min_image_length: int


def classify(sigma: Morphism) -> MorphismProfile:
    """Classify a substitution (source and target alphabets must coincide).

    ``max_consecutivity`` is the largest m >= 1 such that every image is a
    concatenation of blocks b^k with k >= m; it equals 1 as soon as some
    maximal run has length 1, leaving the m-consecutive certificates vacuous.
    """
    if not sigma.is_endomorphism:
        raise RejectedInput("classification requires a substitution (endomorphism)")
    matrix = sigma.incidence_matrix()
    first_letters = {img[0] for img in sigma.images}
    last_letters = {img[-1] for img in sigma.images}
    return MorphismProfile(
        constant_length=sigma.constant_length,
        proper=len(first_letters) == 1 and len(last_letters) == 1,
        positive=is_positive(matrix),
        primitive=is_primitive_matrix(matrix),
        max_consecutivity=max_consecutivity(sigma),
        norm=sigma.norm,
        min_image_length=sigma.min_image_length,
    )


def require_primitive(sigma: Morphism) -> MorphismProfile:
    profile = classify(sigma)
    if not profile.primitive:
        raise NotPrimitiveError("substitution is not primitive")
    return profile


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Product of cyclic groups Z/d_1 x ... x Z/d_r, used as an alphabet.

    Elements are canonical tuples reduced mod each order, enumerated
    lexicographically so that results are deterministic; the letter index of
    an element is its position in that enumeration.
    """

    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.orders) == 0 or any(d < 1 for d in self.orders):
            raise RejectedInput("cyclic orders must be positive integers")

    @property
    def size(self) -> int:
        return reduce(lambda x, y: x * y, self.orders, 1)

    def elements(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(d) for d in self.orders)))

    def element(self, index: int) -> tuple[int, ...]:
        return self.elements()[index]

    def index(self, element: tuple[int, ...]) -> int:
        reduced = tuple(x % d for x, d in zip(element, self.orders))
        weight = 1
        idx = 0
        for x, d in zip(reversed(reduced), reversed(self.orders)):
            idx += x * weight
            weight *= d
        return idx

    def add(self, i: int, j: int) -> int:
        u = self.element(i)
        v = self.element(j)
        return self.index(tuple(x + y for x, y in zip(u, v)))

    def neg(self, i: int) -> int:
        u = self.element(i)
        return self.index(tuple(-x for x in u))

    def sub(self, i: int, j: int) -> int:
        return self.add(i, self.neg(j))

    def alphabet(self) -> Alphabet:
        if len(self.orders) == 1:
            return alphabet_of_size(self.orders[0])
        return Alphabet(tuple(".".join(map(str, e)) for e in self.elements()))


def tm_substitution(group: FiniteAbelianGroup, seed: Word) -> Morphism:
    """Thue-Morse type substitution: the image of g is the seed translated by g.

    The family is closed under composition: composing the substitutions of v
    and u gives the substitution of sigma_v(u).
    """
    if len(seed) == 0:
        raise RejectedInput("seed word must be nonempty")
    alphabet = group.alphabet()
    if any(not 0 <= x < group.size for x in seed):
        raise RejectedInput("seed word uses letters outside the group")
    images = tuple(tuple(group.add(x, g) for x in seed) for g in range(group.size))
    return Morphism(alphabet, alphabet, images)


def builtin_family(name: str, **params: int) -> Morphism:
    """Construct a named substitution family.

    thue_morse           0 -> 01, 1 -> 10
    zeta(l>=2)           0 -> 01^(l-1), 1 -> 10^(l-1)
    sigma_j(j>=1, d>=2)  i -> i^j (i+1 mod d)^j
    tm_ternary_0100      Thue-Morse type over Z/3 with seed 0100
    """
    if name == "thue_morse":
        return tm_substitution(FiniteAbelianGroup((2,)), (0, 1))
    if name == "zeta":
        length = params.get("l")
        if length is None or length < 2:
            raise RejectedInput("zeta requires parameter l >= 2")
        return tm_substitution(FiniteAbelianGroup((2,)), (0,) + (1,) * (length - 1))
    if name == "sigma_j":
        j = params.get("j")
        d = params.get("d")
        if j is None or j < 1 or d is None or d < 2:
            raise RejectedInput("sigma_j requires parameters j >= 1 and d >= 2")
        return tm_substitution(FiniteAbelianGroup((d,)), (0,) * j + (1,) * j)
    if name == "tm_ternary_0100":
        return tm_substitution(FiniteAbelianGroup((3,)), (0, 1, 0, 0))
    raise RejectedInput(f"unknown family {name!r}")


def family_group_seed(name: str, **params: int) -> tuple[FiniteAbelianGroup, Word]:
    """Group and seed word realizing a built-in family as a Thue-Morse type substitution."""
    if name == "thue_morse":
        return FiniteAbelianGroup((2,)), (0, 1)
    if name == "zeta":
        length = params.get("l")
        if length is None or length < 2:
            raise RejectedInput("zeta requires parameter l >= 2")
        return FiniteAbelianGroup((2,)), (0,) + (1,) * (length - 1)
    if name == "sigma_j":
        j = params.get("j")
        d = params.get("d")
        if j is None or j < 1 or d is None or d < 2:
            raise RejectedInput("sigma_j requires parameters j >= 1 and d >= 2")
        return FiniteAbelianGroup((d,)), (0,) * j + (1,) * j
    if name == "tm_ternary_0100":
        return FiniteAbelianGroup((3,)), (0, 1, 0, 0)
    raise RejectedInput(f"unknown family {name!r}")
