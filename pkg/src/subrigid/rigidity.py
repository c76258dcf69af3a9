"""Partial rigidity rates of substitution subshifts.

For a primitive aperiodic constant-length substitution the partial rigidity
rate equals the supremum over m >= 2 of the total measure a_m of complete
words of length m.  The engine computes a_m exactly through first/last-letter
mass vectors D_m(c, d) (total measure of length-m cylinders starting in c and
ending in d), which satisfy an exact transfer recursion under de-substitution:
an occurrence of a length-(nl+i) word in an image decomposes over ancestors of
length n+1 (front cut and back cut on the same side) or n+2 (cuts on opposite
sides), and only the images' letters at the cut positions matter.

The same transfer structure yields a certified upper bound on the supremum:
every D_m with m > l is a convex combination of base vectors pushed forward
by position maps (a, b) -> (sigma(a)_p, sigma(b)_q), so every a_m is a convex
combination of base functionals obtained by pulling the diagonal back through
those maps.  When the maximal base functional value equals the scanned
maximum, the supremum is attained and the rate is exact.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ExactModeUnavailable, RejectedInput
from .language import (
    DirectiveSequence,
    aperiodicity_check,
    complexity_profile,
    constant_sequence,
    require_aperiodic,
    return_words,
    PERIODIC,
)
from .measures import EXACT, MeasureTable, Scalar, build_measure_table
from .morphisms import (
    FiniteAbelianGroup,
    Morphism,
    classify,
    is_positive,
    max_consecutivity,
    require_primitive,
    tm_substitution,
)
from .words import Word, is_complete

ENV_PROFILE_CAP = "SUBRIGID_MAX_M"


def profile_cap(requested: int | None, length: int | None) -> int:
    """Scan bound for the complete-word mass profile (default 4l + 8)."""
    if requested is not None:
        if requested < 2:
            raise RejectedInput("profile cap must be at least 2")
        return requested
    from_env = os.environ.get(ENV_PROFILE_CAP)
    if from_env is not None:
        return max(2, int(from_env))
    return 4 * (length or 4) + 8


class CompleteMassEngine:
    """Exact first/last-letter mass vectors for one constant-length substitution."""

    def __init__(self, table: MeasureTable):
        if table.mode != EXACT:
            raise ExactModeUnavailable("the mass recursion runs in exact mode only")
        length = table.substitution.constant_length
        if length is None:
            raise ExactModeUnavailable("the mass recursion requires constant length")
        self.table = table
        self.sigma = table.substitution
        self.length = length
        self.size = self.sigma.source.size
        self._vectors: dict[int, dict[tuple[int, int], Fraction]] = {}

    def vector(self, m: int) -> dict[tuple[int, int], Fraction]:
        """D_m: map (first letter, last letter) -> total cylinder mass."""
        if m < 2:
            raise RejectedInput("mass vectors start at length 2")
        cached = self._vectors.get(m)
        if cached is None:
            cached = self.enumerate_vector(m) if m <= self.length else self._transfer(m)
            self._vectors[m] = cached
        return cached

    def enumerate_vector(self, m: int) -> dict[tuple[int, int], Fraction]:
        """Direct enumeration over the length-m language (recursion oracle)."""
        out: dict[tuple[int, int], Fraction] = {}
        for w in self.table.language.words_of_length(m):
            key = (w[0], w[-1])
            out[key] = out.get(key, Fraction(0)) + self.table.measure(w)
        return out

    def _transfer(self, m: int) -> dict[tuple[int, int], Fraction]:
        length = self.length
        i = (m - 1) % length + 1
        n = (m - i) // length
        images = self.sigma.images
        acc: dict[tuple[int, int], Fraction] = {}

        def push(key: tuple[int, int], value: Fraction) -> None:
            acc[key] = acc.get(key, Fraction(0)) + value

        base = self.vector(n + 1)
        for k in range(1, length - i + 2):
            p, q = k - 1, k + i - 2
            for (a, b), value in base.items():
                push((images[a][p], images[b][q]), value)
        if i >= 2:
            deeper = self.vector(n + 2)
            for k in range(1, i):
                p, q = length - i + k, k - 1
                for (a, b), value in deeper.items():
                    push((images[a][p], images[b][q]), value)
        return {key: value / length for key, value in acc.items()}

    def complete_mass(self, m: int) -> Fraction:
        """a_m: total measure of complete words of length m."""
        return sum(
            (value for (a, b), value in self.vector(m).items() if a == b), Fraction(0)
        )

    def closure_upper_bound(self) -> Fraction:
        """Certified upper bound on sup_m a_m.

        Pull the diagonal back through every position map and evaluate the
        reachable indicator functionals on the base vectors D_2..D_l; the
        maximum dominates every convex combination, hence every a_m.
        """
        pairs = [(a, b) for a in range(self.size) for b in range(self.size)]
        images = self.sigma.images
        diagonal = frozenset((a, a) for a in range(self.size))
        closure = {diagonal}
        stack = [diagonal]
        while stack:
            current = stack.pop()
            for p, q in itertools.product(range(self.length), repeat=2):
                pulled = frozenset(
                    (a, b) for a, b in pairs if (images[a][p], images[b][q]) in current
                )
                if pulled not in closure:
                    closure.add(pulled)
                    stack.append(pulled)
        best = Fraction(0)
        for j in range(2, max(2, self.length) + 1):
            vec = self.vector(j)
            for subset in closure:
                value = sum((vec.get(pair, Fraction(0)) for pair in subset), Fraction(0))
                if value > best:
                    best = value
        return best


@lru_cache(maxsize=32)
def get_engine(sigma: Morphism) -> CompleteMassEngine:
    return CompleteMassEngine(build_measure_table(sigma, EXACT))


def first_last_mass(sigma: Morphism, m: int) -> dict[tuple[int, int], Fraction]:
    """D_m: total mass of length-m cylinders grouped by (first, last) letter."""
    return dict(get_engine(sigma).vector(m))


def complete_mass_profile(sigma: Morphism, max_length: int | None = None, mode: str = "auto") -> dict[int, Scalar]:
    """a_m for m in [2, M]; exact via the transfer recursion when constant length."""
    require_primitive(sigma)
    require_aperiodic(sigma)
    table = build_measure_table(sigma, mode)
    cap = profile_cap(max_length, sigma.constant_length or sigma.norm)
    if table.mode == EXACT and sigma.constant_length is not None:
        engine = get_engine(sigma)
        return {m: engine.complete_mass(m) for m in range(2, cap + 1)}
    language = table.language
    out: dict[int, Scalar] = {}
    for m in range(2, cap + 1):
        out[m] = sum(
            table.measure(w) for w in language.words_of_length(m) if is_complete(w)
        )
    return out


@dataclass(frozen=True)
class Certificate:
    """A sufficient-condition lower bound with its rigidity-sequence description."""

    kind: str
    bound: Fraction
    sequence: str
    witness: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class RateReport:
    """Lower/upper bounds on the partial rigidity rate with certification data."""

    lower: Scalar
    upper: Scalar | None
    exact: bool
    witness_length: int | None
    witness_key: int | None
    sequence: str | None
    certificates: tuple[Certificate, ...] = ()

    def __post_init__(self) -> None:
        if self.upper is not None and self.lower > self.upper:
            raise RejectedInput("lower bound exceeds upper bound")


def _sequence_description(witness_length: int, heights_scale: int, ratio: int) -> str:
    """Return-time sequence (witness_length - 1) * heights_scale * ratio^n."""
    coefficient = (witness_length - 1) * heights_scale
    if coefficient == 1:
        return f"{ratio}^n"
    return f"{coefficient}*{ratio}^n"


def _scan_profile(masses: dict[int, Scalar]) -> tuple[Scalar, int]:
    best = max(masses.values())
    witness = min(m for m, v in masses.items() if v == best)
    return best, witness


def partial_rigidity_report(
    sigma: Morphism,
    max_length: int | None = None,
    with_certificates: bool = True,
) -> RateReport:
    """Partial rigidity rate report for a primitive aperiodic substitution.

    Constant length: exact lower bound max a_m with the closure upper bound;
    the rate is exact when the two meet.  Other substitutions get a float
    lower bound from direct enumeration, with no upper bound.
    """
    profile = require_primitive(sigma)
    require_aperiodic(sigma, n_max=max(12, (profile.constant_length or profile.norm) + 2))
    certs = tuple(certificates(sigma)) if with_certificates else ()
    if profile.constant_length is not None:
        length = profile.constant_length
        engine = get_engine(sigma)
        cap = profile_cap(max_length, length)
        masses = {m: engine.complete_mass(m) for m in range(2, cap + 1)}
        lower, witness = _scan_profile(masses)
        bound = engine.closure_upper_bound()
        upper: Scalar | None
        if bound == lower or bound < 1:
            upper = bound
        else:
            upper = None
        return RateReport(
            lower=lower,
            upper=upper,
            exact=upper is not None and upper == lower,
            witness_length=witness,
            witness_key=witness - 1,
            sequence=_sequence_description(witness, 1, length),
            certificates=certs,
        )
    masses = complete_mass_profile(sigma, max_length, mode="float")
    lower, witness = _scan_profile(masses)
    return RateReport(
        lower=lower,
        upper=None,
        exact=False,
        witness_length=witness,
        witness_key=witness - 1,
        sequence="(witness return time at level n; heights are not uniform)",
        certificates=certs,
    )


def shift_mass(engine: CompleteMassEngine, group: FiniteAbelianGroup, m: int, g: int) -> Fraction:
    """C_m(+g): total measure of length-m cylinders whose last letter is the
    first letter translated by g."""
    vec = engine.vector(m)
    return sum(
        (vec.get((a, group.add(a, g)), Fraction(0)) for a in range(group.size)),
        Fraction(0),
    )


def tm_analysis(
    group: FiniteAbelianGroup,
    seed: Word,
    max_length: int | None = None,
    with_certificates: bool = True,
) -> RateReport:
    """Exact rate analysis for a Thue-Morse type substitution.

    The complete-word masses ground in the base values C_i(+g) for i in
    [2, l], so max over those is an upper bound on the rate and the subshift
    is never rigid; the lower bound scans C_m(+0).
    """
    sigma = tm_substitution(group, seed)
    require_primitive(sigma)
    require_aperiodic(sigma, n_max=max(12, len(seed) + 2))
    engine = get_engine(sigma)
    length = len(seed)
    cap = profile_cap(max_length, length)
    upper = max(
        shift_mass(engine, group, i, g)
        for i in range(2, length + 1)
        for g in range(group.size)
    )
    if upper >= 1:
        raise RejectedInput("upper bound reached 1; the subshift is periodic or degenerate")
    masses = {m: shift_mass(engine, group, m, 0) for m in range(2, cap + 1)}
    lower, witness = _scan_profile(masses)
    certs = tuple(certificates(sigma)) if with_certificates else ()
    return RateReport(
        lower=lower,
        upper=upper,
        exact=lower == upper,
        witness_length=witness,
        witness_key=witness - 1,
        sequence=_sequence_description(witness, 1, length),
        certificates=certs,
    )


def _certified_letter_returns(sigma: Morphism) -> dict[int, frozenset[Word]] | None:
    """Return words to every letter, or None if some set is not certified complete."""
    found: dict[int, frozenset[Word]] = {}
    for b in range(sigma.source.size):
        result = return_words(sigma, (b,))
        if not result.certified:
            return None
        found[b] = result.words
    return found


def certificates(target: Morphism | DirectiveSequence) -> list[Certificate]:
    """Every applicable sufficient-condition certificate, weakest ones included.

    Emitted kinds: m-consecutive (general and constant-length), bounded
    return words, repeated positive morphism, and the attained complete-word
    mass (constant length only).  The list may be empty.
    """
    sequence = constant_sequence(target) if isinstance(target, Morphism) else target
    sequence.check_primitive()
    certs: list[Certificate] = []
    level_sub = sequence.level_substitution(sequence.prefix_length)
    level_profile = classify(level_sub)
    consecutivity = min(max_consecutivity(m) for m in sequence.tail)
    if consecutivity >= 2:
        rank = min(m.source.size for m in sequence.tail)
        if all(m.constant_length is not None for m in sequence.tail):
            certs.append(
                Certificate(
                    kind="m_consecutive_constant_length",
                    bound=Fraction(consecutivity - 1, consecutivity),
                    sequence="h(n) (uniform tower height per level)",
                    witness=(("m", str(consecutivity)),),
                )
            )
        certs.append(
            Certificate(
                kind="m_consecutive",
                bound=Fraction(consecutivity - 1, consecutivity * rank),
                sequence="h_b(n) for a letter b carrying mass >= 1/d",
                witness=(("m", str(consecutivity)), ("d", str(rank))),
            )
        )
    returns = _certified_letter_returns(level_sub)
    if returns is not None:
        total = sum(len(v) for v in returns.values())
        witness = tuple(
            (f"letter_{b}", str(len(v))) for b, v in sorted(returns.items())
        )
        certs.append(
            Certificate(
                kind="return_words",
                bound=Fraction(1, total),
                sequence="return time of a maximal-mass return word per level",
                witness=witness + (("total", str(total)),),
            )
        )
        if any(is_positive(m.incidence_matrix()) for m in sequence.tail):
            certs.append(
                Certificate(
                    kind="repeated_positive_morphism",
                    bound=Fraction(1, total),
                    sequence="return time of a maximal-mass return word at repeated levels",
                    witness=(("total", str(total)),),
                )
            )
    if (
        level_profile.constant_length is not None
        and aperiodicity_check(level_sub) != PERIODIC
    ):
        engine = get_engine(level_sub)
        cap = profile_cap(None, level_profile.constant_length)
        masses = {m: engine.complete_mass(m) for m in range(2, cap + 1)}
        lower, witness_length = _scan_profile(masses)
        certs.append(
            Certificate(
                kind="theorem_C_witness",
                bound=lower,
                sequence=_sequence_description(
                    witness_length, 1, level_profile.constant_length
                ),
                witness=(("witness_length", str(witness_length)),),
            )
        )
    return certs


@dataclass(frozen=True)
class Diagnostic:
    """Complete-word ratio table q(n)/p(n) with a certification verdict."""

    rows: tuple[tuple[int, int, int, Fraction], ...]
    verdict: str
    upper: Scalar | None


def rigidity_diagnostic(sigma: Morphism, n_max: int = 20) -> Diagnostic:
    """Rigidity verdict for a constant-length primitive aperiodic substitution.

    Rigidity is equivalent to limsup q/p = 1, which is not finitely
    observable; the certified verdicts therefore come from the exact engine
    (an upper bound < 1 certifies non-rigidity), and the ratio table reports
    the finite trend only.
    """
    profile = require_primitive(sigma)
    if profile.constant_length is None:
        raise ExactModeUnavailable("the diagnostic requires a constant length substitution")
    require_aperiodic(sigma)
    complexity = complexity_profile(sigma, n_max)
    rows = tuple(
        (n, complexity.p[n - 1], complexity.q[n - 1], Fraction(complexity.q[n - 1], complexity.p[n - 1]))
        for n in range(1, n_max + 1)
    )
    report = partial_rigidity_report(sigma, with_certificates=False)
    if report.exact and report.lower == 1:
        verdict = "rigid (certified)"
    elif report.upper is not None and report.upper < 1:
        verdict = "not rigid (certified)"
    else:
        verdict = "inconclusive (finite ratio trend only)"
    return Diagnostic(rows=rows, verdict=verdict, upper=report.upper)


def product_rate(rates: list[Scalar]) -> Scalar:
    """Rate of a finite product system: the product of the factor rates."""
    if len(rates) == 0:
        raise RejectedInput("product of an empty list of rates is undefined")
    result: Scalar = Fraction(1)
    for rate in rates:
        if not 0 <= rate <= 1:
            raise RejectedInput("rates must lie in [0, 1]")
        result = result * rate
    return result


@dataclass(frozen=True)
class ApproxFactor:
    """One product factor: the two-letter substitution with images 0 -> 01^(l-1),
    1 -> 10^(l-1), raised to a tensor exponent."""

    length: int
    exponent: int
    rate: Fraction
    delta_k: Fraction
    bracket_low: Fraction

    @property
    def substitution(self) -> str:
        return f"zeta({self.length})"

    @property
    def rigidity_sequence(self) -> str:
        return f"{self.length}^n"


@dataclass(frozen=True)
class RateApproximation:
    """Greedy product construction approximating a target rate from above."""

    target: Fraction
    tolerance: Fraction
    factors: tuple[ApproxFactor, ...]
    achieved: Fraction
    gap: Fraction
    exact_hit: bool


def _factor_rate(length: int) -> Fraction:
    return Fraction(length - 1, length + 1)


def approximate_rate(target: Scalar, tolerance: Scalar) -> RateApproximation:
    """Realize a rate in (0, 1) as a product of rates (l-1)/(l+1), l >= 6.

    Greedy: pick the smallest admissible l with rate >= target, take the
    maximal exponent keeping the running product >= target, then square-or-
    more the previous l (keeping the sequence of l's powers of each other) and
    repeat until the product is within tolerance.  At every step the bracket
    rate_k * delta_k <= target <= delta_k holds, and delta_k - target <=
    2/(l_k + 1), so the factor count is O(log log (1/tolerance)).
    """
    target = Fraction(target)
    tolerance = Fraction(tolerance)
    if not 0 < target < 1:
        raise RejectedInput("target rate must lie strictly between 0 and 1")
    if tolerance <= 0:
        raise RejectedInput("tolerance must be positive")
    length = max(6, math.ceil((1 + target) / (1 - target)))
    factors: list[ApproxFactor] = []
    running = Fraction(1)
    while True:
        rate = _factor_rate(length)
        exponent = 0
        value = running
        while value * rate >= target:
            value = value * rate
            exponent += 1
        if exponent == 0:
            raise RejectedInput("internal: admissible length did not admit an exponent")
        running = value
        factors.append(
            ApproxFactor(
                length=length,
                exponent=exponent,
                rate=rate,
                delta_k=running,
                bracket_low=rate * running,
            )
        )
        if running == target or running - target <= tolerance:
            return RateApproximation(
                target=target,
                tolerance=tolerance,
                factors=tuple(factors),
                achieved=running,
                gap=running - target,
                exact_hit=running == target,
            )
        exponent_next = 2
        while _factor_rate(length**exponent_next) < target / running:
            exponent_next += 1
        length = length**exponent_next


def directive_delta(sequence: DirectiveSequence, max_length: int | None = None) -> RateReport:
    """Rate of an all-constant-lengths ultimately periodic directive sequence.

    Every level class is a pure-length class, the level supremums are
    non-increasing and eventually periodic, hence constant from the tail on:
    the rate equals the rate of the one-period tail composition.  The
    rigidity sequence picks up the composed prefix height.
    """
    sequence.check_primitive()
    if not sequence.is_constant_lengths():
        raise ExactModeUnavailable(
            "exact directive-sequence rates require constant length at every level"
        )
    tail_sub = sequence.level_substitution(sequence.prefix_length)
    report = partial_rigidity_report(tail_sub, max_length, with_certificates=False)
    prefix_scale = 1
    for m in sequence.prefix:
        prefix_scale *= m.constant_length or 1
    tail_scale = 1
    for m in sequence.tail:
        tail_scale *= m.constant_length or 1
    assert report.witness_length is not None
    return RateReport(
        lower=report.lower,
        upper=report.upper,
        exact=report.exact,
        witness_length=report.witness_length,
        witness_key=(report.witness_length - 1) * prefix_scale,
        sequence=_sequence_description(report.witness_length, prefix_scale, tail_scale),
        certificates=tuple(certificates(sequence)),
    )
