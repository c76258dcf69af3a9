"""Command dispatch: validated specs in, deterministic reports out.

This is the single execution path shared by the HTTP endpoints and the CLI;
it owns the conversion from declarative substitution specs to core objects
and from core results to response models.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction

from ..errors import RejectedInput
from ..language import (
    DirectiveSequence,
    aperiodicity_check,
    complexity_profile,
)
from ..measures import EXACT, build_measure_table, empirical_frequency
from ..morphisms import (
    FiniteAbelianGroup,
    Morphism,
    builtin_family,
    family_group_seed,
    require_primitive,
    tm_substitution,
)
from ..rigidity import (
    Certificate,
    RateReport,
    approximate_rate,
    certificates,
    complete_mass_profile,
    directive_delta,
    partial_rigidity_report,
    rigidity_diagnostic,
    tm_analysis,
)
from ..words import Alphabet, Word
from .schemas import (
    ApproxFactorModel,
    ApproxResult,
    CertificateModel,
    ClassificationModel,
    ComplexityRow,
    DiagnosticResult,
    DiagnosticRow,
    MeasureResult,
    OracleResult,
    ProfileRow,
    RateModel,
    Report,
    SubstitutionSpec,
    TwoWordRow,
    format_scalar,
)

COMMANDS = ("analyze", "measure", "delta", "profile", "certify", "diagnose", "approx", "oracle")


@dataclass
class RunOptions:
    word: str | None = None
    max_length: int | None = None
    n: int = 20
    delta: str | float | None = None
    eps: str | float = "1e-6"
    depth: int | None = None


@dataclass
class BuiltInput:
    """Core objects realized from a spec."""

    spec: SubstitutionSpec
    morphism: Morphism | None
    sequence: DirectiveSequence | None
    tm_info: tuple[FiniteAbelianGroup, Word] | None

    @property
    def alphabet(self) -> Alphabet:
        if self.morphism is not None:
            return self.morphism.source
        assert self.sequence is not None
        return self.sequence.morphism(0).target

    def substitution(self) -> Morphism:
        """The substitution acting as the level-0 system, when one exists."""
        if self.morphism is not None:
            return self.morphism
        assert self.sequence is not None
        if self.sequence.prefix_length > 0:
            raise RejectedInput(
                "this command needs a substitution; the directive sequence has a nontrivial prefix"
            )
        return self.sequence.level_substitution(0)


def _build_morphism(spec: SubstitutionSpec) -> tuple[Morphism, tuple[FiniteAbelianGroup, Word] | None]:
    if spec.rules is not None:
        assert spec.alphabet is not None
        alphabet = Alphabet(tuple(spec.alphabet))
        unknown = set(spec.rules) - set(spec.alphabet)
        if unknown:
            raise RejectedInput(f"rules mention unknown symbols: {sorted(unknown)}")
        missing = set(spec.alphabet) - set(spec.rules)
        if missing:
            raise RejectedInput(f"rules must cover every symbol; missing {sorted(missing)}")
        images = tuple(alphabet.word(spec.rules[s]) for s in spec.alphabet)
        return Morphism(alphabet, alphabet, images), None
    if spec.family is not None:
        params = spec.params or {}
        morphism = builtin_family(spec.family, **params)
        return morphism, family_group_seed(spec.family, **params)
    if spec.tm is not None:
        group = FiniteAbelianGroup(tuple(spec.tm.group))
        alphabet = group.alphabet()
        seed = alphabet.word(spec.tm.u)
        return tm_substitution(group, seed), (group, seed)
    raise RejectedInput("spec does not describe a single substitution")


def build_input(spec: SubstitutionSpec) -> BuiltInput:
    if spec.directive is not None:
        prefix = []
        for sub in spec.directive.prefix:
            if sub.directive is not None:
                raise RejectedInput("directive specs cannot nest")
            prefix.append(_build_morphism(sub)[0])
        tail = []
        for sub in spec.directive.tail:
            if sub.directive is not None:
                raise RejectedInput("directive specs cannot nest")
            tail.append(_build_morphism(sub)[0])
        sequence = DirectiveSequence(prefix=tuple(prefix), tail=tuple(tail))
        sequence.check_primitive()
        return BuiltInput(spec=spec, morphism=None, sequence=sequence, tm_info=None)
    morphism, tm_info = _build_morphism(spec)
    return BuiltInput(spec=spec, morphism=morphism, sequence=None, tm_info=tm_info)


def parse_rate(value: str | float) -> Fraction:
    """Exact rational from "p/q", a decimal string, or a float (via its shortest decimal)."""
    text = str(value)
    if "/" in text:
        return Fraction(text)
    try:
        return Fraction(Decimal(text))
    except InvalidOperation as exc:
        raise RejectedInput(f"cannot parse rate {value!r}") from exc


def _mode_of(built: BuiltInput) -> str:
    if built.sequence is not None:
        return EXACT if built.sequence.is_constant_lengths() else "float"
    assert built.morphism is not None
    return EXACT if built.morphism.constant_length is not None else "float"


def _rate_model(report: RateReport) -> RateModel:
    return RateModel(
        lower=format_scalar(report.lower),
        lower_decimal=float(report.lower),
        upper=None if report.upper is None else format_scalar(report.upper),
        upper_decimal=None if report.upper is None else float(report.upper),
        exact=report.exact,
        witness_length=report.witness_length,
        witness_key=report.witness_key,
        sequence=report.sequence,
    )


def _certificate_models(certs: tuple[Certificate, ...] | list[Certificate]) -> list[CertificateModel]:
    return [
        CertificateModel(
            kind=c.kind,
            bound=str(c.bound),
            bound_decimal=float(c.bound),
            sequence=c.sequence,
            witness=dict(c.witness),
        )
        for c in certs
    ]


def _delta_report(built: BuiltInput, max_length: int | None) -> RateReport:
    if built.sequence is not None and (
        built.sequence.prefix_length > 0 or len(built.sequence.tail) > 1
    ):
        return directive_delta(built.sequence, max_length)
    if built.tm_info is not None:
        group, seed = built.tm_info
        return tm_analysis(group, seed, max_length)
    return partial_rigidity_report(built.substitution(), max_length)


def run(command: str, spec: SubstitutionSpec | None, options: RunOptions) -> Report:
    """Execute one command; identical input and options give identical output."""
    if command not in COMMANDS:
        raise RejectedInput(f"unknown command {command!r}")
    if command == "approx":
        if options.delta is None:
            raise RejectedInput("approx requires a target rate")
        result = approximate_rate(parse_rate(options.delta), parse_rate(options.eps))
        return Report(
            command=command,
            input={"delta": str(options.delta), "eps": str(options.eps)},
            mode=EXACT,
            approx=ApproxResult(
                target=str(result.target),
                tolerance=str(result.tolerance),
                factors=[
                    ApproxFactorModel(
                        substitution=f.substitution,
                        length=f.length,
                        exponent=f.exponent,
                        rate=str(f.rate),
                        delta_k=str(f.delta_k),
                        bracket_low=str(f.bracket_low),
                        bracket_holds=f.bracket_low <= result.target <= f.delta_k,
                        rigidity_sequence=f.rigidity_sequence,
                    )
                    for f in result.factors
                ],
                achieved=str(result.achieved),
                achieved_decimal=float(result.achieved),
                gap=str(result.gap),
                exact_hit=result.exact_hit,
            ),
        )
    if spec is None:
        raise RejectedInput(f"command {command!r} requires a substitution spec")
    built = build_input(spec)
    mode = _mode_of(built)
    note = None if mode == EXACT else (
        "non-constant length: float mode (power iteration and float elimination; "
        "values carry floating-point error)"
    )
    echo = built.spec.echo()

    if command == "delta":
        report = _delta_report(built, options.max_length)
        return Report(
            command=command,
            input=echo,
            mode=mode,
            note=note,
            rate=_rate_model(report),
            certificates=_certificate_models(report.certificates),
        )

    if command == "measure":
        if options.word is None:
            raise RejectedInput("measure requires --word")
        sigma = built.substitution()
        table = build_measure_table(sigma)
        word = built.alphabet.word(options.word)
        value = table.measure(word)
        return Report(
            command=command,
            input=echo,
            mode=table.mode,
            note=note,
            measure=MeasureResult(
                word=options.word,
                value=format_scalar(value),
                value_decimal=float(value),
                in_language=table.in_language(word),
            ),
        )

    if command == "profile":
        sigma = built.substitution()
        masses = complete_mass_profile(sigma, options.max_length)
        return Report(
            command=command,
            input=echo,
            mode=mode,
            note=note,
            profile=[
                ProfileRow(m=m, mass=format_scalar(v), mass_decimal=float(v))
                for m, v in sorted(masses.items())
            ],
        )

    if command == "certify":
        target = built.sequence if built.sequence is not None else built.substitution()
        certs = certificates(target)
        return Report(
            command=command,
            input=echo,
            mode=mode,
            note=note,
            certificates=_certificate_models(certs),
        )

    if command == "diagnose":
        sigma = built.substitution()
        diagnostic = rigidity_diagnostic(sigma, options.n)
        return Report(
            command=command,
            input=echo,
            mode=mode,
            note=note,
            diagnostic=DiagnosticResult(
                rows=[
                    DiagnosticRow(n=n, p=p, q=q, ratio=str(r), ratio_decimal=float(r))
                    for n, p, q, r in diagnostic.rows
                ],
                verdict=diagnostic.verdict,
                upper=None if diagnostic.upper is None else format_scalar(diagnostic.upper),
            ),
        )

    if command == "oracle":
        if options.word is None or options.depth is None:
            raise RejectedInput("oracle requires --word and --depth")
        sigma = built.substitution()
        word = built.alphabet.word(options.word)
        value = empirical_frequency(sigma, word, options.depth)
        return Report(
            command=command,
            input=echo,
            mode="float",
            oracle=OracleResult(
                word=options.word,
                depth=options.depth,
                prefix_length=len(_expansion(sigma, options.depth)),
                value=value,
            ),
        )

    # analyze: everything that applies to the input.
    if built.sequence is not None and built.sequence.prefix_length > 0:
        effective = built.sequence.level_substitution(built.sequence.prefix_length)
    else:
        effective = built.substitution()
    profile = require_primitive(effective)
    verdict = aperiodicity_check(effective)
    complexity = complexity_profile(effective, 12)
    table = build_measure_table(effective)
    two_rows = [
        TwoWordRow(word=effective.source.format(w), value=format_scalar(v))
        for w, v in sorted(table.two_word.items())
    ]
    rate_model = None
    certs_model: list[CertificateModel] = []
    if verdict != "periodic":
        report = _delta_report(built, options.max_length)
        rate_model = _rate_model(report)
        certs_model = _certificate_models(report.certificates)
    return Report(
        command=command,
        input=echo,
        mode=mode,
        note=note,
        classification=ClassificationModel(
            alphabet=list(effective.source.symbols),
            constant_length=profile.constant_length,
            proper=profile.proper,
            positive=profile.positive,
            primitive=profile.primitive,
            max_consecutivity=profile.max_consecutivity,
            norm=profile.norm,
            min_image_length=profile.min_image_length,
        ),
        aperiodicity=verdict,
        complexity=[
            ComplexityRow(n=n, p=complexity.p[n - 1], q=complexity.q[n - 1])
            for n in range(1, 13)
        ],
        two_word_measures=two_rows,
        rate=rate_model,
        certificates=certs_model,
    )


def _expansion(sigma: Morphism, depth: int) -> bytes:
    from ..measures import _cached_prefix

    return _cached_prefix(sigma, 0, depth)


def profile_csv(report: Report) -> str:
    """CSV rendering of a profile report: fixed header, exact and decimal columns."""
    if report.profile is None:
        raise RejectedInput("report has no profile section")
    lines = ["m,a_m,a_m_decimal"]
    for row in report.profile:
        lines.append(f"{row.m},{row.mass},{row.mass_decimal!r}")
    return "\n".join(lines) + "\n"
