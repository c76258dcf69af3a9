"""Exact cylinder measures and partial rigidity rates of substitution subshifts."""

__version__ = "0.1.0"

from .errors import (
    ExactModeUnavailable,
    NotPrimitiveError,
    PeriodicInputError,
    RejectedInput,
)
from .language import (
    DirectiveSequence,
    LanguageTable,
    aperiodicity_check,
    complexity_profile,
    constant_sequence,
    get_language,
    return_words,
    sadic_language,
)
from .measures import (
    Interpretation,
    MeasureTable,
    build_measure_table,
    cylinder_measure,
    empirical_frequency,
    interpretations,
    letter_frequencies,
    two_word_measures,
)
from .morphisms import (
    FiniteAbelianGroup,
    Morphism,
    MorphismProfile,
    builtin_family,
    classify,
    compose,
    max_consecutivity,
    tm_substitution,
)
from .rigidity import (
    Certificate,
    CompleteMassEngine,
    RateReport,
    approximate_rate,
    certificates,
    complete_mass_profile,
    directive_delta,
    first_last_mass,
    partial_rigidity_report,
    product_rate,
    rigidity_diagnostic,
    tm_analysis,
)
from .towers import ClassMass, class_mass, equiv_key, heights, subtower_mass
from .words import Alphabet, Word, abelianize, factors, is_complete, occurrences

__all__ = [
    "Alphabet",
    "Certificate",
    "ClassMass",
    "CompleteMassEngine",
    "DirectiveSequence",
    "ExactModeUnavailable",
    "FiniteAbelianGroup",
    "Interpretation",
    "LanguageTable",
    "MeasureTable",
    "Morphism",
    "MorphismProfile",
    "NotPrimitiveError",
    "PeriodicInputError",
    "RateReport",
    "RejectedInput",
    "Word",
    "abelianize",
    "aperiodicity_check",
    "approximate_rate",
    "build_measure_table",
    "builtin_family",
    "certificates",
    "class_mass",
    "classify",
    "complete_mass_profile",
    "complexity_profile",
    "compose",
    "constant_sequence",
    "cylinder_measure",
    "directive_delta",
    "empirical_frequency",
    "equiv_key",
    "factors",
    "first_last_mass",
    "get_language",
    "heights",
    "interpretations",
    "is_complete",
    "letter_frequencies",
    "max_consecutivity",
    "occurrences",
    "partial_rigidity_report",
    "product_rate",
    "return_words",
    "rigidity_diagnostic",
    "sadic_language",
    "subtower_mass",
    "tm_analysis",
    "tm_substitution",
    "two_word_measures",
]
