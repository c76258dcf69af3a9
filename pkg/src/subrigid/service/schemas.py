"""Request/response models shared by the HTTP service and the CLI.

Substitutions are described declaratively (explicit rules, a named family, a
group-translation seed, or an ultimately periodic directive sequence) and
validated before anything is built.  Reports carry exact values as "p/q"
strings; floats appear only in float-mode payloads and in decimal convenience
columns.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import RejectedInput

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - version dependent
    import tomli as tomllib


class TMBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    group: list[int] = Field(min_length=1)
    u: str = Field(min_length=1)


class DirectiveBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    prefix: list["SubstitutionSpec"] = []
    tail: list["SubstitutionSpec"] = Field(min_length=1)


class SubstitutionSpec(BaseModel):
    """Exactly one of: explicit rules, a named family, a group seed, a directive sequence."""

    model_config = ConfigDict(extra="forbid")

    alphabet: list[str] | None = None
    rules: dict[str, str] | None = None
    family: Literal["thue_morse", "zeta", "sigma_j", "tm_ternary_0100"] | None = None
    params: dict[str, int] | None = None
    tm: TMBody | None = None
    directive: DirectiveBody | None = None

    @model_validator(mode="after")
    def _one_form(self) -> "SubstitutionSpec":
        explicit = self.alphabet is not None or self.rules is not None
        family = self.family is not None or self.params is not None
        forms = sum([explicit, family, self.tm is not None, self.directive is not None])
        if forms != 1:
            raise ValueError("specify exactly one of rules/family/tm/directive")
        if explicit and (self.alphabet is None or self.rules is None):
            raise ValueError("explicit specs need both alphabet and rules")
        if self.params is not None and self.family is None:
            raise ValueError("params require a family name")
        return self

    def echo(self) -> dict[str, Any]:
        return self.model_dump(exclude_none=True)


DirectiveBody.model_rebuild()


def parse_spec(text: str, fmt: str = "json") -> SubstitutionSpec:
    """Parse and validate a substitution spec document."""
    try:
        if fmt == "json":
            payload = json.loads(text)
        elif fmt == "toml":
            payload = tomllib.loads(text)
        else:
            raise RejectedInput(f"unknown spec format {fmt!r}")
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise RejectedInput(f"malformed {fmt} document: {exc}") from exc
    try:
        return SubstitutionSpec.model_validate(payload)
    except Exception as exc:
        raise RejectedInput(f"invalid substitution spec: {exc}") from exc


def serialize_spec(spec: SubstitutionSpec) -> str:
    return json.dumps(spec.echo(), sort_keys=True)


def format_scalar(value: Fraction | float) -> str | float:
    """Exact values as "p/q" strings; floats stay floats."""
    if isinstance(value, Fraction):
        return str(value)
    return float(value)


class CertificateModel(BaseModel):
    kind: str
    bound: str
    bound_decimal: float
    sequence: str
    witness: dict[str, str] = {}


class RateModel(BaseModel):
    lower: str | float
    lower_decimal: float
    upper: str | float | None = None
    upper_decimal: float | None = None
    exact: bool
    witness_length: int | None = None
    witness_key: int | None = None
    sequence: str | None = None


class ProfileRow(BaseModel):
    m: int
    mass: str | float
    mass_decimal: float


class MeasureResult(BaseModel):
    word: str
    value: str | float
    value_decimal: float
    in_language: bool


class DiagnosticRow(BaseModel):
    n: int
    p: int
    q: int
    ratio: str
    ratio_decimal: float


class DiagnosticResult(BaseModel):
    rows: list[DiagnosticRow]
    verdict: str
    upper: str | float | None = None


class ApproxFactorModel(BaseModel):
    substitution: str
    length: int
    exponent: int
    rate: str
    delta_k: str
    bracket_low: str
    bracket_holds: bool
    rigidity_sequence: str


class ApproxResult(BaseModel):
    target: str
    tolerance: str
    factors: list[ApproxFactorModel]
    achieved: str
    achieved_decimal: float
    gap: str
    exact_hit: bool


class OracleResult(BaseModel):
    word: str
    depth: int
    prefix_length: int
    value: float


class ClassificationModel(BaseModel):
    alphabet: list[str]
    constant_length: int | None = None
    proper: bool
    positive: bool
    primitive: bool
    max_consecutivity: int
    norm: int
    min_image_length: int


class ComplexityRow(BaseModel):
    n: int
    p: int
    q: int


class TwoWordRow(BaseModel):
    word: str
    value: str | float


class Report(BaseModel):
    """Single envelope for every command; unused sections are omitted."""

    model_config = ConfigDict(extra="forbid")

    command: str
    input: dict[str, Any] | None = None
    mode: str
    note: str | None = None
    classification: ClassificationModel | None = None
    aperiodicity: str | None = None
    complexity: list[ComplexityRow] | None = None
    two_word_measures: list[TwoWordRow] | None = None
    rate: RateModel | None = None
    profile: list[ProfileRow] | None = None
    certificates: list[CertificateModel] | None = None
    diagnostic: DiagnosticResult | None = None
    measure: MeasureResult | None = None
    approx: ApproxResult | None = None
    oracle: OracleResult | None = None

    def to_json(self) -> str:
        return self.model_dump_json(exclude_none=True, indent=2)


class SpecEnvelope(BaseModel):
    spec: SubstitutionSpec


class DeltaRequest(BaseModel):
    spec: SubstitutionSpec
    max_length: int | None = Field(default=None, alias="max")
    model_config = ConfigDict(populate_by_name=True)


class MeasureRequest(BaseModel):
    spec: SubstitutionSpec
    word: str


class DiagnoseRequest(BaseModel):
    spec: SubstitutionSpec
    n: int = 20


class ApproxRequest(BaseModel):
    delta: str | float
    eps: str | float = "1e-6"


class OracleRequest(BaseModel):
    spec: SubstitutionSpec
    word: str
    depth: int
