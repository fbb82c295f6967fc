"""Domain types of the Healthcare AI Datasheet: ten section records holding typed fields.

A field set to ``None`` is unpopulated. An empty list is populated: it affirmatively
states "none". Values that violate a field's type, vocabulary or bounds are rejected at
construction time with pydantic errors the parser turns into diagnostics.
"""

import re
from datetime import date, datetime
from typing import Annotated, Any

from pydantic import (
    AfterValidator,
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    StrictBool,
    StrictInt,
    StrictStr,
    field_validator,
    model_validator,
)
from pydantic_core import PydanticCustomError

from .vocab import (
    BiasCategory,
    LegalRiskTier,
    Likelihood,
    MediaType,
    RiskLevel,
    SectionId,
    Sensitivity,
)

FRACTION_TOLERANCE = 1e-9
MAX_AGE = 150
VERSION_PATTERN = r"(\d+(\.\d+)*|\d{4}-\d{2}(-\d{2})?)"

_VERSION_RE = re.compile(VERSION_PATTERN)
_DATE_RE = re.compile(r"(\d{4})(?:-(\d{2})(?:-(\d{2}))?)?")


def invariant_error(message: str, field: str | None = None) -> PydanticCustomError:
    context = {"field": field} if field else None
    return PydanticCustomError("invariant_violation", message, context)


def _normalize_date(value: Any) -> date:
    # Year-only and year-month values stand for the first day of the period.
    if isinstance(value, datetime):
        raise PydanticCustomError("date_type", "expected a calendar date, not a timestamp")
    if isinstance(value, date):
        return value
    if not isinstance(value, str):
        raise PydanticCustomError("date_type", "expected a string YYYY, YYYY-MM or YYYY-MM-DD")
    match = _DATE_RE.fullmatch(value)
    if match is None:
        raise PydanticCustomError(
            "date_format", "'{value}' is not YYYY, YYYY-MM or YYYY-MM-DD", {"value": value}
        )
    year, month, day = match.groups()
    try:
        return date(int(year), int(month or 1), int(day or 1))
    except ValueError:
        raise PydanticCustomError(
            "date_format", "'{value}' is not a calendar date", {"value": value}
        ) from None


def _encodable(value: str) -> str:
    try:
        value.encode("utf-8")
    except UnicodeEncodeError:
        raise PydanticCustomError("string_unicode", "text must be valid unicode") from None
    return value


def _require_number(value: Any) -> Any:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise PydanticCustomError("fraction_type", "share must be a number")
    return value


def _bounded_total(shares: dict[str, float]) -> dict[str, float]:
    if any(not label.strip() for label in shares):
        raise invariant_error("bucket labels must not be blank")
    total = sum(shares.values())
    if total > 1.0 + FRACTION_TOLERANCE:
        raise invariant_error(f"shares sum to {total:.6f}, above 1.0")
    return shares


def _distinct_entries(entries: tuple[str, ...]) -> tuple[str, ...]:
    seen: set[str] = set()
    for entry in entries:
        if not entry.strip():
            raise invariant_error("list entries must not be blank")
        if entry in seen:
            raise invariant_error(f"duplicate entry '{entry}'")
        seen.add(entry)
    return entries


Text = Annotated[StrictStr, AfterValidator(_encodable)]
PartialDate = Annotated[date, BeforeValidator(_normalize_date)]
Share = Annotated[float, BeforeValidator(_require_number), Field(ge=0.0, le=1.0)]
FractionMap = Annotated[dict[Text, Share], AfterValidator(_bounded_total)]
TextList = Annotated[tuple[Text, ...], AfterValidator(_distinct_entries)]
Age = Annotated[StrictInt, Field(ge=0, le=MAX_AGE)]
Count = Annotated[StrictInt, Field(ge=0)]


class Section(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class MetadataSection(Section):
    title: Text | None = None
    version: Text | None = None
    publisher: Text | None = None
    license: Text | None = None
    identifier: Text | None = None
    contact: Text | None = None

    @field_validator("version")
    @classmethod
    def _check_version(cls, value: str | None) -> str | None:
        if value is not None and _VERSION_RE.fullmatch(value) is None:
            raise invariant_error("version must be dotted numeric (1.2.0) or a date stamp")
        return value

    @field_validator("identifier")
    @classmethod
    def _check_identifier(cls, value: str | None) -> str | None:
        if value is not None and (not value or value != value.strip()):
            raise invariant_error("identifier must be non-empty and whitespace-trimmed")
        return value


class PurposeSection(Section):
    creation_purpose: Text | None = None
    intended_benefit: Text | None = None
    beneficiaries: TextList | None = None
    intended_uses: TextList | None = None


class SourceSection(Section):
    source_description: Text | None = None
    provenance: Text | None = None
    ethical_approval: StrictBool | None = None
    approving_body: Text | None = None
    funding_sources: TextList | None = None


class TemporalSection(Section):
    coverage_start: PartialDate | None = None
    coverage_end: PartialDate | None = None
    last_updated: PartialDate | None = None
    update_frequency: Text | None = None

    @model_validator(mode="after")
    def _check_coverage_order(self) -> "TemporalSection":
        if (
            self.coverage_start is not None
            and self.coverage_end is not None
            and self.coverage_start > self.coverage_end
        ):
            raise invariant_error("coverage_start is after coverage_end", field="coverage_end")
        return self


class DemographicSection(Section):
    age_min: Age | None = None
    age_max: Age | None = None
    age_distribution: FractionMap | None = None
    gender_distribution: FractionMap | None = None
    ethnicity_distribution: FractionMap | None = None
    geographic_origin: TextList | None = None
    socioeconomic_notes: Text | None = None
    underrepresented_groups: TextList | None = None
    bias_likelihoods: dict[BiasCategory, Likelihood] | None = None
    demographic_notes: Text | None = None

    @model_validator(mode="after")
    def _check_age_order(self) -> "DemographicSection":
        if self.age_min is not None and self.age_max is not None and self.age_min > self.age_max:
            raise invariant_error("age_min is greater than age_max", field="age_max")
        return self


class CharacteristicsSection(Section):
    media_type: MediaType | None = None
    record_count: Count | None = None
    feature_description: Text | None = None
    incomplete: StrictBool | None = None
    missing_elements: TextList | None = None
    missing_reasons: TextList | None = None


class BiasMitigationSection(Section):
    applied_methods: TextList | None = None
    suggested_methods: TextList | None = None
    residual_bias_notes: Text | None = None


class PersonalDataSection(Section):
    contains_personal_data: StrictBool | None = None
    personal_categories: TextList | None = None
    special_categories: TextList | None = None
    sensitivity: Sensitivity | None = None
    anonymization_techniques: TextList | None = None
    reidentification_risk: Likelihood | None = None
    legal_basis: Text | None = None


class RiskComplianceSection(Section):
    generic_risk_level: RiskLevel | None = None
    legal_risk_level: LegalRiskTier | None = None
    jurisdiction: TextList | None = None
    applicable_laws: TextList | None = None
    impact_assessments: TextList | None = None
    suggested_mitigations: TextList | None = None


class UsageRestrictionSection(Section):
    access_restrictions: TextList | None = None
    permissions: TextList | None = None
    prohibitions: TextList | None = None
    obligations: TextList | None = None


class Datasheet(BaseModel):
    metadata: MetadataSection = Field(default_factory=MetadataSection)
    purpose: PurposeSection = Field(default_factory=PurposeSection)
    source: SourceSection = Field(default_factory=SourceSection)
    temporal: TemporalSection = Field(default_factory=TemporalSection)
    demographics: DemographicSection = Field(default_factory=DemographicSection)
    characteristics: CharacteristicsSection = Field(default_factory=CharacteristicsSection)
    bias_mitigation: BiasMitigationSection = Field(default_factory=BiasMitigationSection)
    personal_data: PersonalDataSection = Field(default_factory=PersonalDataSection)
    risk_compliance: RiskComplianceSection = Field(default_factory=RiskComplianceSection)
    usage_restriction: UsageRestrictionSection = Field(default_factory=UsageRestrictionSection)

    model_config = ConfigDict(frozen=True, extra="forbid")

    def section(self, section_id: SectionId) -> Section:
        return getattr(self, section_id.value)


SECTION_MODELS: dict[SectionId, type[Section]] = {
    SectionId(name): field.annotation for name, field in Datasheet.model_fields.items()
}


def new_template() -> Datasheet:
    """A datasheet with all ten sections present and no field populated."""
    return Datasheet()
