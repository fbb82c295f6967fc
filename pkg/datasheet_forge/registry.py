"""The canonical field registry: all 55 datasheet fields in ten sections."""

from collections.abc import Mapping
from enum import Enum
from functools import cache
from typing import Any

from pydantic import BaseModel, ConfigDict

from .models import Datasheet
from .vocab import SectionId, vocabularies


class FieldType(str, Enum):
    TEXT = "text"
    TEXT_LIST = "text-list"
    DATE = "date"
    DATE_RANGE = "date-range"
    INTEGER = "integer"
    FRACTION_MAP = "fraction-map"
    VOCAB = "vocab"
    BOOLEAN = "boolean"
    STRUCTURED = "structured"


class UnknownFieldError(KeyError):
    pass


class FieldSpec(BaseModel):
    path: str
    section: SectionId
    value_type: FieldType
    required: bool = False
    vocabulary: str | None = None
    description: str = ""

    model_config = ConfigDict(frozen=True)

    @property
    def name(self) -> str:
        return self.path.split(".", 1)[1]


class FieldRegistry(BaseModel):
    entries: tuple[FieldSpec, ...]

    model_config = ConfigDict(frozen=True)

    def paths(self) -> list[str]:
        return [entry.path for entry in self.entries]

    def get(self, path: str) -> FieldSpec:
        for entry in self.entries:
            if entry.path == path:
                return entry
        raise UnknownFieldError(path)

    def for_section(self, section: SectionId) -> list[FieldSpec]:
        return [entry for entry in self.entries if entry.section == section]

    def required_paths(self) -> list[str]:
        return [entry.path for entry in self.entries if entry.required]


def _spec(
    path: str,
    value_type: FieldType,
    description: str,
    *,
    required: bool = False,
    vocabulary: str | None = None,
) -> FieldSpec:
    section = SectionId(path.split(".", 1)[0])
    return FieldSpec(
        path=path,
        section=section,
        value_type=value_type,
        required=required,
        vocabulary=vocabulary,
        description=description,
    )


T = FieldType

_FIELD_SPECS: tuple[FieldSpec, ...] = (
    _spec("metadata.title", T.TEXT, "Dataset title", required=True),
    _spec("metadata.version", T.TEXT, "Dataset version, dotted numeric or date stamp"),
    _spec("metadata.publisher", T.TEXT, "Organisation publishing the dataset", required=True),
    _spec("metadata.license", T.TEXT, "License name or IRI"),
    _spec("metadata.identifier", T.TEXT, "Persistent identifier"),
    _spec("metadata.contact", T.TEXT, "Contact point for questions and rights requests"),
    _spec(
        "purpose.creation_purpose",
        T.TEXT,
        "Purpose the dataset was created for (e.g. clinical research)",
        required=True,
    ),
    _spec("purpose.intended_benefit", T.TEXT, "Intended benefit (e.g. improve diagnostic accuracy)"),
    _spec("purpose.beneficiaries", T.TEXT_LIST, "Intended beneficiaries (e.g. patients)"),
    _spec("purpose.intended_uses", T.TEXT_LIST, "Uses the dataset is suitable for"),
    _spec(
        "source.source_description",
        T.TEXT,
        "Source and origin of the data",
        required=True,
    ),
    _spec("source.provenance", T.TEXT, "Collection and labelling/annotation process"),
    _spec("source.ethical_approval", T.BOOLEAN, "Whether collection had ethical approval"),
    _spec("source.approving_body", T.TEXT, "Body that granted the approval"),
    _spec("source.funding_sources", T.TEXT_LIST, "Funding sources"),
    _spec("temporal.coverage_start", T.DATE, "Start of the period covered"),
    _spec("temporal.coverage_end", T.DATE, "End of the period covered"),
    _spec("temporal.last_updated", T.DATE, "Date of the last update"),
    _spec("temporal.update_frequency", T.TEXT, "How often the dataset is updated"),
    _spec("demographics.age_min", T.INTEGER, "Minimum age in years"),
    _spec("demographics.age_max", T.INTEGER, "Maximum age in years"),
    _spec("demographics.age_distribution", T.FRACTION_MAP, "Age bucket -> share"),
    _spec("demographics.gender_distribution", T.FRACTION_MAP, "Gender -> share"),
    _spec("demographics.ethnicity_distribution", T.FRACTION_MAP, "Ethnicity -> share"),
    _spec("demographics.geographic_origin", T.TEXT_LIST, "Regions the subjects come from"),
    _spec("demographics.socioeconomic_notes", T.TEXT, "Socioeconomic composition"),
    _spec("demographics.underrepresented_groups", T.TEXT_LIST, "Known underrepresented groups"),
    _spec(
        "demographics.bias_likelihoods",
        T.STRUCTURED,
        "BiasCategory -> likelihood of that bias given the distributions",
        vocabulary="Likelihood",
    ),
    _spec("demographics.demographic_notes", T.TEXT, "Other demographic remarks"),
    _spec("characteristics.media_type", T.VOCAB, "Media type of the data", vocabulary="MediaType"),
    _spec("characteristics.record_count", T.INTEGER, "Number of records"),
    _spec("characteristics.feature_description", T.TEXT, "Description of features/columns"),
    _spec("characteristics.incomplete", T.BOOLEAN, "Whether the data is incomplete"),
    _spec("characteristics.missing_elements", T.TEXT_LIST, "Elements that are missing"),
    _spec("characteristics.missing_reasons", T.TEXT_LIST, "Reasons elements are missing"),
    _spec("bias_mitigation.applied_methods", T.TEXT_LIST, "Mitigations already applied"),
    _spec("bias_mitigation.suggested_methods", T.TEXT_LIST, "Mitigations suggested to adopters"),
    _spec("bias_mitigation.residual_bias_notes", T.TEXT, "Bias remaining after mitigation"),
    _spec(
        "personal_data.contains_personal_data",
        T.BOOLEAN,
        "Whether the data is personal data",
        required=True,
    ),
    _spec("personal_data.personal_categories", T.TEXT_LIST, "Personal data categories"),
    _spec(
        "personal_data.special_categories",
        T.TEXT_LIST,
        "Special categories of personal data (e.g. health)",
    ),
    _spec(
        "personal_data.sensitivity", T.VOCAB, "Sensitivity of the data", vocabulary="Sensitivity"
    ),
    _spec(
        "personal_data.anonymization_techniques",
        T.TEXT_LIST,
        "Anonymisation techniques applied",
    ),
    _spec(
        "personal_data.reidentification_risk",
        T.VOCAB,
        "Risk of reidentification",
        vocabulary="Likelihood",
    ),
    _spec("personal_data.legal_basis", T.TEXT, "Legal basis for processing"),
    _spec(
        "risk_compliance.generic_risk_level",
        T.VOCAB,
        "Declared generic risk level",
        vocabulary="RiskLevel",
    ),
    _spec(
        "risk_compliance.legal_risk_level",
        T.VOCAB,
        "Declared legal (AI Act) risk tier",
        vocabulary="LegalRiskTier",
    ),
    _spec("risk_compliance.jurisdiction", T.TEXT_LIST, "Jurisdictions (e.g. EU)"),
    _spec("risk_compliance.applicable_laws", T.TEXT_LIST, "Applicable laws (e.g. GDPR)"),
    _spec(
        "risk_compliance.impact_assessments",
        T.TEXT_LIST,
        "Impact assessments carried out (e.g. GDPR DPIA 2023-11)",
    ),
    _spec("risk_compliance.suggested_mitigations", T.TEXT_LIST, "Suggested risk mitigations"),
    _spec("usage_restriction.access_restrictions", T.TEXT_LIST, "Access restrictions"),
    _spec("usage_restriction.permissions", T.TEXT_LIST, "Permitted uses"),
    _spec("usage_restriction.prohibitions", T.TEXT_LIST, "Prohibited uses"),
    _spec("usage_restriction.obligations", T.TEXT_LIST, "Obligations on reusers"),
)


@cache
def field_registry() -> FieldRegistry:
    return FieldRegistry(entries=_FIELD_SPECS)


def _split(path: str) -> tuple[str, str]:
    spec = field_registry().get(path)
    return spec.section.value, spec.name


def get_field(ds: Datasheet, path: str) -> Any:
    """Return the populated value at ``path`` or ``None`` when it is unpopulated."""
    section, name = _split(path)
    return getattr(getattr(ds, section), name)


def is_populated(ds: Datasheet, path: str) -> bool:
    return get_field(ds, path) is not None


def populated_paths(ds: Datasheet) -> list[str]:
    return [path for path in field_registry().paths() if is_populated(ds, path)]


def with_fields(ds: Datasheet, updates: Mapping[str, Any]) -> Datasheet:
    """Return a re-validated copy of ``ds`` with the given paths set (``None`` clears)."""
    payload = ds.model_dump()
    for path, value in updates.items():
        section, name = _split(path)
        payload[section][name] = value
    return Datasheet.model_validate(payload)


def render_field_reference() -> str:
    """Markdown listing of every field and vocabulary, written next to `init` templates."""
    lines = [
        "# Datasheet fields",
        "",
        "Unpopulated fields may be omitted or set to null. An empty list means",
        "\"affirmatively none\".",
        "",
        "| Path | Type | Required | Vocabulary | Description |",
        "| --- | --- | --- | --- | --- |",
    ]
    for spec in field_registry().entries:
        lines.append(
            f"| `{spec.path}` | {spec.value_type.value} | {'yes' if spec.required else 'no'} "
            f"| {spec.vocabulary or ''} | {spec.description} |"
        )
    lines += ["", "# Vocabularies", ""]
    for name, enum in vocabularies().items():
        tokens = ", ".join(f"`{member.value}`" for member in enum)
        lines.append(f"- **{name}**: {tokens}")
    return "\n".join(lines) + "\n"
