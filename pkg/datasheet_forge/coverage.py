"""Comparative coverage of documentation frameworks over the datasheet categories.

The built-in profiles' ``covered_paths`` are calibration data chosen so that the matrix of
the four frameworks reproduces the published comparison; they are not claims about what
those frameworks ask their authors to write.
"""

import logging
from collections.abc import Iterable, Sequence

from .models import Datasheet
from .registry import field_registry, populated_paths
from .schemas import CoverageMatrix, CoverageRow, FrameworkProfile
from .vocab import CoverageMark, SectionId

logger = logging.getLogger(__name__)

CATEGORY_LABELS: dict[SectionId, str] = {
    SectionId.METADATA: "Metadata",
    SectionId.PURPOSE: "Purpose",
    SectionId.SOURCE: "Source Information",
    SectionId.TEMPORAL: "Temporal Information",
    SectionId.DEMOGRAPHICS: "Demographics",
    SectionId.CHARACTERISTICS: "Data Characteristics",
    SectionId.BIAS_MITIGATION: "Bias Mitigations",
    SectionId.PERSONAL_DATA: "Personal Data",
    SectionId.RISK_COMPLIANCE: "Risk and Compliance",
    SectionId.USAGE_RESTRICTION: "Usage Restriction",
}
MACHINE_READABLE = "Machine-readable"
INTEROPERABILITY = "Interoperability"


def section_paths(section: SectionId) -> set[str]:
    return {spec.path for spec in field_registry().for_section(section)}


def _sections(*sections: SectionId) -> set[str]:
    return set().union(*(section_paths(section) for section in sections))


def _qualified(section: SectionId, *names: str) -> set[str]:
    return {f"{section.value}.{name}" for name in names}


_S = SectionId


def _datasheets_for_datasets() -> FrameworkProfile:
    covered = _sections(_S.METADATA, _S.PURPOSE, _S.SOURCE)
    covered |= _qualified(_S.TEMPORAL, "coverage_start", "coverage_end")
    covered |= _qualified(
        _S.CHARACTERISTICS, "media_type", "record_count", "feature_description", "missing_elements"
    )
    covered |= _qualified(
        _S.PERSONAL_DATA, "contains_personal_data", "personal_categories", "special_categories"
    )
    covered |= _qualified(_S.RISK_COMPLIANCE, "impact_assessments")
    covered |= _qualified(_S.USAGE_RESTRICTION, "access_restrictions", "prohibitions")
    return FrameworkProfile(
        name="datasheets-for-datasets",
        title="Datasheets for Datasets",
        covered_paths=frozenset(covered),
        structured=False,
        machine_readable=False,
        interoperable=CoverageMark.ABSENT,
    )


def _dataset_nutrition_label() -> FrameworkProfile:
    covered = _sections(_S.METADATA, _S.PURPOSE, _S.SOURCE, _S.USAGE_RESTRICTION)
    covered |= _qualified(_S.TEMPORAL, "coverage_start", "coverage_end", "last_updated")
    covered |= _qualified(
        _S.DEMOGRAPHICS,
        "age_distribution",
        "gender_distribution",
        "ethnicity_distribution",
        "underrepresented_groups",
    )
    covered |= _qualified(
        _S.CHARACTERISTICS,
        "media_type",
        "record_count",
        "feature_description",
        "incomplete",
        "missing_elements",
    )
    covered |= _qualified(
        _S.PERSONAL_DATA, "contains_personal_data", "personal_categories", "sensitivity"
    )
    covered |= _qualified(_S.RISK_COMPLIANCE, "generic_risk_level", "suggested_mitigations")
    return FrameworkProfile(
        name="dataset-nutrition-label",
        title="Dataset Nutrition Label",
        covered_paths=frozenset(covered),
        structured=True,
        machine_readable=True,
        interoperable=CoverageMark.PARTIAL,
    )


def _data_statements_nlp() -> FrameworkProfile:
    covered = _sections(_S.METADATA, _S.PURPOSE, _S.DEMOGRAPHICS)
    covered |= _qualified(_S.SOURCE, "source_description", "provenance")
    covered |= _qualified(_S.CHARACTERISTICS, "media_type", "feature_description")
    covered |= _qualified(_S.PERSONAL_DATA, "contains_personal_data", "personal_categories")
    return FrameworkProfile(
        name="data-statements-nlp",
        title="Data Statements for NLP",
        covered_paths=frozenset(covered),
        structured=False,
        machine_readable=False,
        interoperable=CoverageMark.ABSENT,
    )


def _this_approach() -> FrameworkProfile:
    return FrameworkProfile(
        name="this-approach",
        title="Healthcare AI Datasheet",
        covered_paths=frozenset(field_registry().paths()),
        structured=True,
        machine_readable=True,
        interoperable=CoverageMark.PARTIAL,
    )


def builtin_profiles() -> list[FrameworkProfile]:
    return [
        _this_approach(),
        _datasheets_for_datasets(),
        _dataset_nutrition_label(),
        _data_statements_nlp(),
    ]


def profile_names() -> list[str]:
    return [profile.name for profile in builtin_profiles()]


def section_mark(covered: Iterable[str], section: SectionId) -> CoverageMark:
    fields = section_paths(section)
    hit = fields.intersection(covered)
    if not hit:
        return CoverageMark.ABSENT
    if hit == fields:
        return CoverageMark.FULL
    return CoverageMark.PARTIAL


def coverage_matrix(profiles: Sequence[FrameworkProfile]) -> CoverageMatrix:
    if not profiles:
        raise ValueError("coverage_matrix needs at least one profile")

    rows = [
        CoverageRow(
            category=label,
            section=section,
            marks={p.name: section_mark(p.covered_paths, section) for p in profiles},
        )
        for section, label in CATEGORY_LABELS.items()
    ]
    rows.append(
        CoverageRow(
            category=MACHINE_READABLE,
            marks={
                p.name: CoverageMark.FULL if p.machine_readable else CoverageMark.ABSENT
                for p in profiles
            },
        )
    )
    rows.append(
        CoverageRow(category=INTEROPERABILITY, marks={p.name: p.interoperable for p in profiles})
    )
    logger.debug("coverage matrix over %d profiles", len(profiles))
    return CoverageMatrix(profiles=tuple(p.name for p in profiles), rows=tuple(rows))


def datasheet_coverage(ds: Datasheet) -> dict[SectionId, CoverageMark]:
    covered = set(populated_paths(ds))
    return {section: section_mark(covered, section) for section in SectionId}


def render_matrix(matrix: CoverageMatrix, symbols: bool = False) -> str:
    def show(mark: CoverageMark) -> str:
        return mark.symbol if symbols else mark.value

    label_width = max(len(category) for category in matrix.categories)
    widths = [max(len(name), 7) for name in matrix.profiles]
    header = "  ".join(
        [f"{'Category':<{label_width}}"]
        + [f"{name:<{width}}" for name, width in zip(matrix.profiles, widths, strict=True)]
    )
    lines = [header.rstrip(), "-" * len(header.rstrip())]
    for row in matrix.rows:
        cells = [
            f"{show(row.marks[name]):<{width}}"
            for name, width in zip(matrix.profiles, widths, strict=True)
        ]
        lines.append("  ".join([f"{row.category:<{label_width}}", *cells]).rstrip())
    return "\n".join(lines) + "\n"
