"""Required-field, cross-field consistency and completeness checks."""

import logging
from collections.abc import Callable, Iterator

from .models import Datasheet
from .parser import parse
from .registry import field_registry, is_populated
from .schemas import ParseDiagnostic, RuleDescriptor, ValidationReport
from .vocab import ParseMode, SectionId, Sensitivity, Severity

logger = logging.getLogger(__name__)

Violation = tuple[str, str]
Check = Callable[[Datasheet], Iterator[Violation]]


def _normalize(text: str) -> str:
    return " ".join(text.split()).casefold()


def _incomplete_without_elements(ds: Datasheet) -> Iterator[Violation]:
    section = ds.characteristics
    if section.incomplete is True and not section.missing_elements:
        yield (
            "characteristics.missing_elements",
            "data is marked incomplete but no missing elements are listed",
        )


def _coverage_order(ds: Datasheet) -> Iterator[Violation]:
    start, end = ds.temporal.coverage_start, ds.temporal.coverage_end
    if start is not None and end is not None and start > end:
        yield "temporal.coverage_end", f"coverage ends ({end}) before it starts ({start})"


def _non_personal_with_categories(ds: Datasheet) -> Iterator[Violation]:
    section = ds.personal_data
    if section.contains_personal_data is False and section.personal_categories:
        yield (
            "personal_data.personal_categories",
            "personal data categories are listed for data declared non-personal",
        )


def _permission_also_prohibited(ds: Datasheet) -> Iterator[Violation]:
    section = ds.usage_restriction
    permitted = {_normalize(entry) for entry in section.permissions or ()}
    prohibited = {_normalize(entry) for entry in section.prohibitions or ()}
    overlap = sorted(permitted & prohibited)
    if overlap:
        listed = ", ".join(f"'{entry}'" for entry in overlap)
        yield "usage_restriction.prohibitions", f"both permitted and prohibited: {listed}"


def _approval_body_without_approval(ds: Datasheet) -> Iterator[Violation]:
    if ds.source.approving_body is not None and ds.source.ethical_approval is None:
        yield "source.ethical_approval", "an approving body is named but approval is not stated"


def _special_without_personal(ds: Datasheet) -> Iterator[Violation]:
    section = ds.personal_data
    if section.special_categories and section.contains_personal_data is not True:
        yield (
            "personal_data.contains_personal_data",
            "special categories are listed, so the data must be declared personal",
        )


def _updated_before_coverage(ds: Datasheet) -> Iterator[Violation]:
    start, updated = ds.temporal.coverage_start, ds.temporal.last_updated
    if start is not None and updated is not None and updated < start:
        yield "temporal.last_updated", f"last update ({updated}) precedes coverage start ({start})"


def _reasons_without_elements(ds: Datasheet) -> Iterator[Violation]:
    section = ds.characteristics
    if section.missing_reasons is not None and section.missing_elements is None:
        yield (
            "characteristics.missing_elements",
            "reasons for missing data are given but the missing elements are not",
        )


def _reidentification_without_basis(ds: Datasheet) -> Iterator[Violation]:
    section = ds.personal_data
    if (
        section.reidentification_risk is not None
        and section.anonymization_techniques is None
        and section.contains_personal_data is not True
    ):
        yield (
            "personal_data.anonymization_techniques",
            "a reidentification risk is stated for data that is neither personal nor anonymised",
        )


def _special_with_low_sensitivity(ds: Datasheet) -> Iterator[Violation]:
    section = ds.personal_data
    if (
        section.special_categories
        and section.sensitivity is not None
        and section.sensitivity != Sensitivity.HIGH
    ):
        yield (
            "personal_data.sensitivity",
            f"special categories are listed but sensitivity is '{section.sensitivity.value}'",
        )


_RULES: tuple[tuple[RuleDescriptor, Check], ...] = (
    (
        RuleDescriptor(
            id="R1",
            description="incomplete data must list its missing elements",
            fields=("characteristics.incomplete", "characteristics.missing_elements"),
        ),
        _incomplete_without_elements,
    ),
    (
        RuleDescriptor(
            id="R2",
            description="coverage_start must not be after coverage_end",
            fields=("temporal.coverage_start", "temporal.coverage_end"),
            parse_code="invariant-violation",
        ),
        _coverage_order,
    ),
    (
        RuleDescriptor(
            id="R3",
            description="non-personal data must not list personal data categories",
            fields=("personal_data.contains_personal_data", "personal_data.personal_categories"),
        ),
        _non_personal_with_categories,
    ),
    (
        RuleDescriptor(
            id="R4",
            description="a use cannot be both permitted and prohibited",
            fields=("usage_restriction.permissions", "usage_restriction.prohibitions"),
        ),
        _permission_also_prohibited,
    ),
    (
        RuleDescriptor(
            id="R5",
            description="a named approving body requires the ethical approval flag",
            fields=("source.approving_body", "source.ethical_approval"),
        ),
        _approval_body_without_approval,
    ),
    (
        RuleDescriptor(
            id="R6",
            description="special categories require contains_personal_data = true",
            fields=("personal_data.special_categories", "personal_data.contains_personal_data"),
        ),
        _special_without_personal,
    ),
    (
        RuleDescriptor(
            id="R7",
            description="last_updated must not precede coverage_start",
            fields=("temporal.coverage_start", "temporal.last_updated"),
        ),
        _updated_before_coverage,
    ),
    (
        RuleDescriptor(
            id="R8",
            description="reasons for missing data require the missing elements",
            fields=("characteristics.missing_reasons", "characteristics.missing_elements"),
        ),
        _reasons_without_elements,
    ),
    (
        RuleDescriptor(
            id="R9",
            description=(
                "a reidentification risk requires anonymisation techniques or personal data"
            ),
            fields=(
                "personal_data.reidentification_risk",
                "personal_data.anonymization_techniques",
                "personal_data.contains_personal_data",
            ),
        ),
        _reidentification_without_basis,
    ),
    (
        RuleDescriptor(
            id="R10",
            description="special category data should be marked high sensitivity",
            fields=("personal_data.special_categories", "personal_data.sensitivity"),
            severity=Severity.WARNING,
        ),
        _special_with_low_sensitivity,
    ),
)


def cross_field_rules() -> list[RuleDescriptor]:
    return [descriptor for descriptor, _ in _RULES]


def _completeness(ds: Datasheet | None) -> tuple[float, dict[SectionId, float]]:
    registry = field_registry()
    by_section: dict[SectionId, float] = {}
    for section in SectionId:
        specs = registry.for_section(section)
        filled = 0 if ds is None else sum(is_populated(ds, spec.path) for spec in specs)
        by_section[section] = filled / len(specs)
    total = 0 if ds is None else sum(is_populated(ds, path) for path in registry.paths())
    return total / len(registry.entries), by_section


def _build_report(ds: Datasheet | None, findings: list[ParseDiagnostic]) -> ValidationReport:
    overall, by_section = _completeness(ds)
    return ValidationReport(
        valid=ds is not None and not any(finding.is_error for finding in findings),
        overall_completeness=overall,
        section_completeness=by_section,
        findings=tuple(findings),
    )


def validate(ds: Datasheet) -> ValidationReport:
    findings: list[ParseDiagnostic] = []
    seen: set[tuple[str, str]] = set()

    def add(path: str, code: str, severity: Severity, message: str) -> None:
        if (path, code) in seen:
            return
        seen.add((path, code))
        findings.append(
            ParseDiagnostic(path=path, code=code, severity=severity, message=message)
        )

    for path in field_registry().required_paths():
        if not is_populated(ds, path):
            add(path, "missing-required", Severity.ERROR, f"required field '{path}' is missing")

    for descriptor, check in _RULES:
        for path, message in check(ds):
            add(path, descriptor.id, descriptor.severity, message)

    logger.debug("validation produced %d findings", len(findings))
    return _build_report(ds, findings)


def validate_document(data: bytes, mode: ParseMode = ParseMode.STRICT) -> ValidationReport:
    """Parse and validate in one pass; parse diagnostics become findings."""
    ds, diagnostics = parse(data, mode)
    if ds is None:
        return _build_report(None, diagnostics)
    report = validate(ds)
    return _build_report(ds, [*diagnostics, *report.findings])
