"""Report and catalog types produced by the toolchain.

All of them dump to the machine-readable report syntax with ``model_dump(mode="json")``;
field declaration order is the key order of the report.
"""

from datetime import date

from pydantic import BaseModel, ConfigDict, Field

from .vocab import (
    BiasCategory,
    ComplianceStatus,
    CoverageMark,
    DataRiskKind,
    LegalRiskTier,
    Law,
    Likelihood,
    RiskLevel,
    SectionId,
    Severity,
)


class Frozen(BaseModel):
    model_config = ConfigDict(frozen=True)


class ParseDiagnostic(Frozen):
    path: str = Field(min_length=1)
    code: str = Field(min_length=1)
    severity: Severity
    message: str

    @property
    def is_error(self) -> bool:
        return self.severity == Severity.ERROR


class RuleDescriptor(Frozen):
    id: str
    description: str
    fields: tuple[str, ...]
    severity: Severity = Severity.ERROR
    # Diagnostic code the parser reports when construction already rejects the violation.
    parse_code: str | None = None


class ValidationReport(Frozen):
    valid: bool
    overall_completeness: float = Field(ge=0.0, le=1.0)
    section_completeness: dict[SectionId, float]
    findings: tuple[ParseDiagnostic, ...] = ()

    @property
    def errors(self) -> list[ParseDiagnostic]:
        return [finding for finding in self.findings if finding.is_error]


class RiskItem(Frozen):
    rule_id: str
    category: BiasCategory | DataRiskKind
    likelihood: Likelihood
    severity: RiskLevel
    trigger: str


class RiskRuleDescriptor(Frozen):
    """A risk rule; ``None`` category/likelihood/severity are taken from the datasheet."""

    rule_id: str
    category: BiasCategory | DataRiskKind | None
    condition: str
    likelihood: Likelihood | None
    severity: RiskLevel | None
    mitigation: str
    derived_prohibition: str | None = None


class RiskAssessment(Frozen):
    reference_date: date
    generic_level: RiskLevel
    legal_level: LegalRiskTier
    items: tuple[RiskItem, ...] = ()
    mitigations: tuple[str, ...] = ()
    derived_prohibitions: tuple[str, ...] = ()


class Obligation(Frozen):
    id: str
    law: Law
    citation: str
    description: str
    applicability_condition: str
    evidence_fields: tuple[str, ...]
    evidence_mode: str = "all"


class ObligationStatus(Frozen):
    obligation_id: str
    law: Law
    citation: str
    status: ComplianceStatus
    rationale: str


class ComplianceReport(Frozen):
    gdpr_applicable: bool
    ai_act_tier: LegalRiskTier
    statuses: tuple[ObligationStatus, ...]
    notes: tuple[str, ...] = ()

    def status_of(self, obligation_id: str) -> ComplianceStatus:
        for entry in self.statuses:
            if entry.obligation_id == obligation_id:
                return entry.status
        raise KeyError(obligation_id)


class FrameworkProfile(Frozen):
    name: str
    title: str
    covered_paths: frozenset[str]
    structured: bool
    machine_readable: bool
    interoperable: CoverageMark


class CoverageRow(Frozen):
    category: str
    section: SectionId | None = None
    marks: dict[str, CoverageMark]


class CoverageMatrix(Frozen):
    profiles: tuple[str, ...]
    rows: tuple[CoverageRow, ...]

    @property
    def categories(self) -> list[str]:
        return [row.category for row in self.rows]

    def cell(self, category: str, profile: str) -> CoverageMark:
        for row in self.rows:
            if row.category == category:
                return row.marks[profile]
        raise KeyError(category)


class MappingRow(Frozen):
    path: str
    predicates: tuple[str, ...]
    shape: str
    note: str = ""
