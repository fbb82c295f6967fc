"""Evidence-based GDPR and AI Act obligation checks.

A status of ``satisfied`` means the datasheet documents the evidence an obligation asks
for; it is never a statement of legal compliance.
"""

import logging

from .models import Datasheet
from .registry import get_field, is_populated
from .schemas import ComplianceReport, Obligation, ObligationStatus
from .vocab import ComplianceStatus, LegalRiskTier, Law, MediaType

logger = logging.getLogger(__name__)

HEALTH_MEDIA_TYPES = frozenset({MediaType.GENOMIC, MediaType.SIGNALS, MediaType.IMAGES})
DPIA_MARKERS = ("dpia", "impact assessment")

_CATALOG: tuple[Obligation, ...] = (
    Obligation(
        id="G-ART9",
        law=Law.GDPR,
        citation="Art. 9",
        description="Processing of special categories of personal data such as health data",
        applicability_condition=(
            "GDPR applies and special categories are listed or the media type implies "
            "health data"
        ),
        evidence_fields=("personal_data.special_categories", "personal_data.legal_basis"),
    ),
    Obligation(
        id="G-ART32",
        law=Law.GDPR,
        citation="Art. 32",
        description="Security of processing and risk management measures",
        applicability_condition="GDPR applies",
        evidence_fields=(
            "personal_data.anonymization_techniques",
            "risk_compliance.suggested_mitigations",
        ),
        evidence_mode="any",
    ),
    Obligation(
        id="G-ART35",
        law=Law.GDPR,
        citation="Art. 35",
        description="Data protection impact assessment (DPIA)",
        applicability_condition="GDPR applies",
        evidence_fields=("risk_compliance.impact_assessments",),
    ),
    Obligation(
        id="G-CONTROLLER",
        law=Law.GDPR,
        citation="Art. 4(7)",
        description="Identification of the controller determining means and purposes",
        applicability_condition="GDPR applies",
        evidence_fields=("metadata.publisher", "personal_data.legal_basis"),
    ),
    Obligation(
        id="G-RIGHTS",
        law=Law.GDPR,
        citation="Arts. 12-23",
        description=(
            "Support for data subject rights and transparency (minimal proxy: reuse "
            "obligations or a contact point)"
        ),
        applicability_condition="GDPR applies",
        evidence_fields=("usage_restriction.obligations", "metadata.contact"),
        evidence_mode="any",
    ),
    Obligation(
        id="A-RISKTIER",
        law=Law.AI_ACT,
        citation="Art. 6",
        description="Declaration of the AI Act risk tier",
        applicability_condition="always",
        evidence_fields=("risk_compliance.legal_risk_level",),
    ),
    Obligation(
        id="A-DATAGOV",
        law=Law.AI_ACT,
        citation="Art. 10",
        description="Data and data governance for high-risk systems",
        applicability_condition="the AI Act tier is high or above",
        evidence_fields=("source.provenance", "bias_mitigation.applied_methods"),
    ),
)


def obligation_catalog() -> list[Obligation]:
    return list(_CATALOG)


def gdpr_applies(ds: Datasheet) -> bool:
    # An absent declaration is treated as personal data.
    return ds.personal_data.contains_personal_data is not False


def has_special_data(ds: Datasheet) -> bool:
    return bool(ds.personal_data.special_categories) or (
        ds.characteristics.media_type in HEALTH_MEDIA_TYPES
    )


def default_ai_act_tier(ds: Datasheet) -> LegalRiskTier:
    return LegalRiskTier.HIGH if has_special_data(ds) else LegalRiskTier.LIMITED


def ai_act_tier(ds: Datasheet) -> LegalRiskTier:
    return ds.risk_compliance.legal_risk_level or default_ai_act_tier(ds)


def _mentions_dpia(entries: tuple[str, ...] | None) -> bool:
    return any(
        marker in entry.casefold() for entry in entries or () for marker in DPIA_MARKERS
    )


def _evidence(ds: Datasheet, obligation: Obligation) -> tuple[bool, list[str]]:
    """Return whether the evidence is documented and which paths are lacking."""
    if obligation.id == "G-ART35":
        if _mentions_dpia(get_field(ds, "risk_compliance.impact_assessments")):
            return True, []
        return False, list(obligation.evidence_fields)
    lacking = [path for path in obligation.evidence_fields if not is_populated(ds, path)]
    if obligation.evidence_mode == "any":
        return len(lacking) < len(obligation.evidence_fields), lacking
    return not lacking, lacking


def _applicability(ds: Datasheet, tier: LegalRiskTier) -> dict[str, bool]:
    gdpr = gdpr_applies(ds)
    return {
        "G-ART9": gdpr and has_special_data(ds),
        "G-ART32": gdpr,
        "G-ART35": gdpr,
        "G-CONTROLLER": gdpr,
        "G-RIGHTS": gdpr,
        "A-RISKTIER": True,
        "A-DATAGOV": tier.rank >= LegalRiskTier.HIGH.rank,
    }


def _status(ds: Datasheet, obligation: Obligation, applicable: bool) -> ObligationStatus:
    if not applicable:
        status = ComplianceStatus.NOT_APPLICABLE
        rationale = f"not applicable: requires {obligation.applicability_condition}"
    else:
        documented, lacking = _evidence(ds, obligation)
        if documented:
            status = ComplianceStatus.SATISFIED
            rationale = "evidence documented in " + ", ".join(
                path for path in obligation.evidence_fields if path not in lacking
            )
        elif obligation.id == "G-ART35":
            status = ComplianceStatus.MISSING_EVIDENCE
            rationale = "no DPIA entry in risk_compliance.impact_assessments"
        else:
            status = ComplianceStatus.MISSING_EVIDENCE
            joiner = " or " if obligation.evidence_mode == "any" else ", "
            rationale = "missing evidence: " + joiner.join(lacking)
    return ObligationStatus(
        obligation_id=obligation.id,
        law=obligation.law,
        citation=obligation.citation,
        status=status,
        rationale=rationale,
    )


def check(ds: Datasheet) -> ComplianceReport:
    tier = ai_act_tier(ds)
    applicability = _applicability(ds, tier)
    statuses = tuple(
        _status(ds, obligation, applicability[obligation.id]) for obligation in _CATALOG
    )

    notes: list[str] = []
    declared, default = ds.risk_compliance.legal_risk_level, default_ai_act_tier(ds)
    if declared is not None and declared != default:
        notes.append(
            f"declared AI Act tier '{declared.value}' differs from the default "
            f"'{default.value}' derived from the data"
        )
    if ds.personal_data.contains_personal_data is None:
        notes.append("contains_personal_data is not declared; GDPR treated as applicable")

    missing = sum(entry.status == ComplianceStatus.MISSING_EVIDENCE for entry in statuses)
    logger.info("compliance check: %d obligations missing evidence", missing)
    return ComplianceReport(
        gdpr_applicable=gdpr_applies(ds),
        ai_act_tier=tier,
        statuses=statuses,
        notes=tuple(notes),
    )


_CHECKBOX = {
    ComplianceStatus.SATISFIED: "[x]",
    ComplianceStatus.MISSING_EVIDENCE: "[ ]",
    ComplianceStatus.NOT_APPLICABLE: "[-]",
}


def render_checklist(report: ComplianceReport) -> str:
    lines = [
        f"GDPR applicable: {'yes' if report.gdpr_applicable else 'no'}",
        f"AI Act tier: {report.ai_act_tier.value}",
        "",
    ]
    for entry in report.statuses:
        lines.append(
            f"{_CHECKBOX[entry.status]} {entry.obligation_id:<13} "
            f"{entry.law.value} {entry.citation}: {entry.status.value}"
        )
        lines.append(f"      {entry.rationale}")
    if report.notes:
        lines.append("")
        lines.extend(f"note: {note}" for note in report.notes)
    return "\n".join(lines) + "\n"
