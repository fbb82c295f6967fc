"""Rule-based risk assessment of a datasheet's contents and absences."""

import logging
from collections.abc import Callable, Iterable, Iterator
from datetime import date

from dateutil.relativedelta import relativedelta

from .compliance import obligation_catalog
from .config import RiskSettings, settings
from .models import Datasheet
from .registry import get_field
from .schemas import RiskAssessment, RiskItem, RiskRuleDescriptor
from .validator import cross_field_rules
from .vocab import (
    LIKELIHOOD_SEVERITY,
    BiasCategory,
    DataRiskKind,
    LegalRiskTier,
    Likelihood,
    RiskLevel,
)

logger = logging.getLogger(__name__)

DISTRIBUTION_PATHS = (
    "demographics.age_distribution",
    "demographics.gender_distribution",
    "demographics.ethnicity_distribution",
)
ANNOTATION_KEYWORDS = ("annotat", "label")
ABSENT_PREFIX = "absent:"

_WORRYING = {Likelihood.HIGH, Likelihood.VERY_HIGH, Likelihood.UNKNOWN}
_DECLARED_REPORTABLE = {Likelihood.MEDIUM, *_WORRYING}

Evaluator = Callable[[Datasheet, date, RiskSettings], Iterator[RiskItem]]

SAMPLE_MISSING = RiskRuleDescriptor(
    rule_id="B-SAMPLE-MISSING",
    category=BiasCategory.SAMPLE,
    condition="an age, gender or ethnicity distribution is absent",
    likelihood=Likelihood.UNKNOWN,
    severity=RiskLevel.HIGH,
    mitigation="assess representativeness of the undocumented demographics before use",
)
DATADRIVEN_IMBALANCE = RiskRuleDescriptor(
    rule_id="B-DATADRIVEN-IMBALANCE",
    category=BiasCategory.DATA_DRIVEN,
    condition="a demographic distribution's largest share exceeds the imbalance threshold",
    likelihood=Likelihood.MEDIUM,
    severity=RiskLevel.MEDIUM,
    mitigation="rebalance or reweight over-represented groups and report subgroup performance",
)
TEMPORAL_STALE = RiskRuleDescriptor(
    rule_id="B-TEMPORAL-STALE",
    category=BiasCategory.TEMPORAL,
    condition=(
        "last_updated, or failing that coverage_end, is older than the staleness window "
        "before the reference date"
    ),
    likelihood=Likelihood.MEDIUM,
    severity=RiskLevel.MEDIUM,
    mitigation="revalidate against recent data to detect drift",
    derived_prohibition="no deployment without revalidation on current data",
)
ANNOTATOR_UNKNOWN = RiskRuleDescriptor(
    rule_id="B-ANNOTATOR-UNKNOWN",
    category=BiasCategory.ANNOTATOR,
    condition="media_type is populated but provenance does not describe labelling/annotation",
    likelihood=Likelihood.MEDIUM,
    severity=RiskLevel.MEDIUM,
    mitigation="document who labelled the data and how disagreements were resolved",
)
DECLARED_LIKELIHOOD = RiskRuleDescriptor(
    rule_id="B-DECLARED-LIKELIHOOD",
    category=None,
    condition="an authored bias likelihood is medium or above, or unknown",
    likelihood=None,
    severity=None,
    mitigation="carry out the bias assessment the declared likelihoods call for",
)
REIDENTIFICATION = RiskRuleDescriptor(
    rule_id="D-REIDENT",
    category=DataRiskKind.REIDENTIFICATION,
    condition=(
        "personal data without documented anonymisation, or with a high, very-high or "
        "unknown reidentification risk"
    ),
    likelihood=None,
    severity=RiskLevel.HIGH,
    mitigation="anonymise or pseudonymise and restrict access to vetted users",
    derived_prohibition="no public redistribution",
)
INCOMPLETE = RiskRuleDescriptor(
    rule_id="D-INCOMPLETE",
    category=DataRiskKind.INCOMPLETENESS,
    condition="the data is marked incomplete",
    likelihood=Likelihood.MEDIUM,
    severity=RiskLevel.MEDIUM,
    mitigation="assess impact of missing elements before reuse",
)
FRACTION_GAP = RiskRuleDescriptor(
    rule_id="D-FRACTION-GAP",
    category=DataRiskKind.MISSINGNESS,
    condition="a demographic distribution documents less than the fraction-gap threshold",
    likelihood=Likelihood.MEDIUM,
    severity=RiskLevel.MEDIUM,
    mitigation="document the remaining population share or state why it is unknown",
)
DECLARED_MISMATCH = RiskRuleDescriptor(
    rule_id="D-DECLARED-MISMATCH",
    category=DataRiskKind.DECLARED_MISMATCH,
    condition="an authored generic or legal risk level differs from the computed one",
    likelihood=Likelihood.LOW,
    severity=RiskLevel.LOW,
    mitigation="reconcile the declared risk levels with the automated assessment",
)


def _item(
    descriptor: RiskRuleDescriptor,
    trigger: str,
    *,
    category: BiasCategory | DataRiskKind | None = None,
    likelihood: Likelihood | None = None,
) -> RiskItem:
    likelihood = likelihood or descriptor.likelihood
    return RiskItem(
        rule_id=descriptor.rule_id,
        category=category or descriptor.category,
        likelihood=likelihood,
        severity=descriptor.severity or LIKELIHOOD_SEVERITY[likelihood],
        trigger=trigger,
    )


def _sample_missing(ds: Datasheet, _: date, __: RiskSettings) -> Iterator[RiskItem]:
    for path in DISTRIBUTION_PATHS:
        if get_field(ds, path) is None:
            yield _item(SAMPLE_MISSING, ABSENT_PREFIX + path)


def _imbalance(ds: Datasheet, _: date, thresholds: RiskSettings) -> Iterator[RiskItem]:
    for path in DISTRIBUTION_PATHS:
        shares = get_field(ds, path)
        if shares and max(shares.values()) > thresholds.imbalance_max_share:
            yield _item(DATADRIVEN_IMBALANCE, path)


def _stale(ds: Datasheet, reference_date: date, thresholds: RiskSettings) -> Iterator[RiskItem]:
    cutoff = reference_date - relativedelta(years=thresholds.staleness_years)
    temporal = ds.temporal
    if temporal.last_updated is not None and temporal.last_updated < cutoff:
        yield _item(TEMPORAL_STALE, "temporal.last_updated")
    elif temporal.coverage_end is not None and temporal.coverage_end < cutoff:
        yield _item(TEMPORAL_STALE, "temporal.coverage_end")


def _describes_annotation(provenance: str | None) -> bool:
    if provenance is None:
        return False
    lowered = provenance.casefold()
    return any(keyword in lowered for keyword in ANNOTATION_KEYWORDS)


def _annotator_unknown(ds: Datasheet, _: date, __: RiskSettings) -> Iterator[RiskItem]:
    provenance = ds.source.provenance
    if ds.characteristics.media_type is not None and not _describes_annotation(provenance):
        trigger = "source.provenance" if provenance is not None else "absent:source.provenance"
        yield _item(ANNOTATOR_UNKNOWN, trigger)


def _declared_likelihoods(ds: Datasheet, _: date, __: RiskSettings) -> Iterator[RiskItem]:
    declared = ds.demographics.bias_likelihoods or {}
    for category in BiasCategory:
        likelihood = declared.get(category)
        if likelihood in _DECLARED_REPORTABLE:
            yield _item(
                DECLARED_LIKELIHOOD,
                "demographics.bias_likelihoods",
                category=category,
                likelihood=likelihood,
            )


def _reidentification(ds: Datasheet, _: date, __: RiskSettings) -> Iterator[RiskItem]:
    section = ds.personal_data
    if section.contains_personal_data is not True:
        return
    risk = section.reidentification_risk
    if section.anonymization_techniques is None:
        trigger = "absent:personal_data.anonymization_techniques"
    elif not section.anonymization_techniques:
        trigger = "personal_data.anonymization_techniques"
    elif risk in _WORRYING:
        trigger = "personal_data.reidentification_risk"
    else:
        return
    likelihood = risk if risk in _WORRYING else Likelihood.UNKNOWN
    yield _item(REIDENTIFICATION, trigger, likelihood=likelihood)


def _incomplete(ds: Datasheet, _: date, __: RiskSettings) -> Iterator[RiskItem]:
    if ds.characteristics.incomplete is True:
        yield _item(INCOMPLETE, "characteristics.incomplete")


def _fraction_gap(ds: Datasheet, _: date, thresholds: RiskSettings) -> Iterator[RiskItem]:
    for path in DISTRIBUTION_PATHS:
        shares = get_field(ds, path)
        if shares is not None and sum(shares.values()) < thresholds.fraction_gap_min:
            yield _item(FRACTION_GAP, path)


_EVALUATORS: tuple[tuple[RiskRuleDescriptor, Evaluator], ...] = (
    (SAMPLE_MISSING, _sample_missing),
    (DATADRIVEN_IMBALANCE, _imbalance),
    (TEMPORAL_STALE, _stale),
    (ANNOTATOR_UNKNOWN, _annotator_unknown),
    (DECLARED_LIKELIHOOD, _declared_likelihoods),
    (REIDENTIFICATION, _reidentification),
    (INCOMPLETE, _incomplete),
    (FRACTION_GAP, _fraction_gap),
)


def rule_catalog() -> list[RiskRuleDescriptor]:
    return [descriptor for descriptor, _ in _EVALUATORS] + [DECLARED_MISMATCH]


def _touches_personal_data(item: RiskItem) -> bool:
    return item.trigger.removeprefix(ABSENT_PREFIX).startswith("personal_data.")


def aggregate(
    items: Iterable[RiskItem], *, personal_data: bool = False
) -> tuple[RiskLevel, LegalRiskTier]:
    """Generic level is the worst item severity; the legal tier is never set to unacceptable."""
    items = list(items)
    generic = max((item.severity for item in items), key=lambda level: level.rank, default=None)
    if any(
        item.rule_id == REIDENTIFICATION.rule_id or _touches_personal_data(item) for item in items
    ):
        legal = LegalRiskTier.HIGH
    elif personal_data:
        legal = LegalRiskTier.LIMITED
    else:
        legal = LegalRiskTier.MINIMAL
    return generic or RiskLevel.LOW, legal


def _declared_mismatch(
    ds: Datasheet, generic: RiskLevel, legal: LegalRiskTier
) -> Iterator[RiskItem]:
    declared = ds.risk_compliance
    if declared.generic_risk_level is not None and declared.generic_risk_level != generic:
        yield _item(DECLARED_MISMATCH, "risk_compliance.generic_risk_level")
    if declared.legal_risk_level is not None and declared.legal_risk_level != legal:
        yield _item(DECLARED_MISMATCH, "risk_compliance.legal_risk_level")


def _unique(values: Iterable[str | None]) -> tuple[str, ...]:
    return tuple(dict.fromkeys(value for value in values if value))


def assess(
    ds: Datasheet, reference_date: date, thresholds: RiskSettings | None = None
) -> RiskAssessment:
    thresholds = thresholds or settings.risk
    items: list[RiskItem] = []
    for _, evaluate in _EVALUATORS:
        items.extend(evaluate(ds, reference_date, thresholds))

    personal = ds.personal_data.contains_personal_data is True
    generic, legal = aggregate(items, personal_data=personal)
    items.extend(_declared_mismatch(ds, generic, legal))
    generic, legal = aggregate(items, personal_data=personal)

    fired = {item.rule_id for item in items}
    descriptors = [descriptor for descriptor in rule_catalog() if descriptor.rule_id in fired]
    logger.info("assessment fired %d items from %d rules", len(items), len(descriptors))
    return RiskAssessment(
        reference_date=reference_date,
        generic_level=generic,
        legal_level=legal,
        items=tuple(items),
        mitigations=_unique(descriptor.mitigation for descriptor in descriptors),
        derived_prohibitions=_unique(descriptor.derived_prohibition for descriptor in descriptors),
    )


def render_rule_reference() -> str:
    """Human-readable reference of risk rules, validator rules and compliance obligations."""
    lines = ["Risk rules", "=========="]
    for descriptor in rule_catalog():
        category = descriptor.category.value if descriptor.category else "as declared"
        likelihood = descriptor.likelihood.value if descriptor.likelihood else "as declared"
        severity = descriptor.severity.value if descriptor.severity else "from likelihood"
        lines.append("")
        lines.append(f"{descriptor.rule_id}  [{category}]")
        lines.append(f"  when:       {descriptor.condition}")
        lines.append(f"  likelihood: {likelihood}; severity: {severity}")
        lines.append(f"  mitigation: {descriptor.mitigation}")
        if descriptor.derived_prohibition:
            lines.append(f"  prohibits:  {descriptor.derived_prohibition}")

    lines += ["", "Validator rules", "==============="]
    for rule in cross_field_rules():
        lines.append(f"{rule.id:<4} [{rule.severity.value}] {rule.description}")
        lines.append(f"     fields: {', '.join(rule.fields)}")
        if rule.parse_code:
            lines.append(f"     rejected while parsing as {rule.parse_code}")

    lines += ["", "Compliance obligations", "======================"]
    for obligation in obligation_catalog():
        lines.append(f"{obligation.id} ({obligation.law.value} {obligation.citation})")
        lines.append(f"  {obligation.description}")
        lines.append(f"  applies when: {obligation.applicability_condition}")
        lines.append(
            f"  evidence ({obligation.evidence_mode}): {', '.join(obligation.evidence_fields)}"
        )
    return "\n".join(lines) + "\n"
