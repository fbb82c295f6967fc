"""Controlled vocabularies used by datasheet fields and reports.

Every member's value is its canonical token; ``Vocabulary(token)`` decodes and rejects
anything outside the canonical set.
"""

from enum import Enum


class SectionId(str, Enum):
    METADATA = "metadata"
    PURPOSE = "purpose"
    SOURCE = "source"
    TEMPORAL = "temporal"
    DEMOGRAPHICS = "demographics"
    CHARACTERISTICS = "characteristics"
    BIAS_MITIGATION = "bias_mitigation"
    PERSONAL_DATA = "personal_data"
    RISK_COMPLIANCE = "risk_compliance"
    USAGE_RESTRICTION = "usage_restriction"


class Likelihood(str, Enum):
    VERY_LOW = "very-low"
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    VERY_HIGH = "very-high"
    UNKNOWN = "unknown"


class RiskLevel(str, Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"

    @property
    def rank(self) -> int:
        return _RISK_LEVEL_ORDER.index(self)


class LegalRiskTier(str, Enum):
    MINIMAL = "minimal"
    LIMITED = "limited"
    HIGH = "high"
    UNACCEPTABLE = "unacceptable"

    @property
    def rank(self) -> int:
        return _LEGAL_TIER_ORDER.index(self)


class BiasCategory(str, Enum):
    SAMPLE = "sample"
    ANNOTATOR = "annotator"
    TEMPORAL = "temporal"
    GENDER = "gender"
    DATA_DRIVEN = "data-driven"
    ALGORITHMIC = "algorithmic"
    HUMAN = "human"


class DataRiskKind(str, Enum):
    MISSINGNESS = "missingness"
    STALENESS = "staleness"
    REIDENTIFICATION = "reidentification"
    INCOMPLETENESS = "incompleteness"
    DECLARED_MISMATCH = "declared-mismatch"


class Sensitivity(str, Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


class MediaType(str, Enum):
    TABULAR = "tabular"
    IMAGES = "images"
    TEXT = "text"
    SIGNALS = "signals"
    GENOMIC = "genomic"
    AUDIO = "audio"
    VIDEO = "video"
    MIXED = "mixed"


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


class ParseMode(str, Enum):
    STRICT = "strict"
    LENIENT = "lenient"


class CoverageMark(str, Enum):
    FULL = "full"
    PARTIAL = "partial"
    ABSENT = "absent"

    @property
    def symbol(self) -> str:
        return {"full": "●", "partial": "○", "absent": "✗"}[self.value]

    @property
    def rank(self) -> int:
        return {"absent": 0, "partial": 1, "full": 2}[self.value]


class ComplianceStatus(str, Enum):
    SATISFIED = "satisfied"
    MISSING_EVIDENCE = "missing-evidence"
    NOT_APPLICABLE = "not-applicable"


class Law(str, Enum):
    GDPR = "GDPR"
    AI_ACT = "AI-Act"


_RISK_LEVEL_ORDER = list(RiskLevel)
_LEGAL_TIER_ORDER = list(LegalRiskTier)

# Likelihood -> severity; unknown counts as high.
LIKELIHOOD_SEVERITY: dict[Likelihood, RiskLevel] = {
    Likelihood.VERY_LOW: RiskLevel.LOW,
    Likelihood.LOW: RiskLevel.LOW,
    Likelihood.MEDIUM: RiskLevel.MEDIUM,
    Likelihood.HIGH: RiskLevel.HIGH,
    Likelihood.VERY_HIGH: RiskLevel.HIGH,
    Likelihood.UNKNOWN: RiskLevel.HIGH,
}


def vocabularies() -> dict[str, type[Enum]]:
    """Vocabularies a datasheet field can be bound to, keyed by the registry's VocabId."""
    return {
        "Likelihood": Likelihood,
        "RiskLevel": RiskLevel,
        "LegalRiskTier": LegalRiskTier,
        "BiasCategory": BiasCategory,
        "Sensitivity": Sensitivity,
        "MediaType": MediaType,
        "SectionId": SectionId,
    }
