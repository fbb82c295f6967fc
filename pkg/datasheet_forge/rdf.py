"""Triple export over DCAT, ODRL and DPV, plus the field-to-term mapping table.

Every node is named by an IRI derived from the base IRI, so no blank nodes are produced and
the output of one (datasheet, base IRI) pair is identical across runs.
"""

import logging
from collections.abc import Iterable
from datetime import date
from decimal import Decimal
from enum import Enum
from typing import Any, NamedTuple
from urllib.parse import quote, urlparse

from rdflib import Graph, Literal, Namespace, URIRef
from rdflib.namespace import RDF, RDFS, XSD

from .config import settings
from .models import Datasheet
from .registry import field_registry, get_field, populated_paths
from .schemas import MappingRow

logger = logging.getLogger(__name__)

DCAT = Namespace("http://www.w3.org/ns/dcat#")
DCT = Namespace("http://purl.org/dc/terms/")
ODRL = Namespace("http://www.w3.org/ns/odrl/2/")
DPV = Namespace("https://w3id.org/dpv#")

Triple = tuple[URIRef, URIRef, URIRef | Literal]

_IRI_UNSAFE = frozenset('<>"{}|\\^`')


class InvalidBaseIriError(ValueError):
    pass


class Shape(str, Enum):
    LITERAL = "literal"
    LITERAL_LIST = "literal-per-entry"
    NODE = "node"
    NODE_LIST = "node-per-entry"
    SHARE_MAP = "share-map"
    LIKELIHOOD_MAP = "likelihood-map"
    POLICY = "policy"


class Term(NamedTuple):
    """A predicate or class; ``local`` terms live in the artifact namespace."""

    iri: str
    local: bool = False

    def resolve(self, terms: Namespace) -> URIRef:
        return terms[self.iri] if self.local else URIRef(self.iri)


class FieldMapping(NamedTuple):
    shape: Shape
    link: Term
    node_class: Term | None = None
    note: str = ""


def _t(namespace: Namespace, name: str) -> Term:
    return Term(str(namespace[name]))


def _own(name: str) -> Term:
    return Term(name, local=True)


_DCAT = {name: _t(DCAT, name) for name in ("version", "contactPoint", "startDate", "endDate")}
_DCT = {
    name: _t(DCT, name)
    for name in (
        "title",
        "publisher",
        "license",
        "identifier",
        "source",
        "provenance",
        "modified",
        "accrualPeriodicity",
        "spatial",
        "type",
        "accessRights",
    )
}

_SHARE = _own("share")
_BIAS_CATEGORY = _own("biasCategory")
_LIKELIHOOD = _own("likelihood")

_NIL_NOTE = "an empty list exports as a single rdf:nil object"

_MAPPINGS: dict[str, FieldMapping] = {
    "metadata.title": FieldMapping(Shape.LITERAL, _DCT["title"]),
    "metadata.version": FieldMapping(Shape.LITERAL, _DCAT["version"]),
    "metadata.publisher": FieldMapping(Shape.LITERAL, _DCT["publisher"]),
    "metadata.license": FieldMapping(
        Shape.LITERAL, _DCT["license"], note="http(s) values are exported as IRIs"
    ),
    "metadata.identifier": FieldMapping(Shape.LITERAL, _DCT["identifier"]),
    "metadata.contact": FieldMapping(Shape.LITERAL, _DCAT["contactPoint"]),
    "purpose.creation_purpose": FieldMapping(
        Shape.NODE, _t(DPV, "hasPurpose"), _t(DPV, "Purpose"), "purpose node with description"
    ),
    "purpose.intended_benefit": FieldMapping(Shape.LITERAL, _own("intendedBenefit")),
    "purpose.beneficiaries": FieldMapping(Shape.LITERAL_LIST, _own("beneficiary"), note=_NIL_NOTE),
    "purpose.intended_uses": FieldMapping(Shape.LITERAL_LIST, _own("intendedUse"), note=_NIL_NOTE),
    "source.source_description": FieldMapping(Shape.LITERAL, _DCT["source"]),
    "source.provenance": FieldMapping(Shape.LITERAL, _DCT["provenance"]),
    "source.ethical_approval": FieldMapping(Shape.LITERAL, _own("ethicalApproval")),
    "source.approving_body": FieldMapping(Shape.LITERAL, _own("approvingBody")),
    "source.funding_sources": FieldMapping(
        Shape.LITERAL_LIST, _own("fundingSource"), note=_NIL_NOTE
    ),
    "temporal.coverage_start": FieldMapping(Shape.LITERAL, _DCAT["startDate"]),
    "temporal.coverage_end": FieldMapping(Shape.LITERAL, _DCAT["endDate"]),
    "temporal.last_updated": FieldMapping(Shape.LITERAL, _DCT["modified"]),
    "temporal.update_frequency": FieldMapping(Shape.LITERAL, _DCT["accrualPeriodicity"]),
    "demographics.age_min": FieldMapping(Shape.LITERAL, _own("ageMin")),
    "demographics.age_max": FieldMapping(Shape.LITERAL, _own("ageMax")),
    "demographics.age_distribution": FieldMapping(
        Shape.SHARE_MAP, _own("ageDistribution"), note="one node per bucket"
    ),
    "demographics.gender_distribution": FieldMapping(
        Shape.SHARE_MAP, _own("genderDistribution"), note="one node per bucket"
    ),
    "demographics.ethnicity_distribution": FieldMapping(
        Shape.SHARE_MAP, _own("ethnicityDistribution"), note="one node per bucket"
    ),
    "demographics.geographic_origin": FieldMapping(
        Shape.LITERAL_LIST, _DCT["spatial"], note=_NIL_NOTE
    ),
    "demographics.socioeconomic_notes": FieldMapping(Shape.LITERAL, _own("socioeconomicNotes")),
    "demographics.underrepresented_groups": FieldMapping(
        Shape.LITERAL_LIST, _own("underrepresentedGroup"), note=_NIL_NOTE
    ),
    "demographics.bias_likelihoods": FieldMapping(
        Shape.LIKELIHOOD_MAP,
        _own("biasLikelihood"),
        note="artifact terms; candidate DPV homes are risk and impact concepts",
    ),
    "demographics.demographic_notes": FieldMapping(Shape.LITERAL, _own("demographicNotes")),
    "characteristics.media_type": FieldMapping(Shape.LITERAL, _DCT["type"]),
    "characteristics.record_count": FieldMapping(Shape.LITERAL, _own("recordCount")),
    "characteristics.feature_description": FieldMapping(
        Shape.LITERAL, _own("featureDescription")
    ),
    "characteristics.incomplete": FieldMapping(Shape.LITERAL, _own("incomplete")),
    "characteristics.missing_elements": FieldMapping(
        Shape.LITERAL_LIST, _own("missingElement"), note=_NIL_NOTE
    ),
    "characteristics.missing_reasons": FieldMapping(
        Shape.LITERAL_LIST, _own("missingReason"), note=_NIL_NOTE
    ),
    "bias_mitigation.applied_methods": FieldMapping(
        Shape.LITERAL_LIST, _own("appliedMitigation"), note=_NIL_NOTE
    ),
    "bias_mitigation.suggested_methods": FieldMapping(
        Shape.LITERAL_LIST, _own("suggestedMitigation"), note=_NIL_NOTE
    ),
    "bias_mitigation.residual_bias_notes": FieldMapping(Shape.LITERAL, _own("residualBias")),
    "personal_data.contains_personal_data": FieldMapping(
        Shape.LITERAL, _own("containsPersonalData")
    ),
    "personal_data.personal_categories": FieldMapping(
        Shape.NODE_LIST, _t(DPV, "hasPersonalData"), _t(DPV, "PersonalData"), _NIL_NOTE
    ),
    "personal_data.special_categories": FieldMapping(
        Shape.NODE_LIST,
        _own("specialCategory"),
        _t(DPV, "SpecialCategoryPersonalData"),
        _NIL_NOTE,
    ),
    "personal_data.sensitivity": FieldMapping(Shape.LITERAL, _own("sensitivity")),
    "personal_data.anonymization_techniques": FieldMapping(
        Shape.LITERAL_LIST, _own("anonymizationTechnique"), note=_NIL_NOTE
    ),
    "personal_data.reidentification_risk": FieldMapping(
        Shape.LITERAL, _own("reidentificationRisk")
    ),
    "personal_data.legal_basis": FieldMapping(
        Shape.NODE, _t(DPV, "hasLegalBasis"), _t(DPV, "LegalBasis"), "legal basis node"
    ),
    "risk_compliance.generic_risk_level": FieldMapping(Shape.LITERAL, _own("genericRiskLevel")),
    "risk_compliance.legal_risk_level": FieldMapping(Shape.LITERAL, _own("legalRiskLevel")),
    "risk_compliance.jurisdiction": FieldMapping(
        Shape.LITERAL_LIST, _t(DPV, "hasJurisdiction"), note=_NIL_NOTE
    ),
    "risk_compliance.applicable_laws": FieldMapping(
        Shape.LITERAL_LIST, _t(DPV, "hasApplicableLaw"), note=_NIL_NOTE
    ),
    "risk_compliance.impact_assessments": FieldMapping(
        Shape.LITERAL_LIST, _own("impactAssessment"), note=_NIL_NOTE
    ),
    "risk_compliance.suggested_mitigations": FieldMapping(
        Shape.LITERAL_LIST, _own("suggestedRiskMitigation"), note=_NIL_NOTE
    ),
    "usage_restriction.access_restrictions": FieldMapping(
        Shape.LITERAL_LIST, _DCT["accessRights"], note=_NIL_NOTE
    ),
    "usage_restriction.permissions": FieldMapping(
        Shape.POLICY, _t(ODRL, "permission"), _t(ODRL, "Permission"), "free text as rdfs:comment"
    ),
    "usage_restriction.prohibitions": FieldMapping(
        Shape.POLICY,
        _t(ODRL, "prohibition"),
        _t(ODRL, "Prohibition"),
        "free text as rdfs:comment",
    ),
    "usage_restriction.obligations": FieldMapping(
        Shape.POLICY, _t(ODRL, "obligation"), _t(ODRL, "Duty"), "free text as rdfs:comment"
    ),
}


def _has_unsafe_chars(value: str) -> bool:
    return any(
        char in _IRI_UNSAFE or char.isspace() or not char.isprintable() for char in value
    )


def check_base_iri(base_iri: str) -> str:
    """Return ``base_iri`` without a trailing slash, or raise InvalidBaseIriError."""
    parts = urlparse(base_iri)
    if (
        not parts.scheme
        or not (parts.netloc or parts.path)
        or parts.query
        or "#" in base_iri
        or _has_unsafe_chars(base_iri)
    ):
        raise InvalidBaseIriError(f"base IRI must be an absolute IRI, got {base_iri!r}")
    return base_iri.rstrip("/")


def artifact_namespace(base: str) -> Namespace:
    return Namespace(f"{base}/terms#")


def _literal(value: Any) -> Literal:
    if isinstance(value, Enum):
        return Literal(value.value)
    if isinstance(value, bool):
        return Literal(value, datatype=XSD.boolean)
    if isinstance(value, int):
        return Literal(value, datatype=XSD.integer)
    if isinstance(value, float):
        return Literal(f"{Decimal(repr(value)):f}", datatype=XSD.decimal)
    if isinstance(value, date):
        return Literal(value.isoformat(), datatype=XSD.date)
    return Literal(value)


def _license_object(value: str) -> URIRef | Literal:
    parts = urlparse(value)
    if parts.scheme in ("http", "https") and parts.netloc and not _has_unsafe_chars(value):
        return URIRef(value)
    return Literal(value)


class _FieldExporter:
    def __init__(self, base: str) -> None:
        self.base = base
        self.dataset = URIRef(base)
        self.terms = artifact_namespace(base)

    def node(self, *parts: str) -> URIRef:
        return URIRef("/".join([self.base, *(quote(part, safe="") for part in parts)]))

    def triples(self, path: str, value: Any) -> list[Triple]:
        mapping = _MAPPINGS[path]
        section, name = path.split(".", 1)
        link = mapping.link.resolve(self.terms)
        dataset = self.dataset

        match mapping.shape:
            case Shape.LITERAL:
                obj = _license_object(value) if path == "metadata.license" else _literal(value)
                return [(dataset, link, obj)]
            case Shape.LITERAL_LIST:
                if not value:
                    return [(dataset, link, RDF.nil)]
                return [(dataset, link, _literal(entry)) for entry in value]
            case Shape.NODE:
                node = self.node(section, name)
                return [
                    (dataset, link, node),
                    (node, RDF.type, mapping.node_class.resolve(self.terms)),
                    (node, DCT["description"], _literal(value)),
                ]
            case Shape.NODE_LIST:
                if not value:
                    return [(dataset, link, RDF.nil)]
                node_class = mapping.node_class.resolve(self.terms)
                triples: list[Triple] = []
                for entry in value:
                    node = self.node(section, name, entry)
                    triples += [
                        (dataset, link, node),
                        (node, RDF.type, node_class),
                        (node, RDFS.label, Literal(entry)),
                    ]
                return triples
            case Shape.SHARE_MAP:
                if not value:
                    return [(dataset, link, RDF.nil)]
                triples = []
                for label, share in sorted(value.items()):
                    node = self.node(section, name, label)
                    triples += [
                        (dataset, link, node),
                        (node, RDFS.label, Literal(label)),
                        (node, _SHARE.resolve(self.terms), _literal(share)),
                    ]
                return triples
            case Shape.LIKELIHOOD_MAP:
                if not value:
                    return [(dataset, link, RDF.nil)]
                triples = []
                for category, likelihood in sorted(value.items()):
                    node = self.node(section, name, category.value)
                    triples += [
                        (dataset, link, node),
                        (node, _BIAS_CATEGORY.resolve(self.terms), _literal(category)),
                        (node, _LIKELIHOOD.resolve(self.terms), _literal(likelihood)),
                    ]
                return triples
            case Shape.POLICY:
                policy = self.node("policy", name)
                triples = [(dataset, ODRL["hasPolicy"], policy), (policy, RDF.type, ODRL["Set"])]
                if not value:
                    return [*triples, (policy, link, RDF.nil)]
                rule_class = mapping.node_class.resolve(self.terms)
                for entry in value:
                    rule = self.node("policy", name, entry)
                    triples += [
                        (policy, link, rule),
                        (rule, RDF.type, rule_class),
                        (rule, RDFS.comment, Literal(entry)),
                    ]
                return triples
        raise AssertionError(mapping.shape)


def _sort_key(triple: Triple) -> tuple[str, ...]:
    return tuple(term.n3() for term in triple)


def export_triples(ds: Datasheet, base_iri: str) -> list[Triple]:
    exporter = _FieldExporter(check_base_iri(base_iri))
    triples: list[Triple] = [(exporter.dataset, RDF.type, DCAT["Dataset"])]
    for path in populated_paths(ds):
        triples.extend(exporter.triples(path, get_field(ds, path)))
    logger.debug("exported %d triples", len(triples))
    return sorted(triples, key=_sort_key)


def field_triples(ds: Datasheet, path: str, base_iri: str) -> list[Triple]:
    """Triples contributed by one field; empty when the field is unpopulated."""
    value = get_field(ds, path)
    if value is None:
        return []
    return _FieldExporter(check_base_iri(base_iri)).triples(path, value)


def serialize_ntriples(triples: Iterable[Triple]) -> str:
    graph = Graph()
    for triple in triples:
        graph.add(triple)
    text = graph.serialize(format="nt")
    return "".join(f"{line}\n" for line in sorted(text.splitlines()) if line.strip())


def _row_predicates(mapping: FieldMapping, terms: Namespace) -> tuple[str, ...]:
    link = str(mapping.link.resolve(terms))
    match mapping.shape:
        case Shape.NODE:
            return link, str(RDF.type), str(DCT["description"])
        case Shape.NODE_LIST:
            return link, str(RDF.type), str(RDFS.label)
        case Shape.SHARE_MAP:
            return link, str(RDFS.label), str(_SHARE.resolve(terms))
        case Shape.LIKELIHOOD_MAP:
            return link, str(_BIAS_CATEGORY.resolve(terms)), str(_LIKELIHOOD.resolve(terms))
        case Shape.POLICY:
            return str(ODRL["hasPolicy"]), str(RDF.type), link, str(RDFS.comment)
    return (link,)


def mapping_table(base_iri: str | None = None) -> list[MappingRow]:
    terms = artifact_namespace(check_base_iri(base_iri or settings.export.base_iri))
    return [
        MappingRow(
            path=path,
            predicates=_row_predicates(_MAPPINGS[path], terms),
            shape=_MAPPINGS[path].shape.value,
            note=_MAPPINGS[path].note,
        )
        for path in field_registry().paths()
    ]


def render_mapping_table(base_iri: str | None = None) -> str:
    lines = []
    for row in mapping_table(base_iri):
        lines.append(f"{row.path:<42} {row.shape:<18} {' '.join(row.predicates)}")
    return "\n".join(lines) + "\n"
