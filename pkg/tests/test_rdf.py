import re

import pytest
from hypothesis import given
from rdflib import Literal, URIRef
from rdflib.namespace import RDF, RDFS, XSD

from datasheet_forge.models import new_template
from datasheet_forge.rdf import (
    DCAT,
    DCT,
    ODRL,
    InvalidBaseIriError,
    check_base_iri,
    export_triples,
    field_triples,
    mapping_table,
    render_mapping_table,
    serialize_ntriples,
)
from datasheet_forge.registry import field_registry, populated_paths, with_fields

from .conftest import VALID_DIR, load_datasheet
from .strategies import datasheets

BASE = "https://data.example.org/datasets/cxr"
DATASET = URIRef(BASE)

_IRI = r"<[^<>\"{}|^`\\\s]+>"
_LITERAL = r'"(?:[^"\\\n\r]|\\.)*"(?:\^\^' + _IRI + r"|@[a-zA-Z]+(?:-[a-zA-Z0-9]+)*)?"
NTRIPLE_LINE = re.compile(rf"{_IRI} {_IRI} (?:{_IRI}|{_LITERAL}) \.")


def _predicates(triples):
    return {str(predicate) for _, predicate, _ in triples}


class TestExport:
    def test_title_only(self):
        ds = with_fields(new_template(), {"metadata.title": "CXR-2023"})
        assert export_triples(ds, BASE) == [
            (DATASET, DCT["title"], Literal("CXR-2023")),
            (DATASET, RDF.type, DCAT["Dataset"]),
        ]

    def test_template_is_only_typed(self):
        assert export_triples(new_template(), BASE) == [(DATASET, RDF.type, DCAT["Dataset"])]

    def test_prohibition_becomes_policy_node(self):
        ds = with_fields(
            new_template(), {"usage_restriction.prohibitions": ["no third party sharing"]}
        )
        triples = set(export_triples(ds, BASE))
        policy = URIRef(f"{BASE}/policy/prohibitions")
        rule = URIRef(f"{BASE}/policy/prohibitions/no%20third%20party%20sharing")
        assert (DATASET, ODRL["hasPolicy"], policy) in triples
        assert (policy, RDF.type, ODRL["Set"]) in triples
        assert (policy, ODRL["prohibition"], rule) in triples
        assert (rule, RDF.type, ODRL["Prohibition"]) in triples
        assert (rule, RDFS.comment, Literal("no third party sharing")) in triples

    def test_full_reference_triple_count(self, full_reference):
        assert len(export_triples(full_reference, BASE)) == 115

    def test_typed_literals(self, full_reference):
        triples = set(export_triples(full_reference, BASE))
        terms = f"{BASE}/terms#"
        assert (
            DATASET,
            URIRef(terms + "recordCount"),
            Literal("12000", datatype=XSD.integer),
        ) in triples
        assert (
            DATASET,
            DCAT["startDate"],
            Literal("2019-01-01", datatype=XSD.date),
        ) in triples
        assert (
            DATASET,
            URIRef(terms + "ethicalApproval"),
            Literal("true", datatype=XSD.boolean),
        ) in triples
        bucket = URIRef(f"{BASE}/demographics/gender_distribution/female")
        assert (bucket, URIRef(terms + "share"), Literal("0.48", datatype=XSD.decimal)) in triples

    def test_license_iri(self, full_reference):
        triples = export_triples(full_reference, BASE)
        (license_object,) = [o for _, p, o in triples if p == DCT["license"]]
        assert license_object == URIRef("https://creativecommons.org/licenses/by-nc/4.0/")

    def test_license_token_stays_literal(self):
        ds = load_datasheet(VALID_DIR / "benign_tabular.json")
        (license_object,) = [o for _, p, o in export_triples(ds, BASE) if p == DCT["license"]]
        assert license_object == Literal("CC-BY-4.0")

    @pytest.mark.parametrize(
        "license_value",
        [
            "http://example.org/lic<1>",
            'http://example.org/a"b',
            "https://example.org/{x}",
            "https://example.org/a\tb",
            "https:///no-host",
        ],
    )
    def test_unsafe_license_iri_stays_literal(self, license_value):
        ds = with_fields(new_template(), {"metadata.license": license_value})
        (license_object,) = [o for _, p, o in export_triples(ds, BASE) if p == DCT["license"]]
        assert license_object == Literal(license_value)
        (line,) = [
            line
            for line in serialize_ntriples(export_triples(ds, BASE)).splitlines()
            if "/license>" in line
        ]
        assert NTRIPLE_LINE.fullmatch(line), line

    def test_license_iri_with_fragment(self):
        ds = with_fields(new_template(), {"metadata.license": "https://example.org/licenses#v2"})
        (license_object,) = [o for _, p, o in export_triples(ds, BASE) if p == DCT["license"]]
        assert license_object == URIRef("https://example.org/licenses#v2")

    def test_privacy_terms(self, full_reference):
        predicates = _predicates(export_triples(full_reference, BASE))
        assert {
            "https://w3id.org/dpv#hasPurpose",
            "https://w3id.org/dpv#hasPersonalData",
            "https://w3id.org/dpv#hasLegalBasis",
        } <= predicates

    def test_empty_list_is_nil(self, minimal_datasheet):
        ds = with_fields(minimal_datasheet, {"personal_data.anonymization_techniques": []})
        triples = field_triples(ds, "personal_data.anonymization_techniques", BASE)
        assert triples == [
            (DATASET, URIRef(f"{BASE}/terms#anonymizationTechnique"), RDF.nil)
        ]

    def test_empty_policy(self, minimal_datasheet):
        ds = with_fields(minimal_datasheet, {"usage_restriction.obligations": []})
        triples = field_triples(ds, "usage_restriction.obligations", BASE)
        policy = URIRef(f"{BASE}/policy/obligations")
        assert (policy, ODRL["obligation"], RDF.nil) in triples
        assert len(triples) == 3

    def test_no_blank_nodes(self, full_reference):
        for triple in export_triples(full_reference, BASE):
            assert all(isinstance(term, URIRef | Literal) for term in triple)

    def test_trailing_slash_is_ignored(self, full_reference):
        assert export_triples(full_reference, BASE + "/") == export_triples(full_reference, BASE)


@pytest.mark.parametrize(
    "base_iri",
    ["datasets/cxr", "", "https://", "https://example.org/a b", "https://example.org/x#frag",
     "https://example.org/x?q=1", "urn-no-scheme", "urn:", "https://example.org/\x00"],
)
def test_invalid_base_iri(base_iri, full_reference):
    with pytest.raises(InvalidBaseIriError):
        export_triples(full_reference, base_iri)
    with pytest.raises(InvalidBaseIriError):
        check_base_iri(base_iri)


@pytest.mark.parametrize(
    ("base_iri", "expected"),
    [
        ("urn:uuid:6f1c2d3e-0000-4000-8000-000000000001",) * 2,
        ("tag:example.org,2024:cxr", "tag:example.org,2024:cxr"),
        ("https://data.example.org/datasets/cxr/", "https://data.example.org/datasets/cxr"),
    ],
)
def test_scheme_qualified_base_iri(base_iri, expected, minimal_datasheet):
    assert check_base_iri(base_iri) == expected
    lines = serialize_ntriples(export_triples(minimal_datasheet, base_iri)).splitlines()
    assert lines
    for line in lines:
        assert NTRIPLE_LINE.fullmatch(line), line


class TestMappingTable:
    def test_one_row_per_field(self):
        rows = mapping_table(BASE)
        assert len(rows) == 55
        assert [row.path for row in rows] == field_registry().paths()

    def test_license_row(self):
        (row,) = [row for row in mapping_table(BASE) if row.path == "metadata.license"]
        assert row.predicates == ("http://purl.org/dc/terms/license",)

    def test_default_base(self):
        assert len(mapping_table()) == 55

    @pytest.mark.parametrize("path", sorted(VALID_DIR.glob("*.json")), ids=lambda p: p.stem)
    def test_export_predicates_are_mapped(self, path):
        ds = load_datasheet(path)
        mapped = {predicate for row in mapping_table(BASE) for predicate in row.predicates}
        exported = _predicates(export_triples(ds, BASE)) - {str(RDF.type)}
        assert exported <= mapped

    def test_rendering(self):
        text = render_mapping_table(BASE)
        assert len(text.splitlines()) == 55
        assert "usage_restriction.prohibitions" in text


class TestSerialization:
    def test_lines_are_well_formed(self, full_reference):
        text = serialize_ntriples(export_triples(full_reference, BASE))
        lines = text.splitlines()
        assert len(lines) == 115
        assert lines == sorted(lines)
        for line in lines:
            assert NTRIPLE_LINE.fullmatch(line), line

    def test_escaping(self):
        ds = with_fields(new_template(), {"metadata.title": 'Quote " and\nnewline'})
        (line,) = [
            line
            for line in serialize_ntriples(export_triples(ds, BASE)).splitlines()
            if "title" in line
        ]
        assert NTRIPLE_LINE.fullmatch(line)

    def test_deterministic(self, full_reference):
        first = serialize_ntriples(export_triples(full_reference, BASE))
        second = serialize_ntriples(export_triples(full_reference.model_copy(), BASE))
        assert first == second


@given(datasheets())
def test_every_populated_field_contributes(ds):
    triples = export_triples(ds, BASE)
    assert len(populated_paths(ds)) < len(triples)
    for path in populated_paths(ds):
        assert field_triples(ds, path, BASE)


@given(datasheets())
def test_removing_a_field_removes_its_triples(ds):
    everything = set(export_triples(ds, BASE))
    for path in populated_paths(ds):
        removed = with_fields(ds, {path: None})
        assert set(export_triples(removed, BASE)) == everything - set(
            field_triples(ds, path, BASE)
        )
