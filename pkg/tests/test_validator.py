import json
from datetime import date

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from datasheet_forge.models import MAX_AGE, TemporalSection, new_template
from datasheet_forge.parser import serialize
from datasheet_forge.registry import FieldType, field_registry, is_populated, with_fields
from datasheet_forge.validator import cross_field_rules, validate, validate_document
from datasheet_forge.vocab import ParseMode, SectionId, Severity, vocabularies

from .conftest import DEFECTS_DIR
from .strategies import datasheets


def _findings(report):
    return [(finding.path, finding.code) for finding in report.findings]


@pytest.fixture
def base(minimal_datasheet):
    return minimal_datasheet


class TestRequiredFields:
    def test_template_reports_exactly_the_required_fields(self):
        report = validate(new_template())
        assert not report.valid
        assert _findings(report) == [
            (path, "missing-required") for path in field_registry().required_paths()
        ]

    def test_minimal_datasheet_is_valid(self, base):
        report = validate(base)
        assert report.valid
        assert report.findings == ()

    def test_required_false_counts_as_present(self, base):
        assert base.personal_data.contains_personal_data is False
        assert validate(base).valid


class TestRules:
    def test_catalog(self):
        rules = cross_field_rules()
        assert [rule.id for rule in rules] == [f"R{n}" for n in range(1, 11)]
        paths = set(field_registry().paths())
        for rule in rules:
            assert set(rule.fields) <= paths

    @pytest.mark.parametrize(
        ("updates", "expected"),
        [
            ({"characteristics.incomplete": True}, ("characteristics.missing_elements", "R1")),
            (
                {"personal_data.personal_categories": ["postcode"]},
                ("personal_data.personal_categories", "R3"),
            ),
            (
                {
                    "usage_restriction.permissions": ["Commercial  Use"],
                    "usage_restriction.prohibitions": ["commercial use"],
                },
                ("usage_restriction.prohibitions", "R4"),
            ),
            ({"source.approving_body": "IRB"}, ("source.ethical_approval", "R5")),
            (
                {"personal_data.special_categories": ["health"]},
                ("personal_data.contains_personal_data", "R6"),
            ),
            (
                {"temporal.coverage_start": "2020", "temporal.last_updated": "2019-12-31"},
                ("temporal.last_updated", "R7"),
            ),
            (
                {"characteristics.missing_reasons": ["sensor outage"]},
                ("characteristics.missing_elements", "R8"),
            ),
            (
                {"personal_data.reidentification_risk": "low"},
                ("personal_data.anonymization_techniques", "R9"),
            ),
        ],
    )
    def test_each_rule_reports_its_path(self, base, updates, expected):
        report = validate(with_fields(base, updates))
        assert not report.valid
        assert _findings(report) == [expected]

    def test_coverage_order_rule_on_unchecked_datasheet(self, base):
        temporal = TemporalSection.model_construct(
            coverage_start=date(2022, 1, 1),
            coverage_end=date(2021, 1, 1),
            last_updated=None,
            update_frequency=None,
        )
        report = validate(base.model_copy(update={"temporal": temporal}))
        assert _findings(report) == [("temporal.coverage_end", "R2")]

    def test_reversed_coverage_is_rejected_while_parsing(self):
        rules = {rule.id: rule for rule in cross_field_rules()}
        assert rules["R2"].parse_code == "invariant-violation"
        assert [rule.id for rule in rules.values() if rule.parse_code] == ["R2"]
        report = validate_document((DEFECTS_DIR / "r2_coverage_reversed.json").read_bytes())
        assert _findings(report) == [("temporal.coverage_end", rules["R2"].parse_code)]
        assert "temporal.coverage_end" in rules["R2"].fields

    def test_incomplete_with_empty_elements_still_fires(self, base):
        ds = with_fields(
            base, {"characteristics.incomplete": True, "characteristics.missing_elements": []}
        )
        assert _findings(validate(ds)) == [("characteristics.missing_elements", "R1")]

    def test_special_categories_need_high_sensitivity(self, base):
        ds = with_fields(
            base,
            {
                "personal_data.contains_personal_data": True,
                "personal_data.special_categories": ["health"],
                "personal_data.sensitivity": "medium",
            },
        )
        report = validate(ds)
        assert report.valid
        assert _findings(report) == [("personal_data.sensitivity", "R10")]
        assert report.findings[0].severity == Severity.WARNING

    def test_consistent_personal_data(self, full_reference):
        assert validate(full_reference).findings == ()

    def test_findings_are_unique_per_path_and_code(self, base):
        ds = with_fields(
            base,
            {
                "characteristics.incomplete": True,
                "characteristics.missing_reasons": ["outage"],
            },
        )
        assert _findings(validate(ds)) == [
            ("characteristics.missing_elements", "R1"),
            ("characteristics.missing_elements", "R8"),
        ]


class TestCompleteness:
    def test_template_is_empty(self):
        report = validate(new_template())
        assert report.overall_completeness == 0.0
        assert set(report.section_completeness.values()) == {0.0}

    def test_full_reference_is_complete(self, full_reference):
        report = validate(full_reference)
        assert report.overall_completeness == 1.0
        assert set(report.section_completeness.values()) == {1.0}

    def test_ratios(self, base):
        report = validate(base)
        assert report.overall_completeness == pytest.approx(5 / 55)
        assert report.section_completeness[SectionId.METADATA] == pytest.approx(2 / 6)
        assert report.section_completeness[SectionId.PERSONAL_DATA] == pytest.approx(1 / 7)
        assert report.section_completeness[SectionId.TEMPORAL] == 0.0


@given(datasheets())
def test_completeness_stays_in_range(ds):
    report = validate(ds)
    assert 0.0 <= report.overall_completeness <= 1.0
    assert all(0.0 <= value <= 1.0 for value in report.section_completeness.values())
    assert report.valid == (not report.errors)


def test_populating_a_field_raises_completeness(base):
    before = validate(base).overall_completeness
    after = validate(with_fields(base, {"temporal.update_frequency": "monthly"}))
    assert after.overall_completeness == pytest.approx(before + 1 / 55)
    assert after.section_completeness[SectionId.TEMPORAL] == pytest.approx(1 / 4)


_BENIGN_BY_TYPE = {
    FieldType.TEXT: "documented",
    FieldType.TEXT_LIST: ["documented"],
    FieldType.BOOLEAN: True,
    FieldType.INTEGER: 1,
    FieldType.DATE: "2000-01-01",
    FieldType.FRACTION_MAP: {},
    FieldType.STRUCTURED: {},
}
_BENIGN_BY_PATH = {
    "metadata.version": "1.0",
    "metadata.identifier": "ds-1",
    "temporal.coverage_start": "1900-01-01",
    "temporal.coverage_end": "2100-12-31",
    "demographics.age_min": 0,
    "demographics.age_max": MAX_AGE,
}


def _benign_value(path):
    if path in _BENIGN_BY_PATH:
        return _BENIGN_BY_PATH[path]
    spec = field_registry().get(path)
    if spec.value_type == FieldType.VOCAB:
        return next(iter(vocabularies()[spec.vocabulary])).value
    return _BENIGN_BY_TYPE[spec.value_type]


def _missing_required(report):
    return sum(finding.code == "missing-required" for finding in report.findings)


@settings(max_examples=300)
@given(datasheets(), st.data())
def test_populating_an_absent_field_never_loses_completeness(ds, data):
    absent = [path for path in field_registry().paths() if not is_populated(ds, path)]
    assume(absent)
    path = data.draw(st.sampled_from(absent), label="absent path")
    before = validate(ds)
    after = validate(with_fields(ds, {path: _benign_value(path)}))
    assert after.overall_completeness > before.overall_completeness
    assert _missing_required(after) <= _missing_required(before)


class TestValidateDocument:
    def test_merges_parse_warnings(self, base):
        document = json.loads(serialize(base))
        del document["datasheet_format_version"]
        report = validate_document(json.dumps(document).encode())
        assert report.valid
        assert _findings(report) == [("datasheet_format_version", "version-missing")]

    def test_parse_errors_become_findings(self, base):
        document = json.loads(serialize(base))
        document["metadata"]["titel"] = "x"
        report = validate_document(json.dumps(document).encode())
        assert not report.valid
        assert _findings(report) == [("metadata.titel", "unknown-field")]
        assert report.overall_completeness == 0.0

    def test_lenient_mode_drops_unknown_fields(self, base):
        document = json.loads(serialize(base))
        document["metadata"]["titel"] = "x"
        report = validate_document(json.dumps(document).encode(), ParseMode.LENIENT)
        assert report.valid
        assert report.overall_completeness == pytest.approx(5 / 55)
