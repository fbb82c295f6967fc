from datetime import date

import pytest
from pydantic import ValidationError

from datasheet_forge.models import (
    DemographicSection,
    MetadataSection,
    PersonalDataSection,
    TemporalSection,
    new_template,
)
from datasheet_forge.vocab import (
    LIKELIHOOD_SEVERITY,
    CoverageMark,
    Likelihood,
    MediaType,
    RiskLevel,
    SectionId,
)


def _error_types(exc: ValidationError) -> set[str]:
    return {error["type"] for error in exc.errors()}


class TestDates:
    @pytest.mark.parametrize(
        ("raw", "expected"),
        [
            ("2023-05-17", date(2023, 5, 17)),
            ("2023-05", date(2023, 5, 1)),
            ("2023", date(2023, 1, 1)),
        ],
    )
    def test_partial_dates_normalize_to_first_day(self, raw, expected):
        assert TemporalSection(last_updated=raw).last_updated == expected

    @pytest.mark.parametrize("raw", ["17/05/2023", "2023-13", "2023-02-30", "23-05-17"])
    def test_rejects_bad_dates(self, raw):
        with pytest.raises(ValidationError) as exc_info:
            TemporalSection(last_updated=raw)
        assert _error_types(exc_info.value) == {"date_format"}

    def test_rejects_non_string_dates(self):
        with pytest.raises(ValidationError) as exc_info:
            TemporalSection(last_updated=20230517)
        assert _error_types(exc_info.value) == {"date_type"}

    def test_coverage_must_be_ordered(self):
        with pytest.raises(ValidationError) as exc_info:
            TemporalSection(coverage_start="2022", coverage_end="2021-12-31")
        (error,) = exc_info.value.errors()
        assert error["type"] == "invariant_violation"
        assert error["ctx"]["field"] == "coverage_end"

    def test_same_day_coverage_is_fine(self):
        section = TemporalSection(coverage_start="2022-01-01", coverage_end="2022")
        assert section.coverage_start == section.coverage_end


class TestDemographics:
    def test_fraction_map_may_sum_below_one(self):
        section = DemographicSection(gender_distribution={"female": 0.4, "male": 0.4})
        assert sum(section.gender_distribution.values()) == pytest.approx(0.8)

    def test_fraction_map_tolerates_rounding(self):
        section = DemographicSection(age_distribution={"a": 0.1, "b": 0.2, "c": 0.7000000001})
        assert section.age_distribution is not None

    def test_fraction_map_above_one_is_rejected(self):
        with pytest.raises(ValidationError) as exc_info:
            DemographicSection(gender_distribution={"female": 0.7, "male": 0.6})
        assert _error_types(exc_info.value) == {"invariant_violation"}

    def test_share_out_of_range(self):
        with pytest.raises(ValidationError) as exc_info:
            DemographicSection(gender_distribution={"female": 1.5})
        assert "less_than_equal" in _error_types(exc_info.value)

    def test_share_must_be_number(self):
        with pytest.raises(ValidationError):
            DemographicSection(gender_distribution={"female": "half"})

    def test_integer_share_is_accepted(self):
        section = DemographicSection(ethnicity_distribution={"not recorded": 1})
        assert section.ethnicity_distribution == {"not recorded": 1.0}

    def test_age_bounds(self):
        with pytest.raises(ValidationError):
            DemographicSection(age_max=151)
        with pytest.raises(ValidationError):
            DemographicSection(age_min=-1)

    def test_age_order(self):
        with pytest.raises(ValidationError) as exc_info:
            DemographicSection(age_min=70, age_max=18)
        (error,) = exc_info.value.errors()
        assert error["ctx"]["field"] == "age_max"

    def test_bias_likelihoods_use_vocabularies(self):
        section = DemographicSection(bias_likelihoods={"sample": "high"})
        assert section.bias_likelihoods == {"sample": Likelihood.HIGH}
        with pytest.raises(ValidationError):
            DemographicSection(bias_likelihoods={"sampling": "high"})


class TestScalars:
    @pytest.mark.parametrize("version", ["1", "2.1.0", "2024-02", "2024-02-29"])
    def test_version_formats(self, version):
        assert MetadataSection(version=version).version == version

    @pytest.mark.parametrize("version", ["v1.0", "1.", "latest", "2024/02"])
    def test_bad_versions(self, version):
        with pytest.raises(ValidationError):
            MetadataSection(version=version)

    @pytest.mark.parametrize("identifier", ["", " doi:1", "doi:1 "])
    def test_identifier_must_be_trimmed(self, identifier):
        with pytest.raises(ValidationError):
            MetadataSection(identifier=identifier)

    def test_strict_types(self):
        with pytest.raises(ValidationError):
            MetadataSection(title=42)
        with pytest.raises(ValidationError):
            PersonalDataSection(contains_personal_data="yes")

    def test_lists_reject_duplicates_and_blanks(self):
        with pytest.raises(ValidationError):
            PersonalDataSection(personal_categories=["age", "age"])
        with pytest.raises(ValidationError):
            PersonalDataSection(personal_categories=["age", "  "])

    def test_unknown_section_field_is_rejected(self):
        with pytest.raises(ValidationError) as exc_info:
            MetadataSection(titel="x")
        assert _error_types(exc_info.value) == {"extra_forbidden"}

    def test_sections_are_frozen(self):
        section = MetadataSection(title="x")
        with pytest.raises(ValidationError):
            section.title = "y"


def test_template_holds_every_section():
    template = new_template()
    for section in SectionId:
        assert template.section(section).model_dump() == dict.fromkeys(
            type(template.section(section)).model_fields
        )


def test_vocabulary_tokens_decode():
    assert MediaType("images") is MediaType.IMAGES
    with pytest.raises(ValueError):
        MediaType("x-ray")


def test_unknown_likelihood_counts_as_high():
    assert LIKELIHOOD_SEVERITY[Likelihood.UNKNOWN] == RiskLevel.HIGH
    assert LIKELIHOOD_SEVERITY[Likelihood.VERY_LOW] == RiskLevel.LOW


def test_coverage_mark_symbols():
    assert [mark.symbol for mark in CoverageMark] == ["●", "○", "✗"]
    assert CoverageMark.FULL.rank > CoverageMark.PARTIAL.rank > CoverageMark.ABSENT.rank
