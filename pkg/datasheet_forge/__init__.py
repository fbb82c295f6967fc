"""Healthcare AI Datasheet toolchain: parse, validate, assess, check, compare, export."""

from .compliance import check, obligation_catalog
from .coverage import builtin_profiles, coverage_matrix, datasheet_coverage
from .models import Datasheet, new_template
from .parser import format_version, parse, serialize
from .rdf import export_triples, mapping_table, serialize_ntriples
from .registry import field_registry, get_field, is_populated
from .risk import aggregate, assess, rule_catalog
from .validator import cross_field_rules, validate

__version__ = "0.1.0"

__all__ = [
    "Datasheet",
    "__version__",
    "aggregate",
    "assess",
    "builtin_profiles",
    "check",
    "coverage_matrix",
    "cross_field_rules",
    "datasheet_coverage",
    "export_triples",
    "field_registry",
    "format_version",
    "get_field",
    "is_populated",
    "mapping_table",
    "new_template",
    "obligation_catalog",
    "parse",
    "rule_catalog",
    "serialize",
    "serialize_ntriples",
    "validate",
]
