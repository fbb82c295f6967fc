"""Reading and writing the canonical JSON interchange format."""

import json
import logging
from datetime import date
from enum import Enum
from typing import Any

from pydantic import ValidationError

from .models import SECTION_MODELS, Datasheet
from .registry import field_registry, get_field
from .schemas import ParseDiagnostic
from .vocab import ParseMode, SectionId, Severity

logger = logging.getLogger(__name__)

FORMAT_VERSION = "1.0"
VERSION_KEY = "datasheet_format_version"
SUPPORTED_VERSIONS = frozenset({FORMAT_VERSION})
DOCUMENT = "$"

_VOCAB_ERRORS = {"enum"}
_INVARIANT_ERRORS = {
    "invariant_violation",
    "greater_than",
    "greater_than_equal",
    "less_than",
    "less_than_equal",
}


def format_version() -> str:
    return FORMAT_VERSION


def _error(path: str, code: str, message: str) -> ParseDiagnostic:
    return ParseDiagnostic(path=path, code=code, severity=Severity.ERROR, message=message)


def _warning(path: str, code: str, message: str) -> ParseDiagnostic:
    return ParseDiagnostic(path=path, code=code, severity=Severity.WARNING, message=message)


def _unknown_field(path: str, mode: ParseMode) -> ParseDiagnostic:
    if mode == ParseMode.STRICT:
        return _error(path, "unknown-field", f"'{path}' is not a datasheet field")
    return _warning(path, "unknown-field", f"'{path}' is not a datasheet field; dropped")


class _JsonObject(dict):
    """A decoded JSON object that remembers the keys it saw more than once."""

    def __init__(self, pairs: list[tuple[str, Any]]) -> None:
        super().__init__()
        self.duplicates: list[str] = []
        for key, value in pairs:
            if key in self and key not in self.duplicates:
                self.duplicates.append(key)
            self[key] = value


def _has_duplicates(value: Any) -> bool:
    pending = [value]
    while pending:
        current = pending.pop()
        if isinstance(current, _JsonObject):
            if current.duplicates:
                return True
            pending.extend(current.values())
        elif isinstance(current, list):
            pending.extend(current)
    return False


def _duplicate_paths(document: dict[str, Any]) -> list[str]:
    # Repeats nested inside a field value, e.g. a bucket label, are reported on the field.
    found = list(getattr(document, "duplicates", ()))
    for name, section in document.items():
        if not isinstance(section, _JsonObject):
            continue
        found.extend(f"{name}.{key}" for key in section.duplicates)
        found.extend(f"{name}.{key}" for key, value in section.items() if _has_duplicates(value))
    return list(dict.fromkeys(found))


def _duplicate_key(path: str, mode: ParseMode) -> ParseDiagnostic:
    if mode == ParseMode.STRICT:
        return _error(path, "duplicate-key", f"'{path}' appears more than once")
    return _warning(path, "duplicate-key", f"'{path}' appears more than once; last value kept")


def _decode(data: bytes) -> tuple[dict[str, Any] | None, ParseDiagnostic | None]:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        return None, _error(DOCUMENT, "malformed-document", f"document is not utf-8: {exc}")
    try:
        document = json.loads(text, object_pairs_hook=_JsonObject)
    except json.JSONDecodeError as exc:
        location = f"line {exc.lineno} column {exc.colno}"
        return None, _error(location, "malformed-document", f"invalid JSON: {exc.msg}")
    except (ValueError, RecursionError) as exc:
        # Integers past the interpreter's digit limit, or nesting deeper than the stack.
        message = f"unreadable JSON: {type(exc).__name__}"
        return None, _error(DOCUMENT, "malformed-document", message)
    if not isinstance(document, dict):
        return None, _error(DOCUMENT, "malformed-document", "top level must be a JSON object")
    return document, None


def _check_version(document: dict[str, Any]) -> ParseDiagnostic | None:
    if VERSION_KEY not in document:
        return _warning(
            VERSION_KEY, "version-missing", f"no {VERSION_KEY}; assuming {FORMAT_VERSION}"
        )
    version = document[VERSION_KEY]
    if not isinstance(version, str) or version not in SUPPORTED_VERSIONS:
        return _error(VERSION_KEY, "unsupported-version", f"unsupported format version {version!r}")
    return None


def _diagnostic_from_error(section: SectionId, error: dict[str, Any]) -> ParseDiagnostic:
    loc = error.get("loc", ())
    ctx = error.get("ctx") or {}
    if loc:
        path = f"{section.value}.{loc[0]}"
    elif "field" in ctx:
        path = f"{section.value}.{ctx['field']}"
    else:
        path = section.value
    error_type = error["type"]
    if error_type in _VOCAB_ERRORS:
        code = "vocab-violation"
    elif error_type in _INVARIANT_ERRORS:
        code = "invariant-violation"
    elif error_type == "extra_forbidden":
        code = "unknown-field"
    else:
        code = "type-mismatch"
    detail = ".".join(str(part) for part in loc[1:])
    message = f"{error['msg']} (at {detail})" if detail else error["msg"]
    return _error(path, code, message)


def _parse_section(
    section: SectionId, payload: Any, mode: ParseMode
) -> tuple[Any, list[ParseDiagnostic]]:
    model = SECTION_MODELS[section]
    if payload is None:
        return model(), []
    if not isinstance(payload, dict):
        return None, [_error(section.value, "type-mismatch", "section must be a JSON object")]

    diagnostics: list[ParseDiagnostic] = []
    known = set(model.model_fields)
    for key in payload:
        if key not in known:
            diagnostics.append(_unknown_field(f"{section.value}.{key}", mode))
    fields = {key: value for key, value in payload.items() if key in known}

    try:
        return model.model_validate(fields), diagnostics
    except ValidationError as exc:
        diagnostics.extend(_diagnostic_from_error(section, error) for error in exc.errors())
        return None, diagnostics


def parse(
    data: bytes, mode: ParseMode = ParseMode.STRICT
) -> tuple[Datasheet | None, list[ParseDiagnostic]]:
    """Parse an interchange document.

    A Datasheet is returned only when no error-severity diagnostic was produced.
    """
    document, failure = _decode(data)
    if failure is not None:
        logger.info("document rejected: %s", failure.message)
        return None, [failure]

    diagnostics: list[ParseDiagnostic] = []
    version_problem = _check_version(document)
    if version_problem is not None:
        diagnostics.append(version_problem)
        if version_problem.is_error:
            return None, diagnostics

    diagnostics.extend(_duplicate_key(path, mode) for path in _duplicate_paths(document))

    section_names = {section.value for section in SectionId}
    for key in document:
        if key != VERSION_KEY and key not in section_names:
            diagnostics.append(_unknown_field(key, mode))

    sections: dict[str, Any] = {}
    for section in SectionId:
        parsed, section_diagnostics = _parse_section(section, document.get(section.value), mode)
        diagnostics.extend(section_diagnostics)
        sections[section.value] = parsed

    if any(diagnostic.is_error for diagnostic in diagnostics):
        logger.debug("parse produced %d diagnostics", len(diagnostics))
        return None, diagnostics
    return Datasheet(**sections), diagnostics


def _encode(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, date):
        return value.isoformat()
    if isinstance(value, tuple):
        return [_encode(item) for item in value]
    if isinstance(value, dict):
        encoded = {_encode(key): _encode(item) for key, item in value.items()}
        return dict(sorted(encoded.items()))
    return value


def to_document(ds: Datasheet) -> dict[str, Any]:
    document: dict[str, Any] = {VERSION_KEY: FORMAT_VERSION}
    for section in SectionId:
        document[section.value] = {}
    for spec in field_registry().entries:
        value = get_field(ds, spec.path)
        if value is not None:
            document[spec.section.value][spec.name] = _encode(value)
    return document


def serialize(ds: Datasheet) -> bytes:
    """Canonical form: registry order, unpopulated fields omitted, 2-space indent."""
    text = json.dumps(to_document(ds), indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")
