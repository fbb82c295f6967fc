"""Command-line front end.

Exit codes: 0 success, 1 findings at error severity, 2 usage, IO or parse failure.
Reports go to stdout; logs and diagnostics go to stderr.
"""

import functools
import json
import logging
import sys
from collections.abc import Callable
from dataclasses import dataclass
from datetime import date, datetime
from pathlib import Path
from typing import Any

import click
from pydantic import BaseModel

from . import __version__
from .compliance import check, obligation_catalog, render_checklist
from .config import settings
from .coverage import builtin_profiles, coverage_matrix, render_matrix
from .models import Datasheet, new_template
from .parser import parse, serialize
from .rdf import (
    InvalidBaseIriError,
    export_triples,
    mapping_table,
    render_mapping_table,
    serialize_ntriples,
)
from .registry import render_field_reference
from .report import build_report_pdf
from .risk import assess, render_rule_reference, rule_catalog
from .schemas import FrameworkProfile, ParseDiagnostic, RiskAssessment, ValidationReport
from .validator import cross_field_rules, validate, validate_document
from .vocab import ComplianceStatus, LegalRiskTier, ParseMode, RiskLevel

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_FAILURE = 2

HUMAN = "human"
MACHINE = "machine"


class CommandFailed(click.ClickException):
    exit_code = EXIT_FAILURE


class ForgeGroup(click.Group):
    """Maps anything a command did not handle to exit code 2."""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except (click.exceptions.Exit, click.ClickException, click.Abort):
            raise
        except Exception as exc:
            logger.exception("unexpected failure")
            raise CommandFailed(f"unexpected failure: {exc}") from exc


def _configure_logging(verbose: int, quiet: bool) -> None:
    if quiet:
        level: int | str = logging.ERROR
    elif verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = settings.log.level.upper()
    logging.basicConfig(level=level, format=settings.log.format, stream=sys.stderr, force=True)


FORMAT_CHOICE = click.Choice([HUMAN, MACHINE])


@dataclass(frozen=True)
class GlobalOptions:
    output_format: str = HUMAN
    quiet: bool = False
    verbose: int = 0


def common_options(command: Callable[..., Any]) -> Callable[..., Any]:
    """Output-format and verbosity flags; given after the subcommand they override the group's."""

    @click.option(
        "--format",
        "output_format",
        type=FORMAT_CHOICE,
        default=None,
        help="Human-readable text or machine-readable JSON on stdout. [default: group --format]",
    )
    @click.option("-q", "--quiet", is_flag=True, help="Log errors only.")
    @click.option("-v", "--verbose", count=True, help="Increase log verbosity (-v, -vv).")
    @functools.wraps(command)
    def wrapper(
        *args: Any, output_format: str | None, quiet: bool, verbose: int, **kwargs: Any
    ) -> Any:
        shared = click.get_current_context().find_object(GlobalOptions) or GlobalOptions()
        _configure_logging(shared.verbose + verbose, shared.quiet or quiet)
        return command(*args, output_format=output_format or shared.output_format, **kwargs)

    return wrapper


def output_option(command: Callable[..., Any]) -> Callable[..., Any]:
    return click.option(
        "--output",
        type=click.Path(dir_okay=False, path_type=Path),
        help="Write the report here instead of stdout.",
    )(command)


def _json_text(payload: Any) -> str:
    if isinstance(payload, BaseModel):
        payload = payload.model_dump(mode="json")
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def _emit_json(payload: Any) -> None:
    click.echo(_json_text(payload), nl=False)


def _deliver(text: str, output: Path | None) -> None:
    if output is None:
        click.echo(text, nl=False)
        return
    _write(output, text.encode("utf-8"))
    logger.info("wrote %s", output)


def _read(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as exc:
        raise CommandFailed(f"cannot read {path}: {exc.strerror or exc}") from exc


def _report_diagnostics(diagnostics: list[ParseDiagnostic]) -> None:
    for diagnostic in diagnostics:
        click.echo(
            f"{diagnostic.severity.value}: {diagnostic.path}: "
            f"{diagnostic.code}: {diagnostic.message}",
            err=True,
        )


def _load(path: Path, mode: ParseMode = ParseMode.STRICT) -> Datasheet:
    ds, diagnostics = parse(_read(path), mode)
    _report_diagnostics(diagnostics)
    if ds is None:
        raise CommandFailed(f"{path} is not a valid datasheet document")
    return ds


def _reference_date(value: datetime | None) -> date | None:
    return value.date() if value is not None else None


DATASHEET_ARGUMENT = click.argument(
    "file", type=click.Path(exists=True, dir_okay=False, path_type=Path)
)
REFERENCE_DATE = click.DateTime(formats=["%Y-%m-%d"])


@click.group(cls=ForgeGroup)
@click.version_option(__version__, prog_name="datasheet-forge")
@click.option(
    "--format",
    "output_format",
    type=FORMAT_CHOICE,
    default=HUMAN,
    show_default=True,
    help="Default output format for every subcommand.",
)
@click.option("-q", "--quiet", is_flag=True, help="Log errors only.")
@click.option("-v", "--verbose", count=True, help="Increase log verbosity (-v, -vv).")
@click.pass_context
def cli(ctx: click.Context, output_format: str, quiet: bool, verbose: int) -> None:
    """Healthcare AI Datasheet toolchain."""
    ctx.obj = GlobalOptions(output_format=output_format, quiet=quiet, verbose=verbose)
    _configure_logging(verbose, quiet)


def _render_validation(report: ValidationReport) -> str:
    lines = [
        f"{'valid' if report.valid else 'INVALID'}: "
        f"overall completeness {report.overall_completeness:.2f}"
    ]
    for finding in report.findings:
        lines.append(
            f"  {finding.severity.value:<7} {finding.path}  [{finding.code}] {finding.message}"
        )
    return "\n".join(lines) + "\n"


@cli.command("validate")
@DATASHEET_ARGUMENT
@click.option(
    "--mode",
    type=click.Choice([mode.value for mode in ParseMode]),
    default=ParseMode.STRICT.value,
    show_default=True,
    help="Lenient mode downgrades unknown fields to warnings.",
)
@output_option
@common_options
@click.pass_context
def validate_command(
    ctx: click.Context, file: Path, mode: str, output: Path | None, output_format: str
) -> None:
    """Check required fields, types, vocabularies and consistency rules."""
    report = validate_document(_read(file), ParseMode(mode))
    unreadable = [f for f in report.findings if f.code == "malformed-document"]
    if unreadable:
        _report_diagnostics(unreadable)
        raise CommandFailed(f"{file} is not a readable datasheet document")

    text = _json_text(report) if output_format == MACHINE else _render_validation(report)
    _deliver(text, output)
    ctx.exit(EXIT_OK if report.valid else EXIT_FINDINGS)


def _render_score(report: ValidationReport) -> str:
    lines = [f"overall {report.overall_completeness:.2f}"]
    for section, value in report.section_completeness.items():
        lines.append(f"  {section.value:<18} {value:.2f}")
    return "\n".join(lines) + "\n"


@cli.command("score")
@DATASHEET_ARGUMENT
@output_option
@common_options
def score_command(file: Path, output: Path | None, output_format: str) -> None:
    """Print overall and per-section completeness."""
    report = validate(_load(file))
    if output_format == MACHINE:
        text = _json_text(
            {
                "overall_completeness": report.overall_completeness,
                "section_completeness": {
                    section.value: value for section, value in report.section_completeness.items()
                },
            }
        )
    else:
        text = _render_score(report)
    _deliver(text, output)


def _render_assessment(assessment: RiskAssessment) -> str:
    lines = [
        f"generic level: {assessment.generic_level.value}  "
        f"legal tier: {assessment.legal_level.value}"
    ]
    for item in assessment.items:
        lines.append(
            f"  {item.severity.value:<6} {item.rule_id:<22} {item.category.value:<17} "
            f"{item.trigger}"
        )
    lines.extend(f"mitigation: {mitigation}" for mitigation in assessment.mitigations)
    lines.extend(f"prohibition: {prohibition}" for prohibition in assessment.derived_prohibitions)
    return "\n".join(lines) + "\n"


@cli.command("assess")
@DATASHEET_ARGUMENT
@click.option(
    "--reference-date",
    type=REFERENCE_DATE,
    required=True,
    help="Date the assessment is made for (YYYY-MM-DD); the wall clock is never used.",
)
@click.option(
    "--fail-on-high",
    is_flag=True,
    help="Exit 1 when the generic level is high or the legal tier is high or above.",
)
@output_option
@common_options
@click.pass_context
def assess_command(
    ctx: click.Context,
    file: Path,
    reference_date: datetime,
    fail_on_high: bool,
    output: Path | None,
    output_format: str,
) -> None:
    """Run the risk rules and aggregate generic and legal risk levels."""
    assessment = assess(_load(file), reference_date.date())
    text = _json_text(assessment) if output_format == MACHINE else _render_assessment(assessment)
    _deliver(text, output)

    high = (
        assessment.generic_level == RiskLevel.HIGH
        or assessment.legal_level.rank >= LegalRiskTier.HIGH.rank
    )
    ctx.exit(EXIT_FINDINGS if fail_on_high and high else EXIT_OK)


@cli.command("comply")
@DATASHEET_ARGUMENT
@click.option("--strict", is_flag=True, help="Exit 1 when any obligation lacks evidence.")
@output_option
@common_options
@click.pass_context
def comply_command(
    ctx: click.Context, file: Path, strict: bool, output: Path | None, output_format: str
) -> None:
    """Report GDPR and AI Act obligations as satisfied, missing-evidence or not-applicable."""
    report = check(_load(file))
    text = _json_text(report) if output_format == MACHINE else render_checklist(report)
    _deliver(text, output)
    missing = any(entry.status == ComplianceStatus.MISSING_EVIDENCE for entry in report.statuses)
    ctx.exit(EXIT_FINDINGS if strict and missing else EXIT_OK)


def _select_profiles(selection: str) -> list[FrameworkProfile]:
    profiles = builtin_profiles()
    if selection == "all":
        return profiles
    by_name = {profile.name: profile for profile in profiles}
    names = [name.strip() for name in selection.split(",") if name.strip()]
    unknown = [name for name in names if name not in by_name]
    if unknown or not names:
        raise click.BadParameter(
            f"unknown profile(s) {', '.join(unknown) or selection!r}; choose from "
            f"{', '.join(by_name)} or 'all'",
            param_hint="--profiles",
        )
    return [by_name[name] for name in names]


@cli.command("compare")
@click.option(
    "--profiles",
    default="all",
    show_default=True,
    help="Comma-separated framework profile names, or 'all'.",
)
@click.option("--symbols", is_flag=True, help="Render marks as symbols in human output.")
@output_option
@common_options
def compare_command(profiles: str, symbols: bool, output: Path | None, output_format: str) -> None:
    """Print the framework coverage matrix."""
    matrix = coverage_matrix(_select_profiles(profiles))
    if output_format == MACHINE:
        text = _json_text(matrix)
    else:
        text = render_matrix(matrix, symbols=symbols)
    _deliver(text, output)


@cli.command("export")
@DATASHEET_ARGUMENT
@click.option(
    "--base-iri",
    default=lambda: settings.export.base_iri,
    show_default="configured export base IRI",
    help="Absolute IRI naming the dataset node.",
)
@click.option(
    "--output",
    type=click.Path(dir_okay=False, path_type=Path),
    help="Write N-Triples here instead of stdout.",
)
@common_options
def export_command(file: Path, base_iri: str, output: Path | None, output_format: str) -> None:
    """Export the datasheet as sorted N-Triples."""
    ds = _load(file)
    try:
        triples = export_triples(ds, base_iri)
    except InvalidBaseIriError as exc:
        raise click.BadParameter(str(exc), param_hint="--base-iri") from exc
    text = serialize_ntriples(triples)

    if output is not None:
        _write(output, text.encode("utf-8"))
    if output_format == MACHINE:
        payload: dict[str, Any] = {"base_iri": base_iri, "triple_count": len(triples)}
        if output is None:
            payload["ntriples"] = text
        else:
            payload["output"] = str(output)
        _emit_json(payload)
    elif output is None:
        click.echo(text, nl=False)
    else:
        click.echo(f"wrote {len(triples)} triples to {output}")


def _write(path: Path, data: bytes) -> None:
    try:
        path.write_bytes(data)
    except OSError as exc:
        raise CommandFailed(f"cannot write {path}: {exc.strerror or exc}") from exc


@cli.command("render")
@DATASHEET_ARGUMENT
@click.option(
    "--output",
    type=click.Path(dir_okay=False, path_type=Path),
    help="Write the PDF here; without it the PDF bytes go to stdout.",
)
@click.option(
    "--reference-date",
    type=REFERENCE_DATE,
    help="Include a risk assessment made for this date (YYYY-MM-DD).",
)
@common_options
def render_command(
    file: Path, output: Path | None, reference_date: datetime | None, output_format: str
) -> None:
    """Render a PDF at-a-glance report of the datasheet."""
    if output_format == MACHINE and output is None:
        raise click.UsageError("--format machine needs --output for the PDF")
    pdf = build_report_pdf(_load(file), _reference_date(reference_date))
    if output is None:
        click.echo(pdf, nl=False)
        return
    _write(output, pdf)
    if output_format == MACHINE:
        _emit_json({"output": str(output), "bytes": len(pdf)})
    else:
        click.echo(f"wrote {len(pdf)} bytes to {output}")


@cli.command("init")
@click.option(
    "--output",
    type=click.Path(dir_okay=False, path_type=Path),
    required=True,
    help="Template path; a '<output>.fields.md' field reference is written next to it.",
)
@common_options
def init_command(output: Path, output_format: str) -> None:
    """Write an empty datasheet template and its field reference."""
    sidecar = output.with_name(output.name + ".fields.md")
    _write(output, serialize(new_template()))
    _write(sidecar, render_field_reference().encode("utf-8"))
    if output_format == MACHINE:
        _emit_json({"template": str(output), "field_reference": str(sidecar)})
    else:
        click.echo(f"wrote {output} and {sidecar}")


@cli.command("rules")
@output_option
@common_options
def rules_command(output: Path | None, output_format: str) -> None:
    """Print the risk, validator and compliance rule reference and the export mapping."""
    if output_format == MACHINE:
        text = _json_text(
            {
                "risk_rules": [rule.model_dump(mode="json") for rule in rule_catalog()],
                "validator_rules": [rule.model_dump(mode="json") for rule in cross_field_rules()],
                "obligations": [item.model_dump(mode="json") for item in obligation_catalog()],
                "export_mapping": [row.model_dump(mode="json") for row in mapping_table()],
            }
        )
    else:
        text = "\n".join(
            [render_rule_reference(), "Export mapping", "==============", render_mapping_table()]
        )
    _deliver(text, output)


def main() -> None:
    cli(prog_name="datasheet-forge")
