"""PDF "at a glance" rendering of a datasheet and its assessments."""

import io
import logging
from datetime import date
from enum import Enum
from typing import Any
from xml.sax.saxutils import escape

from reportlab.graphics.charts.barcharts import VerticalBarChart
from reportlab.graphics.shapes import Drawing
from reportlab.lib import colors
from reportlab.lib.pagesizes import A4
from reportlab.lib.styles import getSampleStyleSheet
from reportlab.platypus import Paragraph, SimpleDocTemplate, Spacer, Table, TableStyle

from .compliance import check
from .coverage import CATEGORY_LABELS
from .models import Datasheet
from .registry import field_registry, get_field
from .risk import DISTRIBUTION_PATHS, assess
from .validator import validate
from .vocab import SectionId

logger = logging.getLogger(__name__)

HEADER_COLOR = colors.HexColor("#2F4058")
GRID_COLOR = colors.HexColor("#D0D6DD")
BAR_COLOR = colors.HexColor("#4C8EDA")

_TABLE_STYLE = TableStyle(
    [
        ("BACKGROUND", (0, 0), (-1, 0), HEADER_COLOR),
        ("TEXTCOLOR", (0, 0), (-1, 0), colors.white),
        ("GRID", (0, 0), (-1, -1), 0.5, GRID_COLOR),
        ("FONTNAME", (0, 0), (-1, 0), "Helvetica-Bold"),
        ("VALIGN", (0, 0), (-1, -1), "TOP"),
    ]
)


def format_value(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, date):
        return value.isoformat()
    if isinstance(value, dict):
        if not value:
            return "none"
        return "; ".join(
            f"{_format_key(key)}: {format_value(item)}" for key, item in sorted(value.items())
        )
    if isinstance(value, tuple):
        return "; ".join(value) if value else "none"
    if isinstance(value, float):
        return f"{value:.2f}"
    return str(value)


def _format_key(key: Any) -> str:
    return key.value if isinstance(key, Enum) else str(key)


def _table(rows: list[list[str]], styles: Any, widths: list[int]) -> Table:
    body = styles["BodyText"]
    cells = [rows[0]] + [[Paragraph(escape(cell), body) for cell in row] for row in rows[1:]]
    table = Table(cells, colWidths=widths, repeatRows=1)
    table.setStyle(_TABLE_STYLE)
    return table


def _build_distribution_chart(
    shares: dict[str, float], width: int = 420, height: int = 140
) -> Drawing:
    labels = sorted(shares)
    drawing = Drawing(width, height)
    chart = VerticalBarChart()
    chart.x = 30
    chart.y = 25
    chart.height = height - 35
    chart.width = width - 40
    chart.data = [[shares[label] for label in labels] or [0.0]]
    chart.strokeColor = colors.black
    chart.valueAxis.valueMin = 0
    chart.valueAxis.valueMax = 1
    chart.valueAxis.valueStep = 0.25
    chart.categoryAxis.categoryNames = labels or [""]
    chart.categoryAxis.labels.angle = 30
    chart.categoryAxis.labels.dy = -10
    chart.bars[0].fillColor = BAR_COLOR
    drawing.add(chart)
    return drawing


def build_report_pdf(ds: Datasheet, reference_date: date | None = None) -> bytes:
    """Render the datasheet; the risk section needs ``reference_date`` and is skipped without it.

    Output bytes are identical for identical inputs.
    """
    buffer = io.BytesIO()
    styles = getSampleStyleSheet()
    title = ds.metadata.title or "Untitled dataset"
    doc = SimpleDocTemplate(
        buffer, pagesize=A4, invariant=1, title=title, author=ds.metadata.publisher or ""
    )
    story: list[object] = []

    story.append(Paragraph(escape(f"Datasheet: {title}"), styles["Title"]))
    validation = validate(ds)
    story.append(
        Paragraph(
            f"Overall completeness: {validation.overall_completeness:.0%} | "
            f"Findings: {len(validation.findings)}",
            styles["Normal"],
        )
    )
    story.append(Spacer(1, 12))

    registry = field_registry()
    for section in SectionId:
        completeness = validation.section_completeness[section]
        story.append(
            Paragraph(f"{CATEGORY_LABELS[section]} ({completeness:.0%})", styles["Heading2"])
        )
        rows = [["Field", "Value"]]
        for spec in registry.for_section(section):
            rows.append([spec.name, format_value(get_field(ds, spec.path))])
        story.append(_table(rows, styles, [150, 330]))
        story.append(Spacer(1, 10))

    distributions = [(path, get_field(ds, path)) for path in DISTRIBUTION_PATHS]
    distributions = [(path, shares) for path, shares in distributions if shares]
    if distributions:
        story.append(Paragraph("Demographic distributions", styles["Heading2"]))
        for path, shares in distributions:
            story.append(Paragraph(path.split(".", 1)[1], styles["Heading3"]))
            story.append(_build_distribution_chart(shares))
            story.append(Spacer(1, 8))

    if validation.findings:
        story.append(Paragraph("Validation findings", styles["Heading2"]))
        rows = [["Path", "Code", "Severity", "Message"]]
        for finding in validation.findings:
            rows.append([finding.path, finding.code, finding.severity.value, finding.message])
        story.append(_table(rows, styles, [130, 80, 60, 210]))
        story.append(Spacer(1, 10))

    story.append(Paragraph("Risk assessment", styles["Heading2"]))
    if reference_date is None:
        story.append(Paragraph("Not assessed: no reference date given.", styles["Normal"]))
    else:
        assessment = assess(ds, reference_date)
        story.append(
            Paragraph(
                f"Reference date {reference_date.isoformat()} | generic level "
                f"{assessment.generic_level.value} | legal tier {assessment.legal_level.value}",
                styles["Normal"],
            )
        )
        if assessment.items:
            rows = [["Rule", "Category", "Likelihood", "Severity", "Trigger"]]
            for item in assessment.items:
                rows.append(
                    [
                        item.rule_id,
                        item.category.value,
                        item.likelihood.value,
                        item.severity.value,
                        item.trigger,
                    ]
                )
            story.append(_table(rows, styles, [110, 70, 60, 55, 185]))
        for heading, entries in (
            ("Mitigations", assessment.mitigations),
            ("Derived prohibitions", assessment.derived_prohibitions),
        ):
            if entries:
                story.append(Paragraph(heading, styles["Heading3"]))
                for entry in entries:
                    story.append(Paragraph(escape(f"- {entry}"), styles["Normal"]))
    story.append(Spacer(1, 10))

    compliance = check(ds)
    story.append(Paragraph("Compliance evidence", styles["Heading2"]))
    story.append(
        Paragraph(
            f"GDPR applicable: {'yes' if compliance.gdpr_applicable else 'no'} | "
            f"AI Act tier: {compliance.ai_act_tier.value}",
            styles["Normal"],
        )
    )
    rows = [["Obligation", "Citation", "Status", "Rationale"]]
    for entry in compliance.statuses:
        rows.append(
            [
                entry.obligation_id,
                f"{entry.law.value} {entry.citation}",
                entry.status.value,
                entry.rationale,
            ]
        )
    story.append(_table(rows, styles, [85, 85, 90, 220]))
    for note in compliance.notes:
        story.append(Paragraph(escape(f"Note: {note}"), styles["Normal"]))

    doc.build(story)
    logger.info("rendered report for %r", title)
    return buffer.getvalue()
