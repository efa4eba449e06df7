"""
Report Service

Summary rows for a list of specs (group order, Betti numbers, eta values, nu),
rendered as CSV, Markdown or JSON lines, and the classification of rows into
nu classes.
"""

import csv
import io
import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor

from g2nu.config import Settings, get_settings
from g2nu.models import OrbifoldSpec, ReportRow
from g2nu.services.group import generate_group
from g2nu.services.nu import compute_nu, expected_matches
from g2nu.services.oracle import certificate_sweep
from g2nu.utils.rationals import format_rational

logger = logging.getLogger(__name__)

REPORT_FORMATS = ("md", "csv", "json-lines")


def build_row(spec: OrbifoldSpec, settings: Settings | None = None) -> ReportRow:
    settings = settings or get_settings()
    result = compute_nu(spec, settings)
    passed = expected_matches(spec, result)
    group_order = None
    if not spec.is_partial:
        group = generate_group(spec.generators, settings.ORDER_BOUND, spec.lattice)
        group_order = group.order
        passed = passed and certificate_sweep(spec, group, settings).passed
        if spec.expected is not None and spec.expected.group_order is not None:
            passed = passed and spec.expected.group_order == group_order
    expected = spec.expected
    return ReportRow(
        example=spec.name,
        group_order=group_order,
        b1=result.b1,
        b2=expected.b2 if expected else None,
        b3=expected.b3 if expected else None,
        eta_sign=format_rational(result.eta_sign.exact),  # type: ignore[arg-type]
        eta_dirac=format_rational(result.eta_dirac.exact),  # type: ignore[arg-type]
        nu=result.nu_value,
        modulus=result.modulus,
        checks_passed=passed,
    )


def build_rows(specs: Sequence[OrbifoldSpec], settings: Settings | None = None) -> list[ReportRow]:
    """One row per spec, in input order regardless of the worker count."""
    settings = settings or get_settings()
    if settings.WORKERS == 1:
        rows = [build_row(spec, settings) for spec in specs]
    else:
        with ThreadPoolExecutor(max_workers=settings.WORKERS) as pool:
            rows = list(pool.map(lambda s: build_row(s, settings), specs))
    failed = [r.example for r in rows if not r.checks_passed]
    if failed:
        logger.warning("report_checks_failed", extra={"event": "report_checks_failed",
                                                      "examples": failed})
    return rows


# ============================================================================
# Rendering
# ============================================================================

def _cell(value) -> str:
    return "" if value is None else str(value)


def render_csv(rows: Sequence[ReportRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    fields = list(ReportRow.model_fields)
    writer.writerow(fields)
    for row in rows:
        writer.writerow([_cell(getattr(row, f)) for f in fields])
    return buffer.getvalue()


def render_json_lines(rows: Sequence[ReportRow]) -> str:
    return "".join(row.model_dump_json() + "\n" for row in rows)


def render_markdown(rows: Sequence[ReportRow], pi1: dict[str, str] | None = None) -> str:
    pi1 = pi1 or {}
    lines = [
        "| Example | \\|Γ\\| | π1 | b1 | b2 | b3 | η(B) | η(D) | ν | mod | checks |",
        "|---|---:|---|---:|---:|---:|---:|---:|---:|---:|---|",
    ]
    for r in rows:
        lines.append(
            f"| {r.example} | {_cell(r.group_order)} | {pi1.get(r.example, '')} | {r.b1} "
            f"| {_cell(r.b2)} | {_cell(r.b3)} | {r.eta_sign} | {r.eta_dirac} | {r.nu} "
            f"| {r.modulus} | {'ok' if r.checks_passed else 'FAILED'} |")
    lines += ["", "Classification:", ""]
    for label, members in classify_rows(rows).items():
        lines.append(f"- {label}: {', '.join(members)}")
    return "\n".join(lines) + "\n"


def render(rows: Sequence[ReportRow], fmt: str, pi1: dict[str, str] | None = None) -> str:
    if fmt == "csv":
        return render_csv(rows)
    if fmt == "json-lines":
        return render_json_lines(rows)
    if fmt == "md":
        return render_markdown(rows, pi1)
    raise ValueError(f"unknown report format {fmt!r}; expected one of {REPORT_FORMATS}")


# ============================================================================
# Classification
# ============================================================================

def classify_rows(rows: Sequence[ReportRow]) -> dict[str, list[str]]:
    """Group examples by nu class.

    Rows sharing (b2, b3) with different nu values form one joint class; the
    rest are keyed by (nu, modulus). Classes appear in order of first member.
    """
    by_topology: dict[tuple[int, int], list[ReportRow]] = {}
    for r in rows:
        if r.b2 is not None and r.b3 is not None:
            by_topology.setdefault((r.b2, r.b3), []).append(r)
    joint = {r.example: group for group in by_topology.values()
             if len({(m.nu, m.modulus) for m in group}) > 1 for r in group}

    classes: dict[str, list[str]] = {}
    for r in rows:
        if r.example in joint:
            members = joint[r.example]
            values = ", ".join(str(v) for v in dict.fromkeys(m.nu for m in members))
            label = f"{{{values}}} (mod {r.modulus})"
        elif r.modulus == 24:
            label = f"{r.nu} (mod 24) only"
        else:
            label = f"{r.nu} (mod 48)"
        classes.setdefault(label, []).append(r.example)
    return classes
