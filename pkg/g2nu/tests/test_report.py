"""
Tests for report rows, rendering and nu classification.
"""

import json
from pathlib import Path

import pytest

from g2nu.conftest import get_test_settings
from g2nu.models import ReportRow
from g2nu.services.report import (
    build_row,
    build_rows,
    classify_rows,
    render,
    render_csv,
    render_markdown,
)

GOLDEN = Path(__file__).resolve().parent.parent / "data" / "golden" / "dihedral_summary.csv"
DIHEDRAL = ["ex07", "ex08", "ex09", "ex10", "ex11", "ex12", "ex13", "ex14"]


def _row(example: str, nu: int, modulus: int = 48, b2: int | None = None,
         b3: int | None = None) -> ReportRow:
    return ReportRow(example=example, group_order=None, b1=0, b2=b2, b3=b3,
                     eta_sign="0", eta_dirac="0", nu=nu, modulus=modulus, checks_passed=True)


@pytest.fixture(scope="module")
def dihedral_rows():
    from g2nu.services.catalog import builtin_examples

    specs = [s for s in builtin_examples("even") if s.name in DIHEDRAL]
    return build_rows(specs, get_test_settings())


# =============================================================================
# Rows
# =============================================================================


def test_csv_matches_golden_file(dihedral_rows):
    assert render_csv(dihedral_rows) == GOLDEN.read_text(encoding="utf-8")


def test_rows_pass_their_checks(dihedral_rows):
    assert all(row.checks_passed for row in dihedral_rows)


def test_worker_pool_keeps_order(catalog, dihedral_rows):
    specs = [catalog[name] for name in DIHEDRAL]
    rows = build_rows(specs, get_test_settings(WORKERS=2))
    assert rows == dihedral_rows


def test_partial_row_has_no_group_order(catalog, settings):
    row = build_row(catalog["ex15"], settings)
    assert row.group_order is None
    assert row.modulus == 24
    assert row.checks_passed


def test_failed_expectation_marks_row(catalog, settings):
    spec = catalog["ex07"]
    wrong = spec.model_copy(update={
        "expected": spec.expected.model_copy(update={"nu_mod48": 5})})
    assert not build_row(wrong, settings).checks_passed


# =============================================================================
# Rendering
# =============================================================================


def test_json_lines(dihedral_rows):
    lines = render(dihedral_rows, "json-lines").splitlines()
    assert len(lines) == len(DIHEDRAL)
    assert json.loads(lines[-1])["eta_sign"] == "1/3"


def test_markdown_lists_classes(dihedral_rows):
    text = render_markdown(dihedral_rows, {"ex07": "0"})
    assert "Classification:" in text
    assert "| ex07 | 6 | 0 |" in text
    assert "- 3 (mod 48): ex07" in text


def test_unknown_format():
    with pytest.raises(ValueError):
        render([], "xlsx")


# =============================================================================
# Classification
# =============================================================================


def test_classification_of_catalog_values():
    rows = (
        [_row(f"ex0{i}", 0) for i in (1, 2)]
        + [_row(f"ex0{i}", 24) for i in (3, 4, 5, 6)]
        + [_row("ex07", 3, b2=5, b3=13), _row("ex08", 45, b2=3, b3=11)]
        + [_row("ex09", 0, b2=11, b3=36), _row("ex10", 0, b2=6, b3=21),
           _row("ex11", 0, b2=4, b3=17), _row("ex12", 0, b2=2, b3=11)]
        + [_row("ex13", 45, b2=2, b3=10), _row("ex14", 33, b2=2, b3=10)]
        + [_row(f"ex{i}", 0, modulus=24) for i in (15, 16, 17, 18)]
    )
    classes = classify_rows(rows)
    assert classes == {
        "0 (mod 48)": ["ex01", "ex02", "ex09", "ex10", "ex11", "ex12"],
        "24 (mod 48)": ["ex03", "ex04", "ex05", "ex06"],
        "3 (mod 48)": ["ex07"],
        "45 (mod 48)": ["ex08"],
        "{45, 33} (mod 48)": ["ex13", "ex14"],
        "0 (mod 24) only": ["ex15", "ex16", "ex17", "ex18"],
    }


def test_shared_topology_with_equal_nu_is_not_joint():
    rows = [_row("a", 0, b2=2, b3=11), _row("b", 0, b2=2, b3=11)]
    assert classify_rows(rows) == {"0 (mod 48)": ["a", "b"]}
