"""
Tests for the click command line.
"""

import json
import re

import pytest
from click.testing import CliRunner

from g2nu.main import cli


@pytest.fixture
def runner():
    return CliRunner()


def _invoke(runner, *args):
    return runner.invoke(cli, ["--log-level", "WARNING", *args])


def test_nu_headline(runner):
    result = _invoke(runner, "nu", "ex07")
    assert result.exit_code == 0
    assert "ν ≡ 3 (mod 48)" in result.output
    assert "b1 = 0" in result.output


def test_nu_json(runner):
    result = _invoke(runner, "nu", "ex14", "--format", "json")
    assert result.exit_code == 0
    record = json.loads(result.output.strip().splitlines()[-1])
    assert record["nu_value"] == 33
    assert record["modulus"] == 48


def test_nu_odd_parity_is_mod24(runner):
    result = _invoke(runner, "nu", "ex03", "--ell-parity", "odd")
    assert result.exit_code == 0
    assert "ν ≡ 0 (mod 24)" in result.output


def test_validate_spec_file(runner):
    from g2nu.services.catalog import shipped_spec_path

    result = _invoke(runner, "validate", str(shipped_spec_path("ex07")))
    assert result.exit_code == 0
    assert "ex07: valid" in result.output


def test_unknown_builtin_exit_code(runner):
    result = _invoke(runner, "validate", "ex99")
    assert result.exit_code == 2
    assert "unknown_builtin" in result.output


def test_invalid_spec_file_exit_code(runner, tmp_path):
    path = tmp_path / "broken.toml"
    path.write_text('name = "broken"\n[lattice\n', encoding="utf-8")
    result = _invoke(runner, "validate", str(path))
    assert result.exit_code == 2
    assert "parse_error" in result.output


def test_eta(runner):
    result = _invoke(runner, "eta", "ex07")
    assert result.exit_code == 0
    assert "eta(B) = 1" in result.output
    assert "eta(D) = -1" in result.output


def test_analyze(runner):
    result = _invoke(runner, "analyze", "ex01")
    assert result.exit_code == 0
    assert "|Gamma| = 2, b1 = 3" in result.output
    assert "16 x T^3" in result.output
    assert "hypothesis: HYP1" in result.output


def test_maslov_skips_non_dihedral(runner):
    result = _invoke(runner, "maslov", "ex07", "ex03")
    assert result.exit_code == 0
    assert "ex03: skipped" in result.output
    assert "[ok]" in result.output


@pytest.mark.slow
def test_report_csv(runner):
    result = _invoke(runner, "report", "--format", "csv")
    assert result.exit_code == 0
    lines = [line for line in result.output.splitlines() if re.match(r"ex\d\d,", line)]
    assert len(lines) == 18
    assert "ex07,6,0,5,13,1,-1,3,48,True" in lines


def test_maslov_defaults_agree_with_eta(runner):
    result = _invoke(runner, "maslov")
    assert result.exit_code == 0
    assert "MISMATCH" not in result.output
    assert "ex07: m(H3) = 1 vs eta(B) = 1 [ok]" in result.output
