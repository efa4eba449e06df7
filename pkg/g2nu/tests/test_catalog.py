"""
Tests for the built-in catalog and the TOML spec format.
"""

from fractions import Fraction

import pytest

from g2nu.core.errors import InputError, ParseError, SpecValidationError, UnknownBuiltin
from g2nu.models import HypothesisLevel
from g2nu.services.catalog import (
    BUILTIN_NAMES,
    builtin_examples,
    get_builtin,
    load_spec,
    parse_spec,
    serialize_spec,
    shipped_spec_path,
    validate_spec,
)
from g2nu.services.group import generate_group


def _diagonal_spec(name: str, signs: tuple[int, ...], embedded: bool = False,
                   extra: str = "") -> str:
    """Minimal spec text with one sign-diagonal generator."""
    rows = ",\n".join("  [" + ", ".join(str(s if i == j else 0) for j in range(7)) + "]"
                      for i, s in enumerate(signs))
    lines = [f'name = "{name}"', "", "[lattice]", "rank = 7"]
    if embedded:
        identity = ",\n".join("  [" + ", ".join('"1"' if i == j else '"0"' for j in range(7)) + "]"
                              for i in range(7))
        lines.append(f"embedding = [\n{identity},\n]")
    lines += ["", "[generator.g]", f"linear = [\n{rows},\n]", extra]
    return "\n".join(lines) + "\n"


# =============================================================================
# Built-in examples
# =============================================================================


def test_eighteen_builtins():
    specs = builtin_examples("even")
    assert [s.name for s in specs] == list(BUILTIN_NAMES)
    assert len(specs) == 18


def test_builtin_partial_entries():
    for name in ("ex15", "ex16", "ex17", "ex18"):
        spec = get_builtin(name, "even")
        assert spec.is_partial
        assert spec.resolution.asserted_level == HypothesisLevel.HYP2_SPIN
        assert spec.expected.nu_mod24 == 0
        assert not spec.generators


def test_unknown_builtin():
    with pytest.raises(UnknownBuiltin):
        get_builtin("ex99")
    with pytest.raises(UnknownBuiltin):
        load_spec("ex19")


def test_invalid_parity():
    with pytest.raises(InputError):
        builtin_examples("sometimes")


def test_parity_controls_expected_mod48():
    assert get_builtin("ex03", "even").expected.nu_mod48 == 24
    assert get_builtin("ex03", "odd").expected.nu_mod48 is None
    # Examples 1 and 2 have only 3-torus components
    assert get_builtin("ex01", "odd").expected.nu_mod48 == 0


def test_default_parity_comes_from_settings(monkeypatch):
    from g2nu.config import reset_settings

    monkeypatch.setenv("G2NU_ELL_PARITY", "odd")
    reset_settings()
    assert get_builtin("ex04").resolution.ell_parity == "odd"


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtins_pass_validation(catalog, settings, name):
    checks = validate_spec(catalog[name], settings)
    assert checks[0] == "lattice rank 7"


def test_expected_orders_match_generated_groups(catalog, groups):
    for name, group in groups.items():
        assert catalog[name].expected.group_order == group.order, name


def test_heptagonal_embedding_is_high_precision(catalog):
    embedding = catalog["ex13"].lattice.embedding
    assert len(embedding[0][0].lstrip("-").replace(".", "")) >= 30


# =============================================================================
# Spec files
# =============================================================================


def test_shipped_spec_matches_builtin(catalog, settings):
    text = shipped_spec_path("ex07").read_text(encoding="utf-8")
    assert parse_spec(text, settings) == catalog["ex07"]


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_serialize_then_parse(catalog, settings, name):
    spec = catalog[name]
    assert parse_spec(serialize_spec(spec), settings) == spec


def test_fractional_expected_values_are_quoted(catalog, settings):
    """Rational expected values are written as TOML strings and read back exactly."""
    text = serialize_spec(catalog["ex14"])
    assert 'eta_sign = "1/3"' in text
    assert 'eta_dirac_mod2 = "-1/3"' in text
    assert parse_spec(text, settings).expected.eta_sign == Fraction(1, 3)


def test_load_spec_from_file(tmp_path, catalog, settings):
    path = tmp_path / "ex09.toml"
    path.write_text(serialize_spec(catalog["ex09"]), encoding="utf-8")
    assert load_spec(str(path), settings=settings) == catalog["ex09"]


def test_load_spec_missing_file(tmp_path):
    with pytest.raises(InputError):
        load_spec(str(tmp_path / "absent.toml"))


def test_empty_generator_list(settings):
    spec = parse_spec('name = "trivial"\n\n[lattice]\nrank = 7\n', settings)
    assert spec.generators == ()
    assert generate_group(spec.generators, 10, spec.lattice).order == 1


def test_malformed_toml_reports_position(settings):
    with pytest.raises(ParseError) as excinfo:
        parse_spec('name = "broken"\n[lattice\nrank = 7\n', settings)
    assert excinfo.value.line == 2


def test_non_integer_linear_entry(settings):
    text = shipped_spec_path("ex07").read_text(encoding="utf-8")
    text = text.replace("[0, -1, 0, 0, 0, 0, 0]", "[0.5, -1, 0, 0, 0, 0, 0]", 1)
    with pytest.raises(ParseError):
        parse_spec(text, settings)


def test_float_translation_is_rejected(settings):
    text = _diagonal_spec("shift", (1,) * 7,
                          extra='translation = ["0.5", "0", "0", "0", "0", "0", "0"]')
    with pytest.raises(ParseError):
        parse_spec(text, settings)


def test_missing_name(settings):
    with pytest.raises(ParseError):
        parse_spec("[lattice]\nrank = 7\n", settings)


@pytest.mark.parametrize("signs,embedded,invariant", [
    ((-1, 1, 1, 1, 1, 1, 1), False, "det_plus_one"),
    ((-1, -1, 1, 1, 1, 1, 1), True, "preserves_phi"),
])
def test_invariant_violations(settings, signs, embedded, invariant):
    with pytest.raises(SpecValidationError) as excinfo:
        parse_spec(_diagonal_spec("bad", signs, embedded), settings)
    assert excinfo.value.invariant == invariant


def test_partial_spec_needs_level(settings):
    text = 'name = "partial"\n\n[lattice]\nrank = 7\n\n[resolution]\npartial = true\n'
    with pytest.raises(SpecValidationError) as excinfo:
        parse_spec(text, settings)
    assert excinfo.value.invariant == "partial_level"


def test_expected_block_parses_rationals(settings):
    text = ('name = "e"\n\n[lattice]\nrank = 7\n\n[expected]\n'
            'eta_sign = "1/3"\neta_dirac_mod2 = -1\nnu_mod48 = 33\n')
    expected = parse_spec(text, settings).expected
    assert expected.eta_sign == Fraction(1, 3)
    assert expected.eta_dirac_mod2 == Fraction(-1)
    assert expected.nu_mod48 == 33
