"""
Catalog Service

Built-in definitions of eighteen flat G2 orbifolds T^7/Gamma and the TOML
spec format used for orbifolds supplied on disk.

Examples 1-6 live on Z^7 with sign-diagonal involutions. Examples 7-14 are
dihedral families on Lambda' x Z where Lambda' is a product of Eisenstein or
Gaussian lattices (Example 13 uses Z[e^{2 pi i/7}]), written in lattice
coordinates with the x coordinate last. Examples 15-18 are partial entries
that carry only what the mod 24 conclusion needs.
"""

import json
import logging
import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

import mpmath
from pydantic import ValidationError

from g2nu.config import Settings, get_settings
from g2nu.core.errors import InputError, ParseError, SpecValidationError, UnknownBuiltin
from g2nu.models import (
    AffineIsometry,
    ExpectedValues,
    HypothesisLevel,
    OrbifoldSpec,
    ResolutionMetadata,
    TorusLattice,
)
from g2nu.services.group import is_isometry, preserves_three_form, validate_generator
from g2nu.utils.linalg import integer_det
from g2nu.utils.rationals import format_rational, parse_rational, validate_rational_text

logger = logging.getLogger(__name__)

BUILTIN_NAMES: tuple[str, ...] = tuple(f"ex{n:02d}" for n in range(1, 19))
EMBEDDING_DIGITS = 40
SQRT3_HALF = "0.8660254037844386467637231707529361834714"

Block = tuple[tuple[Any, Any], tuple[Any, Any]]


# ============================================================================
# Lattice building blocks
# ============================================================================

# Multiplication maps, columns are images of the basis vectors.
# Z[omega] in the basis (1, omega), omega = e^{2 pi i/3}
OMEGA: Block = ((0, -1), (1, -1))
OMEGA_SQUARED: Block = ((-1, 1), (-1, 0))
HEXAGONAL: Block = ((1, -1), (1, 0))                # e^{i pi/3} = 1 + omega
# Z[i] in the basis (1, i)
I_UNIT: Block = ((0, -1), (1, 0))
MINUS_ONE: Block = ((-1, 0), (0, -1))
ONE: Block = ((1, 0), (0, 1))

# z -> -conj(z)
BETA_EISENSTEIN: Block = ((-1, 1), (0, 1))
BETA_GAUSSIAN: Block = ((-1, 0), (0, 1))
BETA_EISENSTEIN_I: Block = ((1, -1), (0, -1))       # on iZ[omega], basis (i, i omega)

EISENSTEIN_FRAME: Block = (("1", "-0.5"), ("0", SQRT3_HALF))
GAUSSIAN_FRAME: Block = (("1", "0"), ("0", "1"))
EISENSTEIN_I_FRAME: Block = (("0", "-" + SQRT3_HALF), ("1", "-0.5"))


def _assemble(blocks: list[Block], corner: Any, zero: Any) -> list[list[Any]]:
    """Block-diagonal 7x7 matrix: three 2x2 blocks for z1, z2, z3 and the x entry."""
    n = 2 * len(blocks) + 1
    rows = [[zero] * n for _ in range(n)]
    for k, block in enumerate(blocks):
        for i in range(2):
            for j in range(2):
                rows[2 * k + i][2 * k + j] = block[i][j]
    rows[n - 1][n - 1] = corner
    return rows


def _framed_lattice(frames: list[Block]) -> TorusLattice:
    return TorusLattice(rank=7, embedding=_assemble(frames, "1", "0"))


def _x_shift(value: Fraction) -> list[Fraction]:
    return [Fraction(0)] * 6 + [value]


def _dihedral_pair(a: int, alpha_blocks: list[Block],
                   beta_blocks: list[Block]) -> list[AffineIsometry]:
    alpha = AffineIsometry(linear=_assemble(alpha_blocks, 1, 0),
                           translation=_x_shift(Fraction(1, a)), label="alpha")
    beta = AffineIsometry(linear=_assemble(beta_blocks, -1, 0),
                          translation=[0] * 7, label="beta")
    return [alpha, beta]


def _heptagonal_lattice() -> TorusLattice:
    """Z[u] with u = e^{2 pi i/7} embedded by z -> (z, sigma_2 z, sigma_4 z), plus Z."""
    with mpmath.workdps(EMBEDDING_DIGITS + 10):
        rows = [["0"] * 7 for _ in range(7)]
        for j in range(1, 7):
            for k, power in enumerate((1, 2, 4)):
                turn = 2 * mpmath.pi * power * j / 7
                rows[2 * k][j - 1] = mpmath.nstr(mpmath.cos(turn), EMBEDDING_DIGITS)
                rows[2 * k + 1][j - 1] = mpmath.nstr(mpmath.sin(turn), EMBEDDING_DIGITS)
    rows[6][6] = "1"
    return TorusLattice(rank=7, embedding=rows)


def _heptagonal_generators() -> list[AffineIsometry]:
    # basis w_j = (u^j, u^{2j}, u^{4j}), j = 1..6; u^7 = 1 gives w_7 = -(w_1 + ... + w_6)
    alpha = [[0] * 7 for _ in range(7)]
    beta = [[0] * 7 for _ in range(7)]
    for j in range(6):
        if j < 5:
            alpha[j + 1][j] = 1
        alpha[j][5] = -1
        beta[5 - j][j] = -1
    alpha[6][6] = 1
    beta[6][6] = -1
    return [AffineIsometry(linear=alpha, translation=_x_shift(Fraction(1, 7)), label="alpha"),
            AffineIsometry(linear=beta, translation=[0] * 7, label="beta")]


# ============================================================================
# Built-in examples
# ============================================================================

def _sign_involution(label: str, signs: tuple[int, ...],
                     shifts: tuple[Fraction | int, ...]) -> AffineIsometry:
    return AffineIsometry(linear=[[s if i == j else 0 for j in range(7)] for i, s in enumerate(signs)],
                          translation=list(shifts), label=label)


def _coordinate_group(b1: Fraction, b2: Fraction, c1: Fraction, c3: Fraction, c5: Fraction,
                      members: str) -> list[AffineIsometry]:
    """alpha, beta, gamma on Z^7 with the constants b1, b2, c1, c3, c5 in {0, 1/2}."""
    h = Fraction(0)
    table = {
        "alpha": _sign_involution("alpha", (-1, -1, -1, -1, 1, 1, 1), (h,) * 7),
        "beta": _sign_involution("beta", (-1, -1, 1, 1, -1, -1, 1), (b1, b2, h, h, h, h, h)),
        "gamma": _sign_involution("gamma", (-1, 1, -1, 1, -1, 1, -1), (c1, h, c3, h, c5, h, h)),
    }
    return [table[name] for name in members.split()]


def _coordinate_example(number: int, generators: list[AffineIsometry], b1: int, order: int,
                        ell_parity: str, description: str) -> OrbifoldSpec:
    nu48 = (24 * (1 + b1)) % 48
    # without non-3-torus components the parity of ell plays no role
    parity_matters = number >= 3
    return OrbifoldSpec(
        name=f"ex{number:02d}",
        description=description,
        lattice=TorusLattice(rank=7, embedding=[["1" if i == j else "0" for j in range(7)]
                                                for i in range(7)]),
        generators=tuple(generators),
        resolution=ResolutionMetadata(ell_parity=ell_parity, spin_isometry_flags=(True,)),  # type: ignore[arg-type]
        expected=ExpectedValues(
            group_order=order, b1=b1, eta_sign=Fraction(0), eta_dirac_mod2=Fraction(0),
            nu_mod24=0, nu_mod48=nu48 if (ell_parity == "even" or not parity_matters) else None),
    )


def _dihedral_example(number: int, a: int, lattice: TorusLattice, generators: list[AffineIsometry],
                      table_row: tuple[int, str, str, int, int, int], pi1: str,
                      description: str) -> OrbifoldSpec:
    order, eta_b, eta_d, nu48, b2, b3 = table_row
    return OrbifoldSpec(
        name=f"ex{number:02d}",
        description=description,
        lattice=lattice,
        generators=tuple(generators),
        resolution=ResolutionMetadata(pi1=pi1, dihedral_a=a),
        expected=ExpectedValues(group_order=order, b1=0, eta_sign=parse_rational(eta_b),
                                eta_dirac_mod2=parse_rational(eta_d), nu_mod48=nu48,
                                nu_mod24=nu48 % 24, b2=b2, b3=b3),
    )


def _partial_example(number: int) -> OrbifoldSpec:
    return OrbifoldSpec(
        name=f"ex{number:02d}",
        description=(f"Example {number}: partial entry; x -> -x commutes with the group, "
                     "so both eta invariants vanish up to the reflection tier"),
        lattice=TorusLattice(rank=7),
        resolution=ResolutionMetadata(partial=True, asserted_level=HypothesisLevel.HYP2_SPIN, b1=0),
        expected=ExpectedValues(b1=0, eta_sign=Fraction(0), eta_dirac_mod2=Fraction(0), nu_mod24=0),
    )


def _ex07_generators() -> list[AffineIsometry]:
    return _dihedral_pair(3, [OMEGA, OMEGA, OMEGA],
                          [BETA_EISENSTEIN, BETA_EISENSTEIN, BETA_EISENSTEIN])


def _translation_gamma(label: str, z3_shift: tuple[Fraction, Fraction],
                       blocks: list[Block] | None = None) -> AffineIsometry:
    blocks = blocks or [ONE, ONE, ONE]
    return AffineIsometry(linear=_assemble(blocks, 1, 0),
                          translation=[0, 0, 0, 0, *z3_shift, 0], label=label)


def builtin_examples(ell_parity: str | None = None) -> list[OrbifoldSpec]:
    """Examples 1-18 in order; ell_parity picks the resolution variant of Examples 1-6."""
    parity = ell_parity or get_settings().ELL_PARITY
    if parity not in ("even", "odd"):
        raise InputError(f"ell parity must be even or odd, got {parity!r}")
    half, zero = Fraction(1, 2), Fraction(0)

    ex06 = _coordinate_group(zero, half, half, zero, zero, "alpha beta gamma")
    ex06.append(_sign_involution("delta", (1,) * 7, (half, zero, half, half, half, zero, zero)))
    specs = [
        _coordinate_example(1, _coordinate_group(zero, zero, zero, zero, zero, "alpha"), 3, 2,
                            parity, "Example 1: T^7 / <alpha>, sixteen fixed 3-tori"),
        _coordinate_example(2, _coordinate_group(zero, half, zero, zero, zero, "alpha beta"), 1, 4,
                            parity, "Example 2: T^7 / <alpha, beta> with (b1, b2) = (0, 1/2)"),
        _coordinate_example(3, _coordinate_group(half, zero, half, zero, half, "alpha beta gamma"),
                            0, 8, parity,
                            "Example 3: (b1, b2, c1, c3, c5) = (1/2, 0, 1/2, 0, 1/2)"),
        _coordinate_example(4, _coordinate_group(zero, half, half, zero, zero, "alpha beta gamma"),
                            0, 8, parity, "Example 4: (b1, b2, c1, c3, c5) = (0, 1/2, 1/2, 0, 0)"),
        _coordinate_example(5, _coordinate_group(half, zero, zero, half, zero, "alpha beta gamma"),
                            0, 8, parity, "Example 5: (b1, b2, c1, c3, c5) = (1/2, 0, 0, 1/2, 0)"),
        _coordinate_example(6, ex06, 0, 16, parity,
                            "Example 6: Example 4 extended by a half-period translation"),
    ]

    eisenstein = _framed_lattice([EISENSTEIN_FRAME] * 3)
    gaussian = _framed_lattice([GAUSSIAN_FRAME] * 3)
    mixed = _framed_lattice([EISENSTEIN_FRAME, EISENSTEIN_FRAME, GAUSSIAN_FRAME])
    beta_mixed = [BETA_EISENSTEIN, BETA_EISENSTEIN, BETA_GAUSSIAN]
    gaussian_gamma = _translation_gamma("gamma", (half, half))

    ex09 = _dihedral_pair(4, [I_UNIT, I_UNIT, MINUS_ONE], [BETA_GAUSSIAN] * 3)
    ex11 = _dihedral_pair(6, [HEXAGONAL, OMEGA, MINUS_ONE], beta_mixed)
    ex14 = _dihedral_pair(3, [OMEGA, OMEGA, OMEGA],
                          [BETA_EISENSTEIN, BETA_EISENSTEIN, BETA_EISENSTEIN_I])
    ex14.append(_translation_gamma("gamma", (Fraction(1, 3), Fraction(2, 3)),
                                   [OMEGA, OMEGA_SQUARED, ONE]))
    specs += [
        _dihedral_example(7, 3, eisenstein, _ex07_generators(), (6, "1", "-1", 3, 5, 13), "0",
                          "Example 7: a = 3, u = v = e^{2 pi i/3} on Z[omega]^3"),
        _dihedral_example(8, 6, eisenstein,
                          _dihedral_pair(6, [HEXAGONAL, HEXAGONAL, OMEGA_SQUARED],
                                         [BETA_EISENSTEIN] * 3),
                          (12, "-1", "-1", 45, 3, 11), "0",
                          "Example 8: a = 6, u = v = e^{i pi/3} on Z[omega]^3"),
        _dihedral_example(9, 4, gaussian, ex09, (8, "0", "-1", 0, 11, 36), "0",
                          "Example 9: a = 4, u = v = i on Z[i]^3"),
        _dihedral_example(10, 4, gaussian, [*ex09, gaussian_gamma], (16, "0", "-1", 0, 6, 21), "Z/2",
                          "Example 10: Example 9 with z3 -> z3 + (1 + i)/2 adjoined"),
        _dihedral_example(11, 6, mixed, ex11, (12, "0", "-1", 0, 4, 17), "0",
                          "Example 11: a = 6, u = e^{i pi/3}, v = e^{2 pi i/3}"),
        _dihedral_example(12, 6, mixed, [*ex11, gaussian_gamma], (24, "0", "-1", 0, 2, 11), "Z/2",
                          "Example 12: Example 11 with z3 -> z3 + (1 + i)/2 adjoined"),
        _dihedral_example(13, 7, _heptagonal_lattice(), _heptagonal_generators(),
                          (14, "-1", "-1", 45, 2, 10), "0",
                          "Example 13: a = 7, u = e^{2 pi i/7}, v = u^2 on Z[u]"),
        _dihedral_example(14, 3,
                          _framed_lattice([EISENSTEIN_FRAME, EISENSTEIN_FRAME, EISENSTEIN_I_FRAME]),
                          ex14, (18, "1/3", "-1/3", 33, 2, 10), "0",
                          "Example 14: Example 7 with gamma = (omega z1, omega^2 z2, z3 + t, x)"),
    ]
    specs += [_partial_example(n) for n in range(15, 19)]
    return specs


def get_builtin(name: str, ell_parity: str | None = None) -> OrbifoldSpec:
    if name not in BUILTIN_NAMES:
        raise UnknownBuiltin(f"unknown builtin {name!r}", name=name)
    return builtin_examples(ell_parity)[BUILTIN_NAMES.index(name)]


def shipped_spec_path(name: str) -> Path:
    """Path of a spec file shipped with the package."""
    return Path(str(resources.files("g2nu") / "data" / "specs" / f"{name}.toml"))


def load_spec(ref: str, ell_parity: str | None = None,
              settings: Settings | None = None) -> OrbifoldSpec:
    """Built-in name (ex01..ex18) or path to a TOML spec."""
    if re.fullmatch(r"ex\d+", ref):
        return get_builtin(ref, ell_parity)
    path = Path(ref)
    if not path.is_file():
        raise InputError(f"spec file not found: {ref}", path=ref)
    spec = parse_spec(path.read_text(encoding="utf-8"), settings)
    logger.info("spec_loaded", extra={"event": "spec_loaded", "path": ref, "spec_name": spec.name})
    return spec


# ============================================================================
# Parsing
# ============================================================================

_DECODE_POSITION = re.compile(r"line (\d+), column (\d+)")
_BARE_KEY = re.compile(r"^[A-Za-z0-9_-]+$")


def _decode_position(exc: tomllib.TOMLDecodeError) -> tuple[int | None, int | None]:
    line = getattr(exc, "lineno", None)
    column = getattr(exc, "colno", None)
    if line is None:
        match = _DECODE_POSITION.search(str(exc))
        if match:
            line, column = int(match.group(1)), int(match.group(2))
    return line, column


def _table(document: dict[str, Any], key: str) -> dict[str, Any]:
    value = document.get(key, {})
    if not isinstance(value, dict):
        raise ParseError(f"{key} must be a table", field=key)
    return value


def _integer_matrix(value: Any, field: str) -> list[list[int]]:
    if not isinstance(value, list) or not all(isinstance(row, list) for row in value):
        raise ParseError(f"{field} must be an array of rows", field=field)
    for row in value:
        for entry in row:
            if isinstance(entry, bool) or not isinstance(entry, int):
                raise ParseError(f"{field} has a non-integer entry {entry!r}", field=field)
    return value


def _rational_vector(value: Any, field: str) -> list[Fraction]:
    if not isinstance(value, list):
        raise ParseError(f"{field} must be an array", field=field)
    return [_rational(entry, field) for entry in value]


def _rational(entry: Any, field: str) -> Fraction:
    if isinstance(entry, int) and not isinstance(entry, bool):
        return Fraction(entry)
    is_valid, error = validate_rational_text(entry)
    if not is_valid:
        raise ParseError(f"{field}: {error}", field=field)
    return parse_rational(entry)


def _isometries(document: dict[str, Any], key: str) -> list[AffineIsometry]:
    result = []
    for label, body in _table(document, key).items():
        field = f"{key}.{label}"
        if not isinstance(body, dict):
            raise ParseError(f"{field} must be a table", field=field)
        linear = _integer_matrix(body.get("linear"), f"{field}.linear")
        translation = _rational_vector(body.get("translation", [0] * len(linear)),
                                       f"{field}.translation")
        result.append(_build(AffineIsometry, field, linear=linear, translation=translation,
                             label=label))
    return result


def _lattice(document: dict[str, Any]) -> TorusLattice:
    body = _table(document, "lattice")
    embedding = body.get("embedding")
    if embedding is not None:
        if not isinstance(embedding, list) or not all(
                isinstance(row, list) and all(isinstance(e, str) for e in row) for row in embedding):
            raise ParseError("lattice.embedding must be rows of decimal strings",
                             field="lattice.embedding")
    fields: dict[str, Any] = {"rank": body.get("rank", 7), "embedding": embedding}
    if "precision" in body:
        fields["embedding_precision"] = body["precision"]
    return _build(TorusLattice, "lattice", **fields)


def _expected(document: dict[str, Any]) -> ExpectedValues | None:
    if "expected" not in document:
        return None
    body = dict(_table(document, "expected"))
    for key in ("eta_sign", "eta_dirac_mod2"):
        if key in body:
            body[key] = _rational(body[key], f"expected.{key}")
    return _build(ExpectedValues, "expected", **body)


def _build(model: Any, field: str, **fields: Any) -> Any:
    try:
        return model(**fields)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise SpecValidationError(f"{field}: {first['msg']}", invariant=field,
                                  location=".".join(str(p) for p in first["loc"])) from exc


def parse_spec(text: str, settings: Settings | None = None) -> OrbifoldSpec:
    """Parse and fully validate a TOML spec document."""
    try:
        document = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line, column = _decode_position(exc)
        raise ParseError(f"malformed spec: {exc}", line=line, column=column) from exc

    name = document.get("name")
    if not isinstance(name, str) or not name:
        raise ParseError("spec needs a non-empty string name", field="name")
    spec = _build(
        OrbifoldSpec, "spec",
        name=name,
        description=document.get("description", ""),
        lattice=_lattice(document),
        generators=tuple(_isometries(document, "generator")),
        certificate_hints=tuple(_isometries(document, "certificate_hints")),
        resolution=_build(ResolutionMetadata, "resolution", **_table(document, "resolution")),
        expected=_expected(document),
    )
    validate_spec(spec, settings)
    return spec


def validate_spec(spec: OrbifoldSpec, settings: Settings | None = None) -> list[str]:
    """Check the spec invariants; returns the checks passed, raises on the first failure."""
    settings = settings or get_settings()
    lattice = spec.lattice
    checks = [f"lattice rank {lattice.rank}"]
    for g in spec.generators:
        if g.dim != lattice.rank:
            raise SpecValidationError(f"generator {g.label!r} has dimension {g.dim}, lattice rank "
                                      f"{lattice.rank}", invariant="dimension")
        validate_generator(g, settings.ORDER_BOUND)
        if lattice.has_embedding:
            if not is_isometry(g, lattice):
                raise SpecValidationError(f"generator {g.label!r} is not an isometry of the "
                                          "embedded lattice", invariant="isometry")
            if lattice.rank == 7 and not preserves_three_form(g, lattice):
                raise SpecValidationError(f"generator {g.label!r} does not preserve phi",
                                          invariant="preserves_phi")
        checks.append(f"{g.label}: det +1, finite order"
                      + (", isometry preserving phi" if lattice.has_embedding else ""))
    for w in spec.certificate_hints:
        if w.dim != lattice.rank or integer_det(w.matrix) != -1:
            raise SpecValidationError(f"certificate hint {w.label!r} must be an orientation-"
                                      "reversing map of the lattice", invariant="hint_orientation")
        checks.append(f"hint {w.label}: orientation reversing")
    if spec.is_partial and spec.resolution.asserted_level is None:
        raise SpecValidationError("partial entries must assert a hypothesis level",
                                  invariant="partial_level")
    return checks


# ============================================================================
# Serialization
# ============================================================================

def _key(label: str) -> str:
    return label if _BARE_KEY.match(label) else json.dumps(label)


def _text(value: str) -> str:
    return json.dumps(value)


def _rows(rows: Any, render) -> str:
    body = ",\n".join("  [" + ", ".join(render(e) for e in row) + "]" for row in rows)
    return "[\n" + body + ",\n]"


def _isometry_tables(prefix: str, maps: tuple[AffineIsometry, ...]) -> list[str]:
    lines = []
    for i, g in enumerate(maps):
        label = g.label or f"{prefix}{i}"
        lines += ["", f"[{prefix}.{_key(label)}]",
                  f"linear = {_rows(g.linear, str)}",
                  "translation = [" + ", ".join(_text(format_rational(t)) for t in g.translation) + "]"]
    return lines


def serialize_spec(spec: OrbifoldSpec) -> str:
    """Write a spec in the same grammar parse_spec reads."""
    lines = [f"name = {_text(spec.name)}"]
    if spec.description:
        lines.append(f"description = {_text(spec.description)}")

    lattice = spec.lattice
    lines += ["", "[lattice]", f"rank = {lattice.rank}", f"precision = {lattice.embedding_precision!r}"]
    if lattice.embedding is not None:
        lines.append(f"embedding = {_rows(lattice.embedding, _text)}")

    lines += _isometry_tables("generator", spec.generators)
    lines += _isometry_tables("certificate_hints", spec.certificate_hints)

    res = spec.resolution
    lines += ["", "[resolution]"]
    for key in ("ell_parity", "nontorus_components_pairing"):
        if getattr(res, key) is not None:
            lines.append(f"{key} = {_text(getattr(res, key))}")
    lines.append("spin_isometry_flags = [" + ", ".join(str(f).lower()
                                                       for f in res.spin_isometry_flags) + "]")
    lines += [f"pi1 = {_text(res.pi1)}", f"partial = {str(res.partial).lower()}"]
    if res.asserted_level is not None:
        lines.append(f"asserted_level = {_text(res.asserted_level.value)}")
    for key in ("b1", "dihedral_a"):
        if getattr(res, key) is not None:
            lines.append(f"{key} = {getattr(res, key)}")

    if spec.expected is not None:
        lines += ["", "[expected]"]
        for key in type(spec.expected).model_fields:
            value = getattr(spec.expected, key)
            if value is None:
                continue
            rendered = _text(format_rational(value)) if isinstance(value, Fraction) else str(value)
            lines.append(f"{key} = {rendered}")
    return "\n".join(lines) + "\n"
