"""
Rational helpers

Parsing and formatting of "p/q" text, reduction mod 1, and rational
reconstruction of numeric witnesses. Validators return (is_valid, error)
tuples.
"""

import re
from fractions import Fraction

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def validate_rational_text(text: str) -> tuple[bool, str | None]:
    """
    Check that text is an exact rational literal "p" or "p/q".

    Returns:
        Tuple of (is_valid, error_message)
    """
    if not isinstance(text, str):
        return False, f"expected rational text, got {type(text).__name__}"
    match = _RATIONAL_RE.match(text)
    if not match:
        return False, f"not a rational literal: {text!r}"
    if match.group(2) is not None and int(match.group(2)) == 0:
        return False, f"zero denominator: {text!r}"
    return True, None


def parse_rational(text: str | int) -> Fraction:
    """Parse "p/q" (or an int) exactly; raises ValueError on anything else."""
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    ok, error = validate_rational_text(text)  # type: ignore[arg-type]
    if not ok:
        raise ValueError(error)
    match = _RATIONAL_RE.match(text)  # type: ignore[arg-type]
    assert match is not None
    return Fraction(int(match.group(1)), int(match.group(2) or 1))


def format_rational(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def mod1(value: Fraction) -> Fraction:
    return Fraction(value) % 1


def reconstruct_rational(value: float, max_denominator: int, window: float) -> Fraction | None:
    """Closest rational with denominator <= max_denominator within window, else None."""
    candidate = Fraction(value).limit_denominator(max(1, max_denominator))
    if abs(float(candidate) - value) <= window:
        return candidate
    return None


def snap_turn(turn: float, max_denominator: int, tolerance: float) -> Fraction | None:
    """Snap a turn fraction to [0, 1) with bounded denominator."""
    snapped = reconstruct_rational(turn % 1.0, max_denominator, tolerance)
    return None if snapped is None else snapped % 1
