"""Utility modules: exact linear algebra, rationals and cyclotomic arithmetic."""

from .rationals import format_rational, parse_rational, validate_rational_text

__all__ = ["format_rational", "parse_rational", "validate_rational_text"]
