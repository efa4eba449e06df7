"""
Error hierarchy

Every failure raised by the library is a G2NuError carrying a stable code and
a details dict, so the CLI can emit one structured record per failure and pick
the exit code from the error family.
"""

from typing import Any

EXIT_OK = 0
EXIT_REFUSED = 1
EXIT_USAGE = 2
EXIT_ORACLE = 3


class G2NuError(Exception):
    """Base error with a machine-readable code."""

    code = "g2nu_error"
    exit_code = EXIT_REFUSED

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details = details

    def to_record(self) -> dict[str, Any]:
        """Structured error record for the CLI."""
        return {
            "error": self.code,
            "message": self.message,
            "details": {k: str(v) for k, v in self.details.items()},
        }


# ============================================================================
# Input errors (exit 2)
# ============================================================================

class InputError(G2NuError):
    code = "input_error"
    exit_code = EXIT_USAGE


class ParseError(InputError):
    """Malformed spec document; carries line and column when known."""

    code = "parse_error"

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 **details: Any) -> None:
        super().__init__(message, line=line, column=column, **details)
        self.line = line
        self.column = column


class SpecValidationError(InputError):
    """A well-formed spec that violates a named invariant."""

    code = "validation_error"

    def __init__(self, message: str, invariant: str, **details: Any) -> None:
        super().__init__(message, invariant=invariant, **details)
        self.invariant = invariant


class UnknownBuiltin(InputError):
    code = "unknown_builtin"


class MissingEmbedding(InputError):
    code = "missing_embedding"


class ZeroVector(InputError):
    code = "zero_vector"


class NotInvolution(InputError):
    code = "not_involution"


# ============================================================================
# Group errors
# ============================================================================

class GroupError(G2NuError):
    code = "group_error"
    exit_code = EXIT_USAGE


class OrderExceeded(GroupError):
    code = "order_exceeded"


class NotFiniteOrder(GroupError):
    code = "not_finite_order"


class NonIntegralAverage(GroupError):
    code = "non_integral_average"


# ============================================================================
# Refusals (exit 1)
# ============================================================================

class ComputationRefused(G2NuError):
    code = "refused"
    exit_code = EXIT_REFUSED


class UnsupportedElement(ComputationRefused):
    code = "unsupported_element"


class NotDonnellySituation(ComputationRefused):
    code = "not_donnelly_situation"


class NoFixedDirection(ComputationRefused):
    code = "no_fixed_direction"


class AmbiguousOrientation(ComputationRefused):
    code = "ambiguous_orientation"


class HypothesisInsufficient(ComputationRefused):
    code = "hypothesis_insufficient"


class NotApplicable(ComputationRefused):
    code = "not_applicable"


# ============================================================================
# Arithmetic failures (exit 1)
# ============================================================================

class ArithmeticFailure(G2NuError):
    code = "arithmetic_failure"
    exit_code = EXIT_REFUSED


class ReconstructionFailed(ArithmeticFailure):
    code = "reconstruction_failed"


class NonIntegralNu(ArithmeticFailure):
    code = "non_integral_nu"


class NotLagrangianPair(ArithmeticFailure):
    code = "not_lagrangian_pair"


# ============================================================================
# Oracle (exit 3)
# ============================================================================

class OracleFailure(G2NuError):
    code = "oracle_failure"
    exit_code = EXIT_ORACLE
