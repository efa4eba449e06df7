"""
Common Models

Eta values with their provenance and modulus tier, and oracle reports.
Shared by the signature, Dirac, Maslov and oracle services.
"""

from enum import Enum
from fractions import Fraction

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Provenance(str, Enum):
    CLOSED_FORM = "closed_form"
    EISENSTEIN = "eisenstein"
    VANISHING_CERTIFICATE = "vanishing_certificate"
    NUMERIC_ONLY = "numeric_only"


class Tier(str, Enum):
    """How much of an eta value is known: exactly, modulo 2Z, or modulo Z."""

    EXACT = "exact"
    MOD_2Z = "mod_2z"
    MOD_Z = "mod_z"

    @property
    def strength(self) -> int:
        return {"exact": 2, "mod_2z": 1, "mod_z": 0}[self.value]

    @classmethod
    def weakest(cls, tiers) -> "Tier":
        tiers = list(tiers)
        if not tiers:
            return cls.EXACT
        return min(tiers, key=lambda t: t.strength)


class EtaValue(BaseModel):
    """An eta invariant: exact rational when known plus a numeric witness."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    exact: Fraction | None = None
    numeric: float
    error_bound: float = Field(default=0.0, ge=0.0)
    provenance: Provenance
    tier: Tier = Tier.EXACT

    @model_validator(mode="after")
    def check_witness(self) -> "EtaValue":
        if self.exact is not None and abs(self.numeric - float(self.exact)) > self.error_bound:
            raise ValueError(
                f"numeric witness {self.numeric!r} is farther than {self.error_bound} "
                f"from exact value {self.exact}"
            )
        return self

    @classmethod
    def zero(cls, provenance: Provenance = Provenance.VANISHING_CERTIFICATE,
             tier: Tier = Tier.EXACT) -> "EtaValue":
        return cls(exact=Fraction(0), numeric=0.0, error_bound=0.0,
                   provenance=provenance, tier=tier)

    @classmethod
    def from_exact(cls, value: Fraction, provenance: Provenance,
                   tier: Tier = Tier.EXACT) -> "EtaValue":
        return cls(exact=Fraction(value), numeric=float(value), error_bound=1e-15,
                   provenance=provenance, tier=tier)


class OracleReport(BaseModel):
    """Result of one numeric verification sweep."""

    check_name: str
    instances: int
    max_abs_deviation: float
    tolerance: float
    passed: bool
    details: list[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_passed(self) -> "OracleReport":
        if self.passed != (self.max_abs_deviation <= self.tolerance):
            raise ValueError("passed must equal max_abs_deviation <= tolerance")
        return self

    @classmethod
    def build(cls, check_name: str, deviations: list[float], tolerance: float,
              details: list[str] | None = None) -> "OracleReport":
        worst = max(deviations, default=0.0)
        return cls(check_name=check_name, instances=len(deviations), max_abs_deviation=worst,
                   tolerance=tolerance, passed=worst <= tolerance, details=details or [])
