"""
Result Models

Per-shell Dirac terms, nu results and report rows.
"""

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .common import EtaValue
from .group import HypothesisVerdict
from .lattice import DualVector


class DiracShellTerm(BaseModel):
    """Contribution of one dual shell to the equivariant Dirac series."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    shell_norm: float
    term_value: complex
    fixed_vectors: list[DualVector]


class NuResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    nu_value: int
    modulus: int
    eta_sign: EtaValue
    eta_dirac: EtaValue
    b1: int
    hypothesis: HypothesisVerdict
    derivation_log: list[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_modulus(self) -> "NuResult":
        if self.modulus not in (24, 48):
            raise ValueError("modulus must be 24 or 48")
        if not 0 <= self.nu_value < self.modulus:
            raise ValueError("nu_value must be reduced modulo the modulus")
        level = self.hypothesis.level
        if self.modulus == 48 and not level.allows_mod48:
            raise ValueError(f"modulus 48 needs HYP1 or SITUATION1, got {level.value}")
        if self.modulus == 24 and not level.allows_mod24:
            raise ValueError(f"modulus 24 needs at least HYP2_SPIN, got {level.value}")
        return self

    @property
    def headline(self) -> str:
        return f"ν ≡ {self.nu_value} (mod {self.modulus})"


class ReportRow(BaseModel):
    """One line of the summary table; field order is the CSV column order."""

    example: str
    group_order: int | None
    b1: int
    b2: int | None
    b3: int | None
    eta_sign: str
    eta_dirac: str
    nu: int
    modulus: int
    checks_passed: bool
