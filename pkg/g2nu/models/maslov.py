"""
Maslov Models

Symplectic cross-section spaces, Lagrangians given by involutions, and the
result of a twisted-connected-sum cross-check.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .common import EtaValue


class SymplecticSpace(BaseModel):
    """Real vector space with a compatible complex structure J (J @ J = -I)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    dimension: int
    basis_labels: tuple[str, ...]
    complex_structure: np.ndarray


class Lagrangian(BaseModel):
    """+1-eigenspace of an involution anticommuting with J."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    space: SymplecticSpace
    basis: np.ndarray  # columns
    involution: np.ndarray
    label: str = ""


class TcsReport(BaseModel):
    """Maslov indices of both Lagrangian pairs against the orbifold eta values."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    example: str
    signature_maslov: EtaValue
    dirac_maslov: EtaValue
    eta_sign: EtaValue
    eta_dirac: EtaValue
    signature_agrees: bool
    dirac_agrees_mod_z: bool
    dirac_agrees_integer: bool
    swap_check: list[str] = Field(default_factory=list)
