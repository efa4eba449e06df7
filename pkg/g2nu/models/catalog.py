"""
Catalog Models

Orbifold descriptions as read from spec files or built in: lattice,
generators, certificate hints, resolution metadata and expected values.
"""

from fractions import Fraction
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from .group import AffineIsometry, HypothesisLevel
from .lattice import TorusLattice


class ResolutionMetadata(BaseModel):
    """Facts about the resolution that are inputs, not computations."""

    model_config = ConfigDict(frozen=True)

    ell_parity: Literal["even", "odd"] | None = None
    nontorus_components_pairing: Literal["even", "odd"] | None = None
    spin_isometry_flags: tuple[bool, ...] = ()
    pi1: str = "0"
    partial: bool = False
    asserted_level: HypothesisLevel | None = None
    b1: int | None = None
    dihedral_a: int | None = None

    @property
    def spin_compatible(self) -> bool:
        return bool(self.spin_isometry_flags) and all(self.spin_isometry_flags)


class ExpectedValues(BaseModel):
    """Reference values a computed result is checked against."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    group_order: int | None = None
    b1: int | None = None
    eta_sign: Fraction | None = None
    eta_dirac_mod2: Fraction | None = None
    nu_mod48: int | None = None
    nu_mod24: int | None = None
    b2: int | None = None
    b3: int | None = None


class OrbifoldSpec(BaseModel):
    """One flat orbifold T^7/Gamma with everything needed to compute nu."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    description: str = ""
    lattice: TorusLattice
    generators: tuple[AffineIsometry, ...] = ()
    certificate_hints: tuple[AffineIsometry, ...] = ()
    resolution: ResolutionMetadata = Field(default_factory=ResolutionMetadata)
    expected: ExpectedValues | None = None

    @property
    def is_partial(self) -> bool:
        return self.resolution.partial

    def generator(self, label: str) -> AffineIsometry:
        for g in self.generators:
            if g.label == label:
                return g
        raise KeyError(label)
