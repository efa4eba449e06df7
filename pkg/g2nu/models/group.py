"""
Group Models

Affine isometries of the torus in lattice coordinates, finite groups of them,
their fixed-point data, singular-set components, hypothesis verdicts and the
vanishing certificates built from commuting isometries.
"""

from enum import Enum
from fractions import Fraction

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from g2nu.utils.linalg import is_finite_order_unimodular

from .common import Tier
from .lattice import TorusLattice


class AffineIsometry(BaseModel):
    """x -> B x + b with B an integer matrix and b rational, reduced mod 1."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    linear: tuple[tuple[int, ...], ...]
    translation: tuple[Fraction, ...]
    label: str = ""

    @field_validator("linear", mode="before")
    @classmethod
    def coerce_linear(cls, v):
        if isinstance(v, np.ndarray):
            v = v.tolist()
        rows = []
        for row in v:
            entries = []
            for entry in row:
                if isinstance(entry, float) or Fraction(entry).denominator != 1:
                    raise ValueError(f"linear part must be integral, got {entry!r}")
                entries.append(int(entry))
            rows.append(tuple(entries))
        return tuple(rows)

    @field_validator("translation", mode="before")
    @classmethod
    def reduce_translation(cls, v):
        return tuple(Fraction(t) % 1 for t in v)

    @model_validator(mode="after")
    def check_linear_part(self) -> "AffineIsometry":
        n = len(self.linear)
        if any(len(row) != n for row in self.linear) or len(self.translation) != n:
            raise ValueError("linear part must be square and match the translation length")
        if n and not is_finite_order_unimodular(self.linear):
            raise ValueError("linear part must have determinant +-1 and finite order")
        return self

    @property
    def dim(self) -> int:
        return len(self.linear)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.linear, dtype=object)

    @property
    def shift(self) -> np.ndarray:
        return np.array(self.translation, dtype=object)

    @property
    def key(self) -> tuple:
        """Identity of the map, ignoring the label."""
        return (self.linear, self.translation)

    def same_map(self, other: "AffineIsometry") -> bool:
        return self.key == other.key


class GroupAction(BaseModel):
    """A finite group of affine isometries; elements[0] is the identity."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lattice: TorusLattice
    elements: tuple[AffineIsometry, ...]
    generators: tuple[int, ...] = ()

    @property
    def order(self) -> int:
        return len(self.elements)

    def index_of(self, g: AffineIsometry) -> int:
        for i, h in enumerate(self.elements):
            if h.same_map(g):
                return i
        raise KeyError(g.label or str(g.key))


class FixedPointSet(BaseModel):
    """Fixed set of one element: empty, or `component_count` subtori of one dimension."""

    empty: bool
    dimension: int = 0
    component_count: int = 0


class FixedComponent(BaseModel):
    """One connected component x0 + span(directions) of a fixed set."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    point: tuple[Fraction, ...]
    directions: tuple[tuple[int, ...], ...]  # columns of the saturated basis, stored as rows
    owner: int  # index of the element it was computed from

    @property
    def dimension(self) -> int:
        return len(self.directions)


class SingularComponent(BaseModel):
    """One Gamma-orbit of fixed tori F_i, with its centralizer A_i and B_i = N_i / A_i."""

    representative_fix_dim: int
    centralizer_order: int
    normalizer_quotient_order: int
    orbit_size: int
    transversal_group_tag: str
    intersects_other_component: bool = False
    acts_freely: bool = True
    half_screw: bool = False

    @field_validator("representative_fix_dim")
    @classmethod
    def validate_dim(cls, v: int) -> int:
        if v not in (1, 3):
            raise ValueError("fixed tori are 1- or 3-dimensional")
        return v


class HypothesisLevel(str, Enum):
    HYP1 = "HYP1"
    HYP2_SPIN = "HYP2_SPIN"
    HYP2 = "HYP2"
    SITUATION1 = "SITUATION1"
    UNKNOWN = "UNKNOWN"

    @property
    def allows_mod48(self) -> bool:
        return self in (HypothesisLevel.HYP1, HypothesisLevel.SITUATION1)

    @property
    def allows_mod24(self) -> bool:
        return self in (HypothesisLevel.HYP1, HypothesisLevel.SITUATION1,
                        HypothesisLevel.HYP2_SPIN)


class HypothesisVerdict(BaseModel):
    level: HypothesisLevel
    witness_notes: list[str] = Field(default_factory=list)


class CertificateKind(str, Enum):
    ORIENTATION_REVERSING_COMMUTANT = "orientation_reversing_commutant"
    EIGENVALUE_PM1 = "eigenvalue_pm1"
    ZERO_TRANSLATION = "zero_translation"
    HAS_FIXED_POINTS_WITH_ISOMETRY = "has_fixed_points_with_isometry"
    EIGENVALUE_MULTIPLICITY = "eigenvalue_multiplicity"


class VanishingCertificate(BaseModel):
    """Why an equivariant eta term vanishes, with the witness isometry if any.

    signature_tier and dirac_tier record how strongly each eta term is known
    to vanish.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: CertificateKind
    witness: AffineIsometry | None = None
    signature_tier: Tier = Tier.EXACT
    dirac_tier: Tier = Tier.EXACT
    note: str = ""
