"""
Spinor Models

The flat G2 three-form, spinors S = C + C^7, and Donnelly angle profiles.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

# phi = dx127 + dx136 + dx145 + dx235 - dx246 + dx347 + dx567 (1-based)
STANDARD_PHI_TERMS: dict[tuple[int, int, int], int] = {
    (1, 2, 7): 1,
    (1, 3, 6): 1,
    (1, 4, 5): 1,
    (2, 3, 5): 1,
    (2, 4, 6): -1,
    (3, 4, 7): 1,
    (5, 6, 7): 1,
}


class ThreeForm(BaseModel):
    """Constant 3-form on R^7 keyed by increasing 1-based index triples."""

    model_config = ConfigDict(frozen=True)

    coefficients: dict[tuple[int, int, int], int]

    @field_validator("coefficients")
    @classmethod
    def validate_triples(cls, v):
        for (i, j, k), c in v.items():
            if not 1 <= i < j < k <= 7:
                raise ValueError(f"index triple must be increasing in 1..7: {(i, j, k)}")
            if c not in (-1, 0, 1):
                raise ValueError("coefficients must be -1, 0 or +1")
        return v

    @classmethod
    def standard(cls) -> "ThreeForm":
        return cls(coefficients=dict(STANDARD_PHI_TERMS))

    def tensor(self, dtype=int) -> np.ndarray:
        """Fully antisymmetric 7x7x7 array with phi(e_i, e_j, e_k) entries."""
        eps = np.zeros((7, 7, 7), dtype=dtype)
        for (i, j, k), c in self.coefficients.items():
            a, b, d = i - 1, j - 1, k - 1
            for p, q, r, s in ((a, b, d, 1), (b, d, a, 1), (d, a, b, 1),
                               (b, a, d, -1), (a, d, b, -1), (d, b, a, -1)):
                eps[p, q, r] = s * c
        return eps


@dataclass(frozen=True)
class Spinor:
    """(lambda, v) in C + C^7; entries may be complex floats or exact numbers."""

    scalar: complex
    vector: np.ndarray

    def as_array(self) -> np.ndarray:
        dtype = self.vector.dtype if self.vector.dtype == object else complex
        out = np.empty(8, dtype=dtype)
        out[0] = self.scalar
        out[1:] = self.vector
        return out

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "Spinor":
        return cls(scalar=arr[0], vector=np.array(arr[1:]))


class AngleProfile(BaseModel):
    """Donnelly data: translation d along the fixed circle and three rotation angles, in turns."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    d: Fraction
    angles: tuple[Fraction, Fraction, Fraction]
    sum_zero_certificate: bool = True

    @field_validator("d", mode="before")
    @classmethod
    def reduce_d(cls, v):
        return Fraction(v) % 1

    @field_validator("angles", mode="before")
    @classmethod
    def reduce_angles(cls, v):
        return tuple(Fraction(t) % 1 for t in v)

    @model_validator(mode="after")
    def check_sum(self) -> "AngleProfile":
        if self.sum_zero_certificate and sum(self.angles) % 1 != 0:
            raise ValueError("angles must sum to 0 mod 1 when certified")
        return self
