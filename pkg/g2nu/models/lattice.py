"""
Lattice Models

The torus R^n / Lambda in lattice coordinates, with an optional numeric
embedding kept as decimal text so high-precision data survives round trips.
"""

import mpmath
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class DualVector(BaseModel):
    """Coordinates in the basis of Lambda* dual to the stored basis of Lambda."""

    model_config = ConfigDict(frozen=True)

    coords: tuple[int, ...]

    def __neg__(self) -> "DualVector":
        return DualVector(coords=tuple(-c for c in self.coords))


class TorusLattice(BaseModel):
    """Rank-n lattice; embedding columns are basis vectors in ambient coordinates."""

    model_config = ConfigDict(frozen=True)

    rank: int = 7
    embedding: tuple[tuple[str, ...], ...] | None = None
    embedding_precision: float = Field(default=1e-10, gt=0)

    @field_validator("rank")
    @classmethod
    def validate_rank(cls, v: int) -> int:
        if v not in (6, 7):
            raise ValueError("rank must be 6 or 7")
        return v

    @field_validator("embedding", mode="before")
    @classmethod
    def normalize_embedding(cls, v):
        if v is None:
            return None
        return tuple(tuple(str(entry) for entry in row) for row in v)

    @model_validator(mode="after")
    def check_embedding(self) -> "TorusLattice":
        if self.embedding is None:
            return self
        if len(self.embedding) != self.rank or any(len(r) != self.rank for r in self.embedding):
            raise ValueError(f"embedding must be {self.rank}x{self.rank}")
        if abs(np.linalg.det(self.ambient)) <= self.embedding_precision:
            raise ValueError("embedding columns are linearly dependent")
        return self

    @property
    def has_embedding(self) -> bool:
        return self.embedding is not None

    @property
    def ambient(self) -> np.ndarray:
        """Embedding as a float matrix (columns = basis vectors)."""
        assert self.embedding is not None
        return np.array([[float(mpmath.mpf(e)) for e in row] for row in self.embedding])

    @property
    def ambient_mp(self) -> mpmath.matrix:
        assert self.embedding is not None
        return mpmath.matrix([[mpmath.mpf(e) for e in row] for row in self.embedding])

    @property
    def dual_ambient(self) -> np.ndarray:
        """Columns are the dual basis vectors in ambient coordinates (E^-T)."""
        return np.linalg.inv(self.ambient).T
