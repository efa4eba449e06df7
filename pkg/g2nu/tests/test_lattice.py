"""
Tests for fixed sublattices and dual shell enumeration.
"""

import numpy as np
import pytest

from g2nu.core.errors import MissingEmbedding
from g2nu.models import DualVector, TorusLattice
from g2nu.services.lattice import (
    averaged_projector,
    enumerate_dual_shells,
    first_dual_shells,
    fixed_dual_sublattice,
    fixed_sublattice,
)

HALF_FLIP = np.diag([1, 1, 1, -1, -1, -1, -1]).astype(object)
INVOLUTION = np.diag([-1, -1, -1, -1, 1, 1, 1]).astype(object)


@pytest.fixture
def standard_lattice() -> TorusLattice:
    return TorusLattice(rank=7, embedding=[["1" if i == j else "0" for j in range(7)]
                                           for i in range(7)])


def test_fixed_dual_sublattice_of_involution():
    basis = fixed_dual_sublattice(INVOLUTION)
    assert len(basis) == 3
    span = np.array([v.coords for v in basis])
    assert not span[:, :4].any()


def test_fixed_sublattice_of_rotation(ex07):
    """alpha fixes only the x direction of Z[omega]^3 x Z."""
    K = fixed_sublattice(ex07.generator("alpha").matrix)
    assert K.shape == (7, 1)
    assert abs(K[6, 0]) == 1
    assert not K[:6, 0].any()


def test_averaged_projector():
    assert (averaged_projector(INVOLUTION, 2) == np.diag([0, 0, 0, 0, 2, 2, 2])).all()


def test_dual_vector_negation():
    assert -DualVector(coords=(1, -2, 0)) == DualVector(coords=(-1, 2, 0))


def test_dual_shells_of_standard_lattice(standard_lattice):
    """Fixed duals span Z^3: six vectors at norm 1, twelve at norm sqrt 2."""
    shells = enumerate_dual_shells(standard_lattice, HALF_FLIP, 1.5)
    assert [len(vectors) for _, vectors in shells] == [6, 12]
    assert shells[0][0] == pytest.approx(1.0)
    assert shells[1][0] == pytest.approx(np.sqrt(2))
    assert all(not any(v.coords[3:]) for _, vectors in shells for v in vectors)


def test_first_dual_shells_grows_radius(standard_lattice):
    shells = first_dual_shells(standard_lattice, HALF_FLIP, 3)
    assert len(shells) == 3
    assert shells[2][0] == pytest.approx(np.sqrt(3))
    assert len(shells[2][1]) == 8


def test_shells_on_eisenstein_lattice(ex07):
    """Only +-e7* survive for alpha; its shells sit at integer norms."""
    shells = first_dual_shells(ex07.lattice, ex07.generator("alpha").matrix, 2)
    assert [len(vectors) for _, vectors in shells] == [2, 2]
    assert [norm for norm, _ in shells] == pytest.approx([1.0, 2.0])


def test_shells_need_embedding():
    with pytest.raises(MissingEmbedding):
        enumerate_dual_shells(TorusLattice(rank=7), HALF_FLIP, 1.0)


def test_shells_reject_nonpositive_radius(standard_lattice):
    with pytest.raises(ValueError):
        enumerate_dual_shells(standard_lattice, HALF_FLIP, 0.0)


def test_embedding_shape_is_checked():
    with pytest.raises(ValueError):
        TorusLattice(rank=7, embedding=[["1", "0"], ["0", "1"]])
