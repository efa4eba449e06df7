"""
Tests for the G2 structure, Clifford multiplication and rotation angles.
"""

from fractions import Fraction

import numpy as np
import pytest

from g2nu.conftest import affine
from g2nu.core.errors import AmbiguousOrientation, NoFixedDirection, ZeroVector
from g2nu.models import Spinor, ThreeForm, TorusLattice
from g2nu.services.g2clifford import (
    charpoly_of_profile,
    clifford_matrix,
    clifford_mul,
    cross_product,
    hermitian_product,
    rotation_angles,
    spinor_eigenbasis,
    transverse_charpoly_at_one,
)
from g2nu.utils.cyclotomic import characteristic_polynomial


def _unit(i: int) -> np.ndarray:
    return np.eye(7)[i - 1]


# =============================================================================
# Three-form and cross product
# =============================================================================


def test_three_form_is_antisymmetric():
    T = ThreeForm.standard().tensor()
    assert T[0, 1, 6] == 1
    assert T[1, 0, 6] == -1
    assert T[1, 3, 5] == -1
    assert (T + np.transpose(T, (1, 0, 2)) == 0).all()


def test_three_form_rejects_bad_triples():
    with pytest.raises(ValueError):
        ThreeForm(coefficients={(2, 1, 7): 1})


@pytest.mark.parametrize("i,j,k,sign", [
    (1, 2, 7, 1),
    (2, 4, 6, -1),
    (5, 6, 7, 1),
    (3, 4, 7, 1),
])
def test_cross_product_on_basis(i, j, k, sign):
    assert np.allclose(cross_product(_unit(i), _unit(j)), sign * _unit(k))


def test_cross_product_identities():
    """u x (u x v) = -|u|^2 v + <u, v> u, u x v is orthogonal to both, |u x v|^2 = |u|^2 |v|^2 - <u, v>^2."""
    rng = np.random.default_rng(7)
    for _ in range(200):
        u, v = rng.normal(size=7), rng.normal(size=7)
        w = cross_product(u, v)
        assert np.allclose(cross_product(u, w), -(u @ u) * v + (u @ v) * u)
        assert np.isclose(w @ u, 0) and np.isclose(w @ v, 0)
        assert np.isclose(w @ w, (u @ u) * (v @ v) - (u @ v) ** 2)


# =============================================================================
# Clifford multiplication
# =============================================================================


def test_clifford_square_is_exact():
    """C(u)^2 = -|u|^2 on rational vectors, with no rounding."""
    u = np.array([Fraction(1, 2), Fraction(-1, 3), 0, 1, 0, Fraction(2, 5), 0], dtype=object)
    C = clifford_matrix(u)
    norm_sq = sum(x * x for x in u)
    expected = -norm_sq * np.eye(8, dtype=object)
    assert (C @ C == expected).all()


def test_clifford_square_and_skewness_sweep():
    """200 random rational u: C(u)^2 = -|u|^2 exactly and C(u) is skew, hence skew-Hermitian."""
    rng = np.random.default_rng(200)
    eye = np.eye(8, dtype=int).astype(object)
    for _ in range(200):
        u = np.array([Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 8))) for _ in range(7)],
                     dtype=object)
        C = clifford_matrix(u)
        assert (C @ C == -sum(x * x for x in u) * eye).all()
        assert (C.T == -C).all()


def test_clifford_mul_matches_matrix():
    s = Spinor(scalar=1 + 0j, vector=np.arange(7, dtype=complex))
    u = _unit(3)
    assert np.allclose(clifford_mul(u, s).as_array(), clifford_matrix(u) @ s.as_array())


@pytest.mark.parametrize("u", [
    _unit(7),
    -_unit(7),
    np.array([1.0, -2.0, 0.5, 0.0, 3.0, 1.0, -1.0]),
    np.array([0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 2.5]),
])
def test_spinor_eigenbasis(u):
    """S_u^+ is the -i|u| eigenspace, S_u^- the +i|u| one, each orthonormal of rank 4."""
    plus, minus = spinor_eigenbasis(u)
    assert len(plus) == len(minus) == 4
    C = clifford_matrix(np.asarray(u, dtype=float))
    norm = np.linalg.norm(u)
    for basis, eigenvalue in ((plus, -1j * norm), (minus, 1j * norm)):
        for s in basis:
            assert np.allclose(C @ s.as_array(), eigenvalue * s.as_array())
        gram = np.array([[hermitian_product(s, t) for t in basis] for s in basis])
        assert np.allclose(gram, np.eye(4))


def test_spinor_eigenbasis_rejects_zero():
    with pytest.raises(ZeroVector):
        spinor_eigenbasis(np.zeros(7))


# =============================================================================
# Rotation angles
# =============================================================================


def test_rotation_angles_of_order_three_screw(ex07):
    """alpha is x -> x + 1/3 with all three angles equal to the translation."""
    profile = rotation_angles(ex07.generator("alpha"), ex07.lattice)
    assert profile.d in (Fraction(1, 3), Fraction(2, 3))
    assert set(profile.angles) == {profile.d}
    assert profile.sum_zero_certificate


def test_rotation_angles_order_six(catalog):
    spec = catalog["ex08"]
    profile = rotation_angles(spec.generator("alpha"), spec.lattice)
    assert sum(profile.angles) % 1 == 0
    assert sorted(min(t, 1 - t) for t in profile.angles) == [Fraction(1, 6), Fraction(1, 6),
                                                             Fraction(1, 3)]


def test_rotation_angles_need_embedding_for_orientation(ex07):
    with pytest.raises(AmbiguousOrientation):
        rotation_angles(ex07.generator("alpha"), TorusLattice(rank=7))


def test_rotation_angles_without_fixed_direction():
    with pytest.raises(NoFixedDirection):
        rotation_angles(affine((-1,) * 7), TorusLattice(rank=7))


def test_profile_charpoly_matches_linear_part(ex07):
    alpha = ex07.generator("alpha")
    profile = rotation_angles(alpha, ex07.lattice)
    assert charpoly_of_profile(profile) == characteristic_polynomial(alpha.matrix)


@pytest.mark.parametrize("name,value", [("ex07", 27), ("ex08", 3), ("ex09", 16)])
def test_transverse_charpoly_at_one(catalog, name, value):
    """q(1) = prod |1 - e^{2 pi i theta}|^2 over the six transverse eigenvalues."""
    assert transverse_charpoly_at_one(catalog[name].generator("alpha").matrix) == value
