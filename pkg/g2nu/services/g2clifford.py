"""
G2 and Clifford Service

The flat G2-structure on R^7: cross product from phi, Clifford multiplication
on S = C + C^7, the S_u^+- eigenbases, and exact rotation angles of group
elements. Exact results come from the integer data; the embedding only pins
the orientation of rotation planes.
"""

import logging
from fractions import Fraction
from itertools import product
from math import pi, sin, sqrt

import numpy as np
from sympy import Poly, symbols

from g2nu.core.errors import AmbiguousOrientation, NoFixedDirection, ZeroVector
from g2nu.models import AffineIsometry, AngleProfile, Spinor, ThreeForm, TorusLattice
from g2nu.services.group import ambient_linear, matrix_order
from g2nu.services.lattice import fixed_dual_sublattice, fixed_sublattice
from g2nu.utils.cyclotomic import charpoly_from_turns, cyclotomic_multiplicities, eigen_turns
from g2nu.utils.rationals import snap_turn

logger = logging.getLogger(__name__)

_PHI = ThreeForm.standard()
_EPS_FLOAT = _PHI.tensor(dtype=float)
_EPS_EXACT = _PHI.tensor(dtype=object)


def _structure(*arrays: np.ndarray) -> np.ndarray:
    return _EPS_EXACT if any(a.dtype == object for a in arrays) else _EPS_FLOAT


def cross_product(u, v) -> np.ndarray:
    """(u x v)_k = sum_ij u_i v_j phi_ijk, so that phi(u, v, w) = <u x v, w>."""
    u, v = np.asarray(u), np.asarray(v)
    eps = _structure(u, v)
    return np.tensordot(np.tensordot(u, eps, axes=(0, 0)), v, axes=(0, 0))


def clifford_matrix(u) -> np.ndarray:
    """8x8 real matrix of s -> u.s in the basis (1, e_1, ..., e_7)."""
    u = np.asarray(u)
    dtype = object if u.dtype == object else float
    C = np.zeros((8, 8), dtype=dtype)
    if dtype is object:
        C[:] = 0
    C[0, 1:] = -u
    C[1:, 0] = u
    C[1:, 1:] = np.tensordot(u, _structure(u), axes=(0, 0)).T
    return C


def clifford_mul(u, s: Spinor) -> Spinor:
    """u.(lambda, v) = (-<v, u>, lambda u + u x v)."""
    return Spinor.from_array(clifford_matrix(u) @ s.as_array())


def hermitian_product(s: Spinor, t: Spinor) -> complex:
    """<s, t> = sum s_i conj(t_i)."""
    a, b = s.as_array(), t.as_array()
    if b.dtype == object:
        conj = np.array([x.conjugate() for x in b], dtype=object)
    else:
        conj = np.conj(b)
    return np.sum(a * conj)


def _standard_basis(sign: int) -> list[Spinor]:
    r = 1 / sqrt(2)
    e = np.eye(7, dtype=complex)
    s0 = Spinor(scalar=r, vector=sign * 1j * r * e[6])
    rest = [Spinor(scalar=0j, vector=r * (e[2 * k] + sign * 1j * e[2 * k + 1])) for k in range(3)]
    return [s0, *rest]


def spinor_eigenbasis(u) -> tuple[list[Spinor], list[Spinor]]:
    """Orthonormal bases of S_u^+ and S_u^-, the -i|u| and +i|u| eigenspaces of u."""
    u = np.asarray(u, dtype=float)
    norm = float(np.linalg.norm(u))
    if norm == 0:
        raise ZeroVector("spinor eigenbasis needs a nonzero vector")
    if np.allclose(u[:6], 0):
        plus, minus = _standard_basis(+1), _standard_basis(-1)
        return (plus, minus) if u[6] > 0 else (minus, plus)

    # C is real skew with C^2 = -I, so iC is Hermitian; C s = -i s  <=>  (iC) s = s
    C = clifford_matrix(u / norm)
    w, V = np.linalg.eigh(1j * C)
    plus = [Spinor.from_array(V[:, j]) for j in range(8) if w[j] > 0]
    minus = [Spinor.from_array(V[:, j]) for j in range(8) if w[j] < 0]
    return plus, minus


# ============================================================================
# Rotation angles
# ============================================================================

def _unsigned_angles(turns: list[Fraction]) -> list[Fraction]:
    """Pair the transverse eigen-turns {t, 1 - t} into three angles in [0, 1/2]."""
    remaining = sorted(turns)
    angles = []
    while remaining:
        t = remaining.pop(0)
        partner = t if t in (0, Fraction(1, 2)) else 1 - t
        remaining.remove(partner)
        angles.append(t)
    return angles


def _translation_along_fixed(g: AffineIsometry, order: int, direction: np.ndarray) -> Fraction:
    """<k*, b> for the primitive fixed dual vector k* with <k*, k> > 0."""
    duals = fixed_dual_sublattice(g.matrix)
    k_star = np.array(duals[0].coords, dtype=object)
    pairing = int(k_star @ direction)
    if pairing < 0:
        k_star = -k_star
    return Fraction(k_star @ g.shift) % 1


def _oriented_turns(g: AffineIsometry, lattice: TorusLattice, direction: np.ndarray) -> list[float]:
    """Eigen-turns of R on the +i eigenspace of J = f x (.) in the complement of f."""
    E = lattice.ambient
    f = E @ direction.astype(float)
    f /= np.linalg.norm(f)
    J = np.tensordot(f, _EPS_FLOAT, axes=(0, 0)).T       # J v = f x v
    w, V = np.linalg.eigh(1j * J)
    U = V[:, np.isclose(w, -1.0, atol=1e-8)]             # J v = i v  <=>  (iJ) v = -v
    R = ambient_linear(g, lattice)
    restricted = U.conj().T @ R @ U
    phases = np.angle(np.linalg.eigvals(restricted))
    return [float(p / (2 * pi)) % 1.0 for p in phases]


def rotation_angles(g: AffineIsometry, lattice: TorusLattice, order_bound: int = 10_000) -> AngleProfile:
    """Exact Donnelly data (d; theta_1, theta_2, theta_3) in turns."""
    order = matrix_order(g.matrix, order_bound)
    multiplicities = cyclotomic_multiplicities(g.matrix, order)
    if 1 not in multiplicities:
        raise NoFixedDirection(f"{g.label or 'element'} fixes no direction")

    turns = eigen_turns(multiplicities)
    turns.remove(Fraction(0))
    unsigned = _unsigned_angles(turns)

    direction = fixed_sublattice(g.matrix)[:, 0]
    if lattice.has_embedding:
        observed = _oriented_turns(g, lattice, direction)
        angles = []
        for value in observed:
            snapped = snap_turn(value, order, 1e-6)
            if snapped is None:
                raise NoFixedDirection(f"eigen-turn {value} of {g.label!r} is not of order {order}")
            angles.append(snapped)
        expected = sorted(turns + [Fraction(0)])
        got = sorted([a for a in angles] + [(-a) % 1 for a in angles] + [Fraction(0)])
        if got != expected:
            raise NoFixedDirection(f"embedded eigen-turns of {g.label!r} disagree with charpoly")
    else:
        candidates = []
        for signs in product((1, -1), repeat=3):
            signed = [(s * a) % 1 for s, a in zip(signs, unsigned, strict=True)]
            if sum(signed) % 1 == 0:
                candidates.append(signed)
        sums = {round(sum(sin(2 * pi * float(t)) for t in c), 12) for c in candidates}
        if len(sums) > 1:
            raise AmbiguousOrientation(
                f"{g.label or 'element'}: orientation of rotation planes is not determined "
                "by the integer data; supply an embedding", choices=len(candidates))
        angles = candidates[0]

    d = _translation_along_fixed(g, order, direction)
    angles = sorted(angles)
    profile = AngleProfile(d=d, angles=tuple(angles), sum_zero_certificate=sum(angles) % 1 == 0)
    logger.debug("rotation_angles", extra={"event": "rotation_angles", "element": g.label,
                                           "d": str(profile.d),
                                           "angles": [str(a) for a in profile.angles]})
    return profile


def charpoly_of_profile(profile: AngleProfile) -> Poly:
    """(x - 1) prod_k (x - e^{2 pi i theta_k})(x - e^{-2 pi i theta_k}) as an integer Poly."""
    turns = [Fraction(0)]
    for a in profile.angles:
        turns += [a, (-a) % 1]
    return charpoly_from_turns(turns)


def transverse_charpoly_at_one(B: np.ndarray) -> int:
    """q(1) where charpoly(B) = (x - 1) q(x)."""
    from g2nu.utils.cyclotomic import characteristic_polynomial

    x = symbols("x")
    quotient, remainder = characteristic_polynomial(B).div(Poly(x - 1, x))
    if not remainder.is_zero:
        raise NoFixedDirection("eigenvalue 1 is absent")
    return int(quotient.eval(1))
