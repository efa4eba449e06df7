"""
Maslov Service

Twisted-connected-sum cross-check for the dihedral examples. The gluing
cross-section T^6 carries two Lagrangian pairs: the 3-forms H^3(T^6) with the
Hodge star, and the spinors R + R^7 with Clifford multiplication by the
inward normal. Each Lagrangian is the +1 eigenspace of an involution (beta or
alpha beta), and the Maslov index comes from the eigen-angles of -A+ A- on
the (-i)-eigenspace of the complex structure.
"""

import logging
from fractions import Fraction
from itertools import combinations
from math import pi

import numpy as np

from g2nu.config import Settings, get_settings
from g2nu.core.errors import NotApplicable, NotInvolution, NotLagrangianPair
from g2nu.models import (
    AffineIsometry,
    EtaValue,
    Lagrangian,
    OrbifoldSpec,
    Provenance,
    SymplecticSpace,
    TcsReport,
    TorusLattice,
)
from g2nu.services.eta_dirac import eta_dirac_orbifold
from g2nu.services.eta_sign import eta_signature_orbifold
from g2nu.services.g2clifford import clifford_matrix
from g2nu.services.group import ambient_linear, compose, generate_group
from g2nu.utils.rationals import format_rational, snap_turn

logger = logging.getLogger(__name__)

TOLERANCE = 1e-10

_TRIPLES: list[tuple[int, int, int]] = list(combinations(range(6), 3))
_TRIPLE_INDEX = {t: i for i, t in enumerate(_TRIPLES)}


def _permutation_sign(perm: list[int]) -> int:
    inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm))
                     if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


# ============================================================================
# Spaces
# ============================================================================

def hodge_star_3forms() -> np.ndarray:
    """*dx_I = sign(I, I^c) dx_{I^c} for the orientation dx_1 ... dx_6."""
    star = np.zeros((20, 20))
    for I in _TRIPLES:
        complement = tuple(k for k in range(6) if k not in I)
        star[_TRIPLE_INDEX[complement], _TRIPLE_INDEX[I]] = _permutation_sign([*I, *complement])
    return star


def h3_space() -> SymplecticSpace:
    """Lambda^3 of the cross-section with J = -*, the star of the orientation induced by the inward normal -e_7."""
    labels = tuple("dx" + "".join(str(k + 1) for k in I) for I in _TRIPLES)
    return SymplecticSpace(name="H3(T6)", dimension=20, basis_labels=labels,
                           complex_structure=-hodge_star_3forms())


def spinor_space() -> SymplecticSpace:
    """R + R^7 with J = Clifford multiplication by -e_7."""
    normal = np.zeros(7)
    normal[6] = -1.0
    labels = ("1", *(f"e{k}" for k in range(1, 8)))
    return SymplecticSpace(name="S(T6)", dimension=8, basis_labels=labels,
                           complex_structure=clifford_matrix(normal))


def pullback_3forms(R6: np.ndarray) -> np.ndarray:
    """Matrix of R^* on 3-forms: (R^* w)_I = sum_J det(R[J, I]) w_J."""
    A = np.zeros((20, 20))
    for I in _TRIPLES:
        for J in _TRIPLES:
            A[_TRIPLE_INDEX[I], _TRIPLE_INDEX[J]] = np.linalg.det(R6[np.ix_(J, I)])
    return A


def spinor_action(R: np.ndarray) -> np.ndarray:
    """(lambda, v) -> (lambda, R v)."""
    A = np.zeros((8, 8))
    A[0, 0] = 1.0
    A[1:, 1:] = R
    return A


# ============================================================================
# Lagrangians and the index
# ============================================================================

def lagrangian_from_involution(space: SymplecticSpace, involution: np.ndarray,
                               label: str = "") -> Lagrangian:
    """The +1 eigenspace of an involution, which must be half-dimensional."""
    A = np.asarray(involution, dtype=float)
    n = space.dimension
    if A.shape != (n, n) or not np.allclose(A @ A, np.eye(n), atol=TOLERANCE):
        raise NotInvolution(f"{label or 'map'} is not an involution on {space.name}")
    sym = (A + A.T) / 2
    w, V = np.linalg.eigh(sym)
    basis = V[:, np.isclose(w, 1.0, atol=1e-8)]
    if basis.shape[1] != n // 2:
        raise NotLagrangianPair(f"{label or 'map'} fixes a {basis.shape[1]}-dimensional "
                                f"subspace of {space.name}", dimension=basis.shape[1])
    return Lagrangian(space=space, basis=basis, involution=A, label=label)


def _check_pair(L_plus: Lagrangian, L_minus: Lagrangian) -> np.ndarray:
    if L_plus.space.name != L_minus.space.name:
        raise NotLagrangianPair("Lagrangians live in different spaces")
    J = L_plus.space.complex_structure.astype(float)
    for L in (L_plus, L_minus):
        if not np.allclose(L.involution @ J, -J @ L.involution, atol=TOLERANCE):
            raise NotLagrangianPair(f"{L.label or 'involution'} does not anticommute with J")
    return J


def maslov_index(L_plus: Lagrangian, L_minus: Lagrangian, max_denominator: int = 48) -> EtaValue:
    """-sum phi_j / pi over eigen-angles phi_j in (-pi, pi) of -A+ A- on E- = ker(J + i)."""
    J = _check_pair(L_plus, L_minus)
    w, V = np.linalg.eigh(1j * J)
    E_minus = V[:, np.isclose(w, 1.0, atol=1e-8)]             # J v = -i v  <=>  (iJ) v = v
    M = -(L_plus.involution @ L_minus.involution)
    restricted = E_minus.conj().T @ M @ E_minus
    eigenvalues = np.linalg.eigvals(restricted)
    if not np.allclose(np.abs(eigenvalues), 1.0, atol=TOLERANCE):
        raise NotLagrangianPair("-A+ A- is not unitary on E-")

    total = Fraction(0)
    numeric = 0.0
    for z in eigenvalues:
        phi = float(np.angle(z))
        turn = snap_turn(phi / (2 * pi), max_denominator, TOLERANCE)
        if turn is None:
            raise NotLagrangianPair(f"eigen-angle {phi} is not a rational multiple of pi "
                                    f"with denominator <= {max_denominator}")
        if turn > Fraction(1, 2):
            turn -= 1
        if turn == Fraction(1, 2):
            continue
        total -= 2 * turn
        numeric -= phi / pi
    return EtaValue(exact=total, numeric=numeric, error_bound=1e-8,
                    provenance=Provenance.CLOSED_FORM)


# ============================================================================
# Dihedral cross-check
# ============================================================================

def dihedral_involutions(spec: OrbifoldSpec) -> tuple[AffineIsometry, AffineIsometry]:
    """beta and alpha beta of a dihedral catalog entry."""
    if spec.resolution.dihedral_a is None:
        raise NotApplicable(f"{spec.name} is not a dihedral example")
    try:
        alpha, beta = spec.generator("alpha"), spec.generator("beta")
    except KeyError as exc:
        raise NotApplicable(f"{spec.name} lacks generator {exc}") from exc
    return beta, compose(alpha, beta, label="alpha·beta")


def _cross_section(g: AffineIsometry, lattice: TorusLattice) -> np.ndarray:
    R = ambient_linear(g, lattice)
    if not (np.allclose(R[6, :6], 0, atol=TOLERANCE) and np.allclose(R[:6, 6], 0, atol=TOLERANCE)):
        raise NotApplicable(f"{g.label} does not preserve the T^6 x S^1 splitting")
    return R


def signature_pair(spec: OrbifoldSpec) -> tuple[Lagrangian, Lagrangian]:
    space = h3_space()
    beta, alpha_beta = dihedral_involutions(spec)
    return tuple(  # type: ignore[return-value]
        lagrangian_from_involution(space, pullback_3forms(_cross_section(g, spec.lattice)[:6, :6]),
                                   label=g.label)
        for g in (beta, alpha_beta))


def spinor_pair(spec: OrbifoldSpec) -> tuple[Lagrangian, Lagrangian]:
    space = spinor_space()
    beta, alpha_beta = dihedral_involutions(spec)
    return tuple(  # type: ignore[return-value]
        lagrangian_from_involution(space, spinor_action(_cross_section(g, spec.lattice)),
                                   label=g.label)
        for g in (beta, alpha_beta))


def tcs_cross_check(spec: OrbifoldSpec, settings: Settings | None = None) -> TcsReport:
    """Maslov indices of both pairs against the orbifold eta values."""
    settings = settings or get_settings()
    a = spec.resolution.dihedral_a
    if a is None:
        raise NotApplicable(f"{spec.name} is not a dihedral example")
    group = generate_group(spec.generators, settings.ORDER_BOUND, spec.lattice)
    if group.order != 2 * a:
        raise NotApplicable(f"{spec.name}: group of order {group.order} is not the dihedral "
                            f"group of order {2 * a}")

    eta_b = eta_signature_orbifold(group, spec, settings)
    eta_d = eta_dirac_orbifold(group, spec, settings)
    sig_plus, sig_minus = signature_pair(spec)
    spin_plus, spin_minus = spinor_pair(spec)
    m_sig = maslov_index(sig_plus, sig_minus, 4 * a)
    m_dirac = maslov_index(spin_plus, spin_minus, 4 * a)

    checks = []
    for name, (p, m) in (("H3", (sig_plus, sig_minus)), ("spinor", (spin_plus, spin_minus))):
        forward, backward = maslov_index(p, m, 4 * a).exact, maslov_index(m, p, 4 * a).exact
        total = forward + backward  # type: ignore[operator]
        checks.append(f"{name}: m(L+,L-) + m(L-,L+) = {format_rational(total)}")

    difference = m_dirac.exact - eta_d.exact  # type: ignore[operator]
    report = TcsReport(
        example=spec.name,
        signature_maslov=m_sig,
        dirac_maslov=m_dirac,
        eta_sign=eta_b,
        eta_dirac=eta_d,
        signature_agrees=m_sig.exact == eta_b.exact,
        dirac_agrees_mod_z=difference.denominator == 1,
        dirac_agrees_integer=difference == 0,
        swap_check=checks,
    )
    if not (report.signature_agrees and report.dirac_agrees_mod_z):
        logger.warning("tcs_mismatch", extra={"event": "tcs_mismatch", "example": spec.name,
                                              "signature_maslov": str(m_sig.exact),
                                              "dirac_maslov": str(m_dirac.exact)})
    return report
