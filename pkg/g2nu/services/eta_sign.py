"""
Signature Eta Service

Equivariant eta invariants of the odd signature operator on T^7 and their
orbifold average. Elements either carry a vanishing certificate or sit in
the Donnelly situation (fixed-point-free, rank-one fixed circle), where the
cotangent formula applies. Dihedral families are cross-checked against the
Eisenstein sawtooth closed form.
"""

import logging
from collections.abc import Iterator
from fractions import Fraction
from itertools import product
from math import fsum, pi, sin

import mpmath
import numpy as np

from g2nu.config import Settings, get_settings
from g2nu.core.errors import NotDonnellySituation, ReconstructionFailed, UnsupportedElement
from g2nu.models import (
    AffineIsometry,
    AngleProfile,
    CertificateKind,
    EtaValue,
    GroupAction,
    OrbifoldSpec,
    Provenance,
    Tier,
    VanishingCertificate,
)
from g2nu.services.g2clifford import rotation_angles, transverse_charpoly_at_one
from g2nu.services.group import commutes, fixed_point_set, is_isometry, matrix_order
from g2nu.services.lattice import fixed_dual_sublattice
from g2nu.utils.cyclotomic import cyclotomic_multiplicities, eigen_turns
from g2nu.utils.linalg import integer_det, solve_on_torus
from g2nu.utils.rationals import reconstruct_rational

logger = logging.getLogger(__name__)


# ============================================================================
# Elementary pieces
# ============================================================================

def sawtooth(t) -> Fraction:
    """((t)) = t - floor(t) - 1/2 off the integers, 0 on them."""
    t = Fraction(t)
    if t.denominator == 1:
        return Fraction(0)
    return t - (t.numerator // t.denominator) - Fraction(1, 2)


def mp_turn(t: Fraction) -> mpmath.mpf:
    return mpmath.mpf(t.numerator) / t.denominator


def is_identity_map(g: AffineIsometry) -> bool:
    return (g.matrix == np.eye(g.dim, dtype=object)).all() and not any(g.translation)


def fixed_circle_rank(g: AffineIsometry) -> int:
    return len(fixed_dual_sublattice(g.matrix))


def in_donnelly_situation(g: AffineIsometry) -> bool:
    """Fixed-point-free with a rank-one fixed dual sublattice."""
    return fixed_circle_rank(g) == 1 and fixed_point_set(g).empty


def lefschetz_count(g: AffineIsometry) -> int:
    """nu(g) = |det(I - A)| on the transverse 6-torus."""
    if fixed_circle_rank(g) != 1:
        raise NotDonnellySituation(
            f"{g.label or 'element'}: fixed dual sublattice has rank {fixed_circle_rank(g)}")
    if not fixed_point_set(g).empty:
        raise NotDonnellySituation(f"{g.label or 'element'} has fixed points")
    return abs(transverse_charpoly_at_one(g.matrix))


# ============================================================================
# Vanishing certificates
# ============================================================================

def global_reflection(n: int = 7) -> AffineIsometry:
    return AffineIsometry(linear=(-np.eye(n, dtype=int)).tolist(), translation=[0] * n,
                          label="-1")


def commuting_lift(W: np.ndarray, g: AffineIsometry, label: str = "") -> AffineIsometry | None:
    """x -> Wx + p commuting with g, when W commutes with the linear part of g.

    Commutation reduces to (B - I) p = (W - I) b mod Z^n.
    """
    B = g.matrix
    if not (W @ B == B @ W).all():
        return None
    n = g.dim
    rhs = (W - np.eye(n, dtype=object)) @ g.shift
    solution = solve_on_torus(B - np.eye(n, dtype=object), rhs)
    if solution is None:
        return None
    return AffineIsometry(linear=W, translation=solution.representatives[0], label=label)


def _signed_diagonals(n: int) -> Iterator[np.ndarray]:
    for signs in product((1, -1), repeat=n):
        if np.prod(signs) == -1:
            yield np.diag(np.array(signs, dtype=object))


def _usable(w: AffineIsometry, group: GroupAction) -> bool:
    if integer_det(w.matrix) != -1:
        return False
    return not group.lattice.has_embedding or is_isometry(w, group.lattice)


def _global_witness(group: GroupAction, spec: OrbifoldSpec | None) -> AffineIsometry | None:
    candidates = [global_reflection(group.lattice.rank)]
    if spec is not None:
        candidates += list(spec.certificate_hints)
    for w in candidates:
        if _usable(w, group) and all(commutes(w, h) for h in group.elements):
            return w
    return None


def global_certificate(group: GroupAction,
                       spec: OrbifoldSpec | None = None) -> VanishingCertificate | None:
    """Orientation-reversing isometry commuting with all of the group, if one is found.

    The Dirac vanishing is exact only for a spin reflection, otherwise it holds mod Z.
    """
    witness = _global_witness(group, spec)
    if witness is None:
        return None
    spin = spec is not None and spec.resolution.spin_compatible
    return VanishingCertificate(
        kind=CertificateKind.ORIENTATION_REVERSING_COMMUTANT, witness=witness,
        dirac_tier=Tier.EXACT if spin else Tier.MOD_Z,
        note=f"{witness.label or 'witness'} commutes with the whole group")


def _local_witness(g: AffineIsometry, group: GroupAction,
                   spec: OrbifoldSpec | None) -> AffineIsometry | None:
    n = g.dim
    linear_candidates = [-g.matrix]
    if spec is not None:
        linear_candidates += [h.matrix for h in spec.certificate_hints]
    linear_candidates += list(_signed_diagonals(n))
    for W in linear_candidates:
        w = commuting_lift(W, g, label="witness")
        if w is not None and _usable(w, group):
            return w
    return None


def angles_cancel(g: AffineIsometry, order: int) -> bool:
    """Every sum-zero signing of the transverse angles has sum of sines 0."""
    turns = eigen_turns(cyclotomic_multiplicities(g.matrix, order))
    turns.remove(Fraction(0))
    remaining = sorted(turns)
    unsigned: list[Fraction] = []
    while remaining:
        t = remaining.pop(0)
        remaining.remove(t if t in (0, Fraction(1, 2)) else 1 - t)
        unsigned.append(t)
    for signs in product((1, -1), repeat=len(unsigned)):
        signed = [s * a for s, a in zip(signs, unsigned, strict=True)]
        if sum(signed) % 1 == 0 and abs(fsum(sin(2 * pi * float(t)) for t in signed)) > 1e-12:
            return False
    return True


def find_certificate(g: AffineIsometry, group: GroupAction,
                     spec: OrbifoldSpec | None = None,
                     settings: Settings | None = None) -> VanishingCertificate | None:
    """First applicable certificate, or None for a Donnelly element with a nonzero term."""
    settings = settings or get_settings()
    n = g.dim

    if is_identity_map(g):
        return VanishingCertificate(kind=CertificateKind.ZERO_TRANSLATION, note="identity")
    if (g.matrix == np.eye(n, dtype=object)).all():
        return VanishingCertificate(kind=CertificateKind.EIGENVALUE_PM1,
                                    note="pure translation: every eigenvalue is 1")

    order = matrix_order(g.matrix, settings.ORDER_BOUND)
    if in_donnelly_situation(g) and 2 in cyclotomic_multiplicities(g.matrix, order):
        # cot(pi/2) = 0 kills the signature term; the Dirac side is evaluated directly
        return VanishingCertificate(kind=CertificateKind.EIGENVALUE_PM1,
                                    dirac_tier=Tier.EXACT,
                                    note="transverse eigenvalue -1")

    certificate = global_certificate(group, spec)
    if certificate is not None:
        return certificate

    fixed = fixed_point_set(g)
    if not fixed.empty:
        witness = _local_witness(g, group, spec)
        if witness is None:
            raise UnsupportedElement(
                f"{g.label or 'element'} has fixed points and no commuting orientation-reversing "
                "isometry was found")
        return VanishingCertificate(kind=CertificateKind.HAS_FIXED_POINTS_WITH_ISOMETRY,
                                    witness=witness, note=f"{fixed.component_count} fixed tori")

    return multiplicity_certificate(g, settings)


def multiplicity_certificate(g: AffineIsometry,
                             settings: Settings | None = None) -> VanishingCertificate | None:
    """Fixed-point-free element whose linear part has eigenvalue 1 at least twice.

    The signature term vanishes exactly and the Dirac term modulo 2Z; the Dirac
    term is exact 0 when no admissible signing of the angles has nonzero sines.
    """
    settings = settings or get_settings()
    if fixed_circle_rank(g) < 2 or not fixed_point_set(g).empty:
        return None
    order = matrix_order(g.matrix, settings.ORDER_BOUND)
    exact = angles_cancel(g, order)
    return VanishingCertificate(
        kind=CertificateKind.EIGENVALUE_MULTIPLICITY,
        dirac_tier=Tier.EXACT if exact else Tier.MOD_2Z,
        note="eigenvalue 1 has multiplicity >= 2")


# ============================================================================
# Equivariant and orbifold values
# ============================================================================

def _witness_error(value: float) -> float:
    return 1e-12 * max(1.0, abs(value))


def numeric_term(value: mpmath.mpf, order: int, provenance: Provenance = Provenance.CLOSED_FORM,
                 ) -> EtaValue:
    """EtaValue from a high-precision evaluation, exact when it is a small-denominator rational."""
    numeric = float(value)
    bound = _witness_error(numeric)
    exact = reconstruct_rational(numeric, order, bound)
    return EtaValue(exact=exact, numeric=numeric, error_bound=bound,
                    provenance=provenance if exact is not None else Provenance.NUMERIC_ONLY)


def signature_term(profile: AngleProfile, count: int) -> mpmath.mpf:
    """nu(g) cot(pi d) prod_k cot(pi theta_k)."""
    value = count * mpmath.cot(mpmath.pi * mp_turn(profile.d))
    for theta in profile.angles:
        value *= mpmath.cot(mpmath.pi * mp_turn(theta))
    return value


def eta_gamma_signature(g: AffineIsometry, group: GroupAction, spec: OrbifoldSpec | None = None,
                        settings: Settings | None = None) -> EtaValue:
    settings = settings or get_settings()
    certificate = find_certificate(g, group, spec, settings)
    if certificate is not None:
        return EtaValue.zero(tier=certificate.signature_tier)
    if not in_donnelly_situation(g):
        raise UnsupportedElement(f"{g.label or 'element'}: no certificate and not in the "
                                 "Donnelly situation")

    profile = rotation_angles(g, group.lattice, settings.ORDER_BOUND)
    with mpmath.workdps(settings.PRECISION_DIGITS):
        value = signature_term(profile, lefschetz_count(g))
    term = numeric_term(value, group.order)
    logger.debug("eta_gamma_signature", extra={"event": "eta_gamma_signature",
                                               "element": g.label, "value": term.numeric})
    return term


def average_terms(terms: list[EtaValue], order: int, provenance: Provenance,
                  settings: Settings) -> EtaValue:
    """(1/|G|) sum of per-element terms; exact when every term is, else reconstructed."""
    tier = Tier.weakest(t.tier for t in terms)
    numeric = fsum(t.numeric for t in terms) / order
    bound = fsum(t.error_bound for t in terms) / order + 1e-15
    if all(t.exact is not None for t in terms):
        exact = sum((t.exact for t in terms), Fraction(0)) / order  # type: ignore[misc]
        return EtaValue(exact=exact, numeric=numeric, error_bound=bound + 1e-12,
                        provenance=provenance, tier=tier)

    window = max(settings.RECONSTRUCTION_WINDOW, 1e3 * bound)
    exact = reconstruct_rational(numeric, order, window)
    if exact is None:
        raise ReconstructionFailed(f"no rational with denominator <= {order} within {window} "
                                   f"of {numeric!r}", numeric=numeric, order=order)
    return EtaValue(exact=exact, numeric=numeric,
                    error_bound=max(bound, abs(numeric - float(exact))) + 1e-15,
                    provenance=provenance, tier=tier)


def eta_signature_dihedral(angles: AngleProfile, weight: Fraction = Fraction(1)) -> EtaValue:
    """weight * 2 sum_k ((2 theta_k)) for the family generated by alpha."""
    value = weight * 2 * sum((sawtooth(2 * t) for t in angles.angles), Fraction(0))
    return EtaValue.from_exact(value, Provenance.EISENSTEIN)


def _fixed_pairings(g: AffineIsometry, duals: list) -> tuple[Fraction, ...]:
    return tuple(sum((Fraction(c) * t for c, t in zip(k.coords, g.translation, strict=True)),
                     Fraction(0)) % 1 for k in duals)


def dihedral_weight(group: GroupAction, alpha: AffineIsometry, a: int) -> Fraction:
    """2a m / |G|, m the number of elements repeating alpha's linear part and fixed-circle shift.

    Elements outside the dihedral family either contribute 0 or repeat one of
    its terms, as a translation coset commuting with alpha does.
    """
    duals = fixed_dual_sublattice(alpha.matrix)
    target = _fixed_pairings(alpha, duals)
    repeats = sum(1 for g in group.elements
                  if g.linear == alpha.linear and _fixed_pairings(g, duals) == target)
    return Fraction(2 * a * repeats, group.order)


def dihedral_profile(spec: OrbifoldSpec, group: GroupAction,
                     settings: Settings | None = None) -> AngleProfile | None:
    if spec.resolution.dihedral_a is None:
        return None
    settings = settings or get_settings()
    return rotation_angles(spec.generator("alpha"), group.lattice, settings.ORDER_BOUND)


def eta_signature_orbifold(group: GroupAction, spec: OrbifoldSpec | None = None,
                           settings: Settings | None = None) -> EtaValue:
    settings = settings or get_settings()
    terms = [eta_gamma_signature(g, group, spec, settings) for g in group.elements]
    provenance = (Provenance.CLOSED_FORM
                  if any(t.provenance != Provenance.VANISHING_CERTIFICATE for t in terms)
                  else Provenance.VANISHING_CERTIFICATE)
    total = average_terms(terms, group.order, provenance, settings)

    profile = dihedral_profile(spec, group, settings) if spec is not None else None
    if profile is not None:
        a = spec.resolution.dihedral_a  # type: ignore[union-attr]
        weight = dihedral_weight(group, spec.generator("alpha"), a)  # type: ignore[union-attr]
        closed = eta_signature_dihedral(profile, weight)
        if closed.exact != total.exact:
            raise ReconstructionFailed(
                f"signature eta {total.exact} disagrees with the dihedral closed form {closed.exact}",
                per_element=total.exact, closed_form=closed.exact)
        total = total.model_copy(update={"provenance": Provenance.EISENSTEIN})

    logger.info("eta_signature_orbifold", extra={
        "event": "eta_signature_orbifold", "order": group.order,
        "value": str(total.exact), "tier": total.tier.value})
    return total

