"""
Dirac Eta Service

Equivariant eta invariants of the spin Dirac operator on T^7. For an element
in the Donnelly situation the trace formula over fixed dual vectors sums, by
L_0(z) = z / (1 - z) at s = 0, to -2 cot(pi d) sum_k sin(2 pi theta_k).
Certified elements contribute 0 at the tier their certificate allows.
"""

import logging
from fractions import Fraction

import mpmath
import numpy as np

from g2nu.config import Settings, get_settings
from g2nu.core.errors import MissingEmbedding, ReconstructionFailed, UnsupportedElement
from g2nu.models import (
    AffineIsometry,
    AngleProfile,
    CertificateKind,
    DiracShellTerm,
    EtaValue,
    GroupAction,
    OrbifoldSpec,
    Provenance,
    TorusLattice,
)
from g2nu.services.eta_sign import (
    average_terms,
    dihedral_profile,
    dihedral_weight,
    find_certificate,
    in_donnelly_situation,
    mp_turn,
    numeric_term,
    sawtooth,
)
from g2nu.services.g2clifford import rotation_angles
from g2nu.services.lattice import dual_ambient_vectors, first_dual_shells, fixed_sublattice

logger = logging.getLogger(__name__)


def dirac_term(profile: AngleProfile) -> mpmath.mpf:
    """-2 cot(pi d) sum_k sin(2 pi theta_k)."""
    sines = mpmath.fsum(mpmath.sin(2 * mpmath.pi * mp_turn(t)) for t in profile.angles)
    return -2 * mpmath.cot(mpmath.pi * mp_turn(profile.d)) * sines


def eta_gamma_dirac(g: AffineIsometry, group: GroupAction, spec: OrbifoldSpec | None = None,
                    settings: Settings | None = None) -> EtaValue:
    settings = settings or get_settings()
    certificate = find_certificate(g, group, spec, settings)
    pure_translation = (g.matrix == np.eye(g.dim, dtype=object)).all()
    signature_only = (certificate is not None
                      and certificate.kind == CertificateKind.EIGENVALUE_PM1
                      and not pure_translation)
    if certificate is not None and not signature_only:
        return EtaValue.zero(tier=certificate.dirac_tier)
    if not in_donnelly_situation(g):
        raise UnsupportedElement(f"{g.label or 'element'}: no certificate and fixed dual "
                                 "sublattice of rank other than one")

    profile = rotation_angles(g, group.lattice, settings.ORDER_BOUND)
    with mpmath.workdps(settings.PRECISION_DIGITS):
        value = dirac_term(profile)
    term = numeric_term(value, group.order)
    logger.debug("eta_gamma_dirac", extra={"event": "eta_gamma_dirac",
                                           "element": g.label, "value": term.numeric})
    return term


def eta_dirac_dihedral(a: int, angles: AngleProfile, weight: Fraction = Fraction(1)) -> EtaValue:
    """weight * 2 sum_k ((theta_k)), the Eisenstein evaluation of the alpha-power terms."""
    if a < 2:
        raise ValueError("dihedral family needs a >= 2")
    value = weight * 2 * sum((sawtooth(t) for t in angles.angles), Fraction(0))
    return EtaValue.from_exact(value, Provenance.EISENSTEIN)


def eta_dirac_orbifold(group: GroupAction, spec: OrbifoldSpec | None = None,
                       settings: Settings | None = None) -> EtaValue:
    """Orbifold average; the result's tier says whether it is exact, mod 2Z or mod Z."""
    settings = settings or get_settings()
    terms = [eta_gamma_dirac(g, group, spec, settings) for g in group.elements]
    provenance = (Provenance.CLOSED_FORM
                  if any(t.provenance != Provenance.VANISHING_CERTIFICATE for t in terms)
                  else Provenance.VANISHING_CERTIFICATE)
    total = average_terms(terms, group.order, provenance, settings)

    profile = dihedral_profile(spec, group, settings) if spec is not None else None
    if profile is not None:
        a = spec.resolution.dihedral_a  # type: ignore[union-attr]
        weight = dihedral_weight(group, spec.generator("alpha"), a)  # type: ignore[union-attr]
        closed = eta_dirac_dihedral(a, profile, weight)
        if closed.exact != total.exact:
            raise ReconstructionFailed(
                f"Dirac eta {total.exact} disagrees with the dihedral closed form {closed.exact}",
                per_element=total.exact, closed_form=closed.exact)
        total = total.model_copy(update={"provenance": Provenance.EISENSTEIN})

    logger.info("eta_dirac_orbifold", extra={
        "event": "eta_dirac_orbifold", "order": group.order,
        "value": str(total.exact), "tier": total.tier.value})
    return total


def eta_dirac_mod2(value: EtaValue) -> Fraction:
    """Representative in [0, 2) used by the nu formula."""
    if value.exact is None:
        raise ReconstructionFailed("Dirac eta has no exact value")
    return value.exact % 2


# ============================================================================
# Shell terms
# ============================================================================

def fixed_direction(g: AffineIsometry, lattice: TorusLattice) -> np.ndarray:
    """Unit ambient vector along the primitive fixed lattice vector used for angle orientation."""
    if not lattice.has_embedding:
        raise MissingEmbedding("shell terms need a numeric lattice embedding")
    k = fixed_sublattice(g.matrix)[:, 0].astype(float)
    f = lattice.ambient @ k
    return f / np.linalg.norm(f)


def dirac_shell_terms(g: AffineIsometry, lattice: TorusLattice, shells: int,
                      settings: Settings | None = None) -> list[DiracShellTerm]:
    """Closed-form shell terms sum_u e^{-2 pi i <u, b>} (-2i eps_u) sum_k sin(2 pi theta_k)."""
    settings = settings or get_settings()
    profile = rotation_angles(g, lattice, settings.ORDER_BOUND)
    sines = sum(np.sin(2 * np.pi * float(t)) for t in profile.angles)
    f = fixed_direction(g, lattice)

    terms = []
    for norm, vectors in first_dual_shells(lattice, g.matrix, shells):
        ambient = dual_ambient_vectors(lattice, vectors)
        total = 0j
        for u, u_amb in zip(vectors, ambient, strict=True):
            eps = float(np.sign(u_amb @ f))
            phase = float(sum((Fraction(c) * t for c, t in zip(u.coords, g.translation,
                                                                strict=True)), Fraction(0)) % 1)
            total += np.exp(-2j * np.pi * phase) * (-2j * eps * sines)
        terms.append(DiracShellTerm(shell_norm=norm, term_value=complex(total),
                                    fixed_vectors=vectors))
    return terms
