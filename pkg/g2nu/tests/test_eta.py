"""
Tests for the signature and Dirac eta invariants and the vanishing certificates.
"""

from fractions import Fraction

import numpy as np
import pytest

from g2nu.conftest import affine
from g2nu.models import AngleProfile, CertificateKind, Provenance, Tier
from g2nu.services.eta_dirac import (
    dirac_shell_terms,
    dirac_term,
    eta_dirac_dihedral,
    eta_dirac_mod2,
    eta_dirac_orbifold,
    eta_gamma_dirac,
)
from g2nu.services.eta_sign import (
    angles_cancel,
    dihedral_weight,
    eta_gamma_signature,
    eta_signature_dihedral,
    eta_signature_orbifold,
    find_certificate,
    global_certificate,
    lefschetz_count,
    multiplicity_certificate,
    sawtooth,
    signature_term,
)
from g2nu.services.group import compose, generate_group, identity

TABLE = {
    "ex07": ("1", "-1"),
    "ex08": ("-1", "-1"),
    "ex09": ("0", "-1"),
    "ex10": ("0", "-1"),
    "ex11": ("0", "-1"),
    "ex12": ("0", "-1"),
    "ex13": ("-1", "-1"),
    "ex14": ("1/3", "-1/3"),
}

THIRDS = AngleProfile(d=Fraction(1, 3), angles=(Fraction(1, 3),) * 3)


# =============================================================================
# Sawtooth
# =============================================================================


@pytest.mark.parametrize("t,expected", [
    (Fraction(1, 4), Fraction(-1, 4)),
    (Fraction(3, 4), Fraction(1, 4)),
    (Fraction(0), Fraction(0)),
    (Fraction(5), Fraction(0)),
    (Fraction(1, 2), Fraction(0)),
    (Fraction(-1, 3), Fraction(1, 6)),
    (Fraction(-1, 4), Fraction(1, 4)),
])
def test_sawtooth_values(t, expected):
    """((t)) = t - floor(t) - 1/2 off the integers, so ((-1/4)) = 3/4 - 1/2 = +1/4 by oddness."""
    assert sawtooth(t) == expected


def test_sawtooth_is_odd_and_periodic():
    rng = np.random.default_rng(48)
    for _ in range(1000):
        t = Fraction(int(rng.integers(-500, 500)), int(rng.integers(1, 60)))
        assert sawtooth(-t) == -sawtooth(t)
        assert sawtooth(t + 1) == sawtooth(t)


# =============================================================================
# Certificates
# =============================================================================


def test_identity_certificate(ex07_group, ex07):
    cert = find_certificate(identity(), ex07_group, ex07)
    assert cert.kind == CertificateKind.ZERO_TRANSLATION


def test_translation_certificate(ex07_group, ex07):
    shift = affine((1,) * 7, (0, 0, 0, 0, 0, 0, Fraction(1, 2)))
    cert = find_certificate(shift, ex07_group, ex07)
    assert cert.kind == CertificateKind.EIGENVALUE_PM1


def test_minus_one_eigenvalue_certificate(ex09_group, catalog):
    """alpha on Z[i]^3 x Z acts by -1 on z3: signature term vanishes, Dirac still evaluated."""
    cert = find_certificate(catalog["ex09"].generator("alpha"), ex09_group, catalog["ex09"])
    assert cert.kind == CertificateKind.EIGENVALUE_PM1


def test_reflection_with_fixed_points_has_witness(ex07_group, ex07):
    beta = ex07.generator("beta")
    cert = find_certificate(beta, ex07_group, ex07)
    assert cert.kind == CertificateKind.HAS_FIXED_POINTS_WITH_ISOMETRY
    assert cert.witness is not None
    assert compose(cert.witness, beta).same_map(compose(beta, cert.witness))


def test_donnelly_element_has_no_certificate(ex07_group, ex07):
    assert find_certificate(ex07.generator("alpha"), ex07_group, ex07) is None


def test_multiplicity_certificate(ex09_group, catalog):
    """alpha^2 on Example 9 fixes z3 and x, acting freely: exact zero for both terms."""
    alpha = catalog["ex09"].generator("alpha")
    square = compose(alpha, alpha)
    cert = multiplicity_certificate(square)
    assert cert is not None
    assert cert.kind == CertificateKind.EIGENVALUE_MULTIPLICITY
    assert cert.dirac_tier == Tier.EXACT
    assert angles_cancel(square, 2)


def test_multiplicity_certificate_needs_free_action():
    """The half-turn on four coordinates fixes points, so it is not certified this way."""
    assert multiplicity_certificate(affine((-1, -1, -1, -1, 1, 1, 1))) is None


def test_global_reflection_certificate(groups, catalog):
    """x -> -x commutes with Example 3 and the spin flag makes the Dirac vanishing exact."""
    cert = global_certificate(groups["ex03"], catalog["ex03"])
    assert cert is not None
    assert cert.kind == CertificateKind.ORIENTATION_REVERSING_COMMUTANT
    assert cert.dirac_tier == Tier.EXACT


def test_global_certificate_without_spin_flag(groups, catalog):
    spec = catalog["ex03"]
    unflagged = spec.model_copy(update={
        "resolution": spec.resolution.model_copy(update={"spin_isometry_flags": ()})})
    cert = global_certificate(groups["ex03"], unflagged)
    assert cert is not None
    assert cert.dirac_tier == Tier.MOD_Z


def test_no_global_certificate_for_screw(ex07_group, ex07):
    assert global_certificate(ex07_group, ex07) is None


# =============================================================================
# Equivariant terms
# =============================================================================


def test_lefschetz_count(ex07):
    assert lefschetz_count(ex07.generator("alpha")) == 27


def test_signature_term_for_thirds():
    """27 cot(pi/3)^4 = 3."""
    assert float(signature_term(THIRDS, 27)) == pytest.approx(3.0)


def test_dirac_term_for_thirds():
    """-2 cot(pi/3) * 3 sin(2 pi/3) = -3."""
    assert float(dirac_term(THIRDS)) == pytest.approx(-3.0)


def test_equivariant_terms_of_generator(ex07_group, ex07, settings):
    alpha = ex07.generator("alpha")
    signature = eta_gamma_signature(alpha, ex07_group, ex07, settings)
    dirac = eta_gamma_dirac(alpha, ex07_group, ex07, settings)
    assert signature.exact == 3
    assert dirac.exact == -3
    assert signature.provenance == Provenance.CLOSED_FORM


def test_global_reflection_certifies_free_rotation(settings):
    """x -> -x commutes with a half-period screw, so its term vanishes without a spin flag."""
    g = affine((1, 1, -1, -1, -1, -1, 1), (0, 0, 0, 0, 0, 0, Fraction(1, 2)))
    group = generate_group([g], 10)
    value = eta_gamma_signature(g, group, None, settings)
    assert value.exact == 0
    assert eta_gamma_dirac(g, group, None, settings).tier == Tier.MOD_Z


# =============================================================================
# Dihedral closed forms and orbifold values
# =============================================================================


def test_dihedral_closed_forms():
    """2 sum ((2 theta)) = 1 and 2 sum ((theta)) = -1 for three angles of 1/3."""
    assert eta_signature_dihedral(THIRDS).exact == 1
    assert eta_dirac_dihedral(3, THIRDS).exact == -1
    assert eta_signature_dihedral(THIRDS, Fraction(1, 3)).exact == Fraction(1, 3)


@pytest.mark.parametrize("name,weight", [
    ("ex07", Fraction(1)),
    ("ex10", Fraction(1)),
    ("ex12", Fraction(1)),
    ("ex14", Fraction(1, 3)),
])
def test_dihedral_weight(groups, catalog, name, weight):
    """A translation coset repeats the alpha terms; Example 14's order-three gamma does not."""
    spec = catalog[name]
    a = spec.resolution.dihedral_a
    assert dihedral_weight(groups[name], spec.generator("alpha"), a) == weight


def test_dihedral_needs_two_or_more():
    with pytest.raises(ValueError):
        eta_dirac_dihedral(1, THIRDS)


@pytest.mark.parametrize("name,values", sorted(TABLE.items()))
def test_orbifold_eta_values(groups, catalog, settings, name, values):
    eta_b, eta_d = (Fraction(v) for v in values)
    spec, group = catalog[name], groups[name]
    signature = eta_signature_orbifold(group, spec, settings)
    dirac = eta_dirac_orbifold(group, spec, settings)
    assert signature.exact == eta_b
    assert dirac.exact == eta_d
    assert signature.tier == Tier.EXACT
    assert abs(signature.numeric - float(eta_b)) <= signature.error_bound
    assert dirac.provenance == Provenance.EISENSTEIN


@pytest.mark.parametrize("name", ["ex03", "ex04", "ex05", "ex06"])
def test_situation_one_eta_values_vanish(groups, catalog, settings, name):
    signature = eta_signature_orbifold(groups[name], catalog[name], settings)
    dirac = eta_dirac_orbifold(groups[name], catalog[name], settings)
    assert signature.exact == 0 and dirac.exact == 0
    assert signature.provenance == Provenance.VANISHING_CERTIFICATE
    assert dirac.tier == Tier.EXACT


def test_eta_dirac_mod2(groups, catalog, settings):
    value = eta_dirac_orbifold(groups["ex07"], catalog["ex07"], settings)
    assert eta_dirac_mod2(value) == 1


# =============================================================================
# Shell terms
# =============================================================================


def test_dirac_shell_terms_are_real(ex07, settings):
    """Opposite dual vectors pair into conjugate phases with opposite orientation signs."""
    terms = dirac_shell_terms(ex07.generator("alpha"), ex07.lattice, 3, settings)
    assert len(terms) == 3
    for term in terms:
        assert len(term.fixed_vectors) == 2
        assert abs(term.term_value.imag) < 1e-9
