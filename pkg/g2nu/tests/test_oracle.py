"""
Tests for the numeric oracles: identity sweeps, spectral shell traces, certificate re-checks.
"""

from fractions import Fraction

import mpmath
import pytest

from g2nu.conftest import get_test_settings
from g2nu.models import CertificateKind, Tier, VanishingCertificate
from g2nu.services.eta_sign import find_certificate, global_reflection
from g2nu.services.oracle import (
    abel_partial_sum,
    certificate_sweep,
    eisenstein_lhs,
    enumerated_shell_traces,
    run_oracle_suite,
    verify_abel_summation,
    verify_certificate,
    verify_eisenstein,
    verify_shell_traces,
    verify_trig_identity,
)


# =============================================================================
# Identity sweeps
# =============================================================================


def test_eisenstein_identity_single_value():
    """-(1/6) sum cot(pi j/3) sin(2 pi j/3) = ((1/3)) = -1/6."""
    with mpmath.workdps(30):
        assert float(eisenstein_lhs(3, 1)) == pytest.approx(-1 / 6)


def test_eisenstein_sweep():
    report = verify_eisenstein(8)
    assert report.passed
    assert report.instances == sum(range(2, 9))


def test_eisenstein_sweep_rejects_small_bound():
    with pytest.raises(ValueError):
        verify_eisenstein(1)


def test_trig_identity_sweep():
    report = verify_trig_identity(50, 0)
    assert report.passed
    assert report.instances == 50


def test_abel_partial_sum_near_one():
    """sum sin(2 pi m / 4) r^m = r / (1 + r^2), which tends to 1/2 = cot(pi/4) / 2."""
    with mpmath.workdps(30):
        r = mpmath.mpf("0.999")
        assert float(abel_partial_sum(4, 1, r)) == pytest.approx(float(r / (1 + r ** 2)))


def test_abel_summation_sweep():
    assert verify_abel_summation(6, (3, 4)).passed


# =============================================================================
# Certificates
# =============================================================================


def test_certificate_recheck(groups, catalog):
    """The global reflection of Example 3 commutes with every element."""
    spec, group = catalog["ex03"], groups["ex03"]
    cert = find_certificate(spec.generator("alpha"), group, spec)
    assert cert.kind == CertificateKind.ORIENTATION_REVERSING_COMMUTANT
    assert verify_certificate(cert, group.elements, spec).passed


def test_certificate_recheck_catches_non_commuting_witness(ex07):
    """x -> -x does not commute with x -> alpha x + 1/3 e7."""
    cert = VanishingCertificate(kind=CertificateKind.ORIENTATION_REVERSING_COMMUTANT,
                                witness=global_reflection(), dirac_tier=Tier.MOD_Z)
    report = verify_certificate(cert, ex07.generator("alpha"), ex07)
    assert not report.passed


def test_certificate_recheck_catches_unflagged_exact_claim(groups, catalog):
    spec = catalog["ex03"]
    unflagged = spec.model_copy(update={
        "resolution": spec.resolution.model_copy(update={"spin_isometry_flags": ()})})
    cert = VanishingCertificate(kind=CertificateKind.ORIENTATION_REVERSING_COMMUTANT,
                                witness=global_reflection(), dirac_tier=Tier.EXACT)
    assert not verify_certificate(cert, groups["ex03"].elements, unflagged).passed


def test_zero_translation_claim_needs_identity(ex07):
    cert = VanishingCertificate(kind=CertificateKind.ZERO_TRANSLATION)
    assert not verify_certificate(cert, ex07.generator("alpha")).passed


@pytest.mark.parametrize("name", ["ex03", "ex06", "ex07", "ex09", "ex12", "ex14"])
def test_certificate_sweep(groups, catalog, settings, name):
    assert certificate_sweep(catalog[name], groups[name], settings).passed


# =============================================================================
# Spectral shell traces
# =============================================================================


def test_enumerated_traces_match_closed_form(ex07_group, ex07, settings):
    """Tr(g | S_u^+) - Tr(g | S_u^-) summed by eigenbases agrees with the cotangent shells."""
    report = verify_shell_traces(ex07_group, 2, settings)
    assert report.passed
    assert report.max_abs_deviation < settings.ORACLE_SHELL_TOLERANCE


def test_enumerated_traces_one_value_per_shell(ex07_group):
    alpha = ex07_group.elements[ex07_group.generators[0]]
    assert len(enumerated_shell_traces(alpha, ex07_group, 2)) == 2


@pytest.mark.slow
@pytest.mark.parametrize("name", ["ex08", "ex09", "ex11", "ex13", "ex14"])
def test_shell_traces_dihedral(groups, settings, name):
    assert verify_shell_traces(groups[name], settings.ORACLE_SHELLS, settings).passed


@pytest.mark.slow
def test_full_oracle_suite(catalog):
    settings = get_test_settings(ORACLE_SHELLS=2)
    reports = run_oracle_suite(list(catalog.values()), settings=settings)
    failed = [r.check_name for r in reports if not r.passed]
    assert not failed
    names = {r.check_name for r in reports}
    assert {"eisenstein", "trig_identity", "abel_summation"} <= names
    assert "shell_traces:ex07" in names
    assert not any(n.endswith("ex15") for n in names)
