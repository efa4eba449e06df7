"""
Nu Service

Assembles nu = 3 eta(B) - 24 eta(D) + 24 (1 + b1) for an orbifold spec. The
modulus is 48 under HYP1 or SITUATION1 with the Dirac eta known at least
mod 2Z, and 24 under HYP2 with spin isometries.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

from g2nu.config import Settings, get_settings
from g2nu.core.errors import HypothesisInsufficient, NonIntegralNu, UnsupportedElement
from g2nu.models import (
    EtaValue,
    GroupAction,
    HypothesisLevel,
    HypothesisVerdict,
    NuResult,
    OrbifoldSpec,
    Provenance,
    SingularComponent,
    Tier,
)
from g2nu.services.eta_dirac import eta_dirac_orbifold
from g2nu.services.eta_sign import eta_signature_orbifold, global_certificate
from g2nu.services.group import betti_one, check_hypothesis, generate_group, singular_locus
from g2nu.utils.rationals import format_rational

logger = logging.getLogger(__name__)


@dataclass
class Analysis:
    """Group, singular locus and verdict for one spec."""

    spec: OrbifoldSpec
    group: GroupAction
    components: list[SingularComponent]
    verdict: HypothesisVerdict
    b1: int


def analyze_spec(spec: OrbifoldSpec, settings: Settings | None = None) -> Analysis:
    settings = settings or get_settings()
    group = generate_group(spec.generators, settings.ORDER_BOUND, spec.lattice)
    if spec.is_partial:
        components: list[SingularComponent] = []
        b1 = spec.resolution.b1 if spec.resolution.b1 is not None else betti_one(group)
    else:
        components = singular_locus(group, settings.ORDER_BOUND)
        b1 = betti_one(group)
    verdict = check_hypothesis(group, spec.resolution, components)
    if verdict.level == HypothesisLevel.UNKNOWN:
        logger.warning("hypothesis_unknown", extra={"event": "hypothesis_unknown",
                                                    "spec_name": spec.name,
                                                    "notes": verdict.witness_notes})
    return Analysis(spec=spec, group=group, components=components, verdict=verdict, b1=b1)


def eta_values(analysis: Analysis, settings: Settings | None = None) -> tuple[EtaValue, EtaValue]:
    """Both orbifold eta invariants; partial entries rely on a global reflection certificate."""
    settings = settings or get_settings()
    spec, group = analysis.spec, analysis.group
    if spec.is_partial:
        certificate = global_certificate(group, spec)
        if certificate is None:
            raise UnsupportedElement(f"{spec.name}: partial entry without a global "
                                     "orientation-reversing commutant")
        return (EtaValue.zero(tier=certificate.signature_tier),
                EtaValue.zero(tier=certificate.dirac_tier))
    return eta_signature_orbifold(group, spec, settings), eta_dirac_orbifold(group, spec, settings)


def _modulus(level: HypothesisLevel, eta_b: EtaValue, eta_d: EtaValue) -> int:
    if level.allows_mod48 and Tier.MOD_Z not in (eta_b.tier, eta_d.tier):
        return 48
    return 24


def assemble_nu(eta_b: EtaValue, eta_d: EtaValue, b1: int, verdict: HypothesisVerdict,
                spec_name: str = "") -> NuResult:
    if not verdict.level.allows_mod24:
        raise HypothesisInsufficient(
            f"{spec_name or 'spec'}: hypothesis level {verdict.level.value} does not fix nu",
            level=verdict.level.value)
    if eta_b.exact is None or eta_d.exact is None:
        raise NonIntegralNu(f"{spec_name or 'spec'}: eta values have no exact representative")

    modulus = _modulus(verdict.level, eta_b, eta_d)
    eta_part = 3 * eta_b.exact - 24 * eta_d.exact
    if eta_part.denominator != 1:
        raise NonIntegralNu(f"3 eta(B) - 24 eta(D) = {format_rational(eta_part)} is not an integer",
                            value=format_rational(eta_part))
    total = eta_part + 24 * (1 + b1)
    value = int(total) % modulus

    log = [
        f"hypothesis {verdict.level.value}: " + "; ".join(verdict.witness_notes),
        f"eta(B) = {format_rational(eta_b.exact)} [{eta_b.provenance.value}, {eta_b.tier.value}]",
        f"eta(D) = {format_rational(eta_d.exact)} [{eta_d.provenance.value}, {eta_d.tier.value}]",
        f"b1 = {b1}",
        f"3 eta(B) - 24 eta(D) + 24 (1 + b1) = {format_rational(total)}",
    ]
    if eta_d.tier == Tier.MOD_2Z:
        log.append("eta(D) known mod 2Z, so -24 eta(D) is determined mod 48")
    if eta_d.tier == Tier.MOD_Z:
        log.append("eta(D) known mod Z only, so the result is determined mod 24")
    if modulus == 24 and verdict.level.allows_mod48:
        log.append("modulus capped at 24 by the eta tiers")
    log.append(f"nu = {value} (mod {modulus})")
    return NuResult(nu_value=value, modulus=modulus, eta_sign=eta_b, eta_dirac=eta_d, b1=b1,
                    hypothesis=verdict, derivation_log=log)


def compute_nu(spec: OrbifoldSpec, settings: Settings | None = None) -> NuResult:
    """nu mod 48 or mod 24, with a derivation log."""
    settings = settings or get_settings()
    analysis = analyze_spec(spec, settings)
    if not analysis.verdict.level.allows_mod24:
        raise HypothesisInsufficient(
            f"{spec.name}: hypothesis level {analysis.verdict.level.value} does not fix nu",
            level=analysis.verdict.level.value, notes="; ".join(analysis.verdict.witness_notes))
    eta_b, eta_d = eta_values(analysis, settings)
    result = assemble_nu(eta_b, eta_d, analysis.b1, analysis.verdict, spec.name)
    logger.info("nu_computed", extra={"event": "nu_computed", "spec_name": spec.name,
                                      "nu": result.nu_value, "modulus": result.modulus})
    return result


def compute_nu_situation1_mod48(spec: OrbifoldSpec, settings: Settings | None = None) -> NuResult:
    """24 (1 + b1) mod 48 when every eta term vanishes exactly by certificate."""
    settings = settings or get_settings()
    analysis = analyze_spec(spec, settings)
    if not analysis.verdict.level.allows_mod48:
        raise HypothesisInsufficient(
            f"{spec.name}: mod 48 needs SITUATION1 or HYP1, got {analysis.verdict.level.value}",
            level=analysis.verdict.level.value)
    eta_b, eta_d = eta_values(analysis, settings)
    for eta in (eta_b, eta_d):
        if eta.provenance != Provenance.VANISHING_CERTIFICATE or eta.tier != Tier.EXACT:
            raise HypothesisInsufficient(f"{spec.name}: eta invariants are not certified zero",
                                         provenance=eta.provenance.value, tier=eta.tier.value)
    result = assemble_nu(eta_b, eta_d, analysis.b1, analysis.verdict, spec.name)
    if result.nu_value != (24 * (1 + analysis.b1)) % 48:
        raise NonIntegralNu(f"{spec.name}: certified zero eta values gave nu = {result.nu_value}")
    return result


def expected_matches(spec: OrbifoldSpec, result: NuResult) -> bool:
    """Compare against the expected block at the result's modulus."""
    expected = spec.expected
    if expected is None:
        return True
    target = expected.nu_mod48 if result.modulus == 48 else expected.nu_mod24
    checks = [target is None or result.nu_value == target,
              expected.b1 is None or expected.b1 == result.b1]
    if expected.eta_sign is not None and result.eta_sign.exact is not None:
        checks.append(result.eta_sign.exact == expected.eta_sign)
    if expected.eta_dirac_mod2 is not None and result.eta_dirac.exact is not None:
        step = Fraction(1) if result.eta_dirac.tier == Tier.MOD_Z else Fraction(2)
        difference = (result.eta_dirac.exact - expected.eta_dirac_mod2) / step
        checks.append(difference.denominator == 1)
    return all(checks)
