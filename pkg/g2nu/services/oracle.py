"""
Oracle Service

Numeric verification that does not share code paths with the exact
evaluators: spectral traces enumerated shell by shell on explicit spinor
eigenbases, Abel summation of the divergent sine series, the three-angle sine
identity and Eisenstein's cotangent sum, and re-checks of vanishing
certificates.
"""

import logging
from collections.abc import Sequence
from fractions import Fraction
from math import gcd, pi, sin

import mpmath
import numpy as np

from g2nu.config import Settings, get_settings
from g2nu.core.errors import MissingEmbedding
from g2nu.models import (
    AffineIsometry,
    CertificateKind,
    GroupAction,
    OracleReport,
    OrbifoldSpec,
    Tier,
    VanishingCertificate,
)
from g2nu.services.eta_dirac import dirac_shell_terms
from g2nu.services.eta_sign import (
    angles_cancel,
    find_certificate,
    fixed_circle_rank,
    is_identity_map,
    mp_turn,
    sawtooth,
)
from g2nu.services.g2clifford import hermitian_product, spinor_eigenbasis
from g2nu.services.group import ambient_linear, commutes, fixed_point_set, generate_group, matrix_order
from g2nu.services.lattice import dual_ambient_vectors, first_dual_shells
from g2nu.utils.cyclotomic import cyclotomic_multiplicities, sine_identity_residual
from g2nu.utils.linalg import integer_det

logger = logging.getLogger(__name__)

EXACT_DENOMINATOR_LIMIT = 24


def _report(name: str, deviations: list[float], tolerance: float,
            details: list[str] | None = None) -> OracleReport:
    report = OracleReport.build(name, deviations, tolerance, details)
    level = logging.INFO if report.passed else logging.ERROR
    logger.log(level, "oracle_check", extra={
        "event": "oracle_check", "check": name, "instances": report.instances,
        "max_abs_deviation": report.max_abs_deviation, "passed": report.passed})
    return report


# ============================================================================
# Spectral traces
# ============================================================================

def _spinor_lift(R: np.ndarray) -> np.ndarray:
    lift = np.zeros((8, 8), dtype=complex)
    lift[0, 0] = 1.0
    lift[1:, 1:] = R
    return lift


def enumerated_shell_traces(g: AffineIsometry, group: GroupAction, shells: int) -> list[complex]:
    """sum_u e^{-2 pi i <u, b>} (Tr(g | S_u^+) - Tr(g | S_u^-)) per shell, from eigenbases."""
    lattice = group.lattice
    lift = _spinor_lift(ambient_linear(g, lattice))
    values = []
    for _, vectors in first_dual_shells(lattice, g.matrix, shells):
        total = 0j
        for u, u_amb in zip(vectors, dual_ambient_vectors(lattice, vectors), strict=True):
            plus, minus = spinor_eigenbasis(u_amb)
            difference = 0j
            for basis, sign in ((plus, 1), (minus, -1)):
                for s in basis:
                    image = type(s).from_array(lift @ s.as_array())
                    difference += sign * complex(hermitian_product(image, s))
            phase = float(sum((Fraction(c) * t for c, t in zip(u.coords, g.translation,
                                                                strict=True)), Fraction(0)) % 1)
            total += np.exp(-2j * pi * phase) * difference
        values.append(total)
    return values


def verify_shell_traces(group: GroupAction, shells: int,
                        settings: Settings | None = None) -> OracleReport:
    """Enumerated shell traces against closed-form shell terms (or 0 for cancelling elements)."""
    settings = settings or get_settings()
    if group.order > 1 and not group.lattice.has_embedding:
        raise MissingEmbedding("shell traces need a numeric lattice embedding")

    deviations: list[float] = []
    details: list[str] = []
    for g in group.elements:
        if is_identity_map(g):
            continue
        rank = fixed_circle_rank(g)
        if rank == 0:
            continue
        enumerated = enumerated_shell_traces(g, group, shells)
        if rank == 1:
            expected = [t.term_value for t in dirac_shell_terms(g, group.lattice, shells, settings)]
        elif angles_cancel(g, matrix_order(g.matrix, settings.ORDER_BOUND)):
            expected = [0j] * len(enumerated)
        else:
            details.append(f"{g.label}: rank {rank} without cancellation, skipped")
            continue
        worst = max((abs(e - c) for e, c in zip(enumerated, expected, strict=True)), default=0.0)
        deviations.append(float(worst))
        details.append(f"{g.label}: {len(enumerated)} shells, max deviation {worst:.3e}")
    return _report("shell_traces", deviations, settings.ORACLE_SHELL_TOLERANCE, details)


# ============================================================================
# Identity sweeps
# ============================================================================

def verify_trig_identity(samples: int, seed: int) -> OracleReport:
    """-4 prod sin(2 pi t_k) = sum sin(4 pi t_k) whenever t_1 + t_2 + t_3 = 0 mod 1."""
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = np.random.default_rng(seed)
    deviations = []
    exact_checked = 0
    for _ in range(samples):
        n = int(rng.integers(1, 61))
        t1, t2 = Fraction(int(rng.integers(0, n)), n), Fraction(int(rng.integers(0, n)), n)
        turns = (t1, t2, (-t1 - t2) % 1)
        lhs = -4.0
        for t in turns:
            lhs *= sin(2 * pi * float(t))
        rhs = sum(sin(4 * pi * float(t)) for t in turns)
        deviation = abs(lhs - rhs)
        if n <= EXACT_DENOMINATOR_LIMIT:
            exact_checked += 1
            if not sine_identity_residual(turns).is_zero:
                deviation = max(deviation, 1.0)
        deviations.append(deviation)
    return _report("trig_identity", deviations, 1e-12,
                   [f"{exact_checked} triples checked exactly in cyclotomic fields"])


def eisenstein_lhs(a: int, x: int) -> mpmath.mpf:
    """-(1/2a) sum_{j=1}^{a-1} cot(pi j / a) sin(2 pi j x / a)."""
    total = mpmath.fsum(mpmath.cot(mpmath.pi * j / a) * mpmath.sin(2 * mpmath.pi * j * x / a)
                        for j in range(1, a))
    return -total / (2 * a)


def verify_eisenstein(a_max: int) -> OracleReport:
    if a_max < 2:
        raise ValueError("a_max must be at least 2")
    deviations = []
    with mpmath.workdps(30):
        for a in range(2, a_max + 1):
            for x in range(a):
                deviations.append(float(abs(eisenstein_lhs(a, x) - mp_turn(sawtooth(Fraction(x, a))))))
    return _report("eisenstein", deviations, 1e-10, [f"a in [2, {a_max}]"])


def abel_partial_sum(a: int, j: int, r: mpmath.mpf) -> mpmath.mpf:
    """sum_{m >= 1} sin(2 pi j m / a) r^m, folded over one period."""
    period = mpmath.fsum(mpmath.sin(2 * mpmath.pi * j * m / a) * r ** m for m in range(1, a + 1))
    return period / (1 - r ** a)


def verify_abel_summation(a_max: int = 12, exponents: Sequence[int] = (3, 4, 5, 6)) -> OracleReport:
    """Abel sums of sin(2 pi j m / a) approach Im(z / (1 - z)) = cot(pi j / a) / 2."""
    deviations = []
    details = []
    with mpmath.workdps(40):
        for a in range(2, a_max + 1):
            for j in range(1, a):
                if gcd(j, a) != 1:
                    continue
                target = mpmath.cot(mpmath.pi * j / a) / 2
                final = mpmath.mpf(0)
                inside = True
                for k in exponents:
                    r = 1 - mpmath.mpf(10) ** (-k)
                    final = abs(abel_partial_sum(a, j, r) - target)
                    inside = inside and final <= 10 * (1 - r)
                deviations.append(float(final) if inside else float("inf"))
                if not inside:
                    details.append(f"a={a} j={j}: left the 10(1-r) window")
    return _report("abel_summation", deviations, 1e-3, details)


# ============================================================================
# Certificates
# ============================================================================

def verify_certificate(cert: VanishingCertificate,
                       elements: AffineIsometry | Sequence[AffineIsometry],
                       spec: OrbifoldSpec | None = None) -> OracleReport:
    """Re-check a certificate exactly against one element or several."""
    targets = [elements] if isinstance(elements, AffineIsometry) else list(elements)
    deviations: list[float] = []
    details: list[str] = []
    for g in targets:
        problems = _certificate_problems(cert, g, spec)
        deviations.append(1.0 if problems else 0.0)
        details.extend(f"{g.label or 'element'}: {p}" for p in problems)
    return _report(f"certificate:{cert.kind.value}", deviations, 0.5, details)


def _certificate_problems(cert: VanishingCertificate, g: AffineIsometry,
                          spec: OrbifoldSpec | None) -> list[str]:
    problems = []
    n = g.dim
    if cert.witness is not None:
        if integer_det(cert.witness.matrix) != -1:
            problems.append("witness is not orientation reversing")
        if not commutes(cert.witness, g):
            problems.append("witness does not commute")
    if cert.kind in (CertificateKind.ORIENTATION_REVERSING_COMMUTANT,
                     CertificateKind.HAS_FIXED_POINTS_WITH_ISOMETRY) and cert.witness is None:
        problems.append("certificate needs a witness")
    if cert.kind == CertificateKind.ORIENTATION_REVERSING_COMMUTANT and cert.dirac_tier == Tier.EXACT:
        if spec is None or not spec.resolution.spin_compatible:
            problems.append("exact Dirac vanishing claimed without a spin flag")
    if cert.kind == CertificateKind.HAS_FIXED_POINTS_WITH_ISOMETRY and fixed_point_set(g).empty:
        problems.append("element has no fixed points")
    if cert.kind == CertificateKind.ZERO_TRANSLATION and not is_identity_map(g):
        problems.append("element is not the identity")
    if cert.kind == CertificateKind.EIGENVALUE_PM1:
        identity_linear = (g.matrix == np.eye(n, dtype=object)).all()
        if not identity_linear and 2 not in cyclotomic_multiplicities(g.matrix, _order(g)):
            problems.append("no eigenvalue -1 and not a translation")
    if cert.kind == CertificateKind.EIGENVALUE_MULTIPLICITY:
        if fixed_circle_rank(g) < 2 or not fixed_point_set(g).empty:
            problems.append("needs a fixed-point-free element with eigenvalue 1 twice")
    return problems


def _order(g: AffineIsometry) -> int:
    return matrix_order(g.matrix, get_settings().ORDER_BOUND)


# ============================================================================
# Suites
# ============================================================================

def certificate_sweep(spec: OrbifoldSpec, group: GroupAction,
                      settings: Settings | None = None) -> OracleReport:
    """Every certificate the evaluators rely on, re-checked."""
    settings = settings or get_settings()
    deviations: list[float] = []
    details: list[str] = []
    for g in group.elements:
        cert = find_certificate(g, group, spec, settings)
        if cert is None:
            continue
        problems = _certificate_problems(cert, g, spec)
        deviations.append(1.0 if problems else 0.0)
        details.extend(f"{g.label}: {p}" for p in problems)
    return _report(f"certificates:{spec.name}", deviations, 0.5, details)


def run_oracle_suite(specs: Sequence[OrbifoldSpec], shells: int | None = None,
                     settings: Settings | None = None) -> list[OracleReport]:
    """Identity sweeps once, then shell traces and certificates per full example."""
    settings = settings or get_settings()
    shells = shells if shells is not None else settings.ORACLE_SHELLS
    reports = [
        verify_eisenstein(settings.EISENSTEIN_A_MAX),
        verify_trig_identity(settings.TRIG_SAMPLES, settings.TRIG_SEED),
        verify_abel_summation(),
    ]
    for spec in specs:
        if spec.is_partial:
            continue
        group = generate_group(spec.generators, settings.ORDER_BOUND, spec.lattice)
        reports.append(certificate_sweep(spec, group, settings))
        if spec.lattice.has_embedding:
            shell_report = verify_shell_traces(group, shells, settings)
            reports.append(shell_report.model_copy(update={"check_name": f"shell_traces:{spec.name}"}))
    return reports
