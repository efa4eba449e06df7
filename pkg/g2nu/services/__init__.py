"""
Computation Services for g2nu

Lattice and group analysis, G2/Clifford algebra, eta invariants, Maslov
cross-checks, oracles, the example catalog and the nu assembly.
"""

from .catalog import (
    BUILTIN_NAMES,
    builtin_examples,
    get_builtin,
    load_spec,
    parse_spec,
    serialize_spec,
    shipped_spec_path,
    validate_spec,
)
from .eta_dirac import (
    dirac_shell_terms,
    dirac_term,
    eta_dirac_dihedral,
    eta_dirac_mod2,
    eta_dirac_orbifold,
    eta_gamma_dirac,
)
from .eta_sign import (
    angles_cancel,
    eta_gamma_signature,
    eta_signature_dihedral,
    eta_signature_orbifold,
    find_certificate,
    global_certificate,
    lefschetz_count,
    multiplicity_certificate,
    sawtooth,
)
from .g2clifford import (
    clifford_matrix,
    clifford_mul,
    cross_product,
    hermitian_product,
    rotation_angles,
    spinor_eigenbasis,
)
from .group import (
    betti_one,
    check_hypothesis,
    compose,
    element_order,
    fixed_point_components,
    fixed_point_set,
    generate_group,
    inverse,
    singular_locus,
)
from .lattice import enumerate_dual_shells, fixed_dual_sublattice, fixed_sublattice
from .maslov import h3_space, lagrangian_from_involution, maslov_index, spinor_space, tcs_cross_check
from .nu import analyze_spec, compute_nu, compute_nu_situation1_mod48
from .oracle import (
    certificate_sweep,
    run_oracle_suite,
    verify_abel_summation,
    verify_certificate,
    verify_eisenstein,
    verify_shell_traces,
    verify_trig_identity,
)
from .report import build_rows, classify_rows, render

__all__ = [
    # Lattice
    "enumerate_dual_shells",
    "fixed_dual_sublattice",
    "fixed_sublattice",
    # Group
    "betti_one",
    "check_hypothesis",
    "compose",
    "element_order",
    "fixed_point_components",
    "fixed_point_set",
    "generate_group",
    "inverse",
    "singular_locus",
    # G2 / Clifford
    "clifford_matrix",
    "clifford_mul",
    "cross_product",
    "hermitian_product",
    "rotation_angles",
    "spinor_eigenbasis",
    # Signature eta
    "angles_cancel",
    "eta_gamma_signature",
    "eta_signature_dihedral",
    "eta_signature_orbifold",
    "find_certificate",
    "global_certificate",
    "lefschetz_count",
    "multiplicity_certificate",
    "sawtooth",
    # Dirac eta
    "dirac_shell_terms",
    "dirac_term",
    "eta_dirac_dihedral",
    "eta_dirac_mod2",
    "eta_dirac_orbifold",
    "eta_gamma_dirac",
    # Maslov
    "h3_space",
    "lagrangian_from_involution",
    "maslov_index",
    "spinor_space",
    "tcs_cross_check",
    # Oracle
    "certificate_sweep",
    "run_oracle_suite",
    "verify_abel_summation",
    "verify_certificate",
    "verify_eisenstein",
    "verify_shell_traces",
    "verify_trig_identity",
    # Catalog
    "BUILTIN_NAMES",
    "builtin_examples",
    "get_builtin",
    "load_spec",
    "parse_spec",
    "serialize_spec",
    "shipped_spec_path",
    "validate_spec",
    # Nu
    "analyze_spec",
    "compute_nu",
    "compute_nu_situation1_mod48",
    # Report
    "build_rows",
    "classify_rows",
    "render",
]
