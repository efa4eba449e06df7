"""
Pydantic Models for g2nu

Domain types organized by concern.
"""

from .catalog import ExpectedValues, OrbifoldSpec, ResolutionMetadata
from .common import EtaValue, OracleReport, Provenance, Tier
from .group import (
    AffineIsometry,
    CertificateKind,
    FixedComponent,
    FixedPointSet,
    GroupAction,
    HypothesisLevel,
    HypothesisVerdict,
    SingularComponent,
    VanishingCertificate,
)
from .lattice import DualVector, TorusLattice
from .maslov import Lagrangian, SymplecticSpace, TcsReport
from .results import DiracShellTerm, NuResult, ReportRow
from .spinors import AngleProfile, Spinor, ThreeForm

__all__ = [
    # Common
    "EtaValue",
    "OracleReport",
    "Provenance",
    "Tier",
    # Lattice
    "DualVector",
    "TorusLattice",
    # Group
    "AffineIsometry",
    "CertificateKind",
    "FixedComponent",
    "FixedPointSet",
    "GroupAction",
    "HypothesisLevel",
    "HypothesisVerdict",
    "SingularComponent",
    "VanishingCertificate",
    # Spinors
    "AngleProfile",
    "Spinor",
    "ThreeForm",
    # Maslov
    "Lagrangian",
    "SymplecticSpace",
    "TcsReport",
    # Catalog
    "ExpectedValues",
    "OrbifoldSpec",
    "ResolutionMetadata",
    # Results
    "DiracShellTerm",
    "NuResult",
    "ReportRow",
]
