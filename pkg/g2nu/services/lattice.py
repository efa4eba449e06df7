"""
Lattice Service

Fixed sublattices of integer matrices and enumeration of fixed dual vectors
by ambient norm. Exact results read only integer data; the numeric embedding
is used for shell enumeration and nothing else.
"""

import logging
from itertools import product
from math import ceil, sqrt

import numpy as np

from g2nu.core.errors import MissingEmbedding
from g2nu.models import DualVector, TorusLattice
from g2nu.utils.linalg import as_object_matrix, kernel

logger = logging.getLogger(__name__)


def _minus_identity(B: np.ndarray) -> np.ndarray:
    M = as_object_matrix(B)
    return M - np.eye(M.shape[0], dtype=object)


def fixed_dual_sublattice(B: np.ndarray) -> list[DualVector]:
    """Z-basis of the dual vectors fixed by B, i.e. of ker(B^T - I)."""
    K = kernel(_minus_identity(as_object_matrix(B).T))
    return [DualVector(coords=tuple(int(v) for v in K[:, j])) for j in range(K.shape[1])]


def fixed_sublattice(B: np.ndarray) -> np.ndarray:
    """Columns: saturated Z-basis of the lattice vectors fixed by B."""
    return kernel(_minus_identity(B))


def averaged_projector(B: np.ndarray, order: int) -> np.ndarray:
    """Integer matrix sum_{k<order} (B^T)^k, whose image spans the fixed dual space."""
    Bt = as_object_matrix(B).T
    n = Bt.shape[0]
    total = np.zeros((n, n), dtype=object)
    power = np.eye(n, dtype=object)
    for _ in range(order):
        total = total + power
        power = power @ Bt
    return total


def dual_ambient_vectors(lattice: TorusLattice, vectors: list[DualVector]) -> np.ndarray:
    """Rows: ambient coordinates of the given dual vectors."""
    if not lattice.has_embedding:
        raise MissingEmbedding("dual shells need a numeric lattice embedding")
    dual = lattice.dual_ambient
    return np.array([dual @ np.array(v.coords, dtype=float) for v in vectors]).reshape(
        len(vectors), lattice.rank)


def enumerate_dual_shells(lattice: TorusLattice, B: np.ndarray,
                          max_norm: float) -> list[tuple[float, list[DualVector]]]:
    """All nonzero B-fixed dual vectors of ambient norm <= max_norm, grouped by norm."""
    if not lattice.has_embedding:
        raise MissingEmbedding("dual shells need a numeric lattice embedding")
    if max_norm <= 0:
        raise ValueError("max_norm must be positive")

    basis = fixed_dual_sublattice(B)
    if not basis:
        return []
    K_int = np.array([v.coords for v in basis], dtype=object).T
    K = K_int.astype(float)                                            # rank x r
    W = lattice.dual_ambient @ K                                       # ambient x r
    gram_inv = np.linalg.inv(W.T @ W)
    bounds = [int(ceil(max_norm * sqrt(max(gram_inv[i, i], 0.0)))) for i in range(K.shape[1])]

    found: list[tuple[float, DualVector]] = []
    for coeffs in product(*(range(-b, b + 1) for b in bounds)):
        if not any(coeffs):
            continue
        c = np.array(coeffs, dtype=float)
        norm = float(np.linalg.norm(W @ c))
        if norm <= max_norm + lattice.embedding_precision:
            coords = K_int @ np.array(coeffs, dtype=object)
            found.append((norm, DualVector(coords=tuple(int(v) for v in coords))))

    found.sort(key=lambda item: (item[0], item[1].coords))
    shells: list[tuple[float, list[DualVector]]] = []
    for norm, vec in found:
        if shells and abs(shells[-1][0] - norm) <= lattice.embedding_precision:
            shells[-1][1].append(vec)
        else:
            shells.append((norm, [vec]))

    logger.debug("dual_shells_enumerated", extra={
        "event": "dual_shells_enumerated", "rank": len(basis), "shells": len(shells)})
    return shells


def first_dual_shells(lattice: TorusLattice, B: np.ndarray,
                      count: int) -> list[tuple[float, list[DualVector]]]:
    """The `count` innermost shells of B-fixed dual vectors (fewer only if none exist)."""
    basis = fixed_dual_sublattice(B)
    if not basis:
        return []
    W = dual_ambient_vectors(lattice, basis)
    radius = float(min(np.linalg.norm(W, axis=1))) * 1.5
    while True:
        shells = enumerate_dual_shells(lattice, B, radius)
        if len(shells) > count:
            return shells[:count]
        if len(shells) == count:
            return shells
        radius *= 2
