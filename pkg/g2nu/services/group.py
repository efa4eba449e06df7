"""
Group Service

Closure of generator sets into finite groups of affine isometries, fixed-point
analysis on the torus, the singular-set stratification, hypothesis checks and
the first Betti number of the quotient.
"""

import logging
from collections import deque
from fractions import Fraction
from math import lcm

import numpy as np
from sympy import Matrix

from g2nu.core.errors import NonIntegralAverage, NotFiniteOrder, OrderExceeded, SpecValidationError
from g2nu.models import (
    AffineIsometry,
    FixedComponent,
    FixedPointSet,
    GroupAction,
    HypothesisLevel,
    HypothesisVerdict,
    ResolutionMetadata,
    SingularComponent,
    ThreeForm,
    TorusLattice,
)
from g2nu.utils.linalg import as_fraction_vector, cokernel, integer_det, integer_inverse, solve_on_torus

logger = logging.getLogger(__name__)


# ============================================================================
# Group law
# ============================================================================

def identity(n: int = 7) -> AffineIsometry:
    return AffineIsometry(linear=np.eye(n, dtype=int).tolist(), translation=[0] * n, label="1")


def compose(second: AffineIsometry, first: AffineIsometry, label: str | None = None) -> AffineIsometry:
    """second after first: (B2 B1, B2 b1 + b2)."""
    B = second.matrix @ first.matrix
    b = second.matrix @ first.shift + second.shift
    if label is None:
        label = _join_labels(second.label, first.label)
    return AffineIsometry(linear=B, translation=b, label=label)


def _join_labels(left: str, right: str) -> str:
    if left in ("", "1"):
        return right or "1"
    if right in ("", "1"):
        return left
    return f"{left}·{right}"


def inverse(g: AffineIsometry) -> AffineIsometry:
    B_inv = integer_inverse(g.matrix)
    return AffineIsometry(linear=B_inv, translation=-(B_inv @ g.shift),
                          label=f"({g.label})⁻¹" if g.label else "")


def commutes(g: AffineIsometry, h: AffineIsometry) -> bool:
    return compose(g, h).same_map(compose(h, g))


def matrix_order(B: np.ndarray, bound: int) -> int:
    """Multiplicative order of an integer matrix; NotFiniteOrder past the bound."""
    n = B.shape[0]
    eye = np.eye(n, dtype=object)
    power = np.array(B, dtype=object)
    for k in range(1, bound + 1):
        if (power == eye).all():
            return k
        power = power @ B
    raise NotFiniteOrder(f"linear part has no order <= {bound}", bound=bound)


def element_order(g: AffineIsometry, bound: int) -> int:
    """Order of the affine map: the linear order times the order of the resulting translation."""
    n = matrix_order(g.matrix, bound)
    power = identity(g.dim)
    for _ in range(n):
        power = compose(g, power)
    return n * lcm(*(t.denominator for t in power.translation))


def validate_generator(g: AffineIsometry, bound: int) -> None:
    if integer_det(g.matrix) != 1:
        raise SpecValidationError(f"generator {g.label!r} must have det +1", invariant="det_plus_one")
    matrix_order(g.matrix, bound)


def generate_group(generators: list[AffineIsometry] | tuple[AffineIsometry, ...], order_bound: int,
                   lattice: TorusLattice | None = None) -> GroupAction:
    """Close the generators under composition (breadth first, so labels are short words)."""
    if order_bound < 1:
        raise ValueError("order_bound must be at least 1")
    rank = generators[0].dim if generators else (lattice.rank if lattice else 7)
    lattice = lattice or TorusLattice(rank=rank)
    for g in generators:
        validate_generator(g, order_bound)

    one = identity(rank)
    elements = [one]
    seen = {one.key: 0}
    generator_indices = []
    queue = deque([one])
    for g in generators:
        if g.key not in seen:
            seen[g.key] = len(elements)
            elements.append(g)
            queue.append(g)
        generator_indices.append(seen[g.key])

    while queue:
        h = queue.popleft()
        for g in generators:
            product = compose(g, h)
            if product.key in seen:
                continue
            if len(elements) >= order_bound:
                raise OrderExceeded(f"group order exceeds {order_bound}", bound=order_bound)
            seen[product.key] = len(elements)
            elements.append(product)
            queue.append(product)

    logger.info("group_generated", extra={"event": "group_generated", "order": len(elements),
                                          "generator_count": len(generators)})
    return GroupAction(lattice=lattice, elements=tuple(elements), generators=tuple(generator_indices))


# ============================================================================
# Fixed points
# ============================================================================

def _fixed_system(g: AffineIsometry) -> tuple[np.ndarray, np.ndarray]:
    M = g.matrix - np.eye(g.dim, dtype=object)
    return M, -g.shift


def fixed_point_set(g: AffineIsometry) -> FixedPointSet:
    """Solvability of (B - I) x = -b mod Z^n, with dimension and component count."""
    M, c = _fixed_system(g)
    solution = solve_on_torus(M, c, enumerate_components=False)
    if solution is None:
        return FixedPointSet(empty=True)
    return FixedPointSet(empty=False, dimension=solution.dimension,
                         component_count=solution.component_count)


def fixed_point_components(g: AffineIsometry, owner: int = 0) -> list[FixedComponent]:
    M, c = _fixed_system(g)
    solution = solve_on_torus(M, c)
    if solution is None:
        return []
    directions = tuple(tuple(int(v) for v in solution.directions[:, j])
                       for j in range(solution.dimension))
    return [FixedComponent(point=rep, directions=directions, owner=owner)
            for rep in solution.representatives]


def _directions_matrix(comp: FixedComponent, n: int) -> np.ndarray:
    if not comp.directions:
        return np.zeros((n, 0), dtype=object)
    return np.array(comp.directions, dtype=object).T


def _subspace_key(K: np.ndarray) -> tuple:
    if K.shape[1] == 0:
        return ()
    reduced, _ = Matrix(K.T.tolist()).rref()
    return tuple(reduced)


class _ComponentIndex:
    """Canonical keys for affine subtori x0 + span(K) modulo Z^n."""

    def __init__(self, n: int) -> None:
        self.n = n
        self._annihilators: dict[tuple, np.ndarray] = {}

    def key(self, point, K: np.ndarray) -> tuple:
        skey = _subspace_key(K)
        if skey not in self._annihilators:
            self._annihilators[skey] = (cokernel(K) if K.shape[1]
                                        else np.eye(self.n, dtype=object))
        Q = self._annihilators[skey]
        coset = tuple(Fraction(v) % 1 for v in Q @ as_fraction_vector(point))
        return skey, coset


def _image(g: AffineIsometry, comp: FixedComponent) -> tuple[np.ndarray, np.ndarray]:
    K = _directions_matrix(comp, g.dim)
    return g.matrix @ K, g.matrix @ as_fraction_vector(comp.point) + g.shift


def _fixes_pointwise(h: AffineIsometry, comp: FixedComponent) -> bool:
    K = _directions_matrix(comp, h.dim)
    M = h.matrix - np.eye(h.dim, dtype=object)
    if K.shape[1] and not (M @ K == 0).all():
        return False
    residual = M @ as_fraction_vector(comp.point) + h.shift
    return all(Fraction(v).denominator == 1 for v in residual)


def _acts_freely_on(h: AffineIsometry, comp: FixedComponent) -> bool:
    """No point of the component is fixed by h."""
    K = _directions_matrix(comp, h.dim)
    M = h.matrix - np.eye(h.dim, dtype=object)
    rhs = -(M @ as_fraction_vector(comp.point) + h.shift)
    if K.shape[1] == 0:
        return not all(Fraction(v).denominator == 1 for v in rhs)
    return solve_on_torus(M @ K, rhs, enumerate_components=False) is None


def _intersect(a: FixedComponent, b: FixedComponent, n: int) -> bool:
    Ka, Kb = _directions_matrix(a, n), _directions_matrix(b, n)
    M = np.concatenate([Ka, -Kb], axis=1)
    rhs = as_fraction_vector(b.point) - as_fraction_vector(a.point)
    if M.shape[1] == 0:
        return all(Fraction(v).denominator == 1 for v in rhs)
    return solve_on_torus(M, rhs, enumerate_components=False) is not None


def _restricted_charpoly_is_half_screw(h: AffineIsometry, comp: FixedComponent) -> bool:
    """Linear part of h on the component's tangent space has eigenvalues (1, -1, -1)."""
    K = Matrix(_directions_matrix(comp, h.dim).tolist())
    B = Matrix(h.matrix.tolist())
    C = (K.T * K).inv() * K.T * B * K
    return C.shape == (3, 3) and C.trace() == -1 and C.det() == 1 and (C * C).is_Identity


def _transversal_tag(group: GroupAction, centralizer: list[int], bound: int) -> str:
    order = len(centralizer)
    if any(element_order(group.elements[i], bound) == order for i in centralizer):
        return f"Z/{order}"
    return f"G{order}"


def singular_locus(group: GroupAction, order_bound: int = 10_000) -> list[SingularComponent]:
    """One entry per Gamma-orbit of fixed tori."""
    n = group.lattice.rank
    index = _ComponentIndex(n)

    components: dict[tuple, FixedComponent] = {}
    for i, g in enumerate(group.elements[1:], start=1):
        for comp in fixed_point_components(g, owner=i):
            key = index.key(comp.point, _directions_matrix(comp, n))
            components.setdefault(key, comp)

    for comp in components.values():
        if comp.dimension not in (1, 3):
            raise SpecValidationError(
                f"fixed torus of dimension {comp.dimension} (expected 1 or 3)",
                invariant="fixed_tori_dimension")

    # Pairwise intersections, skipping pairs whose owners have no common fixed point
    keys = list(components)
    common_cache: dict[tuple[int, int], bool] = {}
    intersecting: set[tuple] = set()
    for a_pos, ka in enumerate(keys):
        for kb in keys[a_pos + 1:]:
            a, b = components[ka], components[kb]
            pair = (min(a.owner, b.owner), max(a.owner, b.owner))
            if pair not in common_cache:
                ga, gb = group.elements[pair[0]], group.elements[pair[1]]
                M = np.concatenate([ga.matrix - np.eye(n, dtype=object),
                                    gb.matrix - np.eye(n, dtype=object)])
                rhs = np.concatenate([-ga.shift, -gb.shift])
                common_cache[pair] = solve_on_torus(M, rhs, enumerate_components=False) is not None
            if common_cache[pair] and _intersect(a, b, n):
                intersecting.update((ka, kb))

    # Orbits under Gamma
    result: list[SingularComponent] = []
    visited: set[tuple] = set()
    for key in keys:
        if key in visited:
            continue
        comp = components[key]
        orbit = set()
        stabilizer = []
        for j, g in enumerate(group.elements):
            K_img, p_img = _image(g, comp)
            img_key = index.key(p_img, K_img)
            orbit.add(img_key)
            if img_key == key:
                stabilizer.append(j)
        visited.update(orbit)

        centralizer = [j for j in stabilizer if _fixes_pointwise(group.elements[j], comp)]
        outside = [j for j in stabilizer if j not in centralizer]
        free = all(_acts_freely_on(group.elements[j], comp) for j in outside)
        quotient = len(stabilizer) // len(centralizer)
        half_screw = (quotient == 2 and comp.dimension == 3 and free
                      and _restricted_charpoly_is_half_screw(group.elements[outside[0]], comp))

        result.append(SingularComponent(
            representative_fix_dim=comp.dimension,
            centralizer_order=len(centralizer),
            normalizer_quotient_order=quotient,
            orbit_size=len(orbit),
            transversal_group_tag=_transversal_tag(group, centralizer, order_bound),
            intersects_other_component=bool(orbit & intersecting),
            acts_freely=free,
            half_screw=half_screw,
        ))

    logger.info("singular_locus_computed", extra={
        "event": "singular_locus_computed", "orbits": len(result), "components": len(components)})
    return result


# ============================================================================
# Hypotheses
# ============================================================================

def _satisfies_condition_iii(comp: SingularComponent) -> str | None:
    if comp.normalizer_quotient_order == 1:
        return "B_i trivial"
    if comp.normalizer_quotient_order == 2 and comp.representative_fix_dim == 1:
        return "B_i = Z/2 on a 1-torus"
    if comp.half_screw:
        return "B_i = Z/2 acting on a 3-torus as a half screw"
    return None


def check_hypothesis(group: GroupAction, metadata: ResolutionMetadata | None = None,
                     components: list[SingularComponent] | None = None) -> HypothesisVerdict:
    """Strongest verdict the coded sufficient conditions certify; UNKNOWN otherwise."""
    if metadata is not None and metadata.partial and metadata.asserted_level is not None:
        return HypothesisVerdict(level=metadata.asserted_level,
                                 witness_notes=["asserted by catalog metadata (partial entry)"])

    comps = components if components is not None else singular_locus(group)
    notes: list[str] = []

    if any(c.intersects_other_component for c in comps):
        notes.append("fixed tori intersect: condition (i) fails")
        return HypothesisVerdict(level=HypothesisLevel.UNKNOWN, witness_notes=notes)

    if all(c.representative_fix_dim == 3 and c.normalizer_quotient_order == 1 for c in comps):
        notes.append(f"{len(comps)} orbit(s) of disjoint 3-tori with trivial B_i")
        return HypothesisVerdict(level=HypothesisLevel.HYP1, witness_notes=notes)

    if not all(c.acts_freely for c in comps):
        notes.append("some B_i has fixed points on F_i: condition (ii) fails")
        return HypothesisVerdict(level=HypothesisLevel.UNKNOWN, witness_notes=notes)

    for c in comps:
        reason = _satisfies_condition_iii(c)
        if reason is None:
            notes.append(f"no coded sufficient condition for (iii) on a {c.representative_fix_dim}-torus "
                         f"with |B_i| = {c.normalizer_quotient_order}")
            return HypothesisVerdict(level=HypothesisLevel.UNKNOWN, witness_notes=notes)
        notes.append(f"(iii) via {reason}")

    if metadata is None or not metadata.spin_compatible:
        notes.append("no spin-isometry flag in metadata")
        return HypothesisVerdict(level=HypothesisLevel.HYP2, witness_notes=notes)

    notes.append("orientation-reversing isometries flagged spin")
    if metadata.ell_parity == "even" or metadata.nontorus_components_pairing == "even":
        notes.append("non-3-torus resolution data pairs off evenly")
        return HypothesisVerdict(level=HypothesisLevel.SITUATION1, witness_notes=notes)
    return HypothesisVerdict(level=HypothesisLevel.HYP2_SPIN, witness_notes=notes)


# ============================================================================
# Topology and geometry checks
# ============================================================================

def betti_one(group: GroupAction) -> int:
    """b1 of T^n/Gamma: the average trace of the linear parts."""
    total = sum(int(np.trace(g.matrix)) for g in group.elements)
    if total % group.order:
        raise NonIntegralAverage(f"trace average {total}/{group.order} is not an integer",
                                 total=total, order=group.order)
    return total // group.order


def ambient_linear(g: AffineIsometry, lattice: TorusLattice) -> np.ndarray:
    """Linear part in ambient orthonormal coordinates, E B E^-1."""
    E = lattice.ambient
    return E @ g.matrix.astype(float) @ np.linalg.inv(E)


def is_isometry(g: AffineIsometry, lattice: TorusLattice) -> bool:
    R = ambient_linear(g, lattice)
    return bool(np.allclose(R.T @ R, np.eye(lattice.rank), atol=lattice.embedding_precision * 100))


def preserves_three_form(g: AffineIsometry, lattice: TorusLattice,
                         phi: ThreeForm | None = None) -> bool:
    """Pullback of phi through the embedded linear part equals phi."""
    T = (phi or ThreeForm.standard()).tensor(dtype=float)
    R = ambient_linear(g, lattice)
    pulled = np.einsum("abc,ai,bj,ck->ijk", T, R, R, R)
    return bool(np.max(np.abs(pulled - T)) <= lattice.embedding_precision * 100)
