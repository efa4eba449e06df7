"""
Exact integer linear algebra

Diagonal normal form of integer matrices by alternating gcd row and column
clearing, and the torus equation solver built on it. Matrices are numpy
arrays of dtype=object so entries stay Python ints (or Fractions).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np
from sympy import primerange


def as_object_matrix(rows) -> np.ndarray:
    """Copy any nested sequence or array into an object-dtype integer matrix."""
    arr = np.array(rows, dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    return np.vectorize(int, otypes=[object])(arr) if arr.size else arr


def as_fraction_vector(values) -> np.ndarray:
    return np.array([Fraction(v) for v in values], dtype=object)


def exgcd(a: int, b: int) -> np.ndarray:
    """2x2 integer matrix M of determinant 1 with M @ [a, b] = [gcd(a, b), 0].

    If a divides b, M[0, 1] is 0.
    """
    a_sign = -1 if a < 0 else 1
    a *= a_sign
    b_sign = -1 if b < 0 else 1
    b *= b_sign

    # Euclid on [a, b] with the row operations tracked in the augmented identity
    M = np.array([[a, 1, 0],
                  [b, 0, 1]], dtype=object)
    M = M[::-1]
    while M[1, 0] != 0:
        q = M[0, 0] // M[1, 0]
        M[0] -= q * M[1]
        M = M[::-1]

    g = M[0, 0]
    M = M[:, 1:]
    M *= [a_sign, b_sign]

    if g != 0:
        M[1] = [-b_sign * b // g, a_sign * a // g]
    return M


def _inv_2x2_det1(M: np.ndarray) -> np.ndarray:
    return np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]], dtype=object)


def normal_form(A: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Diagonalize A over the integers.

    Returns (S, D, T, Sinv, Tinv) with A == S @ D @ T, D diagonal of the same
    shape as A, and S, T unimodular with exact inverses. No divisibility chain
    is enforced on the diagonal; callers only need the product of the nonzero
    entries and the positions of the zero ones.
    """
    D = as_object_matrix(A)
    S = np.eye(D.shape[0], dtype=object)
    T = np.eye(D.shape[1], dtype=object)
    Sinv, Tinv = S.copy(), T.copy()

    def clear_row(i: int) -> bool:
        if (D[i, i + 1:] == 0).all():
            return False
        for j in range(i + 1, D.shape[1]):
            M = exgcd(D[i, i], D[i, j]).T
            D[:, [i, j]] = D[:, [i, j]] @ M
            T[[i, j]] = _inv_2x2_det1(M) @ T[[i, j]]
            Tinv[:, [i, j]] = Tinv[:, [i, j]] @ M
        return True

    def clear_col(i: int) -> bool:
        if (D[i + 1:, i] == 0).all():
            return False
        for j in range(i + 1, D.shape[0]):
            M = exgcd(D[i, i], D[j, i])
            D[[i, j]] = M @ D[[i, j]]
            S[:, [i, j]] = S[:, [i, j]] @ _inv_2x2_det1(M)
            Sinv[[i, j]] = M @ Sinv[[i, j]]
        return True

    for i in range(min(*D.shape)):
        clear_col(i)
        while clear_row(i) and clear_col(i):
            pass

    return S, D, T, Sinv, Tinv


def _diagonal(D: np.ndarray, length: int) -> list[int]:
    diag = [int(D[i, i]) for i in range(min(D.shape))]
    return diag + [0] * (length - len(diag))


def kernel(A: np.ndarray) -> np.ndarray:
    """Columns form a saturated integer basis of the null space of A."""
    _, D, T, _, Tinv = normal_form(A)
    zero = [d == 0 for d in _diagonal(D, len(T))]
    return Tinv[:, zero]


def cokernel(A: np.ndarray) -> np.ndarray:
    """Rows span the annihilator of the image of A."""
    S, D, _, Sinv, _ = normal_form(A)
    zero = [d == 0 for d in _diagonal(D, len(S))]
    return Sinv[zero]


def rank(A: np.ndarray) -> int:
    _, D, _, _, _ = normal_form(A)
    return sum(1 for d in _diagonal(D, 0) if d != 0)


# ============================================================================
# Equations on the torus
# ============================================================================

@dataclass(frozen=True)
class TorusSolution:
    """Solution set of M x = c (mod Z^m) for real x, as an affine family.

    count: number of connected components.
    representatives: one rational point per component (empty when not enumerated).
    directions: integer columns spanning the real solution directions.
    """

    count: int
    representatives: tuple[tuple[Fraction, ...], ...]
    directions: np.ndarray

    @property
    def dimension(self) -> int:
        return int(self.directions.shape[1])

    @property
    def component_count(self) -> int:
        return self.count


def _component_count(D: np.ndarray) -> int:
    count = 1
    for d in _diagonal(D, 0):
        if d != 0:
            count *= abs(d)
    return count


def solve_on_torus(M: np.ndarray, c, enumerate_components: bool = True) -> TorusSolution | None:
    """Solve M x = c modulo the integer lattice, x real.

    Returns None when there is no solution. With M = S D T, the substitution
    y = T x turns the system into d_i y_i = (Sinv c)_i mod 1. Rows with d_i = 0
    must already be integral; constrained coordinates take |d_i| values.
    """
    S, D, T, Sinv, Tinv = normal_form(M)
    rhs = Sinv @ as_fraction_vector(c)
    m, n = D.shape
    diag_rows = _diagonal(D, m)
    for i in range(m):
        if diag_rows[i] == 0 and Fraction(rhs[i]).denominator != 1:
            return None

    diag_cols = _diagonal(D, n)
    free = [j for j in range(n) if diag_cols[j] == 0]
    directions = Tinv[:, free]

    if not enumerate_components:
        return TorusSolution(count=_component_count(D), representatives=(), directions=directions)

    choices = []
    for j in range(n):
        d = diag_cols[j]
        if d == 0:
            choices.append([Fraction(0)])
        else:
            base = Fraction(rhs[j])
            choices.append([(base + k) / d for k in range(abs(d))])

    reps = []
    for y in product(*choices):
        x = Tinv @ np.array(y, dtype=object)
        reps.append(tuple(Fraction(v) % 1 for v in x))
    return TorusSolution(count=len(reps), representatives=tuple(reps), directions=directions)


def integer_inverse(B: np.ndarray) -> np.ndarray:
    """Inverse of a unimodular integer matrix, exact."""
    S, D, T, Sinv, Tinv = normal_form(B)
    diag = _diagonal(D, len(D))
    if any(abs(d) != 1 for d in diag):
        raise ValueError("matrix is not unimodular")
    # B = S D T with D = diag(+-1), so B^-1 = Tinv D Sinv
    return Tinv @ D @ Sinv


def integer_det(B: np.ndarray) -> int:
    """Exact determinant through the normal form (S, T have determinant 1)."""
    _, D, _, _, _ = normal_form(B)
    det = 1
    for d in _diagonal(D, len(D)):
        det *= d
    return det


def finite_order_exponent(n: int) -> int:
    """lcm of all orders of finite-order elements of GL(n, Z).

    Every such order is an lcm of prime powers q with phi(q) <= n.
    """
    exponent = 1
    for p in primerange(2, n + 2):
        k = 1
        while p ** k * (p - 1) <= n:
            k += 1
        exponent *= p ** k
    return exponent


def matrix_power(B: np.ndarray, k: int) -> np.ndarray:
    result = np.eye(B.shape[0], dtype=int).astype(object)
    base = np.array(B, dtype=object)
    while k:
        if k & 1:
            result = result @ base
        base = base @ base
        k >>= 1
    return result


@lru_cache(maxsize=4096)
def is_finite_order_unimodular(linear: tuple[tuple[int, ...], ...]) -> bool:
    """det B = +-1 and B^e = I for the GL(n, Z) exponent e."""
    B = np.array(linear, dtype=object)
    n = B.shape[0]
    if integer_det(B) not in (1, -1):
        return False
    return bool((matrix_power(B, finite_order_exponent(n)) == np.eye(n, dtype=int).astype(object)).all())
