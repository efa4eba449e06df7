"""
Cyclotomic arithmetic

Characteristic polynomials of finite-order integer matrices factor into
cyclotomic polynomials; the factorization gives the eigenvalues as exact turn
fractions. Identities between sines of rational turns are decided exactly in
Q(zeta_N) by reducing modulo the N-th cyclotomic polynomial.
"""

from collections import Counter
from fractions import Fraction
from math import gcd, lcm

import numpy as np
from sympy import Matrix, Poly, cyclotomic_poly, divisors, symbols

x = symbols("x")


def characteristic_polynomial(B: np.ndarray) -> Poly:
    """charpoly(B) as an integer Poly in x."""
    return Poly(Matrix(B.tolist()).charpoly(x).as_expr(), x)


def cyclotomic_multiplicities(B: np.ndarray, order: int) -> dict[int, int]:
    """Multiplicity of each Phi_n (n dividing order) in charpoly(B), by trial division."""
    remaining = characteristic_polynomial(B)
    multiplicities: dict[int, int] = {}
    for n in divisors(order):
        phi = Poly(cyclotomic_poly(n, x), x)
        count = 0
        while remaining.degree() >= phi.degree():
            quotient, remainder = remaining.div(phi)
            if not remainder.is_zero:
                break
            remaining = quotient
            count += 1
        if count:
            multiplicities[int(n)] = count
    if remaining.degree() != 0:
        raise ValueError("characteristic polynomial is not a product of cyclotomic factors")
    return multiplicities


def eigen_turns(multiplicities: dict[int, int]) -> list[Fraction]:
    """Eigenvalue multiset as turn fractions in [0, 1), sorted."""
    turns: list[Fraction] = []
    for n, count in multiplicities.items():
        primitive = [Fraction(k, n) for k in range(n) if gcd(k, n) == 1]
        turns.extend(primitive * count)
    return sorted(turns)


def charpoly_from_turns(turns: list[Fraction]) -> Poly:
    """Product of cyclotomic polynomials whose roots are exactly the given turns.

    Raises ValueError when the multiset is not Galois-stable (no rational
    polynomial has exactly these roots).
    """
    counts = Counter(Fraction(t) % 1 for t in turns)
    result = Poly(1, x)
    by_order: dict[int, list[Fraction]] = {}
    for t in counts:
        by_order.setdefault(t.denominator, []).append(t)
    for n, present in by_order.items():
        primitive = [Fraction(k, n) for k in range(n) if gcd(k, n) == 1]
        multiplicity = counts[present[0]]
        if any(counts.get(p, 0) != multiplicity for p in primitive):
            raise ValueError(f"turns of order {n} are not Galois-stable")
        result *= Poly(cyclotomic_poly(n, x), x) ** multiplicity
    return result


def _laurent_reduce(terms: dict[int, int], n: int) -> Poly:
    coeffs = [0] * n
    for exponent, coeff in terms.items():
        coeffs[exponent % n] += coeff
    poly = Poly(list(reversed(coeffs)), x)
    return poly.rem(Poly(cyclotomic_poly(n, x), x))


def sine_identity_residual(turns: tuple[Fraction, Fraction, Fraction]) -> Poly:
    """Exact residual of -4 prod sin(2 pi t_k) - sum sin(4 pi t_k) in Q(zeta_N).

    With z_k = zeta_N^{m_k} both sides carry the factor 1/(2i), leaving
    prod (z_k - 1/z_k) - sum (z_k^2 - 1/z_k^2), reduced mod Phi_N.
    """
    n = lcm(*(Fraction(t).denominator for t in turns))
    exps = [int(Fraction(t) * n) for t in turns]
    terms: dict[int, int] = {}
    for signs in np.ndindex(2, 2, 2):
        exponent = sum(m if s == 0 else -m for m, s in zip(exps, signs, strict=True))
        coeff = (-1) ** sum(signs)
        terms[exponent] = terms.get(exponent, 0) + coeff
    for m in exps:
        terms[2 * m] = terms.get(2 * m, 0) - 1
        terms[-2 * m] = terms.get(-2 * m, 0) + 1
    return _laurent_reduce(terms, n)
