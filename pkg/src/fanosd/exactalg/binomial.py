"""Generalized binomial coefficients and the Jensen convolution identity."""
from __future__ import annotations

from fractions import Fraction
from math import factorial


def gen_binomial(x, ell: int) -> Fraction:
    """x(x-1)...(x-ell+1) / ell! for rational x and integer ell >= 0."""
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    x = Fraction(x)
    num = Fraction(1)
    for i in range(ell):
        num *= x - i
    return num / factorial(ell)


def jensen_sides(alpha, beta, gamma, L: int) -> tuple[Fraction, Fraction]:
    """Both sides of Jensen's identity, evaluated exactly.

    left  = sum_l C(alpha + beta*l, l) * C(gamma - beta*l, L - l)
    right = sum_l C(alpha + gamma - l, L - l) * beta**l
    """
    if L < 0:
        raise ValueError("L must be nonnegative")
    alpha, beta, gamma = Fraction(alpha), Fraction(beta), Fraction(gamma)
    left = sum(
        (gen_binomial(alpha + beta * l, l) * gen_binomial(gamma - beta * l, L - l) for l in range(L + 1)),
        Fraction(0),
    )
    right = sum(
        (gen_binomial(alpha + gamma - l, L - l) * beta ** l for l in range(L + 1)),
        Fraction(0),
    )
    return left, right


def jensen_check(alpha, beta, gamma, L: int) -> bool:
    left, right = jensen_sides(alpha, beta, gamma, L)
    return left == right
