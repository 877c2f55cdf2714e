"""Small integer number-theory helpers (thin layer over sympy)."""

from math import gcd, isqrt

from sympy import factorint
from sympy.functions.combinatorial.numbers import kronecker_symbol
from sympy.ntheory import n_order

__all__ = [
    "factor",
    "prime_factors",
    "divisors",
    "kronecker",
    "fundamental_decomposition",
    "mult_order",
    "euler_phi",
    "omega",
    "prime_power",
]


def factor(n):
    """Prime factorisation of a positive integer as a sorted list of (prime, exponent)."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    return sorted((int(r), int(e)) for r, e in factorint(n).items())


def prime_factors(n):
    return [r for r, _ in factor(n)]


def divisors(n):
    out = [1]
    for r, e in factor(n):
        out = [d * r**i for d in out for i in range(e + 1)]
    return sorted(out)


def kronecker(a, n):
    return int(kronecker_symbol(a, n))


def euler_phi(n):
    result = n
    for r, _ in factor(n):
        result -= result // r
    return result


def omega(n):
    """Number of distinct prime divisors."""
    return 0 if n == 1 else len(factor(n))


def mult_order(a, m):
    """Multiplicative order of a modulo m (m >= 1, gcd(a, m) = 1)."""
    if m == 1:
        return 1
    if gcd(a, m) != 1:
        raise ValueError(f"{a} is not a unit modulo {m}")
    return int(n_order(a % m, m))


def prime_power(n):
    """Return (r, e) if n = r**e with r prime, else None."""
    f = factor(n) if n > 1 else []
    return f[0] if len(f) == 1 else None


def fundamental_decomposition(delta):
    """Write a negative discriminant as v**2 * D_K with D_K fundamental.

    ``delta`` must be congruent to 0 or 1 mod 4.  Returns ``(D_K, v)``.
    """
    if delta >= 0:
        raise ValueError("expected a negative discriminant")
    if delta % 4 not in (0, 1):
        raise ValueError(f"{delta} is not a discriminant")
    square = 1
    core = -1
    for r, e in factor(-delta):
        square *= r ** (e // 2)
        if e % 2:
            core *= r
    if core % 4 == 1:
        return core, square
    # core = 2 or 3 mod 4: the fundamental discriminant is 4*core
    if square % 2:
        raise AssertionError("inconsistent discriminant decomposition")
    return 4 * core, square // 2


def is_square(n):
    return n >= 0 and isqrt(n) ** 2 == n
