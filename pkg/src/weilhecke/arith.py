"""Elementary number theory: valuations, residue symbols, small helpers."""

from fractions import Fraction
from math import gcd

from sympy import factorint, isprime, primerange
from sympy.functions.combinatorial.numbers import jacobi_symbol, kronecker_symbol

from .errors import BadDenominator, DomainError

__all__ = [
    "factorint", "isprime", "primerange", "valuation", "legendre", "jacobi",
    "kronecker", "shimura_symbol", "epsilon_sign", "legendre_of_rational",
    "lcm", "as_fraction", "p_divides",
]


def lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // gcd(out, x) if x else out
    return out


def valuation(n, p: int) -> float | int:
    """p-adic valuation of an integer or Fraction; returns inf for 0."""
    n = Fraction(n)
    if n == 0:
        return float("inf")
    v = 0
    a, b = n.numerator, n.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


def legendre(a: int, p: int) -> int:
    return int(kronecker_symbol(a, p))


def jacobi(a: int, n: int) -> int:
    return int(jacobi_symbol(a, n))


def kronecker(a: int, n: int) -> int:
    return int(kronecker_symbol(a, n))


def shimura_symbol(c: int, d: int) -> int:
    """(c/d) for odd d with the sign convention used for theta multipliers.

    Equals the Jacobi symbol (c/|d|), negated when c < 0 and d < 0;
    (0/+-1) = 1.
    """
    if d % 2 == 0:
        raise DomainError("d must be odd")
    if c == 0:
        return 1 if abs(d) == 1 else 0
    s = jacobi(c, abs(d))
    if c < 0 and d < 0:
        s = -s
    return s


def epsilon_sign(d: int) -> int:
    """Exponent e with epsilon_d = i**e: 0 if d = 1 mod 4, 1 if d = 3 mod 4."""
    if d % 2 == 0:
        raise DomainError("epsilon_d needs odd d")
    return 0 if d % 4 == 1 else 1


def as_fraction(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def legendre_of_rational(n, p: int) -> int:
    """(n/p) for rational n with p-free denominator c, defined as (n c^2 / p)."""
    n = as_fraction(n)
    c = n.denominator
    if c % p == 0:
        raise BadDenominator(f"denominator {c} divisible by {p}")
    return legendre(n.numerator * c, p)


def p_divides(n, p: int) -> bool:
    """Whether p divides the rational n, i.e. n lies in pZ_(p)."""
    n = as_fraction(n)
    if n.denominator % p == 0:
        return False
    return n.numerator % p == 0
