"""Double cosets of SL2(Z) in integer matrices, as multisets of right cosets.

A right coset SL2(Z) M with det M = n > 0 is labelled by its Hermite normal
form [[a, b], [0, d]] with a, d > 0, ad = n and 0 <= b < d.  An element of
the Hecke algebra is a dict label -> rational multiplicity; the product of
two elements multiplies representatives pairwise.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def hnf(m) -> tuple:
    """Hermite normal form of an integer 2x2 matrix under left SL2(Z) action."""
    (a, b), (c, d) = m
    # row-reduce the first column to (g, 0) with extended Euclid
    x, y, g = _ext_gcd(a, c)
    # [[x, y], [-c/g, a/g]] has det 1
    na, nb = g, x * b + y * d
    nd = (-c // g) * b + (a // g) * d
    if nd <= 0:
        raise ValueError("determinant must be positive")
    return (na, nb % nd, nd)


def _ext_gcd(a: int, b: int):
    """(x, y, g) with x a + y b = g = gcd(a, b) >= 0."""
    if b == 0:
        return (1 if a >= 0 else -1), 0, abs(a)
    x0, y0, x1, y1 = 1, 0, 0, 1
    r0, r1 = a, b
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if r0 < 0:
        r0, x0, y0 = -r0, -x0, -y0
    return x0, y0, r0


def _matrix(label):
    a, b, d = label
    return ((a, b), (0, d))


def _mul(m1, m2):
    (a, b), (c, d) = m1
    (e, f), (g, h) = m2
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


class DoubleCosetSum:
    """A rational combination of right cosets."""

    def __init__(self, terms: dict | None = None):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def coset(cls, label) -> "DoubleCosetSum":
        return cls({tuple(label): 1})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return DoubleCosetSum(out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "DoubleCosetSum":
        return DoubleCosetSum({k: v * Fraction(c) for k, v in self.terms.items()})

    __rmul__ = lambda self, c: self.scale(c)

    def __mul__(self, other):
        if not isinstance(other, DoubleCosetSum):
            return self.scale(other)
        return dc_mul(self, other)

    def degree(self) -> Fraction:
        return sum(self.terms.values(), Fraction(0))

    def __eq__(self, other):
        return isinstance(other, DoubleCosetSum) and self.terms == other.terms

    def __repr__(self):
        return f"DoubleCosetSum({len(self.terms)} cosets, degree {self.degree()})"


def dc_mul(x: DoubleCosetSum, y: DoubleCosetSum) -> DoubleCosetSum:
    out: dict = {}
    for k1, v1 in x.terms.items():
        m1 = _matrix(k1)
        for k2, v2 in y.terms.items():
            lab = hnf(_mul(m1, _matrix(k2)))
            out[lab] = out.get(lab, 0) + v1 * v2
    return DoubleCosetSum(out)


def H(n: int) -> DoubleCosetSum:
    """SL2(Z) diag(n, 1) SL2(Z): all primitive integer matrices of determinant n."""
    terms = {}
    for a in range(1, n + 1):
        if n % a:
            continue
        d = n // a
        for b in range(d):
            if gcd(gcd(a, b), d) == 1:
                terms[(a, b, d)] = 1
    return DoubleCosetSum(terms)


def scalar(p: int) -> DoubleCosetSum:
    """The double coset of p I, a single right coset."""
    return DoubleCosetSum.coset((p, 0, p))


def identity() -> DoubleCosetSum:
    return DoubleCosetSum.coset((1, 0, 1))


def recursion_check(p: int, r: int) -> dict:
    """Check both three-term recursions for H(p^r) as exact identities of multisets."""
    T = scalar(p)
    out = {}
    if r >= 1:
        lhs = H(p ** (r + 1))
        rhs = H(p) * H(p ** r) - (T * H(p ** (r - 1))).scale(p)
        if r == 1:
            rhs = rhs - T
        out["first"] = lhs == rhs
    if r >= 2:
        lhs = H(p ** (r + 2))
        left = (H(p * p) + T.scale(1 - p)) * H(p ** r)
        c = 1 + (Fraction(1, p) if r == 2 else 0)
        right = (T * T * H(p ** (r - 2))).scale(c * p * p)
        out["second"] = lhs == left - right
    return out
