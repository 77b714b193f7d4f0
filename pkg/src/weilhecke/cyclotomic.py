"""Exact arithmetic in cyclotomic fields.

An element lives in Q(zeta_m) with zeta_m = e(1/m) and is stored as integer
coefficients on the power basis 1, zeta, ..., zeta^(phi(m)-1) over one
positive common denominator.  Mixed operands are lifted to the lcm of their
conductors; equality is decided there, so it is canonical.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import gcd

import mpmath
import flint
from sympy import cyclotomic_poly, totient
from sympy.functions.combinatorial.numbers import mobius

from .arith import factorint, lcm, legendre
from .errors import DivisionByZero, ParseError

__all__ = ["Cyclotomic", "e_frac", "sqrt_nat", "to_complex", "cyc", "ZERO", "ONE"]


@lru_cache(maxsize=None)
def _cyc_data(m: int):
    """(phi, [(j, c_j)]) with Phi_m = x^phi + sum_{j<phi} c_j x^j."""
    coeffs = [int(c) for c in cyclotomic_poly(m, polys=True).all_coeffs()][::-1]
    phi = len(coeffs) - 1
    return phi, tuple((j, c) for j, c in enumerate(coeffs[:-1]) if c)


@lru_cache(maxsize=None)
def _phi_poly(m: int) -> "flint.fmpq_poly":
    phi, terms = _cyc_data(m)
    coeffs = [0] * (phi + 1)
    for j, c in terms:
        coeffs[j] = c
    coeffs[phi] = 1
    return flint.fmpq_poly(coeffs)


@lru_cache(maxsize=None)
def _trace_weights(m: int):
    # normalized trace of zeta_m^j is mu(m')/phi(m') with m' = m/gcd(j, m)
    phi, _ = _cyc_data(m)
    out = []
    for j in range(phi):
        mm = m // gcd(j, m)
        out.append(Fraction(int(mobius(mm)), int(totient(mm))))
    return tuple(out)


def _reduce(m: int, vec: list) -> tuple:
    """Reduce a length-m cyclic coefficient list modulo Phi_m."""
    phi, terms = _cyc_data(m)
    for i in range(m - 1, phi - 1, -1):
        c = vec[i]
        if c:
            s = i - phi
            for j, cj in terms:
                vec[s + j] -= c * cj
    return tuple(vec[:phi])


def _fold_twice_odd(m: int, counts: dict) -> tuple[int, dict]:
    """Rewrite zeta_{2n}^j (n odd) as (-1)^j zeta_n^(j(n+1)/2)."""
    if m % 4 != 2:
        return m, counts
    n = m // 2
    half = (n + 1) // 2
    out: dict = {}
    for j, c in counts.items():
        jj = (j * half) % n
        out[jj] = out.get(jj, 0) + (-c if j % 2 else c)
    return n, out


class Cyclotomic:
    __slots__ = ("m", "num", "den")

    def __init__(self, m: int, num, den: int = 1, _normalized: bool = False):
        self.m = m
        if _normalized:
            self.num = num
            self.den = den
            return
        num = tuple(int(c) for c in num)
        if den < 0:
            num = tuple(-c for c in num)
            den = -den
        g = den
        for c in num:
            if g == 1:
                break
            g = gcd(g, c)
        if g > 1:
            num = tuple(c // g for c in num)
            den //= g
        self.num = num
        self.den = den

    # construction

    @classmethod
    def rational(cls, q) -> "Cyclotomic":
        q = Fraction(q)
        return cls(1, (q.numerator,), q.denominator, _normalized=True)

    @classmethod
    def from_exponents(cls, m: int, counts, den: int = 1) -> "Cyclotomic":
        """sum_j counts[j] zeta_m^j / den; counts is a dict or a sequence."""
        if not isinstance(counts, dict):
            counts = {j: c for j, c in enumerate(counts) if c}
        m, counts = _fold_twice_odd(m, counts)
        vec = [0] * m
        for j, c in counts.items():
            vec[j % m] += c
        return cls(m, _reduce(m, vec), den)

    @staticmethod
    def coerce(x) -> "Cyclotomic":
        if isinstance(x, Cyclotomic):
            return x
        if isinstance(x, (int, Fraction)):
            return Cyclotomic.rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to Cyclotomic")

    # structure

    def lift(self, M: int) -> "Cyclotomic":
        if M == self.m:
            return self
        if M % self.m:
            raise ValueError(f"{self.m} does not divide {M}")
        step = M // self.m
        vec = [0] * M
        for j, c in enumerate(self.num):
            if c:
                vec[j * step] = c
        return Cyclotomic(M, _reduce(M, vec), self.den, _normalized=True)

    def _common(self, other: "Cyclotomic"):
        if self.m == other.m:
            return self, other, self.m
        M = lcm(self.m, other.m)
        return self.lift(M), other.lift(M), M

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not rational")
        return Fraction(self.num[0], self.den)

    # field operations

    def __add__(self, other):
        try:
            other = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, M = self._common(other)
        d = a.den * b.den // gcd(a.den, b.den)
        fa, fb = d // a.den, d // b.den
        return Cyclotomic(M, [x * fa + y * fb for x, y in zip(a.num, b.num)], d)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.m, tuple(-c for c in self.num), self.den, _normalized=True)

    def __sub__(self, other):
        try:
            other = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Cyclotomic.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return Cyclotomic(self.m, [c * q.numerator for c in self.num], self.den * q.denominator)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        if other.is_rational():
            return self * Fraction(other.num[0], other.den)
        if self.is_rational():
            return other * Fraction(self.num[0], self.den)
        a, b, M = self._common(other)
        vec = [0] * (2 * M)
        bn = [(j, y) for j, y in enumerate(b.num) if y]
        for i, x in enumerate(a.num):
            if x:
                for j, y in bn:
                    vec[i + j] += x * y
        for i in range(M, 2 * M):
            if vec[i]:
                vec[i - M] += vec[i]
        del vec[M:]
        return Cyclotomic(M, _reduce(M, vec), a.den * b.den)

    __rmul__ = __mul__

    def galois(self, k: int) -> "Cyclotomic":
        """Image under zeta -> zeta^k, gcd(k, m) = 1."""
        m = self.m
        vec = [0] * m
        for j, c in enumerate(self.num):
            if c:
                vec[(j * k) % m] += c
        return Cyclotomic(m, _reduce(m, vec), self.den, _normalized=True)

    def conj(self) -> "Cyclotomic":
        return self.galois(-1)

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise DivisionByZero("division by zero")
        if self.is_rational():
            return Cyclotomic.rational(1 / Fraction(self.num[0], self.den))
        # invert the representative polynomial modulo Phi_m over Q
        m = self.m
        g, s, _ = flint.fmpq_poly(list(self.num)).xgcd(_phi_poly(m))
        fr = [Fraction(int(c.p), int(c.q)) for c in s.coeffs()]
        fr = [f / Fraction(int(g[0].p), int(g[0].q)) for f in fr]
        den = lcm(*(f.denominator for f in fr)) if fr else 1
        phi = _cyc_data(m)[0]
        num = [int(f * den) * self.den for f in fr] + [0] * (phi - len(fr))
        return Cyclotomic(m, num, den)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return self * (1 / Fraction(other))
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Cyclotomic.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = Cyclotomic.rational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def abs2(self) -> "Cyclotomic":
        return self * self.conj()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        if self.den != other.den:
            return False
        a, b, _ = self._common(other)
        return a.num == b.num

    def __hash__(self):
        w = _trace_weights(self.m)
        return hash(sum((c * t for c, t in zip(self.num, w) if c), Fraction(0)) / self.den)

    def __bool__(self):
        return not self.is_zero()

    # embeddings and text

    def to_complex(self, prec: int = 53):
        """Value under zeta_m -> exp(2 pi i/m).  prec <= 53 gives a Python complex."""
        if prec <= 53:
            from cmath import exp, pi
            tot = sum(c * exp(2j * pi * j / self.m) for j, c in enumerate(self.num) if c)
            return complex(tot) / self.den
        with mpmath.workprec(prec + 16):
            tot = mpmath.mpc(0)
            for j, c in enumerate(self.num):
                if c:
                    tot += c * mpmath.expjpi(mpmath.mpf(2 * j) / self.m)
            return tot / self.den

    def __complex__(self):
        return self.to_complex()

    def terms(self):
        """Nonzero (Fraction coefficient, Fraction exponent) pairs."""
        for j, c in enumerate(self.num):
            if c:
                yield Fraction(c, self.den), Fraction(j, self.m)

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for c, q in self.terms():
            parts.append(str(c) if q == 0 else f"{c} * z({q.numerator}/{q.denominator})")
        return " + ".join(parts)

    def __repr__(self):
        return f"Cyclotomic({self})"

    @classmethod
    def parse(cls, text: str) -> "Cyclotomic":
        """Inverse of ``str``; also accepts bare rationals as terms."""
        text = text.strip()
        if not text:
            raise ParseError("empty cyclotomic literal")
        out = cls.rational(0)
        for part in _split_terms(text):
            mt = _TERM.fullmatch(part)
            if mt:
                c = Fraction(mt.group(1).replace(" ", ""))
                q = Fraction(int(mt.group(2)), int(mt.group(3)))
                out = out + e_frac(q) * c
                continue
            try:
                out = out + Fraction(part.replace(" ", ""))
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad term {part!r}") from None
        return out


_TERM = re.compile(r"\s*([-+]?\s*\d+(?:/\d+)?)\s*\*\s*z\(\s*(-?\d+)\s*/\s*(\d+)\s*\)\s*")


def _split_terms(text: str):
    depth = 0
    cur = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "+" and depth == 0 and "".join(cur).strip():
            yield "".join(cur)
            cur = []
            continue
        cur.append(ch)
    if "".join(cur).strip():
        yield "".join(cur)


ZERO = Cyclotomic.rational(0)
ONE = Cyclotomic.rational(1)


def cyc(x) -> Cyclotomic:
    return Cyclotomic.coerce(x)


def e_frac(q) -> Cyclotomic:
    """e(q) = exp(2 pi i q) for rational q."""
    q = Fraction(q)
    m = q.denominator
    return Cyclotomic.from_exponents(m, {q.numerator % m: 1})


@lru_cache(maxsize=None)
def _sqrt_prime(p: int) -> Cyclotomic:
    if p == 2:
        return e_frac(Fraction(1, 8)) + e_frac(Fraction(-1, 8))
    g = Cyclotomic.from_exponents(p, {a: legendre(a, p) for a in range(1, p)})
    # g = epsilon_p sqrt(p)
    return g if p % 4 == 1 else g * e_frac(Fraction(-1, 4))


@lru_cache(maxsize=None)
def sqrt_nat(n: int) -> Cyclotomic:
    """The positive square root of a natural number, as a cyclotomic element."""
    if n < 0:
        raise ValueError("sqrt_nat needs n >= 0")
    if n == 0:
        return ZERO
    out = ONE
    square = 1
    for p, e in factorint(n).items():
        square *= p ** (e // 2)
        if e % 2:
            out = out * _sqrt_prime(p)
    return out * square


def to_complex(a, prec: int = 53):
    return Cyclotomic.coerce(a).to_complex(prec)
