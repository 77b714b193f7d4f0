"""Quadratic Gauss sums of lattices and discriminant forms, and character sums mod p^n."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .arith import kronecker, legendre, valuation
from .cyclotomic import ONE, ZERO, Cyclotomic, e_frac, sqrt_nat
from .errors import DomainError, TooLarge, ZeroDenominator
from .quadratic import FiniteQuadraticModule, Lattice, discriminant_form, jordan_counts

I = e_frac(Fraction(1, 4))


def epsilon(d: int) -> Cyclotomic:
    """epsilon_d: 1 if d = 1 mod 4, i if d = 3 mod 4."""
    if d % 2 == 0:
        raise DomainError("epsilon_d needs odd d")
    return ONE if d % 4 == 1 else I


def p_power_half(p: int, twice_exp: int) -> Cyclotomic:
    """p^(twice_exp / 2) as an exact element."""
    e, r = divmod(twice_exp, 2)
    out = Cyclotomic.rational(Fraction(p) ** e)
    return out * sqrt_nat(p) if r else out


def G_Lp(L: Lattice, p: int, n: int, h: int, limit: int = 4 * 10 ** 6) -> Cyclotomic:
    """sum over v in L/p^n L of e(h q(v) / p^n), by enumeration."""
    mod = p ** n
    m = L.rank
    if m == 0:
        return ONE
    if mod ** m > limit:
        raise TooLarge(f"{mod}^{m} vectors")
    grid = np.indices((mod,) * m).reshape(m, -1).astype(np.int64)
    g = np.array(L.gram, dtype=np.int64)
    qv = np.zeros(grid.shape[1], dtype=np.int64)
    for i in range(m):
        qv += (g[i, i] // 2) * grid[i] * grid[i] % mod
        for j in range(i + 1, m):
            qv += g[i, j] * grid[i] * grid[j] % mod
    vals, counts = np.unique((qv % mod) * (h % mod) % mod, return_counts=True)
    return Cyclotomic.from_exponents(mod, {int(v): int(c) for v, c in zip(vals, counts)})


@dataclass(frozen=True)
class Character:
    """A character mod p^n built from the Legendre symbol.

    kind is "trivial" (principal mod p^n) or "legendre"; ``power`` raises the
    Legendre symbol, and ``negated`` evaluates it at -k instead of k.
    """

    kind: str = "trivial"
    power: int = 1
    negated: bool = False

    def __call__(self, k: int, p: int) -> int:
        if k % p == 0:
            return 0
        if self.kind == "trivial":
            return 1
        s = legendre(-k if self.negated else k, p)
        return s ** (self.power % 2)

    def reduced(self, p: int) -> tuple[str, int]:
        """(basic kind, sign) with chi = sign * basic."""
        if self.kind == "trivial" or self.power % 2 == 0:
            return "trivial", 1
        return "legendre", (legendre(-1, p) if self.negated else 1)


TRIVIAL = Character("trivial")
LEGENDRE = Character("legendre")


def legendre_power(R: int, negated: bool = False) -> Character:
    return Character("legendre", R, negated)


def g_p_brute(p: int, n: int, chi: Character, h: int) -> Cyclotomic:
    mod = p ** n
    counts: dict = {}
    for k in range(mod):
        c = chi(k, p)
        if c:
            j = (h * k) % mod
            counts[j] = counts.get(j, 0) + c
    return Cyclotomic.from_exponents(mod, counts)


def g_p_closed(p: int, n: int, chi: Character, h: int) -> Cyclotomic:
    if p == 2:
        raise DomainError("closed forms need odd p")
    kind, sign = chi.reduced(p)
    v = valuation(h, p)
    if kind == "trivial":
        if v >= n:
            return Cyclotomic.rational(p ** (n - 1) * (p - 1))
        if v == n - 1:
            return Cyclotomic.rational(-(p ** (n - 1)))
        return ZERO
    if v != n - 1:
        return ZERO
    hp = h // p ** (n - 1)
    return p_power_half(p, 2 * n - 1) * epsilon(p) * (sign * legendre(hp, p))


def g_p(p: int, n: int, chi: Character, h: int, mode: str = "closed") -> Cyclotomic:
    """sum_{k mod p^n} chi(k) e(h k / p^n)."""
    if mode == "brute":
        return g_p_brute(p, n, chi, h)
    return g_p_closed(p, n, chi, h)


def twist_reduction_check(L: Lattice, p: int, n: int, h: int) -> dict:
    """G_{L,p}(n, h) against (h/p)^R G_{L,p}(n, 1)."""
    if h % p == 0:
        raise DomainError("h must be a unit mod p")
    R = jordan_counts(L, p, n)["R"]
    lhs = G_Lp(L, p, n, h)
    rhs = G_Lp(L, p, n, 1) * legendre(h, p) ** R
    return {"lhs": lhs, "rhs": rhs, "R": R, "ok": lhs == rhs}


def G_Lp_closed_product(L: Lattice, p: int, n: int) -> Cyclotomic:
    """Product formula for G_{L,p}(n, 1) read off the Jordan data, including the
    prefactor p^(n R^1).  Informational only: the prefactor does not match
    enumeration, see ``closed_product_report``.
    """
    data = jordan_counts(L, p, n)
    out = Cyclotomic.rational(p ** (n * jordan_counts(L, p, 1)["R"]))
    for v, k in data["basis"]:
        if k >= n:
            out = out * p ** n
            continue
        out = out * epsilon(p ** (n - k)) * p_power_half(p, n + k)
        qv = L.q(v)
        unit = qv.numerator // p ** int(valuation(qv, p)) * pow(qv.denominator, -1, p)
        out = out * legendre(unit, p) ** n
    return out


def closed_product_report(L: Lattice, p: int, n: int) -> dict:
    brute = G_Lp(L, p, n, 1)
    closed = G_Lp_closed_product(L, p, n)
    return {"brute": brute, "closed_product": closed, "ratio": closed / brute if brute else None,
            "agrees": brute == closed}


def G_Df(A: FiniteQuadraticModule, d: int) -> Cyclotomic:
    return A.gauss(d)


def gauss_quotient(A: FiniteQuadraticModule, d: int) -> Cyclotomic:
    """G(1) / G(d) for d coprime to the level."""
    if gcd(d, A.level) != 1:
        raise DomainError("d must be coprime to the level")
    den = A.gauss(d)
    if den.is_zero():
        raise ZeroDenominator(f"G({d}) = 0")
    return A.gauss(1) / den


def K_Lp(L: Lattice, p: int) -> Cyclotomic:
    """p^(-m/2) G_{L,p}(1, 1)."""
    return G_Lp(L, p, 1, 1) / p_power_half(p, L.rank)


def barnard_quotient_check(L: Lattice, p: int) -> dict:
    """G(1)/G(p) against p^(m/2) / conj(G_{L,p}(1,1)) and p^(-m/2) G_{L,p}(1,1) / |D[p]|."""
    A = discriminant_form(L)
    if p == 2 or A.level % p == 0:
        raise DomainError("need an odd prime not dividing the level")
    m = L.rank
    g = G_Lp(L, p, 1, 1)
    quotient = gauss_quotient(A, p)
    first = p_power_half(p, m) / g.conj()
    second = g / p_power_half(p, m) / len(A.torsion(p))
    return {"quotient": quotient, "via_conj": first, "via_torsion": second,
            "ok": quotient == first == second}


def barnard_general(L: Lattice, d: int, sign: int = -1) -> Cyclotomic:
    """sqrt|D| e(sig/8) d^(-m/2) sum_{v in L/dL} e(sign q(v)/d) for odd d coprime to the level."""
    A = discriminant_form(L)
    m = L.rank
    if m == 0:
        return ONE
    counts: dict = {}
    for v in itertools.product(range(d), repeat=m):
        j = (sign * (L.bilinear(v, v) // 2)) % d
        counts[j] = counts.get(j, 0) + 1
    s = Cyclotomic.from_exponents(d, counts)
    return sqrt_nat(len(A)) * e_frac(Fraction(A.sig8, 8)) * s / sqrt_nat(d ** m)


def chi_Df(A: FiniteQuadraticModule, p: int) -> Cyclotomic:
    """epsilon_p^(sig + (-1/|D|)) (p / (|D| 2^sig)) with Kronecker symbols."""
    size = len(A)
    sig = A.sig8
    e = sig + kronecker(-1, size)
    return epsilon(p) ** e * kronecker(p, size * 2 ** sig)


def gauss_table(p: int, n_max: int, chi: Character = TRIVIAL, mode: str = "closed") -> str:
    """CSV rows p, n, h, exact value, float value for 1 <= n <= n_max, 0 <= h < p^n."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "n", "h", "value_exact", "value_float"])
    for n in range(1, n_max + 1):
        for h in range(p ** n):
            v = g_p(p, n, chi, h, mode)
            z = v.to_complex()
            w.writerow([p, n, h, str(v), f"{z.real:.12g}{z.imag:+.12g}j"])
    return buf.getvalue()
