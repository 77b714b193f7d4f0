"""Vector-valued Kloosterman sums for the Weil representation and their zeta series."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath

from .cyclotomic import ZERO, Cyclotomic, e_frac
from .errors import BadResidueClass, DomainError, ModuleMismatch, NotCoprime
from .quadratic import FiniteQuadraticModule
from .weil import MetaplecticElement, WeilRep


def complete_to_sl2(c: int, d: int) -> tuple[int, int]:
    """(a, b) with a d - b c = 1, choosing the smallest |a| (ties go to a >= 0)."""
    if c == 0:
        raise DomainError("c must be nonzero")
    if gcd(c, d) != 1:
        raise NotCoprime(f"gcd({c}, {d}) != 1")
    M = abs(c)
    a = pow(d, -1, M) if M > 1 else 0
    if 2 * a > M:
        a -= M
    b = (a * d - 1) // c
    return a, b


@dataclass(frozen=True)
class KloostermanQuery:
    """Arguments of H_c; the residue conditions make the d-sum well defined."""
    module: FiniteQuadraticModule
    lam: tuple
    m: Fraction
    mu: tuple
    n: Fraction
    c: int
    k2: int

    def __post_init__(self):
        D = self.module
        object.__setattr__(self, "lam", D.normalize(self.lam))
        object.__setattr__(self, "mu", D.normalize(self.mu))
        object.__setattr__(self, "m", Fraction(self.m))
        object.__setattr__(self, "n", Fraction(self.n))
        if self.c == 0:
            raise DomainError("c must be nonzero")
        if (self.m - D.q(self.lam)).denominator != 1:
            raise BadResidueClass(f"m = {self.m} is not in q(lam) + Z")
        if (self.n - D.q(self.mu)).denominator != 1:
            raise BadResidueClass(f"n = {self.n} is not in q(mu) + Z")


def _residues(c: int):
    M = abs(c)
    if M == 1:
        return [0]
    return [d for d in range(M) if gcd(d, M) == 1]


def H_c(W: WeilRep, q: KloostermanQuery, shift: int = 0, d_shift: int = 0) -> Cyclotomic:
    """e(-sgn(c) k/4) / |c| sum_d conj(rho_{mu,lam}(gamma)) e((a m + n d)/c).

    rho_{mu,lam}(gamma) = <rho(gamma) e_mu, e_lam> with gamma = ((a,b),(c,d))
    on the principal branch.  ``shift`` moves the completion to
    (a + shift c, b + shift d) and ``d_shift`` moves each residue d to
    d + d_shift c; the value depends on neither.
    """
    if W.module is not q.module and not W.module.same_as(q.module):
        raise ModuleMismatch("query and representation use different modules")
    c = q.c
    i_lam, i_mu = W.module.index(q.lam), W.module.index(q.mu)
    acc = ZERO
    for d0 in _residues(c):
        d = d0 + d_shift * c
        a, b = complete_to_sl2(c, d)
        a, b = a + shift * c, b + shift * d
        coeff = W.rho(MetaplecticElement(a, b, c, d, 1))[i_lam][i_mu]
        if coeff.is_zero():
            continue
        acc = acc + coeff.conj() * e_frac((a * q.m + q.n * d) / c)
    sign = 1 if c > 0 else -1
    return acc * e_frac(Fraction(-sign * q.k2, 8)) / abs(c)


def classical_kloosterman(m: int, n: int, c: int) -> Cyclotomic:
    """S(m, n; c) = sum over x y = 1 mod c of e((m x + n y)/c), by double enumeration."""
    M = abs(c)
    acc: dict = {}
    for x in range(M):
        for y in range(M):
            if (x * y - 1) % M == 0:
                j = (m * x + n * y) % M
                acc[j] = acc.get(j, 0) + 1
    sign_c = c // M
    # e(j/c) with c < 0 is e(-j/|c|)
    return Cyclotomic.from_exponents(M, {(sign_c * j) % M: v for j, v in acc.items()})


def kloosterman_zeta(W: WeilRep, lam, mu, n, k2: int, s, c_cut: int, weighting: str = "abs_c",
                     prec: int = 64) -> dict:
    """sum_{0 < |c| <= c_cut} w(c)^(1 - k - 2s) H_c(lam, 0, mu, n), w(c) = |c| or |2c|.

    The tail bound is sum_{|c| > c_cut} w(c)^(1 - k - 2 Re s), valid because
    |H_c| <= phi(|c|)/|c| <= 1 (unitarity).
    """
    if weighting not in ("abs_c", "abs_2c"):
        raise DomainError(f"unknown weighting {weighting!r}")
    if c_cut < 0:
        raise DomainError("c_cut must be nonnegative")
    D = W.module
    with mpmath.workprec(prec):
        s_mp = mpmath.mpc(s) if isinstance(s, complex) else mpmath.mpf(Fraction(s).numerator) / Fraction(s).denominator
        expo = mpmath.mpf(k2) / 2 + 2 * s_mp - 1
        sigma = mpmath.re(expo)
        if sigma <= 1:
            raise DomainError("no absolute convergence: need k + 2 Re(s) > 2")
        total = mpmath.mpc(0)
        for c in range(1, c_cut + 1):
            w = c if weighting == "abs_c" else 2 * c
            for sc in (c, -c):
                h = H_c(W, KloostermanQuery(D, lam, 0, mu, n, sc, k2))
                if not h.is_zero():
                    total += h.to_complex(prec) * mpmath.power(w, -expo)
        tail = 2 * mpmath.zeta(sigma, c_cut + 1)
        if weighting == "abs_2c":
            tail *= mpmath.power(2, -sigma)
        return {"value": complex(total), "tail_bound": float(tail), "c_cut": c_cut, "weighting": weighting}
