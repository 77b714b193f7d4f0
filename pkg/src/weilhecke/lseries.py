"""Dirichlet series attached to Hecke eigenforms and their Euler products.

For an eigenform f with T(p^2) eigenvalues lambda_p, the (lam, t) series is
L(s) = sum_n a(n lam, n^2 t) n^(-s).  Locally at p one has
H_n(x) = sum_m a(p^m n lam, (p^m n)^2 t) x^m and H_n P = a(n lam, n^2 t) R
with the polynomials R, P returned by the euler_factor functions; x stands
for p^(-s).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath

from .arith import legendre_of_rational, p_divides, primerange
from .cyclotomic import ONE, ZERO, Cyclotomic, cyc, e_frac, sqrt_nat
from .errors import (AllCoefficientsZero, BadResidue, DomainError, EvenPrime, IsotropicModule,
                     LevelNotCoprime, NotIsotropic, NotSplit, TruncationExceeded)
from .expansions import FourierExpansion
from .gauss import K_Lp, chi_Df, epsilon, gauss_quotient, p_power_half
from .hecke import _p_pow, eigenvalue_extract, hecke
from .quadratic import (Lattice, discriminant_form, is_anisotropic, jordan_counts,
                        orbit_count_norm, p_component, short_vectors)
from .series import XSeries


def _check_residue(f: FourierExpansion, lam, t):
    t = Fraction(t)
    if (t - f.module.q(lam)).denominator != 1:
        raise BadResidue(f"t = {t} is not q({lam}) mod 1")
    return t


def series_coeffs(f: FourierExpansion, lam, t, N: int = 1, n_cut: int = 10) -> list[tuple[int, Cyclotomic]]:
    """[(n, a(n lam, n^2 t))] for 1 <= n <= n_cut with gcd(n, N) = 1."""
    t = _check_residue(f, lam, t)
    if n_cut * n_cut * t > f.n_max:
        raise TruncationExceeded(f"needs coefficients up to {n_cut * n_cut * t}")
    D = f.module
    return [(n, f.coeff(D.scale(n, lam), n * n * t)) for n in range(1, n_cut + 1) if gcd(n, N) == 1]


def sublattice_series(f: FourierExpansion, L1: Lattice, L2: Lattice, eta, norm_cut, t=1):
    """Terms (q(l), l, a(l + eta, t q(l))) for nonzero l in L1' with q(l) <= norm_cut.

    f must live on the discriminant form of L1 + L2 (orthogonal sum) and eta
    must be isotropic in L2'/L2.
    """
    L = L1.direct_sum(L2)
    D = discriminant_form(L)
    if not f.module.same_as(D):
        raise NotSplit("expansion does not live on D(L1 + L2)")
    D1, D2 = discriminant_form(L1), discriminant_form(L2)
    eta = D2.normalize(eta)
    if D2.q(eta) != 0:
        raise NotIsotropic(f"q(eta) = {D2.q(eta)}")
    eta_vec = D2.lift(eta)
    t = Fraction(t)
    norm_cut = Fraction(norm_cut)
    out = []
    for lam1 in D1.elements:
        for x, qx in short_vectors(L1, D1.lift(lam1), norm_cut):
            if qx == 0:
                continue
            elem = D.project(tuple(x) + tuple(eta_vec))
            n = t * qx
            a = f.coeff(elem, n) if n <= f.n_max else None
            if a is None:
                raise TruncationExceeded(f"needs coefficient at {n}")
            out.append((qx, x, a))
    out.sort(key=lambda r: (r[0], r[1]))
    return out


def _weight_pow(p: int, k2: int, shift2: int) -> Cyclotomic:
    """p^((k2 + shift2) / 2)."""
    return _p_pow(p, k2 + shift2)


def euler_factor_good(f: FourierExpansion, p: int, lam, t, lambda_p) -> tuple[XSeries, XSeries]:
    """(R, P) at a prime p not dividing the level."""
    D = f.module
    if D.level % p == 0:
        raise LevelNotCoprime(f"{p} divides the level")
    t = _check_residue(f, lam, t)
    lambda_p = cyc(lambda_p)
    k2 = f.k2
    pk1 = _weight_pow(p, k2, -2)      # p^(k-1)
    p2k2 = _weight_pow(p, 2 * k2, -4)  # p^(2k-2)
    if D.sig8 % 2 == 0:
        gq = gauss_quotient(D, p)
        r1 = ZERO if p_divides(t, p) else gq * pk1
        R = XSeries.poly([ONE, r1])
        P = XSeries.poly([ONE, -(lambda_p - (1 - Fraction(1, p)) * gq * pk1), p2k2])
    else:
        if p == 2:
            raise EvenPrime("odd-signature factor needs odd p")
        r1 = -chi_Df(D, p) * legendre_of_rational(-t, p) * pk1 / sqrt_nat(p)
        R = XSeries.poly([ONE, r1])
        P = XSeries.poly([ONE, -lambda_p, p2k2])
    return R, P


def euler_factor_bad(f: FourierExpansion, L: Lattice, p: int, lam, t, lambda_p,
                     x2_sign: int = -1) -> tuple[XSeries, XSeries]:
    """(R, P) at an odd prime p with anisotropic p-part.

    ``x2_sign`` is the sign of the C(lam_p) p^(2k-2) x^2 term of R.
    """
    if p == 2:
        raise EvenPrime("bad factor needs odd p")
    D = f.module
    t = _check_residue(f, lam, t)
    lambda_p = cyc(lambda_p)
    Dp = p_component(D, p)
    if not is_anisotropic(Dp):
        raise IsotropicModule("p-part of the module is isotropic")
    lam_p = Dp.project(D.normalize(lam))
    C = orbit_count_norm(Dp, lam_p)
    K = K_Lp(L, p)
    R_exp = jordan_counts(L, p, 1)["R"] if L.rank else 0
    k2 = f.k2
    pk1 = _weight_pow(p, k2, -2)
    p2k2 = _weight_pow(p, 2 * k2, -4)
    nonzero = any(lam_p)
    if R_exp % 2 == 0:
        case = (1 - Fraction(1, p)) if nonzero else (0 if p_divides(t, p) else 1)
        case = cyc(case)
    else:
        case = ZERO if nonzero else -legendre_of_rational(-t, p) * epsilon(p) / sqrt_nat(p)
    R = XSeries.poly([ONE, K * case * pk1, p2k2 * (x2_sign * C)])
    corr = (1 - Fraction(1, p)) * K * pk1 if R_exp % 2 == 0 else ZERO
    P = XSeries.poly([ONE, -(lambda_p - corr), p2k2])
    return R, P


def hn_series(f: FourierExpansion, p: int, lam, t, n: int, order: int) -> XSeries:
    D = f.module
    t = Fraction(t)
    cs = []
    for m in range(order + 1):
        j = p ** m * n
        idx = j * j * t
        if idx > f.n_max:
            raise TruncationExceeded(f"needs coefficient at {idx}")
        cs.append(f.coeff(D.scale(j, lam), idx))
    return XSeries(cs, order + 1)


def hn_identity_check(f: FourierExpansion, p: int, lam, t, n: int, order: int,
                      R: XSeries, P: XSeries) -> dict:
    """H_n P = a(n lam, n^2 t) R through x^order."""
    _check_residue(f, lam, t)
    Hn = hn_series(f, p, lam, t, n, order)
    if all(c.is_zero() for c in Hn.coeffs):
        raise AllCoefficientsZero("H_n vanishes through the requested order")
    lhs = (Hn * P).truncate(order + 1)
    rhs = (R * Hn[0]).truncate(order + 1)
    return {"ok": lhs.equal_to(rhs, order), "lhs": lhs, "rhs": rhs, "H": Hn}


def certified_eigenvalues(f: FourierExpansion, primes, formula: str = "even", L: Lattice | None = None,
                          max_index: int = 60) -> dict:
    """{p: EigenReport} using the Hecke image on a truncation of f."""
    out = {}
    for p in primes:
        bound = Fraction(p * p * max_index)
        g = hecke(f.truncate(bound) if bound < f.n_max else f, p, formula, L)
        out[p] = eigenvalue_extract(f, g)
    return out


@dataclass
class ProductReport:
    series: complex
    product: complex
    gap: float
    tail_diag: float
    primes: list
    n_cut: int
    certified: bool

    def to_json(self) -> dict:
        return {"series": [self.series.real, self.series.imag],
                "product": [self.product.real, self.product.imag],
                "gap": self.gap, "tail_diag": self.tail_diag,
                "primes": self.primes, "n_cut": self.n_cut, "certified": self.certified}


def product_vs_series(f: FourierExpansion, lam, t, s, p_max: int, n_cut: int, eigen: dict,
                      prec: int = 128) -> ProductReport:
    """Compare the truncated series with the truncated Euler product at real s.

    Only primes not dividing the level enter; ``eigen`` maps p to an
    EigenReport or an eigenvalue.
    """
    k = Fraction(f.k2, 2)
    s = Fraction(s)
    if s <= k + 1:
        raise DomainError(f"s = {s} is not beyond k + 1 = {k + 1}")
    t = _check_residue(f, lam, t)
    D = f.module
    N = D.level
    with mpmath.workprec(prec):
        ms = mpmath.mpf(s.numerator) / s.denominator
        series = mpmath.mpc(0)
        for n, a in series_coeffs(f, lam, t, N, n_cut):
            if not a.is_zero():
                series += a.to_complex(prec) * mpmath.power(n, -ms)
        prod = f.coeff(lam, t).to_complex(prec)
        tail = mpmath.mpf(0)
        primes = [p for p in primerange(2, p_max + 1) if N % p]
        certified = True
        for p in primes:
            rep = eigen[p]
            if hasattr(rep, "eigenvalue"):
                certified = certified and rep.certified
                lp = rep.eigenvalue
            else:
                lp = cyc(rep)
            R, P = euler_factor_good(f, p, lam, t, lp)
            x = mpmath.power(p, -ms)
            rv = sum((c.to_complex(prec) * x ** i for i, c in enumerate(R.coeffs)), mpmath.mpc(0))
            pv = sum((c.to_complex(prec) * x ** i for i, c in enumerate(P.coeffs)), mpmath.mpc(0))
            q = rv / pv
            prod *= q
            tail += abs(q - 1)
        gap = abs(series - prod) / abs(series) if series != 0 else abs(prod)
        return ProductReport(complex(series), complex(prod), float(gap), float(tail), primes, n_cut, certified)
