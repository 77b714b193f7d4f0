"""Hecke operators T(p^2) on vector-valued modular forms for the Weil representation.

``hecke_direct`` evaluates the operator from its p(p+1) right coset
representatives: each representative slashes the components and acts on
the group algebra.  The closed formulas are separate routes and are tested
against it.

The operator is normalized as
    f | T(m^2) = m^(k-2) sum_i sum_lam (f_lam |_k delta_i) (e_lam | delta_i).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .arith import legendre, legendre_of_rational, p_divides
from .cyclotomic import ONE, ZERO, Cyclotomic, e_frac, sqrt_nat
from .errors import (DomainError, EvenPrime, EvenPrimeForBeta, EvenSignature, LevelNotCoprime,
                     ModuleMismatch, OddSignature, TruncationExceeded, ZeroForm)
from .expansions import FourierExpansion
from .gauss import G_Lp, K_Lp, chi_Df, epsilon, gauss_quotient, legendre_power, p_power_half
from .quadratic import FiniteQuadraticModule, Lattice, discriminant_form, jordan_counts


@dataclass(frozen=True)
class CosetRep:
    """One of g(p^2) = diag(p^2, 1), beta_h = [[p, h], [0, p]], gamma_b = [[1, b], [0, p^2]]."""

    kind: str
    p: int
    param: int = 0

    @property
    def matrix(self):
        p = self.p
        if self.kind == "g":
            return ((p * p, 0), (0, 1))
        if self.kind == "beta":
            return ((p, self.param), (0, p))
        return ((1, self.param), (0, p * p))


def coset_reps(p: int) -> list[CosetRep]:
    reps = [CosetRep("g", p)]
    reps += [CosetRep("beta", p, h) for h in range(1, p)]
    reps += [CosetRep("gamma", p, b) for b in range(p * p)]
    return reps


def _lattice_for(D: FiniteQuadraticModule, L: Lattice | None) -> Lattice:
    if L is None:
        if D.is_trivial():
            return Lattice.trivial()
        lat = getattr(D, "lattice", None)
        if lat is None:
            raise DomainError("a lattice with this discriminant form is required")
        return lat
    if not discriminant_form(L).same_as(D):
        raise ModuleMismatch("lattice does not have this discriminant form")
    return L


def _pth_root_lift(D, L: Lattice, lam, p: int):
    """Some l in L' whose class nu satisfies p nu = lam."""
    DL = discriminant_form(L)
    nus = DL.preimages(lam, p)
    return DL.lift(nus[0])


def act_rep(D: FiniteQuadraticModule, rep: CosetRep, lam, L: Lattice | None = None) -> dict:
    """e_lam | rep in the group algebra, as {element: coefficient}."""
    p = rep.p
    lam = D.normalize(lam)
    if rep.kind == "g":
        return {D.scale(p, lam): ONE}
    if rep.kind == "gamma":
        out = {}
        for nu in D.preimages(lam, p):
            out[nu] = e_frac(-rep.param * D.q(nu))
        return out
    if p == 2 and not D.is_trivial():
        raise EvenPrimeForBeta("beta_h action needs an odd prime")
    L = _lattice_for(D, L)
    if not D.is_multiple(lam, p):
        return {}
    h = rep.param
    ell = _pth_root_lift(D, L, lam, p)
    val = e_frac(-h * p * L.q(ell)) * G_Lp(L, p, 1, -h) / p_power_half(p, L.rank)
    return {lam: val} if not val.is_zero() else {}


def creutzig_crosscheck(D: FiniteQuadraticModule, L: Lattice, p: int, h: int, lam) -> bool:
    """Compare the beta_h action with the sum over the rescaled module D(p) = L(p)'/L(p)."""
    if p == 2:
        raise EvenPrimeForBeta("needs an odd prime")
    L = _lattice_for(D, L)
    DL = discriminant_form(L)
    Lp = L.rescale(p)
    Dp = discriminant_form(Lp)
    lam = D.normalize(lam)
    acc = ZERO
    for delta in Dp.elements:
        x = Dp.lift(delta)
        if DL.project(tuple(p * c for c in x)) == lam:
            acc = acc + e_frac(-h * Dp.q(delta))
    acc = acc / p_power_half(p, L.rank)
    got = act_rep(D, CosetRep("beta", p, h), lam, L).get(lam, ZERO)
    return acc == got


def g_action_matrix(D: FiniteQuadraticModule, m: int):
    """Integer matrix of e_lam -> e_{m lam}; column lam."""
    n = len(D)
    M = [[0] * n for _ in range(n)]
    for j, lam in enumerate(D.elements):
        M[D.index(D.scale(m, lam))][j] += 1
    return M


def gstar_action_matrix(D: FiniteQuadraticModule, m: int):
    """Integer matrix of e_lam -> sum_{m sigma = lam} e_sigma."""
    n = len(D)
    M = [[0] * n for _ in range(n)]
    for j, lam in enumerate(D.elements):
        for s in D.preimages(lam, m):
            M[D.index(s)][j] += 1
    return M


def gstar_adjointness(D: FiniteQuadraticModule, m: int) -> bool:
    """<v|g(m^2), w> = <v, w|g*(m^2)> on basis pairs, i.e. the matrices are transposes."""
    G = g_action_matrix(D, m)
    Gs = gstar_action_matrix(D, m)
    n = len(D)
    return all(G[i][j] == Gs[j][i] for i in range(n) for j in range(n))


def torsion_sum_check(D: FiniteQuadraticModule, m: int) -> bool:
    """e_lam | g(m^2) | g*(m^2) = sum_{sigma in D[m]} e_{lam + sigma}."""
    G = g_action_matrix(D, m)
    Gs = gstar_action_matrix(D, m)
    n = len(D)
    tors = D.torsion(m)
    for j, lam in enumerate(D.elements):
        col = [sum(Gs[i][t] * G[t][j] for t in range(n)) for i in range(n)]
        want = [0] * n
        for s in tors:
            want[D.index(D.add(lam, s))] += 1
        if col != want:
            return False
    return True


# ---------------------------------------------------------------------------


def _out_expansion(f: FourierExpansion, p: int, coeffs: dict) -> FourierExpansion:
    return FourierExpansion(f.module, f.k2, f.n_max / (p * p), coeffs, check=False)


def _p_pow(p: int, twice_exp: int) -> Cyclotomic:
    """p^(twice_exp/2), negative exponents allowed."""
    if twice_exp >= 0:
        return p_power_half(p, twice_exp)
    return 1 / p_power_half(p, -twice_exp)


def hecke_direct(f: FourierExpansion, p: int, L: Lattice | None = None) -> FourierExpansion:
    """f | T(p^2) summed over the right coset representatives."""
    D = f.module
    k2 = f.k2
    out_max = f.n_max / (p * p)
    acc: dict = {}

    def add(key, val):
        acc[key] = acc.get(key, ZERO) + val

    pref = _p_pow(p, k2 - 4)  # p^(k-2)
    # g(p^2): f_lam(p^2 tau) p^k
    g_fac = pref * _p_pow(p, k2)
    for (lam, n), a in f.coeffs.items():
        if p * p * n <= out_max:
            for mu, c in act_rep(D, CosetRep("g", p), lam).items():
                add((mu, p * p * n), g_fac * a * c)
    # beta_h: f_lam(tau + h/p), det^(k/2) phi^(-2k) = 1
    if p != 2 or D.is_trivial():
        for h in range(1, p):
            rep = CosetRep("beta", p, h)
            for lam in D.elements:
                act = act_rep(D, rep, lam, L)
                if not act:
                    continue
                for (l2, n), a in f.coeffs.items():
                    if l2 == lam and n <= out_max:
                        for mu, c in act.items():
                            add((mu, n), pref * a * e_frac(n * h / p) * c)
    else:
        raise EvenPrimeForBeta("beta_h action needs an odd prime")
    # gamma_b: p^(-k) f_lam((tau + b)/p^2)
    c_fac = pref * _p_pow(p, -k2)
    for b in range(p * p):
        rep = CosetRep("gamma", p, b)
        acts = {lam: act_rep(D, rep, lam) for lam in D.elements}
        for (lam, n), a in f.coeffs.items():
            m = n / (p * p)
            if m > out_max:
                continue
            for nu, c in acts[lam].items():
                add((nu, m), c_fac * a * e_frac(n * b / (p * p)) * c)
    coeffs = {}
    for (lam, n), v in acc.items():
        if v.is_zero():
            continue
        if (n - D.q(lam)).denominator != 1:
            raise AssertionError(f"nonzero coefficient off the residue class at {(lam, n)}")
        coeffs[(lam, n)] = v
    return _out_expansion(f, p, coeffs)


def _root(D, lam, p):
    """lam / p for p prime to |D|."""
    e = D.exponent
    return D.scale(pow(p, -1, e), lam) if e > 1 else lam


def _check_good(f: FourierExpansion, p: int):
    if f.module.level % p == 0:
        raise LevelNotCoprime(f"{p} divides the level {f.module.level}")


def hecke_closed_even(f: FourierExpansion, p: int) -> FourierExpansion:
    """Closed formula for p prime to the level and even signature."""
    D = f.module
    _check_good(f, p)
    if D.sig8 % 2:
        raise OddSignature("even-signature formula needs even signature")
    k2 = f.k2
    gq = gauss_quotient(D, p)
    big = _p_pow(p, 2 * k2 - 4)
    mid = gq * _p_pow(p, k2 - 4)
    coeffs = {}
    for lam, n in f.indices(f.n_max / (p * p)):
        v = big * f.coeff(_root(D, lam, p), n / (p * p))
        v = v + mid * ((p if p_divides(n, p) else 0) - 1) * f.coeff(lam, n)
        v = v + f.coeff(D.scale(p, lam), p * p * n)
        if not v.is_zero():
            coeffs[(lam, n)] = v
    return _out_expansion(f, p, coeffs)


def hecke_closed_odd(f: FourierExpansion, p: int) -> FourierExpansion:
    """Closed formula for odd p prime to the level and odd signature."""
    D = f.module
    _check_good(f, p)
    if p == 2:
        raise EvenPrime("p must be odd")
    if D.sig8 % 2 == 0:
        raise EvenSignature("odd-signature formula needs odd signature")
    k2 = f.k2
    chi = chi_Df(D, p)
    big = _p_pow(p, 2 * k2 - 4)
    mid = chi * _p_pow(p, k2 - 3)  # p^(k - 3/2)
    coeffs = {}
    for lam, n in f.indices(f.n_max / (p * p)):
        v = big * f.coeff(_root(D, lam, p), n / (p * p))
        v = v + mid * legendre_of_rational(-n, p) * f.coeff(lam, n)
        v = v + f.coeff(D.scale(p, lam), p * p * n)
        if not v.is_zero():
            coeffs[(lam, n)] = v
    return _out_expansion(f, p, coeffs)


def _char_sum(p: int, chi, x: Fraction) -> Cyclotomic:
    """sum_{h mod p} chi(h) e(h x / p) for rational x."""
    out = ZERO
    for h in range(1, p):
        c = chi(h, p)
        if c:
            out = out + e_frac(h * x / p) * c
    return out


def hecke_closed_bad(f: FourierExpansion, p: int, L: Lattice | None = None,
                     phase_variant: str = "q_of_p_ell") -> FourierExpansion:
    """Closed formula valid for any odd p, including p dividing the level.

    phase_variant selects the argument of the middle character sum:
    "q_of_p_ell" uses n - q(p l), "p_times_q_ell" uses n - p q(l).
    """
    D = f.module
    if p == 2:
        raise EvenPrime("p must be odd")
    L = _lattice_for(D, L)
    DL = discriminant_form(L)
    k2 = f.k2
    K = K_Lp(L, p)
    R = jordan_counts(L, p, 1)["R"] if L.rank else 0
    chi = legendre_power(R, negated=True)
    big = _p_pow(p, 2 * k2 - 4)
    mid = _p_pow(p, k2 - 4) * K
    multiples = set(D.multiples(p))
    coeffs = {}
    for lam, n in f.indices(f.n_max / (p * p)):
        v = ZERO
        if lam in multiples:
            for nu in D.preimages(lam, p):
                v = v + big * f.coeff(nu, n / (p * p))
            ell = DL.lift(DL.preimages(lam, p)[0])
            if phase_variant == "q_of_p_ell":
                arg = n - L.q(tuple(p * c for c in ell))
            elif phase_variant == "p_times_q_ell":
                arg = n - p * L.q(ell)
            else:
                raise ValueError(phase_variant)
            a = f.coeff(lam, n)
            if not a.is_zero():
                v = v + mid * _char_sum(p, chi, Fraction(arg)) * a
        v = v + f.coeff(D.scale(p, lam), p * p * n)
        if not v.is_zero():
            coeffs[(lam, n)] = v
    return _out_expansion(f, p, coeffs)


def hecke(f: FourierExpansion, p: int, formula: str = "direct", L: Lattice | None = None,
          **kw) -> FourierExpansion:
    if formula == "direct":
        return hecke_direct(f, p, L)
    if formula == "even":
        return hecke_closed_even(f, p)
    if formula == "odd":
        return hecke_closed_odd(f, p)
    if formula == "bad":
        return hecke_closed_bad(f, p, L, **kw)
    raise ValueError(f"unknown formula {formula!r}")


# ---------------------------------------------------------------------------


@dataclass
class EigenReport:
    eigenvalue: Cyclotomic
    index: tuple
    checked: int
    mismatches: list = field(default_factory=list)
    residual: float = 0.0

    @property
    def certified(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        z = self.eigenvalue.to_complex()
        return {"eigenvalue": str(self.eigenvalue), "eigenvalue_float": [z.real, z.imag],
                "index": [list(self.index[0]), str(self.index[1])], "checked": self.checked,
                "residual": self.residual, "certified": self.certified}


def eigenvalue_extract(f: FourierExpansion, g: FourierExpansion, bound=None) -> EigenReport:
    """lambda = b/a at the first nonzero a(lam, n), and the residual of g - lambda f."""
    bound = g.n_max if bound is None else min(Fraction(bound), g.n_max)
    idx = f.indices(bound)
    first = next(((l, n) for l, n in idx if not f.coeff(l, n).is_zero()), None)
    if first is None:
        raise ZeroForm("no nonzero coefficient within the truncation")
    lam = g.coeff(*first) / f.coeff(*first)
    bad = []
    res = 0.0
    for l, n in idx:
        d = g.coeff(l, n) - lam * f.coeff(l, n)
        if not d.is_zero():
            bad.append((l, n))
            res = max(res, abs(d.to_complex()))
    return EigenReport(lam, first, len(idx), bad, res)


def kohnen_bound_check(eigenvalue: Cyclotomic, p: int, k2: int, torsion_size: int) -> dict:
    """|lambda_p| < p^(k-2) p (p+1) |D[p]|, compared through squares."""
    bound_sq = Fraction(p) ** (k2 - 4) * (p * (p + 1) * torsion_size) ** 2
    a2 = eigenvalue.abs2()
    if a2.is_rational():
        val = a2.to_fraction()
        ok = val < bound_sq
        exact = True
    else:
        with mpmath.workprec(256):
            val = mpmath.re(a2.to_complex(256))
            ok = bool(val < mpmath.mpf(bound_sq.numerator) / bound_sq.denominator - mpmath.mpf(2) ** -200)
        exact = False
    return {"abs2": str(val), "bound2": str(bound_sq), "strict": bool(ok), "exact": exact}
