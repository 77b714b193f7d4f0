"""Truncated Fourier expansions of vector-valued modular forms.

A form f = sum_lam f_lam e_lam has f_lam = sum_n a(lam, n) q^n with
n = q(lam) mod 1.  Only coefficients with 0 <= n <= n_max are stored.
"""

from __future__ import annotations

import math
from collections import Counter
from functools import lru_cache
from fractions import Fraction

import gmpy2

from .cyclotomic import ZERO, Cyclotomic, cyc
from .errors import (BadResidue, ModuleMismatch, NotASublattice, TruncationExceeded,
                     WeightTooSmall)
from .quadratic import FiniteQuadraticModule, Lattice, discriminant_form, short_vectors


class FourierExpansion:
    def __init__(self, module: FiniteQuadraticModule, k2: int, n_max, coeffs: dict | None = None,
                 check: bool = True):
        self.module = module
        self.k2 = int(k2)
        self.n_max = Fraction(n_max)
        self.coeffs: dict = {}
        for (lam, n), c in (coeffs or {}).items():
            lam = module.normalize(lam)
            n = Fraction(n)
            c = cyc(c)
            if check:
                if (n - module.q(lam)).denominator != 1:
                    raise BadResidue(f"n = {n} is not q({lam}) mod 1")
                if n > self.n_max:
                    raise TruncationExceeded(f"n = {n} beyond n_max = {self.n_max}")
                if n < 0:
                    raise BadResidue("negative exponent in a holomorphic expansion")
            if not c.is_zero():
                self.coeffs[(lam, n)] = c

    @property
    def weight(self) -> Fraction:
        return Fraction(self.k2, 2)

    def coeff(self, lam, n, strict: bool = False) -> Cyclotomic:
        """a(lam, n); zero off the residue class unless ``strict``."""
        n = Fraction(n)
        if n > self.n_max:
            raise TruncationExceeded(f"n = {n} beyond n_max = {self.n_max}")
        lam = self.module.normalize(lam)
        if (n - self.module.q(lam)).denominator != 1:
            if strict:
                raise BadResidue(f"n = {n} is not q({lam}) mod 1")
            return ZERO
        return self.coeffs.get((lam, n), ZERO)

    __getitem__ = lambda self, key: self.coeff(*key)

    def indices(self, bound=None):
        """All (lam, n) with n = q(lam) mod 1 and 0 <= n <= bound, sorted by n."""
        bound = self.n_max if bound is None else Fraction(bound)
        out = []
        for lam, v in zip(self.module.elements, self.module.qvals):
            n = v
            while n <= bound:
                out.append((lam, n))
                n += 1
        out.sort(key=lambda t: (t[1], t[0]))
        return out

    def _check_compatible(self, other: "FourierExpansion"):
        if not self.module.same_as(other.module):
            raise ModuleMismatch("expansions live on different modules")

    def __add__(self, other: "FourierExpansion") -> "FourierExpansion":
        self._check_compatible(other)
        n_max = min(self.n_max, other.n_max)
        out = {k: v for k, v in self.coeffs.items() if k[1] <= n_max}
        for k, v in other.coeffs.items():
            if k[1] <= n_max:
                out[k] = out.get(k, ZERO) + v
        return FourierExpansion(self.module, self.k2, n_max, out, check=False)

    def scale(self, c) -> "FourierExpansion":
        c = cyc(c)
        return FourierExpansion(self.module, self.k2, self.n_max,
                                {k: v * c for k, v in self.coeffs.items()}, check=False)

    def __sub__(self, other):
        return self + other.scale(-1)

    def truncate(self, n_max) -> "FourierExpansion":
        n_max = Fraction(n_max)
        if n_max > self.n_max:
            raise TruncationExceeded("cannot extend a truncation")
        if n_max == self.n_max:
            return self
        return FourierExpansion(self.module, self.k2, n_max,
                                {k: v for k, v in self.coeffs.items() if k[1] <= n_max}, check=False)

    def equal_to(self, other: "FourierExpansion", bound=None) -> bool:
        self._check_compatible(other)
        bound = min(self.n_max, other.n_max) if bound is None else Fraction(bound)
        return all(self.coeff(l, n) == other.coeff(l, n) for l, n in self.indices(bound))

    def is_zero(self, bound=None) -> bool:
        bound = self.n_max if bound is None else Fraction(bound)
        return all(v.is_zero() for (l, n), v in self.coeffs.items() if n <= bound)

    def to_json(self) -> dict:
        """Exact coefficients with float companions; the lattice is kept when known."""
        coeffs = []
        for (l, n), c in sorted(self.coeffs.items(), key=lambda t: (t[0][1], t[0][0])):
            z = c.to_complex()
            coeffs.append({"lam": list(l), "n": f"{n.numerator}/{n.denominator}", "c": str(c),
                           "float": [z.real, z.imag]})
        out = {"module": self.module.to_json(), "k2": self.k2,
               "nmax": f"{self.n_max.numerator}/{self.n_max.denominator}", "coeffs": coeffs}
        lattice = getattr(self.module, "lattice", None)
        if lattice is not None:
            out["gram"] = [list(r) for r in lattice.gram]
        return out

    @classmethod
    def from_json(cls, data: dict, module: FiniteQuadraticModule | None = None) -> "FourierExpansion":
        mod = module or FiniteQuadraticModule.from_json(data["module"])
        if module is None and "gram" in data:
            lat_mod = discriminant_form(Lattice(data["gram"]))
            if not lat_mod.same_as(mod):
                raise ModuleMismatch("stored lattice does not give the stored module")
            mod = lat_mod
        coeffs = {}
        for item in data["coeffs"]:
            coeffs[(tuple(item["lam"]), Fraction(item["n"]))] = Cyclotomic.parse(item["c"])
        return cls(mod, data["k2"], Fraction(data["nmax"]), coeffs)

    def __repr__(self):
        return f"FourierExpansion(weight={self.weight}, n_max={self.n_max}, {len(self.coeffs)} nonzero)"


def theta_series(L: Lattice, n_max) -> FourierExpansion:
    """theta_L = sum_{x in L'} q^{q(x)} e_{x + L} for positive definite L."""
    D = discriminant_form(L)
    n_max = Fraction(n_max)
    coeffs: dict = {}
    for lam in D.elements:
        counts = Counter(qx for _, qx in short_vectors(L, D.lift(lam), n_max))
        for n, c in counts.items():
            coeffs[(lam, n)] = c
    return FourierExpansion(D, L.rank, n_max, coeffs)


def uplift(f: FourierExpansion, L: Lattice, basis) -> FourierExpansion:
    """Lift f from D(L) to D(M) for the sublattice M with the given basis (rows, L-coordinates)."""
    DL = discriminant_form(L)
    if not f.module.same_as(DL):
        raise ModuleMismatch("expansion does not live on D(L)")
    B = [[int(x) for x in row] for row in basis]
    m = L.rank
    if len(B) != m or any(len(r) != m for r in B):
        raise NotASublattice("basis must be square of full rank")
    g = L.gram
    gm = [[sum(B[i][a] * g[a][b] * B[j][b] for a in range(m) for b in range(m)) for j in range(m)]
          for i in range(m)]
    try:
        M = Lattice(gm)
    except Exception as exc:
        raise NotASublattice(str(exc)) from None
    DM = discriminant_form(M)
    image: dict = {}
    for mu in DM.elements:
        x = DM.lift(mu)
        v = [sum(x[i] * B[i][a] for i in range(m)) for a in range(m)]
        gv = [sum(g[a][b] * v[b] for b in range(m)) for a in range(m)]
        if all(c.denominator == 1 for c in gv):
            image[mu] = DL.project(v)
    coeffs: dict = {}
    for mu, lam in image.items():
        for (l, n), c in f.coeffs.items():
            if l == lam:
                coeffs[(mu, n)] = c
    out = FourierExpansion(DM, f.k2, f.n_max, coeffs)
    out.sublattice = M
    return out


# ---------------------------------------------------------------------------
# scalar fixtures


def _pack(coeffs, bits: int):
    width = bits // 8
    return gmpy2.mpz(int.from_bytes(b"".join(int(c).to_bytes(width, "little") for c in coeffs), "little"))


def _unpack(x, bits: int, n: int) -> list[int]:
    width = bits // 8
    x = int(x)
    raw = x.to_bytes((x.bit_length() + 7) // 8, "little")[: n * width]
    out = [int.from_bytes(raw[i * width:(i + 1) * width], "little") for i in range(-(-len(raw) // width))]
    return out + [0] * (n - len(out))


def _series_mul(a: list[int], b: list[int], n: int) -> list[int]:
    """Truncated product of integer power series, via Kronecker substitution."""
    ma = max(map(abs, a), default=0)
    mb = max(map(abs, b), default=0)
    bound = 2 * min(len(a), len(b)) * ma * mb + 1
    bits = (bound.bit_length() + 8) // 8 * 8
    ap = [max(c, 0) for c in a]
    an = [max(-c, 0) for c in a]
    bp = [max(c, 0) for c in b]
    bn = [max(-c, 0) for c in b]
    P = lambda v: _pack(v, bits)
    pos = P(ap) * P(bp) + P(an) * P(bn)
    neg = P(ap) * P(bn) + P(an) * P(bp)
    return [x - y for x, y in zip(_unpack(pos, bits, n), _unpack(neg, bits, n))]


def euler_product_coefficients(n: int) -> list[int]:
    """prod_{j >= 1} (1 - q^j) through q^(n-1), from the pentagonal number theorem."""
    out = [0] * n
    k = 0
    while True:
        done = True
        for kk in ((k, -k) if k else (0,)):
            e = kk * (3 * kk - 1) // 2
            if e < n:
                out[e] += -1 if kk % 2 else 1
                done = False
        if done and k:
            break
        k += 1
    return out


def eta_power_coefficients(r: int, n: int) -> list[int]:
    """Coefficients of prod (1 - q^j)^r through q^(n-1)."""
    base = euler_product_coefficients(n)
    out = [1] + [0] * (n - 1)
    while r:
        if r & 1:
            out = _series_mul(out, base, n)
        r >>= 1
        if r:
            base = _series_mul(base, base, n)
    return out


@lru_cache(maxsize=4)
def _delta_cached(n_max: int) -> tuple:
    return tuple([0] + eta_power_coefficients(24, n_max))


def delta_coefficients(n_max: int) -> list[int]:
    """tau(0..n_max) with tau(0) = 0."""
    return list(_delta_cached(n_max))


def trivial_module() -> FiniteQuadraticModule:
    return discriminant_form(Lattice.trivial())


def eta_power(r: int, n_max: int) -> FourierExpansion:
    """eta^r on the trivial module; needs 24 | r so that exponents are integral."""
    if r % 24:
        raise ValueError("eta^r has integral exponents only for 24 | r")
    shift = r // 24
    body = eta_power_coefficients(r, n_max + 1)
    coeffs = {((), Fraction(n + shift)): c for n, c in enumerate(body) if c and n + shift <= n_max}
    return FourierExpansion(trivial_module(), r, n_max, coeffs, check=False)


def scalar_fixture(name: str, n_max: int) -> FourierExpansion:
    if name == "delta24":
        tau = delta_coefficients(n_max)
        coeffs = {((), Fraction(n)): c for n, c in enumerate(tau) if c}
        return FourierExpansion(trivial_module(), 24, n_max, coeffs, check=False)
    raise KeyError(name)


# ---------------------------------------------------------------------------
# convergence data


def convergence_sigma(rank_parity: int, coprime_to_level: bool) -> Fraction:
    """Exponent saving sigma in the half-plane of absolute convergence for cusp forms."""
    if rank_parity % 2 == 0:
        return Fraction(1, 2)
    return Fraction(5, 16) if coprime_to_level else Fraction(1, 4)


def abscissa(k, rank_parity: int, coprime_to_level: bool, cuspidal: bool = True) -> Fraction:
    """Abscissa of absolute convergence of the (lam, t) L-series."""
    k = Fraction(k)
    if k < Fraction(3, 2):
        raise WeightTooSmall("weight below 3/2")
    if not cuspidal:
        return 2 * k - 1
    return k + 1 - 2 * convergence_sigma(rank_parity, coprime_to_level)


def coefficient_growth(k, rank_parity: int, coprime: bool = False) -> Fraction:
    """nu with a(lam, t n^2) = O(n^(nu + eps)), or a(lam, t n) in the coprime case."""
    k = Fraction(k)
    if coprime:
        return k - Fraction(1, 2) if rank_parity % 2 == 0 else k - Fraction(5, 16)
    return k - 1 if rank_parity % 2 == 0 else k - Fraction(1, 2)
