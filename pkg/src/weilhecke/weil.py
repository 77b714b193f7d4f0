"""The metaplectic double cover of SL2(Z) and the Weil representation.

A metaplectic element is a pair (M, branch) standing for
(M, branch * sqrt(c tau + d)) with the principal square root.  Products are
computed exactly: the sign relating sqrt(z1) sqrt(z2) to sqrt(z1 z2) only
depends on which half planes the factors lie in, and at tau = i all the
relevant numbers are Gaussian integers.

Matrices of the representation are indexed (row mu, column lambda), so
rho(g) e_lambda is column lambda.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import shimura_symbol
from .cyclotomic import ONE, ZERO, Cyclotomic, e_frac, sqrt_nat
from .errors import BadCongruence, NotInGroup, NotScaledPermutation
from .quadratic import FiniteQuadraticModule


def _half(re: int, im: int) -> int:
    """+1 if arg in (0, pi], -1 if arg in (-pi, 0), 0 on the positive real axis."""
    if im > 0 or (im == 0 and re < 0):
        return 1
    if im < 0:
        return -1
    return 0


@dataclass(frozen=True)
class MetaplecticElement:
    a: int
    b: int
    c: int
    d: int
    branch: int = 1

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise NotInGroup(f"det of {self.matrix} is not 1")
        if self.branch not in (1, -1):
            raise NotInGroup("branch must be +1 or -1")

    @classmethod
    def of(cls, m, branch: int = 1) -> "MetaplecticElement":
        (a, b), (c, d) = m
        return cls(int(a), int(b), int(c), int(d), int(branch))

    @property
    def matrix(self):
        return ((self.a, self.b), (self.c, self.d))

    def __mul__(self, other: "MetaplecticElement") -> "MetaplecticElement":
        return mp_compose(self, other)

    def inverse(self) -> "MetaplecticElement":
        inv = MetaplecticElement(self.d, -self.b, -self.c, self.a, 1)
        s = mp_compose(self, inv).branch
        return MetaplecticElement(self.d, -self.b, -self.c, self.a, s)

    def __pow__(self, n: int) -> "MetaplecticElement":
        base = self if n >= 0 else self.inverse()
        out = IDENTITY
        for _ in range(abs(n)):
            out = out * base
        return out

    def to_json(self) -> dict:
        return {"m": [[self.a, self.b], [self.c, self.d]], "branch": self.branch}

    @classmethod
    def from_json(cls, data: dict) -> "MetaplecticElement":
        return cls.of(data["m"], data.get("branch", 1))


def mp_compose(g1: MetaplecticElement, g2: MetaplecticElement) -> MetaplecticElement:
    a1, b1, c1, d1 = g1.a, g1.b, g1.c, g1.d
    a2, b2, c2, d2 = g2.a, g2.b, g2.c, g2.d
    a, b = a1 * a2 + b1 * c2, a1 * b2 + b1 * d2
    c, d = c1 * a2 + d1 * c2, c1 * b2 + d1 * d2
    # at tau = i: z2 = j(g2, i), w = j(g1 g2, i), z1 = j(g1, g2 i) = w / z2
    z2 = (d2, c2)
    w = (d, c)
    z1 = (w[0] * z2[0] + w[1] * z2[1], w[1] * z2[0] - w[0] * z2[1])  # w * conj(z2)
    h1, h2, hw = _half(*z1), _half(*z2), _half(*w)
    sign = 1
    if h1 == 1 and h2 == 1 and hw != 1:
        sign = -1
    elif h1 == -1 and h2 == -1 and hw == 1:
        sign = -1
    return MetaplecticElement(a, b, c, d, g1.branch * g2.branch * sign)


IDENTITY = MetaplecticElement(1, 0, 0, 1, 1)
T_BAR = MetaplecticElement(1, 1, 0, 1, 1)
S_BAR = MetaplecticElement(0, -1, 1, 0, 1)
Z_BAR = MetaplecticElement(-1, 0, 0, -1, 1)


def word_decompose(m, mode: str = "floor") -> list[tuple]:
    """Write an SL2(Z) matrix as a word in ("T", n), ("S",), ("Z",).

    The product of the word, read left to right, is the matrix.  ``mode``
    picks the division step (floor or nearest), giving two different words.
    """
    (a, b), (c, d) = m
    if a * d - b * c != 1:
        raise NotInGroup("det must be 1")
    word: list[tuple] = []
    while c != 0:
        if mode == "floor":
            q = a // c
        elif mode == "round":
            q = (2 * a + c) // (2 * c)
        else:
            raise ValueError(mode)
        if q:
            word.append(("T", q))
        a, b = a - q * c, b - q * d
        word.append(("S",))
        a, b, c, d = c, d, -a, -b
    if a == 1:
        if b:
            word.append(("T", b))
    else:
        word.append(("Z",))
        if b:
            word.append(("T", -b))
    return word


def word_element(word) -> MetaplecticElement:
    """Metaplectic product of a word, each letter taken with branch +1."""
    out = IDENTITY
    for tok in word:
        if tok[0] == "T":
            out = out * MetaplecticElement(1, tok[1], 0, 1, 1)
        elif tok[0] == "S":
            out = out * S_BAR
        else:
            out = out * Z_BAR
    return out


def section_s(m) -> MetaplecticElement:
    """gamma -> (gamma, (c/d) sqrt(c tau + d)) on matrices with c = 0 mod 4, d = 1 mod 4."""
    (a, b), (c, d) = m
    if c % 4 or d % 4 != 1:
        raise BadCongruence("section needs c = 0 mod 4 and d = 1 mod 4")
    return MetaplecticElement(a, b, c, d, shimura_symbol(c, d))


# ---------------------------------------------------------------------------
# matrices over cyclotomic fields


def mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = ZERO
            for t in range(k):
                if not A[i][t].is_zero() and not B[t][j].is_zero():
                    acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_adjoint(A):
    return [[A[j][i].conj() for j in range(len(A))] for i in range(len(A[0]))]


def mat_identity(n: int):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def mat_scale(c, A):
    return [[c * x for x in row] for row in A]


def mat_eq(A, B) -> bool:
    return all(x == y for ra, rb in zip(A, B) for x, y in zip(ra, rb))


# ---------------------------------------------------------------------------


class WeilRep:
    """rho_D for a finite quadratic module D."""

    def __init__(self, module: FiniteQuadraticModule):
        self.module = module
        self.n = len(module)
        self.N = module.level
        self.sig8 = module.sig8
        els = module.elements
        N = self.N
        self._tshift = np.array([(v.numerator * (N // v.denominator)) % N for v in module.qvals])
        self._sshift = np.array([[(-module.b(x, y) * N) % N for y in els] for x in els], dtype=np.int64)
        self._neg = [module.index(module.neg(x)) for x in els]

    # generators as cyclotomic matrices

    def rho_T(self, power: int = 1):
        out = mat_identity(self.n)
        for i, v in enumerate(self.module.qvals):
            out[i][i] = e_frac(power * v)
        return out

    def rho_S(self):
        D = self.module
        c = e_frac(Fraction(-self.sig8, 8)) / sqrt_nat(self.n)
        return [[c * e_frac(-D.b(lam, mu)) for lam in D.elements] for mu in D.elements]

    def rho_Z(self):
        c = e_frac(Fraction(-self.sig8, 4))
        out = [[ZERO] * self.n for _ in range(self.n)]
        for i in range(self.n):
            out[self._neg[i]][i] = c
        return out

    def generators(self) -> dict:
        return {"T": self.rho_T(), "S": self.rho_S(), "Z": self.rho_Z()}

    # words

    def _apply_word(self, word):
        """Integer matrix over Z[zeta_N] (cyclic exponents), #S and #Z in the word."""
        n, N = self.n, self.N
        U = np.zeros((n, n, N), dtype=object)
        for i in range(n):
            U[i, i, 0] = 1
        n_s = n_z = 0
        for tok in reversed(word):
            if tok[0] == "T":
                for i in range(n):
                    sh = int(tok[1] * self._tshift[i]) % N
                    if sh:
                        U[i] = np.roll(U[i], sh, axis=-1)
            elif tok[0] == "S":
                n_s += 1
                V = np.zeros_like(U)
                for mu in range(n):
                    acc = V[mu]
                    for lam in range(n):
                        sh = int(self._sshift[lam, mu])
                        acc = acc + (np.roll(U[lam], sh, axis=-1) if sh else U[lam])
                    V[mu] = acc
                U = V
            else:
                n_z += 1
                U = U[self._neg]
        return U, n_s, n_z

    def rho_word(self, word, extra_eighths: int = 0):
        U, n_s, n_z = self._apply_word(word)
        eighths = -self.sig8 * (n_s + 2 * n_z) + extra_eighths
        scale = e_frac(Fraction(eighths, 8))
        if n_s % 2:
            scale = scale / sqrt_nat(self.n)
        scale = scale * Fraction(1, self.n ** (n_s // 2))
        N = self.N
        return [[scale * Cyclotomic.from_exponents(N, list(U[i, j])) if any(U[i, j]) else ZERO
                 for j in range(self.n)] for i in range(self.n)]

    def rho(self, g: MetaplecticElement, mode: str = "floor"):
        word = word_decompose(g.matrix, mode)
        got = word_element(word)
        extra = 0 if got.branch == g.branch else -4 * self.sig8  # rho(Z^2) = e(-sig/2)
        return self.rho_word(word, extra)

    def coeff(self, lam, mu, g: MetaplecticElement, mode: str = "floor") -> Cyclotomic:
        """<rho(g) e_lam, e_mu>, the (mu, lam) entry."""
        M = self.rho(g, mode)
        D = self.module
        return M[D.index(D.normalize(mu))][D.index(D.normalize(lam))]

    def act(self, g: MetaplecticElement, vec: dict) -> dict:
        """rho(g) applied to a vector {element: coefficient}."""
        M = self.rho(g)
        D = self.module
        out: dict = {}
        for lam, c in vec.items():
            j = D.index(D.normalize(lam))
            for i, mu in enumerate(D.elements):
                if not M[i][j].is_zero():
                    out[mu] = out.get(mu, ZERO) + M[i][j] * c
        return {k: v for k, v in out.items() if not v.is_zero()}


def rho_generators(D: FiniteQuadraticModule) -> dict:
    return WeilRep(D).generators()


def rho_of(D_or_W, g: MetaplecticElement, mode: str = "floor"):
    W = D_or_W if isinstance(D_or_W, WeilRep) else WeilRep(D_or_W)
    return W.rho(g, mode)


def rho_coeff(D_or_W, lam, mu, g: MetaplecticElement) -> Cyclotomic:
    W = D_or_W if isinstance(D_or_W, WeilRep) else WeilRep(D_or_W)
    return W.coeff(lam, mu, g)


def is_unitary(M) -> bool:
    return mat_eq(mat_mul(mat_adjoint(M), M), mat_identity(len(M)))


def borcherds_shape_check(D_or_W, g: MetaplecticElement, N: int) -> Cyclotomic:
    """For b = c = 0 mod N, check rho(g) e_lam = chi e_{d lam} and return chi."""
    W = D_or_W if isinstance(D_or_W, WeilRep) else WeilRep(D_or_W)
    if g.b % N or g.c % N:
        raise BadCongruence("need b = c = 0 mod N")
    D = W.module
    M = W.rho(g)
    chi = None
    for j, lam in enumerate(D.elements):
        target = D.index(D.scale(g.d, lam))
        for i in range(W.n):
            v = M[i][j]
            if i == target:
                if chi is None:
                    chi = v
                elif v != chi:
                    raise NotScaledPermutation(f"scalar differs at {lam}")
            elif not v.is_zero():
                raise NotScaledPermutation(f"unexpected entry at ({D.elements[i]}, {lam})")
    return chi
