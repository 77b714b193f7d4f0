"""Even lattices, their discriminant forms and finite quadratic modules.

Elements of a finite quadratic module with invariant factors (d_1, ..., d_r)
are integer tuples (x_1, ..., x_r) with 0 <= x_i < d_i.  Quadratic values
are Fractions in [0, 1).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import cached_property

from .arith import lcm
from .cyclotomic import ZERO, Cyclotomic, e_frac, sqrt_nat
from .errors import (DegenerateLattice, EvenPrime, IndefiniteLattice, InvalidModule,
                     IsotropicModule, TooLarge)

Element = tuple


# ---------------------------------------------------------------------------
# integer linear algebra


def smith_normal_form(A):
    """Return (U, D, V) with U A V = D, U and V unimodular, D in Smith form."""
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, row)) for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):  # row dst += c row src
        D[dst] = [a + c * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, c):
        for M in (D, V):
            for row in M:
                row[dst] += c * row[src]

    for t in range(min(m, n)):
        while True:
            piv = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] and (piv is None or abs(D[i][j]) < abs(D[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                return U, D, V
            swap_rows(t, piv[0])
            swap_cols(t, piv[1])
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                q = D[i][t] // p
                if q:
                    add_row(t, i, -q)
                if D[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = D[t][j] // p
                if q:
                    add_col(t, j, -q)
                if D[t][j]:
                    clean = False
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
    return U, D, V


def _signature(gram) -> tuple[int, int]:
    """(b+, b-) by exact congruence diagonalization."""
    A = [[Fraction(x) for x in row] for row in gram]
    n = len(A)
    pos = neg = 0
    for i in range(n):
        if A[i][i] == 0:
            j = next((j for j in range(i + 1, n) if A[j][j] != 0), None)
            if j is not None:
                A[i], A[j] = A[j], A[i]
                for row in A:
                    row[i], row[j] = row[j], row[i]
            else:
                j = next((j for j in range(i + 1, n) if A[i][j] != 0), None)
                if j is None:
                    raise DegenerateLattice("singular Gram matrix")
                for k in range(n):
                    A[i][k] += A[j][k]
                for k in range(n):
                    A[k][i] += A[k][j]
        piv = A[i][i]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        for r in range(i + 1, n):
            f = A[r][i] / piv
            if f:
                for c in range(i, n):
                    A[r][c] -= f * A[i][c]
        for c in range(i + 1, n):
            A[i][c] = Fraction(0)
            A[c][i] = Fraction(0)
    return pos, neg


def _det(gram) -> int:
    if not gram:
        return 1
    A = [[Fraction(x) for x in row] for row in gram]
    n = len(A)
    det = Fraction(1)
    for i in range(n):
        j = next((j for j in range(i, n) if A[j][i] != 0), None)
        if j is None:
            return 0
        if j != i:
            A[i], A[j] = A[j], A[i]
            det = -det
        det *= A[i][i]
        for r in range(i + 1, n):
            f = A[r][i] / A[i][i]
            if f:
                for c in range(i, n):
                    A[r][c] -= f * A[i][c]
    return int(det)


# ---------------------------------------------------------------------------
# lattices


class Lattice:
    """An even lattice Z^m with integral symmetric Gram matrix, q(x) = x^T G x / 2."""

    def __init__(self, gram):
        g = tuple(tuple(int(x) for x in row) for row in gram)
        m = len(g)
        if any(len(row) != m for row in g):
            raise DegenerateLattice("Gram matrix must be square")
        for i in range(m):
            if g[i][i] % 2:
                raise DegenerateLattice("lattice must be even")
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise DegenerateLattice("Gram matrix must be symmetric")
        if _det(g) == 0:
            raise DegenerateLattice("Gram matrix is singular")
        self.gram = g

    @classmethod
    def trivial(cls) -> "Lattice":
        return cls(())

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return _det(self.gram)

    @cached_property
    def signature(self) -> tuple[int, int]:
        return _signature(self.gram) if self.rank else (0, 0)

    @property
    def sig8(self) -> int:
        bp, bm = self.signature
        return (bp - bm) % 8

    def is_positive_definite(self) -> bool:
        return self.signature[1] == 0

    def bilinear(self, x, y):
        g = self.gram
        return sum(x[i] * g[i][j] * y[j] for i in range(self.rank) for j in range(self.rank))

    def q(self, x):
        return Fraction(self.bilinear(x, x)) / 2

    def rescale(self, n: int) -> "Lattice":
        return Lattice([[n * x for x in row] for row in self.gram])

    def direct_sum(self, other: "Lattice") -> "Lattice":
        m, k = self.rank, other.rank
        g = [[0] * (m + k) for _ in range(m + k)]
        for i in range(m):
            for j in range(m):
                g[i][j] = self.gram[i][j]
        for i in range(k):
            for j in range(k):
                g[m + i][m + j] = other.gram[i][j]
        return Lattice(g)

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        return f"Lattice({[list(r) for r in self.gram]})"


# ---------------------------------------------------------------------------
# finite quadratic modules


class FiniteQuadraticModule:
    """A finite abelian group with a nondegenerate Q/Z-valued quadratic form."""

    def __init__(self, orders, qvalues, check: bool = True, sig8: int | None = None):
        """``qvalues`` maps every element (tuple) to q(x) mod 1, or is a list in element order."""
        self.orders = tuple(int(d) for d in orders)
        if any(d < 2 for d in self.orders):
            raise InvalidModule("invariant factors must be >= 2")
        self.elements = [tuple(x) for x in itertools.product(*[range(d) for d in self.orders])]
        self._strides = []
        s = 1
        for d in reversed(self.orders):
            self._strides.append(s)
            s *= d
        self._strides.reverse()
        if isinstance(qvalues, dict):
            try:
                self.qvals = [Fraction(qvalues[x]) % 1 for x in self.elements]
            except KeyError as exc:
                raise InvalidModule(f"missing q value for {exc.args[0]}") from None
        else:
            self.qvals = [Fraction(v) % 1 for v in qvalues]
            if len(self.qvals) != len(self.elements):
                raise InvalidModule("wrong number of q values")
        if check:
            self._validate()
        self._sig8 = sig8

    @classmethod
    def from_generators(cls, orders, gen_q, gen_b, **kw) -> "FiniteQuadraticModule":
        """Module with q(sum x_i g_i) = sum x_i^2 q_i + sum_{i<j} x_i x_j b_ij."""
        r = len(orders)
        vals = []
        for x in itertools.product(*[range(d) for d in orders]):
            v = sum((x[i] * x[i] * Fraction(gen_q[i]) for i in range(r)), Fraction(0))
            v += sum((x[i] * x[j] * Fraction(gen_b[i][j]) for i in range(r) for j in range(i + 1, r)), Fraction(0))
            vals.append(v % 1)
        return cls(orders, vals, **kw)

    def _validate(self):
        r = len(self.orders)
        gens = [tuple(int(i == j) for j in range(r)) for i in range(r)]
        gb = [[self.b(g, h) for h in gens] for g in gens]
        for x in self.elements:
            if self.q(self.scale(-1, x)) != self.q(x):
                raise InvalidModule("q(-x) != q(x)")
            for y in self.elements:
                expect = sum((x[i] * y[j] * gb[i][j] for i in range(r) for j in range(r)), Fraction(0)) % 1
                if self.b(x, y) != expect:
                    raise InvalidModule("associated form is not bilinear")
        for x in self.elements:
            if any(x) and all(self.b(x, y) == 0 for y in self.elements):
                raise InvalidModule("form is degenerate")
        for g in gens:
            for n in range(2, 5):
                if self.q(self.scale(n, g)) != (n * n * self.q(g)) % 1:
                    raise InvalidModule("q is not homogeneous of degree 2")

    # group structure

    def __len__(self):
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def zero(self) -> Element:
        return tuple(0 for _ in self.orders)

    def index(self, x: Element) -> int:
        return sum(xi * s for xi, s in zip(x, self._strides))

    def normalize(self, x) -> Element:
        return tuple(int(xi) % d for xi, d in zip(x, self.orders))

    def add(self, x, y) -> Element:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders))

    def sub(self, x, y) -> Element:
        return tuple((a - b) % d for a, b, d in zip(x, y, self.orders))

    def scale(self, n: int, x) -> Element:
        return tuple((n * a) % d for a, d in zip(x, self.orders))

    def neg(self, x) -> Element:
        return self.scale(-1, x)

    def element_order(self, x) -> int:
        out = 1
        for a, d in zip(x, self.orders):
            out = lcm(out, d // math.gcd(a, d))
        return out

    @property
    def exponent(self) -> int:
        return lcm(*self.orders) if self.orders else 1

    # forms

    def q(self, x) -> Fraction:
        return self.qvals[self.index(self.normalize(x))]

    def b(self, x, y) -> Fraction:
        return (self.q(self.add(x, y)) - self.q(x) - self.q(y)) % 1

    @cached_property
    def level(self) -> int:
        return lcm(*[v.denominator for v in self.qvals])

    @cached_property
    def gauss_sum(self) -> Cyclotomic:
        return self.gauss(1)

    def gauss(self, d: int) -> Cyclotomic:
        """sum_x e(d q(x))."""
        N = self.level
        counts: dict = {}
        for v in self.qvals:
            j = (d * v.numerator * (N // v.denominator)) % N
            counts[j] = counts.get(j, 0) + 1
        return Cyclotomic.from_exponents(N, counts)

    @property
    def sig8(self) -> int:
        """Signature mod 8, read off from the Gauss sum sum_x e(q(x))."""
        if self._sig8 is None:
            g = self.gauss_sum
            root = sqrt_nat(self.order)
            for s in range(8):
                if g == root * e_frac(Fraction(s, 8)):
                    self._sig8 = s
                    break
            else:
                raise InvalidModule("Gauss sum is not sqrt|D| times an eighth root of unity")
        return self._sig8

    # subgroups

    def torsion(self, n: int) -> list[Element]:
        """D[n] = {x : n x = 0}."""
        return [x for x in self.elements if not any(self.scale(n, x))]

    def multiples(self, n: int) -> list[Element]:
        """D^n = n D, in element order."""
        seen = {self.scale(n, x) for x in self.elements}
        return [x for x in self.elements if x in seen]

    def is_multiple(self, x, n: int) -> bool:
        return x in set(self.multiples(n))

    def preimages(self, x, n: int) -> list[Element]:
        """All y with n y = x."""
        return [y for y in self.elements if self.scale(n, y) == tuple(x)]

    def isotropic_elements(self) -> list[Element]:
        return [x for x, v in zip(self.elements, self.qvals) if v == 0]

    def is_trivial(self) -> bool:
        return not self.orders

    def same_as(self, other: "FiniteQuadraticModule") -> bool:
        return self.orders == other.orders and self.qvals == other.qvals

    def __eq__(self, other):
        return isinstance(other, FiniteQuadraticModule) and self.same_as(other)

    def __hash__(self):
        return hash((self.orders, tuple(self.qvals)))

    def __repr__(self):
        return f"FiniteQuadraticModule(orders={list(self.orders)}, level={self.level})"

    def to_json(self) -> dict:
        return {
            "orders": list(self.orders),
            "q": [[",".join(map(str, x)), f"{v.numerator}/{v.denominator}"] for x, v in zip(self.elements, self.qvals)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FiniteQuadraticModule":
        orders = [int(d) for d in data["orders"]]
        table = {}
        for coords, val in data["q"]:
            x = tuple(int(c) for c in str(coords).split(",") if c.strip() != "") if orders else ()
            table[x] = Fraction(val)
        return cls(orders, table)


class DiscriminantForm(FiniteQuadraticModule):
    """L'/L with q(x + L) = q(x) mod 1, plus lifting to and projecting from L'."""

    def __init__(self, lattice: Lattice):
        self.lattice = lattice
        g = lattice.gram
        m = lattice.rank
        if m == 0:
            self._U, self._keep, self._lifts = [], [], []
            super().__init__((), [Fraction(0)], check=False, sig8=0)
            return
        U, D, V = smith_normal_form(g)
        keep = [i for i in range(m) if D[i][i] > 1]
        orders = [D[i][i] for i in keep]
        lifts = [tuple(Fraction(V[r][i], D[i][i]) for r in range(m)) for i in keep]
        r = len(keep)
        B = [[Fraction(lattice.bilinear(lifts[i], lifts[j])) for j in range(r)] for i in range(r)]
        vals = []
        for x in itertools.product(*[range(d) for d in orders]):
            v = sum((x[i] * x[i] * B[i][i] / 2 for i in range(r)), Fraction(0))
            v += sum((x[i] * x[j] * B[i][j] for i in range(r) for j in range(i + 1, r)), Fraction(0))
            vals.append(v % 1)
        self._U, self._keep, self._lifts = U, keep, lifts
        super().__init__(orders, vals, check=False, sig8=lattice.sig8)

    def lift(self, x) -> tuple:
        """A representative of x in L' (rational coordinates on the basis of L)."""
        m = self.lattice.rank
        out = [Fraction(0)] * m
        for xi, v in zip(x, self._lifts):
            for r in range(m):
                out[r] += xi * v[r]
        return tuple(out)

    def project(self, v) -> Element:
        """Class of a vector v of L' in L'/L."""
        g = self.lattice.gram
        m = self.lattice.rank
        gv = [sum(g[i][j] * Fraction(v[j]) for j in range(m)) for i in range(m)]
        if any(c.denominator != 1 for c in gv):
            raise ValueError("vector is not in the dual lattice")
        coords = []
        for i, d in zip(self._keep, self.orders):
            coords.append(int(sum(self._U[i][j] * gv[j] for j in range(m))) % d)
        return tuple(coords)


def discriminant_form(L: Lattice) -> DiscriminantForm:
    return DiscriminantForm(L)


def gram(rows) -> Lattice:
    return Lattice(rows)


# ---------------------------------------------------------------------------
# p-parts, Jordan data, orbits


class PComponent(FiniteQuadraticModule):
    """The Sylow p-subgroup of a module, with maps to and from the ambient module."""

    def __init__(self, ambient: FiniteQuadraticModule, p: int):
        self.ambient = ambient
        self.p = p
        self._idx, exps, orders = [], [], []
        for i, d in enumerate(ambient.orders):
            e = 0
            while d % p == 0:
                d //= p
                e += 1
            if e:
                self._idx.append(i)
                orders.append(p ** e)
                exps.append(ambient.orders[i] // p ** e)
        self._cofactor = exps
        vals = []
        for y in itertools.product(*[range(d) for d in orders]):
            vals.append(ambient.q(self.embed(y)))
        super().__init__(orders, vals, check=False)

    def embed(self, y) -> Element:
        x = [0] * len(self.ambient.orders)
        for yi, i, c in zip(y, self._idx, self._cofactor):
            x[i] = (yi * c) % self.ambient.orders[i]
        return tuple(x)

    def project(self, x) -> Element:
        """The p-part of an ambient element, in component coordinates."""
        out = []
        for i, c, d in zip(self._idx, self._cofactor, self.orders):
            out.append((x[i] * pow(c, -1, d)) % d)
        return tuple(out)


def p_component(A: FiniteQuadraticModule, p: int) -> PComponent:
    return PComponent(A, p)


def is_anisotropic(A: FiniteQuadraticModule) -> bool:
    return all(v != 0 for x, v in zip(A.elements, A.qvals) if any(x))


def orbit_count_norm(Ap: FiniteQuadraticModule, x) -> int:
    """C(x) with C(x) + 1 = #{y : q(y) = q(x)} for x != 0, and C(0) = 0.

    For an anisotropic elementary p-module this is one less than the size of
    the orbit of x under the orthogonal group.
    """
    if not is_anisotropic(Ap):
        raise IsotropicModule("module has nonzero isotropic vectors")
    x = Ap.normalize(x)
    if not any(x):
        return 0
    target = Ap.q(x)
    return sum(1 for v in Ap.qvals if v == target) - 1


def automorphisms_bruteforce(A: FiniteQuadraticModule, limit: int = 10 ** 6) -> list[dict]:
    """All isometric group automorphisms, as dicts element -> image."""
    r = len(A.orders)
    if len(A) ** r > limit:
        raise TooLarge(f"search space {len(A)}^{r} exceeds {limit}")
    gens = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    cands = []
    for g, d in zip(gens, A.orders):
        cands.append([y for y in A.elements if not any(A.scale(d, y)) and A.q(y) == A.q(g)])
    out = []

    def image(imgs, x):
        y = A.zero
        for xi, h in zip(x, imgs):
            y = A.add(y, A.scale(xi, h))
        return y

    def rec(imgs):
        k = len(imgs)
        if k == r:
            table = {x: image(imgs, x) for x in A.elements}
            if len(set(table.values())) == len(A) and all(A.q(table[x]) == A.q(x) for x in A.elements):
                out.append(table)
            return
        for h in cands[k]:
            if all(A.b(h, imgs[j]) == A.b(gens[k], gens[j]) for j in range(k)):
                rec(imgs + [h])

    rec([])
    return out


def orbit_size_bruteforce(A: FiniteQuadraticModule, x) -> int:
    x = A.normalize(x)
    return len({aut[x] for aut in automorphisms_bruteforce(A)})


def jordan_counts(L: Lattice, p: int, n: int) -> dict:
    """Diagonalize L/p^n L for odd p and count basis vectors by valuation.

    Returns {"n_k": {k: count}, "R": sum_k (n - k) n_k, "basis": [(vector, valuation)]}
    where only valuations k < n are counted.
    """
    if p == 2:
        raise EvenPrime("Jordan counts are implemented for odd p only")
    mod = p ** n
    m = L.rank
    vecs = [[int(i == j) for j in range(m)] for i in range(m)]

    def B(x, y):
        return L.bilinear(x, y) % mod

    def val(a):
        a %= mod
        if a == 0:
            return n
        v = 0
        while a % p == 0:
            a //= p
            v += 1
        return v

    done = []
    rest = vecs
    while rest:
        best = None
        for i, x in enumerate(rest):
            v = val(B(x, x))
            if best is None or v < best[0]:
                best = (v, i, None)
        for i, x in enumerate(rest):
            for j in range(i + 1, len(rest)):
                v = val(B(x, rest[j]))
                if v < best[0]:
                    best = (v, i, j)
        k, i, j = best
        if k >= n:
            done.extend((x, n) for x in rest)
            break
        if j is not None:
            # only an off-diagonal entry reaches the minimum: use x + y
            rest[i] = [(a + b) % mod for a, b in zip(rest[i], rest[j])]
            continue
        v = rest[i]
        bvv = B(v, v)
        unit = bvv // p ** k
        inv = pow(unit, -1, mod)
        others = []
        for t, w in enumerate(rest):
            if t == i:
                continue
            c = (B(w, v) // p ** k) * inv % mod
            others.append([(a - c * b) % mod for a, b in zip(w, v)])
        done.append((v, k))
        rest = others
    counts: dict = {}
    for _, k in done:
        if k < n:
            counts[k] = counts.get(k, 0) + 1
    R = sum((n - k) * c for k, c in counts.items())
    return {"n_k": counts, "R": R, "basis": done}


# ---------------------------------------------------------------------------
# short vectors


def _completion(gram):
    """Coefficients with 2q(x) = sum_i A_ii (x_i + sum_{j>i} A_ij x_j)^2."""
    n = len(gram)
    A = [[Fraction(x) for x in row] for row in gram]
    for i in range(n):
        if A[i][i] <= 0:
            raise IndefiniteLattice("lattice is not positive definite")
        for j in range(i + 1, n):
            A[j][i] = A[i][j]
            A[i][j] = A[i][j] / A[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                A[k][l] -= A[k][i] * A[i][l]
    return A


def short_vectors(L: Lattice, shift=None, bound=1) -> list[tuple[tuple, Fraction]]:
    """All x in shift + Z^m with q(x) <= bound, as (x, q(x)), sorted by q then x."""
    m = L.rank
    bound = Fraction(bound)
    shift = tuple(Fraction(s) for s in shift) if shift is not None else (Fraction(0),) * m
    if m == 0:
        return [((), Fraction(0))] if bound >= 0 else []
    if not L.is_positive_definite():
        raise IndefiniteLattice("short vectors need a positive definite lattice")
    A = _completion(L.gram)
    twice = 2 * bound
    out = []
    x = [Fraction(0)] * m

    def rec(i, used):
        if i < 0:
            out.append((tuple(x), used / 2))
            return
        c = -sum((A[i][j] * x[j] for j in range(i + 1, m)), Fraction(0))
        room = twice - used
        r = math.sqrt(max(float(room / A[i][i]), 0.0)) + 1e-9
        lo = math.floor(float(c - shift[i]) - r) - 1
        hi = math.ceil(float(c - shift[i]) + r) + 1
        for z in range(lo, hi + 1):
            xi = shift[i] + z
            term = A[i][i] * (xi - c) ** 2
            if used + term <= twice:
                x[i] = xi
                rec(i - 1, used + term)
        x[i] = Fraction(0)

    rec(m - 1, Fraction(0))
    out.sort(key=lambda t: (t[1], t[0]))
    return out


def short_vectors_box(L: Lattice, shift=None, bound=1) -> list[tuple[tuple, Fraction]]:
    """Reference enumeration over the box |x_i| <= sqrt(2 bound (G^-1)_ii)."""
    m = L.rank
    bound = Fraction(bound)
    shift = tuple(Fraction(s) for s in shift) if shift is not None else (Fraction(0),) * m
    if not L.is_positive_definite():
        raise IndefiniteLattice("short vectors need a positive definite lattice")
    import sympy
    ginv = sympy.Matrix(L.gram).inv()
    ranges = []
    for i in range(m):
        r = math.sqrt(float(2 * bound * Fraction(str(ginv[i, i])))) + 1
        ranges.append(range(math.floor(-r - shift[i]) - 1, math.ceil(r - shift[i]) + 2))
    out = []
    for z in itertools.product(*ranges):
        x = tuple(s + zi for s, zi in zip(shift, z))
        qx = L.q(x)
        if qx <= bound:
            out.append((x, qx))
    out.sort(key=lambda t: (t[1], t[0]))
    return out
