import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from weilhecke.cyclotomic import e_frac, sqrt_nat
from weilhecke.errors import DegenerateLattice, EvenPrime, IndefiniteLattice, InvalidModule, IsotropicModule
from weilhecke.quadratic import (FiniteQuadraticModule, Lattice, automorphisms_bruteforce, discriminant_form,
                                 is_anisotropic, jordan_counts, orbit_count_norm, orbit_size_bruteforce,
                                 p_component, short_vectors, short_vectors_box, smith_normal_form)

A2 = Lattice([[2, 1], [1, 2]])


def zmod(p, a=1):
    return FiniteQuadraticModule([p], {(x,): Fraction(a * x * x % p, p) for x in range(p)})


@st.composite
def even_lattices(draw, max_rank=3, bound=6, definite=False):
    r = draw(st.integers(1, max_rank))
    g = [[0] * r for _ in range(r)]
    for i in range(r):
        g[i][i] = 2 * draw(st.integers(1 if definite else -(bound // 2), bound // 2))
        for j in range(i + 1, r):
            g[i][j] = g[j][i] = draw(st.integers(-bound, bound))
    try:
        L = Lattice(g)
    except DegenerateLattice:
        L = Lattice([[2]])
    if definite and not L.is_positive_definite():
        L = A2
    return L


def test_discriminant_forms_of_small_lattices():
    D = discriminant_form(Lattice([[2]]))
    assert D.orders == (2,) and D.qvals == [0, Fraction(1, 4)]
    assert D.sig8 == 1 and D.level == 4
    D = discriminant_form(A2)
    assert D.orders == (3,) and D.q((1,)) == D.q((2,)) == Fraction(1, 3)
    assert D.sig8 == 2 and D.level == 3
    E8 = Lattice([[2, -1, 0, 0, 0, 0, 0, 0], [-1, 2, -1, 0, 0, 0, 0, 0], [0, -1, 2, -1, 0, 0, 0, -1],
                  [0, 0, -1, 2, -1, 0, 0, 0], [0, 0, 0, -1, 2, -1, 0, 0], [0, 0, 0, 0, -1, 2, -1, 0],
                  [0, 0, 0, 0, 0, -1, 2, 0], [0, 0, -1, 0, 0, 0, 0, 2]])
    D = discriminant_form(E8)
    assert D.is_trivial() and D.level == 1 and D.sig8 == 0
    H = discriminant_form(Lattice([[0, 1], [1, 0]]))
    assert H.is_trivial() and H.sig8 == 0


def test_degenerate_and_odd_lattices_rejected():
    with pytest.raises(DegenerateLattice):
        Lattice([[2, 2], [2, 2]])
    with pytest.raises(DegenerateLattice):
        Lattice([[1]])


def test_invalid_module_rejected():
    with pytest.raises(InvalidModule):
        FiniteQuadraticModule([2], {(0,): Fraction(0), (1,): Fraction(1, 3)})
    with pytest.raises(InvalidModule):
        FiniteQuadraticModule([2], {(0,): Fraction(0), (1,): Fraction(0)})


def test_torsion_and_multiples():
    D = discriminant_form(Lattice([[2]]))
    assert D.torsion(2) == D.elements and D.multiples(2) == [(0,)]
    D = discriminant_form(Lattice([[4]]))
    assert D.torsion(2) == [(0,), (2,)] and D.multiples(2) == [(0,), (2,)]
    for D in (discriminant_form(A2), zmod(5)):
        assert D.torsion(1) == [(0,)] and D.multiples(1) == D.elements


def test_rescale():
    L = Lattice([[2]])
    assert L.rescale(1).gram == L.gram
    assert L.rescale(3).gram == ((6,),)
    assert discriminant_form(L.rescale(3)).orders == (6,)
    assert A2.rescale(2).gram == ((4, 2), (2, 4)) and len(discriminant_form(A2.rescale(2))) == 12


def test_jordan_counts():
    assert jordan_counts(Lattice([[2]]), 3, 1)["R"] == 1
    assert jordan_counts(Lattice([[2]]), 3, 1)["n_k"] == {0: 1}
    assert jordan_counts(A2, 3, 1)["n_k"] == {0: 1} and jordan_counts(A2, 3, 1)["R"] == 1
    assert jordan_counts(Lattice([[2]]), 5, 2)["R"] == 2
    with pytest.raises(EvenPrime):
        jordan_counts(A2, 2, 1)


def test_p_components():
    D6 = discriminant_form(Lattice([[6]]))
    P3 = p_component(D6, 3)
    assert P3.orders == (3,) and sorted(P3.qvals) == [0, Fraction(1, 3), Fraction(1, 3)]
    T = discriminant_form(Lattice.trivial())
    assert p_component(T, 5).is_trivial()
    mixed = discriminant_form(Lattice([[2]]).direct_sum(A2))
    P2 = p_component(mixed, 2)
    assert P2.orders == (2,) and sorted(P2.qvals) == [0, Fraction(1, 4)]


def test_orbit_constants():
    assert orbit_count_norm(zmod(3), (0,)) == 0
    assert orbit_count_norm(zmod(3), (1,)) == 1
    assert orbit_count_norm(zmod(5), (1,)) == 1
    with pytest.raises(IsotropicModule):
        orbit_count_norm(discriminant_form(Lattice([[2, 0], [0, -2]])), (0, 0))


def test_automorphisms():
    assert len(automorphisms_bruteforce(discriminant_form(Lattice.trivial()))) == 1
    assert len(automorphisms_bruteforce(zmod(3))) == 2
    assert orbit_size_bruteforce(zmod(3), (1,)) == 2
    assert len(automorphisms_bruteforce(discriminant_form(Lattice([[2]])))) == 1


def test_short_vectors_examples():
    L = Lattice([[2]])
    assert short_vectors(L, None, 1) == [((0,), 0), ((-1,), 1), ((1,), 1)]
    half = short_vectors(L, (Fraction(1, 2),), Fraction(1, 4))
    assert [x for x, _ in half] == [(Fraction(-1, 2),), (Fraction(1, 2),)]
    roots = short_vectors(A2, None, 1)
    assert len(roots) == 7 and sum(1 for _, q in roots if q == 1) == 6
    with pytest.raises(IndefiniteLattice):
        short_vectors(Lattice([[2, 0], [0, -2]]), None, 1)


def test_isotropic_elements():
    assert discriminant_form(Lattice([[2]])).isotropic_elements() == [(0,)]
    assert discriminant_form(Lattice([[4]])).isotropic_elements() == [(0,)]
    assert discriminant_form(Lattice.trivial()).isotropic_elements() == [()]
    assert len(discriminant_form(Lattice([[2, 0], [0, -2]])).isotropic_elements()) == 2


def test_json_round_trip():
    for L in (Lattice([[2]]), A2, Lattice([[2, 1], [1, -4]])):
        D = discriminant_form(L)
        assert FiniteQuadraticModule.from_json(D.to_json()) == D


def test_smith_normal_form():
    rng = random.Random(0)
    for _ in range(20):
        A = [[rng.randint(-9, 9) for _ in range(3)] for _ in range(3)]
        U, D, V = smith_normal_form(A)
        prod = [[sum(U[i][k] * A[k][l] * V[l][j] for k in range(3) for l in range(3)) for j in range(3)]
                for i in range(3)]
        assert prod == D
        diag = [D[i][i] for i in range(3)]
        for i in range(3):
            for j in range(3):
                if i != j:
                    assert D[i][j] == 0
        for a, b in zip(diag, diag[1:]):
            assert (b == 0) or (a != 0 and b % a == 0)


@given(even_lattices(max_rank=4))
def test_milgram(L):
    D = discriminant_form(L)
    assert D.gauss(1) == sqrt_nat(len(D)) * e_frac(Fraction(L.sig8, 8))
    assert D.sig8 == L.sig8


@given(even_lattices())
def test_module_axioms(L):
    D = discriminant_form(L)
    N = D.level
    for x in D.elements:
        assert (N * D.q(x)).denominator == 1
        assert D.b(x, x) == (2 * D.q(x)) % 1
        assert D.q(D.scale(3, x)) == (9 * D.q(x)) % 1
    for M in range(1, N):
        if N % M == 0:
            assert any((M * q).denominator != 1 for q in D.qvals)


@given(even_lattices(), st.integers(1, 12))
def test_torsion_times_multiples(L, n):
    D = discriminant_form(L)
    tors, mult = D.torsion(n), D.multiples(n)
    assert len(tors) * len(mult) == len(D)
    assert all(D.b(x, y) == 0 for x in tors for y in mult)


@given(even_lattices())
def test_lift_project_round_trip(L):
    D = discriminant_form(L)
    for x in D.elements:
        assert D.project(D.lift(x)) == x
        assert L.q(D.lift(x)) % 1 == D.q(x)


@given(even_lattices(max_rank=3, definite=True), st.fractions(0, 3, max_denominator=6))
def test_short_vectors_match_box_oracle(L, bound):
    D = discriminant_form(L)
    for x in D.elements:
        shift = D.lift(x)
        assert short_vectors(L, shift, bound) == short_vectors_box(L, shift, bound)


@given(even_lattices(max_rank=3, definite=True))
def test_short_vectors_symmetric_on_two_torsion(L):
    D = discriminant_form(L)
    for x in D.torsion(2):
        vs = {v for v, _ in short_vectors(L, D.lift(x), 2)}
        assert vs == {tuple(-c for c in v) for v in vs}


@given(even_lattices(), st.sampled_from([3, 5, 7, 11]))
def test_jordan_parity_at_good_primes(L, p):
    if discriminant_form(L).level % p:
        assert jordan_counts(L, p, 1)["R"] % 2 == L.rank % 2


@pytest.mark.parametrize("p", [3, 5, 7])
def test_level_is_minimal(p):
    D = zmod(p)
    assert D.level == p
    D4 = discriminant_form(Lattice([[4]]))
    assert D4.level == 8
