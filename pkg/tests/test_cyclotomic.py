import cmath
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from weilhecke.cyclotomic import ONE, ZERO, Cyclotomic, e_frac, sqrt_nat, to_complex
from weilhecke.errors import DivisionByZero, ParseError


def close(a, b, tol=1e-12):
    return abs(complex(a) - complex(b)) < tol


def test_e_frac_values():
    assert e_frac(Fraction(1, 2)) == -1
    assert e_frac(0) == 1
    z = e_frac(Fraction(1, 3)).to_complex()
    assert close(z, complex(-0.5, 0.8660254037844386), 1e-9)
    assert e_frac(Fraction(1, 8)).conj() == e_frac(Fraction(7, 8))
    assert e_frac(Fraction(1, 3)) + e_frac(Fraction(2, 3)) == -1


def test_unit_modulus():
    w = (1 + e_frac(Fraction(1, 4))) / sqrt_nat(2)
    assert w.abs2() == 1
    assert w == e_frac(Fraction(1, 8))


def test_sqrt_nat():
    assert sqrt_nat(1) == 1
    assert sqrt_nat(4) == 2
    assert sqrt_nat(3) ** 2 == 3
    assert close(sqrt_nat(3).to_complex(), 1.7320508075688772)
    assert close(sqrt_nat(2).to_complex(), 2 ** 0.5)


def test_to_complex():
    assert to_complex(-1) == complex(-1.0, 0.0)
    assert close(to_complex(e_frac(Fraction(1, 4))), 1j)


def test_high_precision_embedding():
    import mpmath
    v = sqrt_nat(2).to_complex(200)
    with mpmath.workprec(200):
        assert abs(v - mpmath.sqrt(2)) < mpmath.mpf(2) ** -190


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        ONE / ZERO
    with pytest.raises(ZeroDivisionError):
        e_frac(Fraction(1, 5)) / (e_frac(Fraction(1, 3)) + e_frac(Fraction(2, 3)) + 1)


def test_conductor_folding():
    # zeta_6 = -zeta_3^2 lives in the cube-root field
    a = e_frac(Fraction(1, 6))
    assert a == -e_frac(Fraction(2, 3))
    assert hash(a) == hash(-e_frac(Fraction(2, 3)))


def test_parse_and_print():
    a = Cyclotomic.parse("1/2 * z(1/8) + -3 * z(3/8) + 5")
    assert str(Cyclotomic.parse(str(a))) == str(a)
    assert Cyclotomic.parse(str(a)) == a
    assert str(Cyclotomic.rational(Fraction(-7, 3))) == "-7/3"
    with pytest.raises(ParseError):
        Cyclotomic.parse("1 * w(1/3)")


fracs = st.builds(lambda d, k: Fraction(k % d, d), st.sampled_from([1, 2, 3, 4, 5, 6, 8, 12, 24]),
                  st.integers(0, 23))


@st.composite
def cyclos(draw):
    terms = draw(st.lists(st.tuples(st.integers(-5, 5), fracs), max_size=4))
    acc = Cyclotomic.rational(draw(st.integers(-3, 3)))
    for c, q in terms:
        acc = acc + e_frac(q) * c
    return acc


@given(fracs, fracs)
def test_e_frac_is_a_character(q1, q2):
    assert e_frac(q1) * e_frac(q2) == e_frac(q1 + q2)


@given(cyclos(), cyclos(), cyclos())
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    if not a.is_zero():
        assert a * a.inverse() == 1
        assert (b / a) * a == b


@given(cyclos(), cyclos())
def test_embedding_is_a_ring_map(a, b):
    assert close((a * b).to_complex(), a.to_complex() * b.to_complex(), 1e-6)
    assert close((a + b).to_complex(), a.to_complex() + b.to_complex(), 1e-9)


@given(cyclos())
def test_conjugation(a):
    assert a.conj().conj() == a
    assert a.abs2() == a.abs2().conj()
    assert close(a.conj().to_complex(), a.to_complex().conjugate(), 1e-9)


@given(cyclos())
def test_parse_round_trip(a):
    assert Cyclotomic.parse(str(a)) == a


@given(st.integers(1, 40), st.integers(1, 12))
def test_sqrt_scaling(m, n):
    assert sqrt_nat(m * n * n) == n * sqrt_nat(m)
    assert close(sqrt_nat(m).to_complex(), cmath.sqrt(m), 1e-9)
