from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from oracles import classical_kloosterman as classical_float, e
from weilhecke.cyclotomic import Cyclotomic
from weilhecke.errors import BadResidueClass, DomainError, ModuleMismatch, NotCoprime
from weilhecke.expansions import trivial_module
from weilhecke.kloosterman import (H_c, KloostermanQuery, classical_kloosterman, complete_to_sl2,
                                   kloosterman_zeta)
from weilhecke.quadratic import Lattice, discriminant_form
from weilhecke.weil import WeilRep

GRAMS = {"A2": ([[2, 1], [1, 2]], 2), "hyp5": ([[2, 1], [1, -2]], 4), "Z2": ([[2]], 1), "Z8": ([[8]], 1),
         "Z2_w52": ([[2]], 5)}
T = trivial_module()
WT = WeilRep(T)


def _rep(name):
    gram, k2 = GRAMS[name]
    D = discriminant_form(Lattice(gram))
    return D, WeilRep(D), k2


def test_completion_examples():
    assert complete_to_sl2(1, 0) == (0, -1)
    assert complete_to_sl2(2, 1) == (1, 0)
    assert complete_to_sl2(5, 3) == (2, 1)
    with pytest.raises(NotCoprime):
        complete_to_sl2(4, 2)
    with pytest.raises(DomainError):
        complete_to_sl2(0, 1)


@given(st.integers(-60, 60).filter(bool), st.integers(-200, 200))
def test_completion_is_in_sl2(c, d):
    if gcd(c, d) == 1:
        a, b = complete_to_sl2(c, d)
        assert a * d - b * c == 1
        assert 2 * abs(a) <= abs(c)


def test_trivial_module_examples():
    assert H_c(WT, KloostermanQuery(T, (), 1, (), 1, 2, 0)) == Cyclotomic.rational(Fraction(1, 2))
    for c, want in ((2, Fraction(1, 2)), (7, Fraction(6, 7)), (3, Fraction(2, 3)), (12, Fraction(4, 12))):
        assert H_c(WT, KloostermanQuery(T, (), 0, (), 0, c, 0)) == Cyclotomic.rational(want)


@pytest.mark.parametrize("c", [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15, -3, -8])
def test_trivial_module_is_classical(c):
    for m, n in ((1, 1), (2, 3), (0, 5), (4, 0)):
        h = H_c(WT, KloostermanQuery(T, (), m, (), n, c, 0))
        assert h == classical_kloosterman(m, n, c) / abs(c)
        assert abs(h.to_complex() - classical_float(m, n, c) / abs(c)) < 1e-9


@pytest.mark.parametrize("name", sorted(GRAMS))
def test_c_equals_one(name):
    # gamma = S, so H_1 = e((sig - 2k)/8) / sqrt|D| for lam = mu = 0
    D, W, k2 = _rep(name)
    h = H_c(W, KloostermanQuery(D, D.zero, 0, D.zero, 1, 1, k2))
    assert abs(h.to_complex() - e(Fraction(D.sig8 - k2, 8)) / len(D) ** 0.5) < 1e-12


@pytest.mark.parametrize("name", sorted(GRAMS))
def test_isotropic_zero_index_values_are_real(name):
    D, W, k2 = _rep(name)
    for c in range(1, 9):
        for n in (1, 2, 3):
            h = H_c(W, KloostermanQuery(D, D.zero, 0, D.zero, n, c, k2))
            assert h == h.conj()
            assert h == H_c(W, KloostermanQuery(D, D.zero, 0, D.zero, n, -c, k2))


@given(st.sampled_from(sorted(GRAMS)), st.integers(-12, 12).filter(bool), st.integers(-3, 3), st.integers(-3, 3),
       st.data())
def test_independent_of_completion(name, c, shift, d_shift, data):
    D, W, k2 = _rep(name)
    lam = data.draw(st.sampled_from(D.elements))
    mu = data.draw(st.sampled_from(D.elements))
    q = KloostermanQuery(D, lam, D.q(lam) + 1, mu, D.q(mu) + 2, c, k2)
    assert H_c(W, q) == H_c(W, q, shift=shift, d_shift=d_shift)


@given(st.sampled_from(sorted(GRAMS)), st.integers(1, 12), st.data())
def test_bounded_by_totient(name, c, data):
    D, W, k2 = _rep(name)
    lam = data.draw(st.sampled_from(D.elements))
    mu = data.draw(st.sampled_from(D.elements))
    h = H_c(W, KloostermanQuery(D, lam, D.q(lam), mu, D.q(mu) + 1, c, k2))
    phi = sum(1 for d in range(c) if gcd(c, d) == 1) if c > 1 else 1
    assert abs(h.to_complex()) <= phi / c + 1e-12


def test_query_validation():
    D, W, k2 = _rep("A2")
    with pytest.raises(BadResidueClass):
        KloostermanQuery(D, (1,), 0, D.zero, 1, 3, k2)
    with pytest.raises(BadResidueClass):
        KloostermanQuery(D, D.zero, 0, (1,), 1, 3, k2)
    with pytest.raises(DomainError):
        KloostermanQuery(D, D.zero, 0, D.zero, 1, 0, k2)
    with pytest.raises(ModuleMismatch):
        H_c(WT, KloostermanQuery(D, D.zero, 0, D.zero, 1, 3, k2))


def test_zeta_cutoff_zero():
    D, W, k2 = _rep("hyp5")
    r = kloosterman_zeta(W, D.zero, D.zero, 1, k2, 2, 0)
    assert r["value"] == 0
    assert r["tail_bound"] == pytest.approx(2 * 1.0369277551433699, rel=1e-12)  # 2 zeta(5), exponent k + 2s - 1


def test_zeta_stable_under_doubling():
    D, W, k2 = _rep("hyp5")
    a = kloosterman_zeta(W, D.zero, D.zero, 1, k2, 2, 10)
    b = kloosterman_zeta(W, D.zero, D.zero, 1, k2, 2, 20)
    assert abs(a["value"] - b["value"]) <= a["tail_bound"]
    assert b["tail_bound"] < a["tail_bound"]


def test_zeta_weighting_and_complex_s():
    D, W, k2 = _rep("A2")
    a = kloosterman_zeta(W, D.zero, D.zero, 1, k2, 2, 6, weighting="abs_c")
    b = kloosterman_zeta(W, D.zero, D.zero, 1, k2, 2, 6, weighting="abs_2c")
    expo = k2 / 2 + 2 * 2 - 1
    assert b["value"] == pytest.approx(a["value"] * 2 ** -expo, rel=1e-12)
    z = kloosterman_zeta(W, D.zero, D.zero, 1, k2, complex(2, 1), 6)
    assert isinstance(z["value"], complex)
    with pytest.raises(DomainError):
        kloosterman_zeta(W, D.zero, D.zero, 1, k2, 0, 6)
    with pytest.raises(DomainError):
        kloosterman_zeta(W, D.zero, D.zero, 1, k2, 2, 6, weighting="c2")
