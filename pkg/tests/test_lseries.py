from fractions import Fraction

import pytest

from oracles import ramanujan_tau, theta_counts
from weilhecke.cyclotomic import ONE, Cyclotomic
from weilhecke.errors import (AllCoefficientsZero, BadResidue, DomainError, EvenPrime, IsotropicModule,
                              LevelNotCoprime, NotIsotropic, NotSplit, TruncationExceeded)
from weilhecke.expansions import FourierExpansion, abscissa, scalar_fixture, theta_series
from weilhecke.hecke import eigenvalue_extract, hecke
from weilhecke.lseries import (certified_eigenvalues, euler_factor_bad, euler_factor_good, hn_identity_check,
                               product_vs_series, series_coeffs, sublattice_series)
from weilhecke.quadratic import Lattice, discriminant_form
from weilhecke.series import XSeries

R = Cyclotomic.rational
L2 = Lattice([[2]])
A2 = Lattice([[2, 1], [1, 2]])
TAU = ramanujan_tau(700)


@pytest.fixture(scope="module")
def delta():
    return scalar_fixture("delta24", 700)


@pytest.fixture(scope="module")
def thA2():
    return theta_series(A2, 120)


@pytest.fixture(scope="module")
def th2():
    return theta_series(L2, 120)


def _eig(f, p, formula, L=None):
    rep = eigenvalue_extract(f, hecke(f, p, formula, L))
    assert rep.certified
    return rep.eigenvalue


def test_series_coeffs(delta, thA2):
    got = series_coeffs(delta, (), 1, 1, 5)
    assert [c for _, c in got] == [R(TAU[n * n]) for n in range(1, 6)]
    assert [n for n, _ in series_coeffs(delta, (), 1, 6, 7)] == [1, 5, 7]
    a2 = series_coeffs(thA2, (1,), Fraction(1, 3), 1, 3)
    counts = theta_counts(A2.gram, 3, 6)
    D = thA2.module
    want = []
    for n, lam in ((1, (1,)), (2, (2,)), (3, (0,))):
        q = Fraction(n * n, 3)
        want.append(R(sum(1 for x in counts.get(q, []) if D.project(x) == lam)))
    assert [c for _, c in a2] == want and want[0] == R(3)


def test_series_coeffs_errors(delta, thA2):
    with pytest.raises(TruncationExceeded):
        series_coeffs(delta, (), 1, 1, 30)
    with pytest.raises(BadResidue):
        series_coeffs(thA2, (1,), Fraction(1, 2), 1, 2)


def test_zero_series():
    z = FourierExpansion(discriminant_form(A2), 2, 20)
    assert all(c.is_zero() for _, c in series_coeffs(z, (1,), Fraction(1, 3), 1, 4))


def test_delta_factor_at_two(delta):
    lam2 = _eig(delta, 2, "even")
    Rx, Px = euler_factor_good(delta, 2, (), 1, lam2)
    assert Rx == XSeries.poly([1, 2048])
    assert Px == XSeries.poly([1, 3520, 4194304])
    Rx, _ = euler_factor_good(delta, 2, (), 2, lam2)
    assert Rx == XSeries.poly([1, 0])


def test_odd_signature_factor(th2):
    lam3 = _eig(th2, 3, "odd")
    Rx, Px = euler_factor_good(th2, 3, (1,), Fraction(1, 4), lam3)
    assert Px[0] == ONE and Px[2] == R(Fraction(1, 3))
    assert hn_identity_check(th2, 3, (1,), Fraction(1, 4), 1, 2, Rx, Px)["ok"]
    with pytest.raises(LevelNotCoprime):
        euler_factor_good(th2, 2, (1,), Fraction(1, 4), 1)


def test_bad_factor_reduces_to_good(thA2):
    lam5 = _eig(thA2, 5, "even")
    for lam, t in (((1,), Fraction(1, 3)), ((0,), 5), ((0,), 1)):
        assert euler_factor_bad(thA2, A2, 5, lam, t, lam5) == euler_factor_good(thA2, 5, lam, t, lam5)


def test_bad_factor_x2_sign(thA2):
    lam3 = _eig(thA2, 3, "bad", A2)
    t = Fraction(1, 3)
    minus = euler_factor_bad(thA2, A2, 3, (1,), t, lam3, x2_sign=-1)
    plus = euler_factor_bad(thA2, A2, 3, (1,), t, lam3, x2_sign=1)
    assert hn_identity_check(thA2, 3, (1,), t, 1, 2, *minus)["ok"]
    assert not hn_identity_check(thA2, 3, (1,), t, 1, 2, *plus)["ok"]


def test_bad_factor_errors(thA2):
    with pytest.raises(EvenPrime):
        euler_factor_bad(thA2, A2, 2, (1,), Fraction(1, 3), 1)
    L18 = Lattice([[18]])
    with pytest.raises(IsotropicModule):
        euler_factor_bad(theta_series(L18, 4), L18, 3, (0,), 1, 1)


@pytest.mark.parametrize("n,order", [(1, 3), (3, 2), (5, 2)])
def test_delta_hn_identity(delta, n, order):
    lam2 = _eig(delta, 2, "even")
    Rx, Px = euler_factor_good(delta, 2, (), 1, lam2)
    assert hn_identity_check(delta, 2, (), 1, n, order, Rx, Px)["ok"]


def test_hn_identity_errors(delta):
    z = FourierExpansion(delta.module, 24, 100)
    with pytest.raises(AllCoefficientsZero):
        hn_identity_check(z, 2, (), 1, 1, 2, XSeries.poly([1]), XSeries.poly([1]))
    Rx, Px = euler_factor_good(delta, 2, (), 1, -2496)
    with pytest.raises(TruncationExceeded):
        hn_identity_check(delta, 2, (), 1, 1, 6, Rx, Px)


def test_factor_extraction(delta):
    """sum over all n equals the 2-coprime stream convolved with the local series at 2."""
    lam2 = _eig(delta, 2, "even")
    Rx, Px = euler_factor_good(delta, 2, (), 1, lam2)
    local = Rx.truncate(6) / Px
    coprime = dict(series_coeffs(delta, (), 1, 2, 25))
    for n in range(1, 26):
        acc = R(0)
        m = 0
        while n % 2 ** m == 0:
            rest = n // 2 ** m
            if rest in coprime:
                acc = acc + local[m] * coprime[rest]
            m += 1
        assert acc == R(TAU[n * n])


def test_certified_eigenvalues(delta):
    reps = certified_eigenvalues(delta, [2, 3, 5])
    assert {p: r.eigenvalue for p, r in reps.items()} == {p: R(TAU[p * p] - p ** 10) for p in (2, 3, 5)}


def test_product_vs_series(delta):
    eig = certified_eigenvalues(delta, [2, 3, 5, 7, 11, 13, 17, 19, 23])
    rep = product_vs_series(delta, (), 1, 16, 23, 25, eig)
    assert rep.certified and rep.gap < 1e-3
    with pytest.raises(DomainError):
        product_vs_series(delta, (), 1, 12, 23, 25, eig)


def test_product_vs_series_zero_form():
    z = FourierExpansion(scalar_fixture("delta24", 10).module, 24, 100)
    rep = product_vs_series(z, (), 1, 16, 5, 10, {2: 0, 3: 0, 5: 0})
    assert rep.series == 0 and rep.product == 0


def test_sublattice_series():
    L = L2.direct_sum(A2)
    f = theta_series(L, 30)
    terms = sublattice_series(f, L2, A2, (0,), 4)
    assert [q for q, _, _ in terms] == sorted(Fraction(j * j, 4) for j in range(-4, 5) if j)
    assert sublattice_series(f, L2, A2, (0,), Fraction(1, 5)) == []
    D = f.module
    lam = D.project((Fraction(1, 2), 0, 0))
    stream = dict(series_coeffs(f, lam, Fraction(1, 4), 1, 4))
    for q, x, a in terms:
        if x[0] > 0:
            assert a == stream[int(2 * x[0])]
    with pytest.raises(NotIsotropic):
        sublattice_series(f, L2, A2, (1,), 4)
    with pytest.raises(NotSplit):
        sublattice_series(theta_series(A2, 4), L2, A2, (0,), 4)


def test_abscissa_ordering():
    for k in (2, Fraction(5, 2), 12):
        for parity in (0, 1):
            assert abscissa(k, parity, True) <= abscissa(k, parity, False)
    assert abscissa(Fraction(5, 2), 1, True) < abscissa(Fraction(5, 2), 1, False)
