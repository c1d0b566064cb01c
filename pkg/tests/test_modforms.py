from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from etaq.modforms import (
    EISENSTEIN_CONSTANTS,
    WEIGHTS,
    Z_SPACES,
    InvalidPole,
    InvalidSpace,
    PoleLabel,
    SpaceLabel,
    UnsupportedWeight,
    delta_series,
    eisenstein,
    eta_series,
    f_basis,
    f_basis_elimination,
    g_series,
    j_series,
)
from etaq.partitions import partitions_upto
from etaq.qseries import PrecisionExceeded, equal_upto, invert, mul, pow_nonneg, scale

P50 = 24 * 50


def bernoulli(n):
    """B_n by the Akiyama-Tanigawa algorithm (independent of the hardcoded constants)."""
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


@pytest.mark.parametrize("k", [4, 6, 8, 10, 14])
def test_eisenstein_constants_from_bernoulli(k):
    assert EISENSTEIN_CONSTANTS[k] == -2 * k / bernoulli(k)


def test_eta_pentagonal():
    eta = eta_series(24 * 40)
    expected = {}
    for j in range(-10, 11):
        n = (6 * j + 1) ** 2
        if n < 24 * 40:
            expected[n] = (-1) ** j
    assert dict(eta.nonzero_items()) == expected
    assert eta.coeff(49) == -1 and eta.coeff(121) == 1


def test_eta_matches_product():
    # q^(1/24) prod (1 - q^n) by direct multiplication
    N = 60
    prod = [1] + [0] * N
    for n in range(1, N + 1):
        prod = [prod[i] - (prod[i - n] if i >= n else 0) for i in range(N + 1)]
    eta = eta_series(1 + 24 * (N + 1))
    assert [eta.coeff(1 + 24 * i) for i in range(N + 1)] == prod


def test_eisenstein_examples():
    assert [c for _, c in eisenstein(0, 24 * 5).items()] == [1, 0, 0, 0, 0]
    assert eisenstein(4, 48).coeff(24) == 240
    assert eisenstein(14, 48).coeff(24) == -24
    with pytest.raises(UnsupportedWeight):
        eisenstein(2, 48)


def test_eisenstein_ring_identities():
    E = {k: eisenstein(k, P50) for k in (4, 6, 8, 10, 14)}
    assert equal_upto(mul(E[4], E[4]), E[8], P50)
    assert equal_upto(mul(E[4], E[6]), E[10], P50)
    assert equal_upto(mul(E[4], E[10]), E[14], P50)
    assert equal_upto(mul(E[6], E[8]), E[14], P50)
    lhs = scale(1728, delta_series(P50))
    rhs = pow_nonneg(E[4], 3) - pow_nonneg(E[6], 2)
    assert equal_upto(lhs, rhs, P50)


def test_delta_and_j():
    D = delta_series(24 * 4)
    assert D.coeff(24) == 1 and D.coeff(48) == -24 and D.coeff(72) == 252
    j = j_series(24 * 4)
    assert j.coeff(-24) == 1 and j.coeff(0) == 744 and j.coeff(24) == 196884 and j.coeff(48) == 21493760


def test_inverse_eta_is_partition_function():
    p = partitions_upto(2000)
    inv = invert(eta_series(24 * 2001))
    assert [inv.coeff(24 * n - 1) for n in range(2001)] == p


def test_g_series_examples():
    assert g_series(SpaceLabel(4, 1), 48).coeff(-1) == 1
    assert g_series(SpaceLabel(4, 1), 48).coeff(23) == 241
    assert g_series(SpaceLabel(0, 1), 48).coeff(23) == 1


@pytest.mark.parametrize("space", [SpaceLabel(k, s) for k in WEIGHTS for s in (1, 7, 23)])
def test_g_series_integral_with_residue(space):
    g = g_series(space, 24 * 30)
    assert g.den == 1
    assert g.residue == (-space.s) % 24 and g.min_exp == -space.s


def test_labels_validate():
    with pytest.raises(InvalidSpace):
        SpaceLabel(2, 1)
    with pytest.raises(InvalidSpace):
        SpaceLabel(4, 2)
    with pytest.raises(InvalidSpace):
        SpaceLabel(4, 25)
    with pytest.raises(InvalidPole):
        PoleLabel(SpaceLabel(4, 1), 26)
    with pytest.raises(InvalidPole):
        PoleLabel(SpaceLabel(4, 1), -23)
    assert len(Z_SPACES) == 72


def test_f_basis_examples():
    sp = SpaceLabel(4, 1)
    assert equal_upto(f_basis(PoleLabel(sp, 1), 24 * 20), g_series(sp, 24 * 20), 24 * 20)
    f25 = f_basis(PoleLabel(sp, 25), 24 * 20)
    assert f25.coeff(-25) == 1 and f25.coeff(-1) == 0
    with pytest.raises(PrecisionExceeded):
        f_basis(PoleLabel(sp, 25), -25)


def test_f_basis_bd_equality_example():
    """a_{4,1}(25 n) = 5^5 b_{25,4,1}(n) when (-n|5) = 1."""
    from etaq.arith import kronecker

    sp = SpaceLabel(4, 1)
    P = 24 * 50
    g = g_series(sp, 25 * P)
    f = f_basis(PoleLabel(sp, 25), P)
    checked = 0
    for n in range(23, P, 24):
        if kronecker(-n, 5) == 1:
            assert g.coeff(25 * n) == 5**5 * f.coeff(n)
            checked += 1
    assert checked > 10


pole_labels = st.builds(
    lambda k, s, t: PoleLabel(SpaceLabel(k, s), s + 24 * t),
    st.sampled_from(WEIGHTS),
    st.sampled_from(range(1, 24, 2)),
    st.integers(0, 4),
)


@given(pole_labels, st.integers(1, 60))
def test_faber_construction_matches_elimination(label, terms):
    """Two independent constructions of f_{D,k,s} agree coefficientwise."""
    P = 24 * terms - label.space.s
    a = f_basis(label, P)
    b = f_basis_elimination(label, P)
    assert equal_upto(a, b, P)
    assert a.den == 1
    assert dict((n, c) for n, c in a.nonzero_items() if n < 0) == {-label.D: 1}


@given(pole_labels, st.integers(1, 20), st.integers(1, 30))
def test_f_basis_precision_overlap(label, t1, t2):
    P1, P2 = 24 * t1 - label.space.s, 24 * (t1 + t2) - label.space.s
    assert equal_upto(f_basis(label, P1), f_basis(label, P2), P1)


def test_f_basis_long_path_matches_short_path():
    """The full-product path (many slots) agrees with the dot-product path."""
    label = PoleLabel(SpaceLabel(6, 5), 77)
    long_ = f_basis(label, 24 * 200)
    short = f_basis(label, 24 * 20)
    assert equal_upto(long_, short, 24 * 20)
    assert equal_upto(long_, f_basis_elimination(label, 24 * 200), 24 * 200)


def test_modular_f_basis():
    label = PoleLabel(SpaceLabel(4, 3), 51)
    mod = 3**10
    exact = f_basis(label, 24 * 100)
    modular = f_basis(label, 24 * 100, mod)
    assert all(modular.coeff(n) == c % mod for n, c in exact.items())
