from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from etaq.arith import kronecker
from etaq.hecke import (
    HeckeContext,
    InvalidContext,
    f_dm,
    f_dm_sequence,
    input_precision,
    output_precision,
    t_9,
    t_ell2,
    t_ell2m,
)
from etaq.modforms import InvalidPole, PoleLabel, SpaceLabel, f_basis, g_series
from etaq.qseries import PrecisionExceeded, Q24Series, add, equal_upto, scale

S41 = SpaceLabel(4, 1)


def test_context_validation():
    HeckeContext(S41, 5)
    HeckeContext(SpaceLabel(4, 3), 3)
    with pytest.raises(InvalidContext):
        HeckeContext(S41, 3)
    with pytest.raises(InvalidContext):
        HeckeContext(S41, 9)
    with pytest.raises(InvalidContext):
        HeckeContext(S41, 2)
    with pytest.raises(InvalidContext):
        t_ell2(HeckeContext(SpaceLabel(4, 3), 3), g_series(SpaceLabel(4, 3), 100))


def test_t_ell2_principal_part_example():
    ctx = HeckeContext(S41, 5)
    g = g_series(S41, 25 * 200)
    T = t_ell2(ctx, g)
    assert T.coeff(-1) == 25 * kronecker(-12, 5) == -25
    assert T.coeff(-25) == 5**5
    assert T.coeff(23) == g.coeff(575) + 25 * kronecker(12 * 23, 5) * g.coeff(23)


def test_t_ell2_zero_series():
    ctx = HeckeContext(S41, 7)
    z = Q24Series(23, -1, 24 * 49 * 10, [])
    assert all(c == 0 for _, c in t_ell2(ctx, z).items())


def test_t_9_example():
    sp = SpaceLabel(4, 3)
    ctx = HeckeContext(sp, 3)
    g = g_series(sp, 9 * 24 * 10)
    assert t_9(ctx, g).coeff(-3) == -3
    z = Q24Series(21, -3, 24 * 20, [])
    assert all(c == 0 for _, c in t_9(ctx, z).items())


def test_t_9_off_class_quotient():
    """n/9 can leave the residue class; those terms must read zero."""
    sp = SpaceLabel(4, 3)
    ctx = HeckeContext(sp, 3)
    g = g_series(sp, 9 * 24 * 10)
    T = t_9(ctx, g)
    # n = 45: 45/9 = 5 is not = -3 mod 24, and (15|3) = 0
    assert T.coeff(45) == g.coeff(405)


def test_precision_rules():
    assert output_precision(5, 24 * 25 + 1) == 25
    assert output_precision(5, -1) == -25
    for ell in (5, 7):
        for P in (-30, 1, 47, 1000):
            for m in (1, 2):
                assert output_precision(ell, input_precision(ell, P, m), m) >= P
    f = g_series(S41, 24 * 25)
    assert t_ell2(HeckeContext(S41, 5), f).precision == output_precision(5, f.precision)


def random_series(space, data, slots):
    return Q24Series(space.residue, -space.s, -space.s + 24 * slots, data)


@given(st.lists(st.integers(-50, 50), min_size=300, max_size=300), st.lists(st.integers(-50, 50), min_size=300, max_size=300))
def test_t_9_linear(a, b):
    sp = SpaceLabel(6, 9)
    ctx = HeckeContext(sp, 3)
    f, g = random_series(sp, a, 300), random_series(sp, b, 300)
    assert t_9(ctx, add(f, g)) == add(t_9(ctx, f), t_9(ctx, g))


def test_commutativity():
    g = g_series(S41, 25 * 49 * 24 * 4)
    c5, c7 = HeckeContext(S41, 5), HeckeContext(S41, 7)
    a = t_ell2(c5, t_ell2(c7, g))
    b = t_ell2(c7, t_ell2(c5, g))
    P = min(a.precision, b.precision)
    assert P > 24 * 3
    assert equal_upto(a, b, P)


def test_t_ell2m_recursion():
    ctx = HeckeContext(S41, 5)
    g = g_series(S41, 625 * 24 * 4)
    assert t_ell2m(ctx, g, 1) == t_ell2(ctx, g)
    lhs = t_ell2m(ctx, g, 2)
    rhs = add(t_ell2(ctx, t_ell2(ctx, g)), scale(-(5**5), g))
    assert equal_upto(lhs, rhs, lhs.precision)


def test_f_dm_examples():
    ctx = HeckeContext(S41, 5)
    P = 24 * 10
    F = f_dm(ctx, 1, 1, P)
    assert equal_upto(F, scale(5**5, f_basis(PoleLabel(S41, 25), P)), P)
    assert dict((n, c) for n, c in F.nonzero_items() if n < 0) == {-25: 5**5}
    assert equal_upto(f_dm(ctx, 1, 0, P), f_basis(PoleLabel(S41, 1), P), P)


def test_f_dm_rational_case():
    """2k - s - 2 < 0: the Hecke image has powers of ell in the denominator."""
    sp = SpaceLabel(0, 1)
    ctx = HeckeContext(sp, 5)
    P = 24 * 10
    F = f_dm(ctx, 1, 1, P)
    assert F.coeff(-25) == Fraction(1, 125)
    assert equal_upto(F, scale(Fraction(1, 125), f_basis(PoleLabel(sp, 25), P)), P)


def test_f_dm_errors():
    ctx = HeckeContext(S41, 5)
    with pytest.raises(InvalidPole):
        f_dm(ctx, 25, 1, 48)
    with pytest.raises(InvalidPole):
        f_dm(ctx, 2, 1, 48)
    short = f_basis(PoleLabel(S41, 1), 100)
    with pytest.raises(PrecisionExceeded):
        f_dm(ctx, 1, 1, 24 * 10, base=short)


@pytest.mark.parametrize("space,D,ell", [(SpaceLabel(4, 1), 49, 5), (SpaceLabel(10, 7), 7, 5), (SpaceLabel(6, 3), 3, 3), (SpaceLabel(8, 21), 21, 3)])
def test_f_dm_matches_basis_for_several_m(space, D, ell):
    ctx = HeckeContext(space, ell)
    P = 24 * 6
    seq = f_dm_sequence(ctx, D, 2, P)
    L = ell * ell
    for m, F in enumerate(seq):
        ref = f_basis(PoleLabel(space, L**m * D), P)
        assert equal_upto(F, scale(Fraction(ell) ** (space.top_exponent * m), ref), P)


def test_negative_power_mod_ell_rejected():
    sp = SpaceLabel(0, 1)
    ctx = HeckeContext(sp, 5)
    g = g_series(sp, 25 * 100, 5**6)
    with pytest.raises(ValueError):
        t_ell2(ctx, g)
