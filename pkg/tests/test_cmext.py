from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from cmnorms.cmext import BadDiscriminant, CMExtension, NonIntegralIdeal, SplitType
from cmnorms.ideals import Ideal, factor_element, factor_prime, hilbert_symbol
from cmnorms.numfield import zeta7_field

RATIONAL_D = [-3, -4, -8, -11, -15, -19, -23]


@pytest.fixture(scope="module")
def exts(F):
    return {d: CMExtension(F, F(d)) for d in RATIONAL_D}


def test_bad_discriminants(F):
    with pytest.raises(BadDiscriminant):
        CMExtension(F, F(3))
    with pytest.raises(BadDiscriminant):
        CMExtension(F, F(-7))  # not squarefree at the prime above 7
    with pytest.raises(BadDiscriminant):
        CMExtension(F, F(-5))  # not a square mod 4


def test_gamma_is_integral(exts):
    for ext in exts.values():
        n = ext.gamma_norm
        assert n.den == 1


@pytest.mark.criterion(6)
@pytest.mark.parametrize("d", [-3, -11, -15, -19, -23])
def test_splitting_matches_legendre(exts, d):
    # residue degrees are 1 or 3, so splitting over F follows the rational symbol
    ext = exts[d]
    for p in sympy.primerange(3, 60):
        for P in factor_prime(ext.field, p):
            if d % p == 0:
                want = SplitType.RAMIFIED
            else:
                want = SplitType.SPLIT if sympy.legendre_symbol(d % p, p) == 1 else SplitType.INERT
            assert ext.splitting_type(P) is want


def test_two_behaviour(exts, F):
    (P2,) = factor_prime(F, 2)
    assert exts[-3].splitting_type(P2) is SplitType.INERT
    assert exts[-15].splitting_type(P2) is SplitType.SPLIT
    assert exts[-4].splitting_type(P2) is SplitType.RAMIFIED
    assert not exts[-8].unramified_at_2


@pytest.mark.criterion(6)
def test_rho_examples(exts, F):
    ext = exts[-11]
    assert ext.rho(F(1)) == 1
    assert ext.rho(F(11)) == 1
    P3 = factor_prime(F, 3)[0]  # 3 splits in Q(sqrt -11)
    assert ext.rho({P3: 2}) == 3
    P13 = factor_prime(F, 13)[0]  # inert
    assert ext.rho({P13: 1}) == 0
    assert ext.rho({P13: 2}) == 1
    with pytest.raises(NonIntegralIdeal):
        ext.rho(Ideal.principal(F(1) / 3))


@pytest.mark.criterion(6)
@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=3, max_size=3),
       st.lists(st.integers(-6, 6), min_size=3, max_size=3))
def test_rho_multiplicative_on_coprime(a, b):
    F = zeta7_field()
    ext = CMExtension(F, F(-19))
    x, y = F.element(a), F.element(b)
    assume(not x.is_zero() and not y.is_zero())
    fx, fy = factor_element(x), factor_element(y)
    assume(not set(fx) & set(fy))
    assert ext.rho(x * y) == ext.rho(x) * ext.rho(y)


@pytest.mark.criterion(6)
@settings(max_examples=200, deadline=None)
@given(st.sampled_from([-3, -11, -15, -19, -23]),
       st.lists(st.integers(0, 9), min_size=3, max_size=3))
def test_diff_set_has_odd_size(d, c):
    F = zeta7_field()
    ext = CMExtension(F, F(d))
    m = F.element(c)
    assume(not m.is_zero() and all(s > 0 for s in m.signs()))
    diff, flagged = ext.diff_set(m).resolved()
    assert not flagged
    assert len(diff) % 2 == 1


def test_diff_parity_fills_dyadic_prime(exts, F):
    ext = exts[-4]
    m = F(1) / F.delta
    ds = ext.diff_set(m)
    assert len(ds.undecided) == 1
    diff, flagged = ds.resolved()
    assert flagged and len(diff) % 2 == 1


def test_beta_star_examples(exts, F):
    ext = exts[-11]
    m = F(1) / F.delta
    term = ext.beta_star(m, 1)
    assert term.prime.p == 11 and term.coefficient == 1 and not term.zero
    assert ext.beta_star(m, 0).coefficient == Fraction(1, 2)
    assert ext.beta_star(m, 1, coset_ok=False).zero
    # m delta outside the inverse different
    assert ext.beta_star(F(1) / (3 * F.delta), 1).zero


@pytest.mark.criterion(6)
@settings(max_examples=200, deadline=None)
@given(st.sampled_from([-3, -11, -19, -23]),
       st.lists(st.integers(0, 6), min_size=3, max_size=3), st.integers(0, 1))
def test_beta_star_integral_up_to_half(d, c, o):
    F = zeta7_field()
    ext = CMExtension(F, F(d))
    m = F.element(c) / F.delta
    assume(not m.is_zero() and all(s > 0 for s in m.signs()))
    term = ext.beta_star(m, o)
    assert not term.indeterminate
    if not term.zero:
        assert (2 * term.coefficient).denominator == 1
        assert term.coefficient > 0


def test_local_whittaker_examples(exts, F):
    ext = exts[-11]
    P13 = factor_prime(F, 13)[0]
    m = F(13) / F.delta
    assert ext.local_whittaker_cm(P13, m) == (0, 1)
    assert ext.local_whittaker_cm(P13, F(169) / F.delta) == (1, None)
    (P11,) = factor_prime(F, 11)
    val, der = ext.local_whittaker_cm(P11, F(1) / F.delta)
    assert val == 1 + hilbert_symbol(F(-11), F(-1), P11)
    assert (der is None) == (val != 0)


@pytest.mark.parametrize("d, c", [(-4, 2), (-8, 3)])
def test_dyadic_norm_groups(F, d, c):
    ext = CMExtension(F, F(d))
    (P2,) = factor_prime(F, 2)
    D = ext.dyadic(P2)
    assert D.c == c
    units = 7 * 8 ** (c - 1)
    sizes = [len(D.norm_group(s)) for s in range(c + 1)]
    assert sizes[0] * 2 == units  # local norm index two
    assert sizes[-1] == 1
    for s in range(c):
        assert D.norm_group(s + 1) <= D.norm_group(s)
    H = D.norm_group(1)
    for x in H:
        for y in H:
            prod = D._red(F.element(list(x)) * F.element(list(y)))
            assert prod in H
    assert D.k1_index(0) == 1 and D.k1_index(c) == 2


def test_dyadic_weight_values(F):
    ext = CMExtension(F, F(-8))
    (P2,) = factor_prime(F, 2)
    D = ext.dyadic(P2)
    one = (F.one(), F.zero())
    assert D.weight(one, F.one()) == 2
    half = (F(1) / 2, F.zero())
    # N(1/2) = 1/4 has depth 2 and 1 is a norm
    assert D.weight(half, F(1) / 4) in (Fraction(2), Fraction(1))
    assert D.weight(half, F(3) / 4 * F.alpha) == 0
