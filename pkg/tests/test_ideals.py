import random

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from cmnorms.ideals import (EvenPrime, Ideal, NonIntegralInput, NonUnitInput, ZeroElement,
                            factor_element, factor_prime, hilbert_symbol, is_local_square,
                            quad_character, uniformizer, valuation)
from cmnorms.numfield import zeta7_field

coeffs = st.lists(st.integers(-12, 12), min_size=3, max_size=3)


def test_splitting_examples(F):
    (P2,) = factor_prime(F, 2)
    assert (P2.e, P2.f_deg) == (1, 3)
    (P7,) = factor_prime(F, 7)
    assert (P7.e, P7.f_deg) == (3, 1)
    P13 = factor_prime(F, 13)
    assert [(P.e, P.f_deg) for P in P13] == [(1, 1)] * 3
    assert factor_prime(F, 13) == P13  # cached and stable


def test_prime_norm_is_hnf_det(F):
    for p in (2, 3, 7, 13, 29, 43):
        for P in factor_prime(F, p):
            assert P.ideal.norm() == P.norm


def test_valuations(F):
    (P7,) = factor_prime(F, 7)
    assert valuation(F(7), P7) == 3
    assert valuation(F(1), P7) == 0
    assert valuation(2 - F.alpha, P7) == 1
    assert valuation(F(1) / 49, P7) == -6
    with pytest.raises(ZeroElement):
        valuation(F.zero(), P7)


def test_factor_element_examples(F):
    (P7,) = factor_prime(F, 7)
    assert factor_element(F.delta) == {P7: 2}
    assert factor_element(F.one()) == {}
    fac = factor_element(F(-11))
    assert len(fac) == 1
    (P11,) = fac
    assert P11.norm == 11 ** 3 and fac[P11] == 1


def test_ideal_arithmetic(F):
    I = Ideal.from_generators(F, [F(6), F.alpha + 2])
    assert I * I.inverse() == Ideal.unit(F)
    (P7,) = factor_prime(F, 7)
    assert P7.power(3) == Ideal.principal(F(7))
    assert F.delta in P7.power(2) and F.delta not in P7.power(3)


def test_quad_character_examples(F):
    P = factor_prime(F, 13)[0]
    assert quad_character(F(1), P) == 1
    assert quad_character(F(13), P) == 0
    nonsq = next(u for u in range(2, 13) if pow(u, 6, 13) == 12)
    assert quad_character(F(nonsq), P) == -1
    with pytest.raises(EvenPrime):
        quad_character(F(3), factor_prime(F, 2)[0])
    with pytest.raises(NonIntegralInput):
        quad_character(F(1) / 13, P)


def test_local_square_at_two(F):
    (P2,) = factor_prime(F, 2)
    assert is_local_square(F(1), P2)
    assert is_local_square(F(-7), P2)  # regression value
    assert not is_local_square(F(-3), P2)
    assert not is_local_square(F(-11), P2)
    with pytest.raises(NonUnitInput):
        is_local_square(F(2), P2)


def test_local_square_odd_agrees_with_character(F):
    rng = random.Random(7)
    primes = [P for p in (3, 5, 13, 29, 43) for P in factor_prime(F, p)]
    n = 0
    while n < 50:
        u = F.element([rng.randint(-20, 20) for _ in range(3)])
        P = rng.choice(primes)
        if u.is_zero() or valuation(u, P) != 0:
            continue
        assert is_local_square(u, P) == (quad_character(u, P) == 1)
        n += 1


def test_sum_ef_up_to_1000(F):
    for p in sympy.primerange(2, 1000):
        assert sum(P.e * P.f_deg for P in factor_prime(F, p)) == 3


@pytest.mark.criterion(6)
@settings(max_examples=200, deadline=None)
@given(coeffs)
def test_norm_is_product_of_prime_norms(c):
    F = zeta7_field()
    x = F.element(c)
    assume(not x.is_zero())
    prod = 1
    for P, v in factor_element(x).items():
        prod *= P.norm ** v
    assert prod == abs(x.norm())


@pytest.mark.criterion(6)
@settings(max_examples=200, deadline=None)
@given(coeffs, coeffs, coeffs, st.sampled_from([3, 5, 13, 29, 41, 43]), st.integers(0, 2))
def test_hilbert_symmetric_bimultiplicative(a, b, c, p, idx):
    F = zeta7_field()
    x, y, z = F.element(a), F.element(b), F.element(c)
    assume(not (x.is_zero() or y.is_zero() or z.is_zero()))
    Ps = factor_prime(F, p)
    P = Ps[idx % len(Ps)]
    h = hilbert_symbol
    assert h(x, y, P) == h(y, x, P)
    assert h(x * z, y, P) == h(x, y, P) * h(z, y, P)
    assert h(x, -x, P) == 1
    assert h(x, y, P) * h(x, -x * y, P) == 1
    assert h(F.one(), y, P) == 1


@settings(max_examples=200, deadline=None)
@given(coeffs, st.sampled_from([3, 5, 13, 43]))
def test_character_of_square(c, p):
    F = zeta7_field()
    u = F.element(c)
    P = factor_prime(F, p)[0]
    assume(not u.is_zero() and valuation(u, P) == 0)
    assert quad_character(u * u, P) == 1


def _hensel_root(P, k):
    """Root of f modulo p^k attached to a degree-one prime P."""
    F = P.field
    p = P.p
    f = list(F.min_poly)
    r = (-P.gen_poly[0]) % p
    mod = p
    for _ in range(k - 1):
        mod *= p
        fr = sum(c * r ** i for i, c in enumerate(f))
        dfr = sum(i * c * r ** (i - 1) for i, c in enumerate(f) if i)
        r = (r - fr * pow(dfr, -1, mod)) % mod
    return r, mod


def _solvable_mod_p3(a, b, P):
    """Primitive solution of a x^2 + b y^2 = z^2 in O_F / P^3 (deg-1 P).

    Residue sets are bitmasks so that shifting a set is a rotation.
    """
    r, M = _hensel_root(P, 3)
    p = P.p
    full = (1 << M) - 1

    def red(x):
        num = sum(int(c) * r ** i for i, c in enumerate(x.num))
        return num * pow(x.den, -1, M) % M

    def mask(vals):
        out = 0
        for v in vals:
            out |= 1 << v
        return out

    def rot(m, k):
        # {s - k : s in m}
        k %= M
        return ((m >> k) | (m << (M - k))) & full

    A, B = red(a), red(b)
    sq_all = {x * x % M for x in range(M)}
    sq_unit = {x * x % M for x in range(M) if x % p}
    squares = mask(sq_all)
    for U, V in ((A, B), (B, A)):
        others = mask(V * s % M for s in sq_all)
        for s in sq_unit:
            if rot(squares, U * s) & others:
                return True
    return False


@pytest.mark.criterion(6)
@settings(max_examples=200, deadline=None)
@given(coeffs, coeffs, st.integers(0, 1), st.integers(0, 1), st.integers(0, 2))
def test_hilbert_matches_brute_force(ca, cb, ea, eb, idx):
    F = zeta7_field()
    P = factor_prime(F, 13)[idx]
    a, b = F.element(ca), F.element(cb)
    assume(not a.is_zero() and not b.is_zero())
    assume(valuation(a, P) == 0 and valuation(b, P) == 0)
    pi = uniformizer(P)
    a, b = a * pi ** ea, b * pi ** eb
    assert (hilbert_symbol(a, b, P) == 1) == _solvable_mod_p3(a, b, P)
