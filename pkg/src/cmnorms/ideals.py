"""Prime ideals, valuations, residue fields and odd-prime Hilbert symbols.

Ideals of ``O_F = Z[alpha]`` are Z-modules of full rank, stored as an
integer matrix in row Hermite normal form over a positive denominator.
Primes come from Dedekind's criterion (``f mod p``), which is valid because
the field is monogenic.
"""

import threading
from fractions import Fraction
from math import gcd

import sympy
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor, gf_pow_mod, gf_rem

from . import intmat


class ZeroElement(ValueError):
    pass


class EvenPrime(ValueError):
    """Raised by local symbols that are only implemented at odd primes."""


class NonIntegralInput(ValueError):
    pass


class NonUnitInput(ValueError):
    pass


def _lcm(a, b):
    return a * b // gcd(a, b)


class Ideal:
    """Fractional ideal ``(1/den) * rowspan(num)`` of ``O_F``."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field, rows, den=1):
        rows = [[int(x) for x in r] for r in rows]
        H = intmat.hnf_basis(rows)
        if len(H) != field.degree:
            raise ValueError("ideal basis must have full rank")
        g = den
        for r in H:
            for x in r:
                g = gcd(g, x)
        if g > 1:
            H = [[x // g for x in r] for r in H]
            den //= g
        self.field = field
        self.num = tuple(tuple(r) for r in H)
        self.den = den

    @classmethod
    def from_generators(cls, field, gens):
        """Ideal generated (as an O_F-module) by the field elements ``gens``."""
        rows = []
        for g in gens:
            g = field(g)
            b = g
            for _ in range(field.degree):
                rows.append(list(b.coeffs))
                b = b * field.alpha
        ints, den = intmat.rational_rows_to_int(rows)
        return cls(field, ints, den)

    @classmethod
    def principal(cls, x):
        if x.is_zero():
            raise ZeroElement("zero ideal")
        return cls.from_generators(x.field, [x])

    @classmethod
    def unit(cls, field):
        return cls(field, intmat.identity(field.degree))

    def basis_elements(self):
        return [self.field.element(r, self.den) for r in self.num]

    def __mul__(self, other):
        gens = [a * b for a in self.basis_elements() for b in other.basis_elements()]
        rows = [list(g.coeffs) for g in gens]
        ints, den = intmat.rational_rows_to_int(rows)
        return Ideal(self.field, ints, den)

    def __add__(self, other):
        den = _lcm(self.den, other.den)
        rows = [[x * (den // self.den) for x in r] for r in self.num]
        rows += [[x * (den // other.den) for x in r] for r in other.num]
        return Ideal(self.field, rows, den)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = Ideal.unit(self.field)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def inverse(self):
        """``{x : x I in O_F}`` as the dual of the column lattice of the stacked
        multiplication matrices of the basis."""
        F = self.field
        cols = []
        for b in self.basis_elements():
            M = F.mult_matrix(b)  # row i = coords of b*alpha^i
            # x * b is integral iff x . (column j of M) in Z for all j
            cols.extend(intmat.transpose(M))
        ints, den = intmat.rational_rows_to_int(cols)
        B = intmat.hnf_basis(ints)
        inv = intmat.inverse(B)  # columns of B^{-1} give the dual basis
        dual = [[Fraction(inv[i][j]) * den for i in range(len(B))] for j in range(len(B))]
        rows, d2 = intmat.rational_rows_to_int(dual)
        return Ideal(F, rows, d2)

    def norm(self):
        det = 1
        for i, r in enumerate(self.num):
            det *= r[i]
        return Fraction(abs(det), self.den ** self.field.degree)

    def is_integral(self):
        return self.den == 1

    def contains(self, x):
        """Exact membership of a field element."""
        x = self.field(x)
        # x in I  iff  x*den is in rowspan(num); rowspan is triangular
        v = [Fraction(c) * self.den for c in x.coeffs]
        if any(c.denominator != 1 for c in v):
            return False
        return _in_triangular([int(c) for c in v], self.num)

    def __contains__(self, x):
        return self.contains(x)

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"Ideal(norm={self.norm()})"


def _in_triangular(v, H):
    """Membership of an integer vector in the row span of a square row-HNF."""
    v = list(v)
    for i, r in enumerate(H):
        p = r[i]
        if v[i] % p:
            return False
        q = v[i] // p
        if q:
            for j in range(i, len(v)):
                v[j] -= q * r[j]
    return not any(v)


class PrimeIdeal:
    """A prime of ``O_F`` above ``p`` given by Dedekind data.

    ``gen_poly`` is the monic irreducible factor of ``f mod p`` (ascending
    coefficients in ``[0, p)``); ``index`` is its position in the
    deterministic factor ordering and labels the prime.
    """

    def __init__(self, field, p, gen_poly, e, index=0):
        self.field = field
        self.p = p
        self.gen_poly = tuple(gen_poly)
        self.e = e
        self.f_deg = len(gen_poly) - 1
        self.index = index
        g = field.element(list(gen_poly)[: field.degree]) if self.f_deg < field.degree else None
        gens = [field(p)] + ([g] if g is not None else [])
        if g is None:
            # g = f mod p: the prime is pO_F
            gens = [field(p)]
        self.ideal = Ideal.from_generators(field, gens)
        self.hnf_basis = [list(r) for r in self.ideal.num]
        self._powers = [Ideal.unit(field), self.ideal]
        self._lock = threading.Lock()
        self._crt = {}

    @property
    def norm(self):
        return self.p ** self.f_deg

    def power(self, k):
        with self._lock:
            while len(self._powers) <= k:
                self._powers.append(self._powers[-1] * self.ideal)
            return self._powers[k]

    def __eq__(self, other):
        return (isinstance(other, PrimeIdeal) and self.p == other.p
                and self.gen_poly == other.gen_poly and self.field == other.field)

    def __hash__(self):
        return hash((self.p, self.gen_poly))

    def __lt__(self, other):
        return (self.p, self.index) < (other.p, other.index)

    def label(self):
        return f"P{self.p}" if self.index == 0 and self.e * self.f_deg == self.field.degree \
            else f"P{self.p}_{self.index}"

    def __repr__(self):
        return f"PrimeIdeal(p={self.p}, e={self.e}, f={self.f_deg}, #{self.index})"


_prime_cache = {}
_prime_cache_lock = threading.Lock()


def factor_prime(field, p):
    """Primes of ``O_F`` above the rational prime ``p``, in a fixed order."""
    key = (field.key(), p)
    with _prime_cache_lock:
        hit = _prime_cache.get(key)
    if hit is not None:
        return hit
    f_desc = [ZZ(c) for c in reversed(field.min_poly)]
    _, factors = gf_factor(f_desc, p, ZZ)
    out = []
    for i, (g, e) in enumerate(sorted(factors, key=lambda t: (len(t[0]), [int(c) for c in t[0]]))):
        asc = [int(c) for c in reversed(g)]
        out.append(PrimeIdeal(field, p, asc, int(e), index=i))
    with _prime_cache_lock:
        _prime_cache.setdefault(key, out)
    return _prime_cache[key]


def _vp(n, p):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _valuation_integral(num_vec, P):
    """Valuation of a nonzero integral element given by its coordinate vector."""
    F = P.field
    x = F.element(num_vec)
    bound = P.e * _vp(int(abs(x.norm())), P.p) // P.f_deg if P.f_deg else 0
    # cheap pre-step: strip the rational p-content
    content = 0
    for c in num_vec:
        content = gcd(content, c)
    k0 = _vp(content, P.p) if content else 0
    k = k0 * P.e
    if k0:
        num_vec = [c // P.p ** k0 for c in num_vec]
    k_extra = 0
    while k_extra + k < bound + 1:
        if _in_triangular(num_vec, P.power(k_extra + 1).num):
            k_extra += 1
        else:
            break
    return k + k_extra


def valuation(x, P):
    """Exact P-adic valuation of a nonzero field element or fractional ideal."""
    if isinstance(x, Ideal):
        return _ideal_valuation(x, P)
    x = P.field(x)
    if x.is_zero():
        raise ZeroElement("valuation of zero")
    return _valuation_integral(list(x.num), P) - P.e * _vp(x.den, P.p)


def _ideal_valuation(I, P):
    # min over basis elements of the element valuations
    return min(valuation(b, P) for b in I.basis_elements() if not b.is_zero())


def factor_element(x):
    """Factorization of the principal fractional ideal ``(x)``: ``{P: exponent}``."""
    F = x.field
    if x.is_zero():
        raise ZeroElement("cannot factor zero")
    n = abs(F.element(x.num).norm())
    primes = set(sympy.factorint(int(n)).keys()) | set(sympy.factorint(x.den).keys())
    out = {}
    for p in sorted(primes):
        for P in factor_prime(F, p):
            v = valuation(x, P)
            if v:
                out[P] = v
    return out


def factor_ideal(I):
    F = I.field
    primes = set()
    N = I.norm()
    primes |= set(sympy.factorint(N.numerator).keys())
    primes |= set(sympy.factorint(N.denominator).keys())
    primes |= set(sympy.factorint(I.den).keys())
    out = {}
    for p in sorted(primes):
        for P in factor_prime(F, p):
            v = _ideal_valuation(I, P)
            if v:
                out[P] = v
    return out


# ---------------------------------------------------------------------------
# residue fields


def _crt_one(P, k, v):
    """``s in O_F`` with ``s = 1 mod P^k`` and ``s in P'^(e' v)`` for every
    other prime ``P'`` above ``p``."""
    key = (k, v)
    if key in P._crt:
        return P._crt[key]
    F = P.field
    J = Ideal.unit(F)
    for Q in factor_prime(F, P.p):
        if Q != P:
            J = J * Q.power(Q.e * v)
    A = [list(r) for r in J.num]
    B = [list(r) for r in P.power(k).num]
    c = intmat.solve_int(A + B, [1] + [0] * (F.degree - 1))
    if c is None:
        raise ArithmeticError("CRT idempotent not found")
    s_vec = intmat.vecmat(c[: len(A)], A)
    s = F.element(s_vec)
    P._crt[key] = s
    return s


def integral_rep(u, P, k=1):
    """An element of ``O_F`` congruent to the P-integral ``u`` modulo ``P^k``."""
    F = P.field
    u = F(u)
    p = P.p
    v = _vp(u.den, p)
    mod = p ** (-(-k // P.e) + 1)
    if v:
        if valuation(u, P) < 0:
            raise NonIntegralInput("element is not P-integral")
        s = _crt_one(P, k, v)
        num = s * F.element(u.num)
        pv = p ** v
        if any(c % pv for c in num.num):
            raise ArithmeticError("CRT scaling failed")
        vec = [c // pv for c in num.num]
        rest = u.den // pv
    else:
        vec = list(u.num)
        rest = u.den
    inv = pow(rest, -1, mod)
    return F.element([(c * inv) % mod for c in vec])


def residue(u, P):
    """Image of the P-integral ``u`` in ``F_p[x]/(gen_poly)`` (descending list)."""
    r = integral_rep(u, P, 1)
    p = P.p
    desc = [ZZ(c % p) for c in reversed(r.num)]
    g = [ZZ(c) for c in reversed(P.gen_poly)]
    return [int(c) for c in gf_rem(_strip(desc), g, p, ZZ)]


def _strip(desc):
    i = 0
    while i < len(desc) - 1 and desc[i] == 0:
        i += 1
    return desc[i:] if desc else [ZZ(0)]


def quad_character(u, P):
    """Quadratic residue symbol of ``u`` in ``O_F / P`` (+1, -1 or 0)."""
    if P.p == 2:
        raise EvenPrime("quadratic character at a prime above 2")
    u = P.field(u)
    if not u.is_zero() and valuation(u, P) < 0:
        raise NonIntegralInput("element is not P-integral")
    if u.is_zero():
        return 0
    r = residue(u, P)
    if not any(r):
        return 0
    q = P.norm
    g = [ZZ(c) for c in reversed(P.gen_poly)]
    w = gf_pow_mod([ZZ(c) for c in r], (q - 1) // 2, g, P.p, ZZ)
    w = [int(c) for c in w]
    if w == [1]:
        return 1
    if w == [P.p - 1]:
        return -1
    raise ArithmeticError(f"Euler criterion returned {w}")


def hilbert_symbol(a, b, P):
    """Hilbert symbol ``(a, b)_P`` at an odd prime via the tame symbol."""
    if P.p == 2:
        raise EvenPrime("Hilbert symbol at a prime above 2")
    F = P.field
    a, b = F(a), F(b)
    if a.is_zero() or b.is_zero():
        raise ZeroElement("Hilbert symbol of zero")
    A = valuation(a, P)
    B = valuation(b, P)
    c = (a ** B) / (b ** A)
    if (A * B) % 2:
        c = -c
    return quad_character(c, P)


def uniformizer(P):
    """First HNF basis vector of P that is not in P^2 (or a combination)."""
    F = P.field
    P2 = P.power(2)
    for r in P.hnf_basis:
        if not _in_triangular(r, P2.num):
            return F.element(r)
    for r in P.hnf_basis:
        for s in P.hnf_basis:
            x = F.element(r) + F.element(s)
            if not _in_triangular(list(x.num), P2.num):
                return x
    raise ArithmeticError("no uniformizer found")


def residue_ring_reps(P, k):
    """Coset representatives of ``O_F / P^k`` from the HNF diagonal."""
    H = P.power(k).num
    d = len(H)
    diag = [H[i][i] for i in range(d)]
    import itertools
    for t in itertools.product(*[range(n) for n in diag]):
        yield list(t)


def is_local_square(u, P):
    """Whether the P-unit ``u`` is a square in the completion ``F_P``.

    Odd P uses the residue symbol. Above 2 (unramified only) the question is
    settled by brute force in ``O_F / P^3``.
    """
    F = P.field
    u = F(u)
    if u.is_zero() or valuation(u, P) != 0:
        raise NonUnitInput("is_local_square expects a P-unit")
    if P.p != 2:
        return quad_character(u, P) == 1
    if P.e != 1:
        raise EvenPrime("square test at a ramified prime above 2")
    k = 2 * P.e + 1
    target = integral_rep(u, P, k)
    Pk = P.power(k).num
    for rep in residue_ring_reps(P, k):
        x = F.element(rep)
        diff = x * x - target
        if _in_triangular(list(diff.num), Pk):
            return True
    return False
