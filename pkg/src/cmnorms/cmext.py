"""The CM extension ``k = F(sqrt(d))`` and the Eisenstein derivative coefficients.

``d`` is a totally negative element of ``O_F`` that is asserted to generate
the relative discriminant of ``k/F``. The coefficient of ``q^m`` in the
holomorphic part of the incoherent weight one Eisenstein series attached to
``O_k`` is a rational multiple of ``log N(p)`` supported at one non-split
prime; :func:`beta_star` computes that multiple exactly.
"""

import enum
import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import ideals
from .ideals import EvenPrime, Ideal, factor_element, factor_prime, valuation


class NonIntegralIdeal(ValueError):
    pass


class BadDiscriminant(ValueError):
    pass


class UnsupportedPrime(ValueError):
    pass


class SplitType(enum.Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


@dataclass(frozen=True)
class BetaTerm:
    """``coefficient * log N(prime)``; ``zero`` terms carry no prime."""

    prime: object = None
    coefficient: Fraction = Fraction(0)
    zero: bool = True
    indeterminate: bool = False

    @classmethod
    def vanishing(cls):
        return cls()


@dataclass
class DiffSet:
    """Finite primes where the incoherent space fails to represent ``m``.

    ``undecided`` holds ramified primes above 2 whose local symbol is not
    computed; :meth:`resolved` settles at most one of them by parity.
    """

    primes: list
    undecided: list

    def resolved(self):
        if not self.undecided:
            return list(self.primes), False
        if len(self.undecided) == 1:
            # the total count is odd
            if len(self.primes) % 2 == 0:
                return list(self.primes) + list(self.undecided), True
            return list(self.primes), True
        return None, True


class CMExtension:
    def __init__(self, field, d, label=""):
        F = field
        d = F(d)
        self.field = F
        self.delta_cm = d
        self.label = label
        if d.is_zero() or any(s > 0 for s in d.signs()):
            raise BadDiscriminant("d must be totally negative")
        self.rel_disc = Ideal.principal(d)
        self.disc_factors = factor_element(d)
        self.gamma_trace = self._find_trace()
        self.ramified_set = sorted(self.disc_factors)
        self.unramified_at_2 = True
        for P, v in self.disc_factors.items():
            if P.p == 2:
                self.unramified_at_2 = False
                if v < 2 or P.e != 1:
                    raise BadDiscriminant("unsupported discriminant at 2")
            elif v != 1:
                raise BadDiscriminant(f"d is not squarefree at {P}")
        self._split = {}
        self._lock = threading.Lock()

    def _find_trace(self):
        """``t`` with ``t^2 = d mod 4``, so ``gamma = (t + sqrt d)/2`` is integral."""
        F = self.field
        four = Ideal.from_generators(F, [F(4)])
        for bits in product((0, 1), repeat=F.degree):
            t = F.element(list(bits))
            if four.contains(t * t - self.delta_cm):
                return t
        raise BadDiscriminant("d is not a square modulo 4; (t + sqrt d)/2 is never integral")

    @property
    def gamma_norm(self):
        t = self.gamma_trace
        return (t * t - self.delta_cm) / 4

    def __repr__(self):
        return f"CMExtension(d={self.delta_cm})"

    # ------------------------------------------------------------------
    def splitting_type(self, P):
        with self._lock:
            hit = self._split.get(P)
        if hit is not None:
            return hit
        if P in self.disc_factors:
            st = SplitType.RAMIFIED
        elif ideals.is_local_square(self.delta_cm, P):
            st = SplitType.SPLIT
        else:
            st = SplitType.INERT
        with self._lock:
            self._split[P] = st
        return st

    def chi(self, x, P):
        """Local character ``chi_P(x)`` of ``k/F``."""
        st = self.splitting_type(P)
        if st is SplitType.SPLIT:
            return 1
        if st is SplitType.INERT:
            return -1 if valuation(x, P) % 2 else 1
        if P.p == 2:
            raise EvenPrime("character at a ramified prime above 2")
        return ideals.hilbert_symbol(self.delta_cm, x, P)

    # ------------------------------------------------------------------
    def rho_local(self, P, n):
        if n < 0:
            raise NonIntegralIdeal(f"negative exponent at {P}")
        st = self.splitting_type(P)
        if st is SplitType.RAMIFIED:
            return 1
        if st is SplitType.INERT:
            return (1 + (-1) ** n) // 2
        return 1 + n

    def rho(self, A):
        """Number of integral ideals of ``O_k`` with relative norm ``A``.

        ``A`` is an :class:`Ideal`, a field element (principal ideal) or a
        ready factorization ``{PrimeIdeal: exponent}``.
        """
        if isinstance(A, Ideal):
            if not A.is_integral():
                raise NonIntegralIdeal("rho of a non-integral ideal")
            fac = ideals.factor_ideal(A)
        elif isinstance(A, dict):
            fac = A
        else:
            fac = factor_element(A)
        out = 1
        for P, n in fac.items():
            out *= self.rho_local(P, n)
            if not out:
                return 0
        return out

    # ------------------------------------------------------------------
    def diff_set(self, m, factors=None):
        """Primes ``p`` with ``chi_p(-m delta) = -1`` (m totally positive)."""
        F = self.field
        md = m * F.delta
        if factors is None:
            factors = factor_element(md)
        primes, undecided = [], []
        for P in sorted(set(factors) | set(self.ramified_set)):
            st = self.splitting_type(P)
            if st is SplitType.RAMIFIED:
                if P.p == 2:
                    undecided.append(P)
                elif ideals.hilbert_symbol(self.delta_cm, -md, P) == -1:
                    primes.append(P)
            elif st is SplitType.INERT and factors.get(P, 0) % 2:
                primes.append(P)
        return DiffSet(primes, undecided)

    def beta_star(self, m, o_mu, coset_ok=True, dyadic_weight=None):
        """Exact coefficient of the Eisenstein derivative at ``(m, mu)``.

        ``o_mu`` counts the ramified primes at which the coset is locally
        integral. When ``k`` ramifies above 2, ``o_mu`` should count only
        the odd ones and ``dyadic_weight`` carries the product of the local
        values at the dyadic ones. Returns a :class:`BetaTerm`.
        """
        if not coset_ok:
            return BetaTerm.vanishing()
        F = self.field
        md = m * F.delta
        fac = factor_element(md)
        # m delta must lie in D^{-1}: W*_p vanishes otherwise
        for P, v in fac.items():
            if v + self.disc_factors.get(P, 0) < 0:
                return BetaTerm.vanishing()
        ds = self.diff_set(m, fac)
        diff, _ = ds.resolved()
        if diff is None:
            return BetaTerm(indeterminate=True)
        if len(diff) % 2 == 0:
            raise ArithmeticError(f"Diff set of even size {len(diff)} for m={m}")
        if len(diff) != 1:
            return BetaTerm.vanishing()
        P = diff[0]
        if P.p == 2 and not self.unramified_at_2 and P in self.disc_factors:
            return BetaTerm(prime=P, coefficient=None, zero=False, indeterminate=True)
        ordp = fac.get(P, 0)
        rho_arg = dict(fac)
        for Q, v in self.disc_factors.items():
            rho_arg[Q] = rho_arg.get(Q, 0) + v
        st = self.splitting_type(P)
        if st is SplitType.INERT:
            rho_arg[P] -= 1
        elif st is not SplitType.RAMIFIED:
            raise ArithmeticError("Diff prime is split")
        coeff = Fraction(2) ** (o_mu - 1) * (1 + ordp) * self.rho(rho_arg)
        if dyadic_weight is not None:
            coeff *= dyadic_weight
        return BetaTerm(prime=P, coefficient=coeff, zero=coeff == 0)

    def local_whittaker_cm(self, P, m):
        """``(W*_P(0), W*_P'(0) / log N(P))`` at an odd or unramified prime
        for a locally integral coset."""
        st = self.splitting_type(P)
        md = m * self.field.delta
        N = valuation(md, P)
        if st is SplitType.RAMIFIED:
            if P.p == 2:
                raise UnsupportedPrime("ramified prime above 2")
            val = 1 + ideals.hilbert_symbol(self.delta_cm, -md, P)
            f_p = self.disc_factors[P]
            return Fraction(val), (Fraction(f_p + N) if val == 0 else None)
        if N < 0:
            raise NonIntegralIdeal("m delta is not integral at an unramified prime")
        val = self.rho_local(P, N)
        return Fraction(val), (Fraction(1 + N, 2) if val == 0 else None)

    def dyadic(self, P):
        """Local data at a ramified prime above 2 (see :class:`DyadicRamified`)."""
        with self._lock:
            cache = self.__dict__.setdefault("_dyadic", {})
            if P not in cache:
                cache[P] = DyadicRamified(self, P)
            return cache[P]

    def splitting_table(self, primes):
        """Plain-data splitting table for debugging exports."""
        out = []
        for p in primes:
            for P in factor_prime(self.field, p):
                out.append({"p": p, "index": P.index, "e": P.e, "f": P.f_deg,
                            "type": self.splitting_type(P).value})
        return out


def _reduce_triangular(v, H):
    """Canonical representative of ``v`` modulo the row span of a square row-HNF."""
    v = list(v)
    for i, r in enumerate(H):
        q = v[i] // r[i]
        if q:
            for j in range(i, len(v)):
                v[j] -= q * r[j]
    return tuple(v)


class DyadicRamified:
    """Norm data of ``k_P / F_P`` at a prime ``P | 2`` with ``e(P|2) = 1``
    that ramifies in ``k``.

    Elements of ``k`` are pairs ``(x, y)`` meaning ``x + y gamma``. For a
    coset of depth ``s`` (``v(b) = -s``) the local weight is
    ``2 / [k^1 : k^1 cap U^(s)]`` when the coset contains a solution of
    ``N(b') = a`` and 0 otherwise; ``U^(c)`` lies in the norm group, where
    ``c = v_P(d)``.
    """

    def __init__(self, ext, P):
        if P.p != 2 or P.e != 1 or P not in ext.disc_factors:
            raise UnsupportedPrime(f"{P} is not an unramified-over-Q prime above 2 ramifying in k")
        self.ext = ext
        self.P = P
        self.field = ext.field
        self.c = ext.disc_factors[P]
        self.t = ext.gamma_trace
        self.n = ext.gamma_norm
        self._Pc = P.power(self.c).num
        self.pi = self._uniformizer()
        self._H = {}
        self._index = {}

    # arithmetic in k = F(gamma), gamma^2 = t gamma - n
    def mul(self, u, w):
        (a, b), (c, d) = u, w
        bd = b * d
        return (a * c - bd * self.n, a * d + b * c + bd * self.t)

    def norm(self, u):
        x, y = u
        return x * x + self.t * x * y + self.n * y * y

    def _uniformizer(self):
        F = self.field
        for rep in ideals.residue_ring_reps(self.P, 2):
            u = (F.element(rep), F.one())
            nm = self.norm(u)
            if not nm.is_zero() and valuation(nm, self.P) == 1:
                return u
        raise ArithmeticError("no uniformizer of k at P")

    def _red(self, x):
        r = ideals.integral_rep(x, self.P, self.c)
        return _reduce_triangular(r.num, self._Pc)

    def _reps(self, r):
        """Representatives ``x0 + x1 pi`` of ``O_k / P_k^r``."""
        F = self.field
        if r <= 0:
            yield (F.zero(), F.zero())
            return
        r0, r1 = (r + 1) // 2, r // 2
        ones = list(ideals.residue_ring_reps(self.P, r1)) if r1 else [None]
        for a in ideals.residue_ring_reps(self.P, r0):
            for b in ones:
                x = F.element(a)
                if b is None:
                    yield (x, F.zero())
                else:
                    px, py = self.pi
                    yb = F.element(b)
                    yield (x + yb * px, yb * py)

    def _pi_power(self, s):
        out = (self.field.one(), self.field.zero())
        for _ in range(s):
            out = self.mul(out, self.pi)
        return out

    def norm_group(self, s):
        """Residues mod ``P^c`` of ``N(U^(s))`` (``U^(0)`` the unit group)."""
        if s in self._H:
            return self._H[s]
        F = self.field
        out = set()
        if s == 0:
            for u in self._reps(self.c):
                nm = self.norm(u)
                if not nm.is_zero() and valuation(nm, self.P) == 0:
                    out.add(self._red(nm))
        else:
            ps = self._pi_power(s)
            for z in self._reps(self.c - s):
                e = self.mul(ps, z)
                out.add(self._red(self.norm((F.one() + e[0], e[1]))))
        self._H[s] = frozenset(out)
        return self._H[s]

    def k1_index(self, s):
        """``[k^1 : k^1 cap U^(s)]``."""
        if s <= 0:
            return 1
        if s not in self._index:
            H = self.norm_group(s)
            cnt = 0
            for u in self._reps(s):
                nm = self.norm(u)
                if nm.is_zero() or valuation(nm, self.P):
                    continue
                if self._red(nm) in H:
                    cnt += 1
            self._index[s] = cnt
        return self._index[s]

    def weight(self, b, a):
        """Local value ``W*_P(0)`` for the coset ``b + O_k`` and target norm ``a``."""
        nb = self.norm(b)
        s = 0 if nb.is_zero() else -valuation(nb, self.P)
        if s <= 0:
            return Fraction(2)
        if s > self.c:
            raise ArithmeticError("coset deeper than the inverse different")
        q = a / nb
        if q.is_zero() or valuation(q, self.P) != 0:
            return Fraction(0)
        if self._red(q) not in self.norm_group(s):
            return Fraction(0)
        return Fraction(2, self.k1_index(s))
