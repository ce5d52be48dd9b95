"""Exact arithmetic in a monogenic totally real number field ``F = Q(alpha)``.

Elements are stored in the power basis ``1, alpha, ..., alpha^(d-1)`` as an
integer numerator vector over a common positive denominator. Real embeddings
are handled with exact rational isolating intervals (Sturm sequences and
bisection); floating point never enters a decision.
"""

import threading
from fractions import Fraction
from math import gcd

from . import intmat


class NotIrreducible(ValueError):
    pass


class NotTotallyReal(ValueError):
    pass


class BadDifferentGenerator(ValueError):
    pass


# ---------------------------------------------------------------------------
# rational polynomials, ascending coefficient lists


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_eval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_deriv(p):
    return [i * c for i, c in enumerate(p)][1:]


def poly_rem(a, b):
    a = [Fraction(c) for c in _trim(a)]
    b = _trim(b)
    lb = Fraction(b[-1])
    while len(a) >= len(b):
        q = a[-1] / lb
        s = len(a) - len(b)
        for i, c in enumerate(b):
            a[s + i] -= q * c
        a = _trim(a)
    return a


def sturm_sequence(p):
    seq = [_trim(p), _trim(poly_deriv(p))]
    while seq[-1] and len(seq[-1]) > 1:
        r = poly_rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(seq, x):
    signs = [s for s in (poly_eval(q, x) for q in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def isolate_real_roots(p):
    """Disjoint rational intervals ``(lo, hi]`` each holding one real root of
    the squarefree polynomial ``p``, sorted by decreasing root."""
    p = _trim(p)
    seq = sturm_sequence(p)
    bound = 1 + max(abs(Fraction(c) / p[-1]) for c in p[:-1]) if len(p) > 1 else 1
    lo, hi = -Fraction(bound), Fraction(bound)
    out = []
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = _sign_changes(seq, a) - _sign_changes(seq, b)
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        stack.append((a, mid))
        stack.append((mid, b))
    out.sort(key=lambda iv: iv[0], reverse=True)
    return out


class Interval:
    """Closed rational interval ``[lo, hi]`` with exact endpoint arithmetic."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        self.lo = Fraction(lo)
        self.hi = Fraction(lo if hi is None else hi)

    def __add__(self, other):
        if not isinstance(other, Interval):
            other = Interval(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Interval) else Interval(-other))

    def __rsub__(self, other):
        return Interval(other) - self

    def __mul__(self, other):
        if not isinstance(other, Interval):
            other = Fraction(other)
            a, b = self.lo * other, self.hi * other
            return Interval(min(a, b), max(a, b))
        ps = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def square(self):
        if self.lo >= 0:
            return Interval(self.lo ** 2, self.hi ** 2)
        if self.hi <= 0:
            return Interval(self.hi ** 2, self.lo ** 2)
        return Interval(0, max(self.lo ** 2, self.hi ** 2))

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, x):
        return self.lo <= x <= self.hi

    def abs_upper(self):
        return max(abs(self.lo), abs(self.hi))

    def __repr__(self):
        return f"Interval({float(self.lo):.12g}, {float(self.hi):.12g})"


# ---------------------------------------------------------------------------


class Field:
    """A monogenic totally real number field given by a monic integral polynomial.

    ``min_poly`` is an ascending coefficient list. The different generator
    defaults to ``f'(alpha)``; ``delta_override`` (power-basis coefficients)
    replaces it after validation. Roots are ordered by decreasing value, so
    embedding 0 is the largest root.
    """

    def __init__(self, min_poly, delta_override=None, label=""):
        f = [int(c) for c in _trim(min_poly)]
        if not f or f[-1] != 1:
            raise ValueError("minimal polynomial must be monic and nonconstant")
        self.min_poly = tuple(f)
        self.degree = len(f) - 1
        self.label = label
        if self.degree > 1:
            import sympy
            x = sympy.Symbol("x")
            if not sympy.Poly(list(reversed(f)), x, domain="QQ").is_irreducible:
                raise NotIrreducible(f"{f} is reducible over Q")
        self._lock = threading.Lock()
        if self.degree == 1:
            r = Fraction(-f[0])
            self._roots = [(r, r)]
        else:
            self._roots = isolate_real_roots(f)
            if len(self._roots) != self.degree:
                raise NotTotallyReal(f"{f} has {len(self._roots)} real roots, degree {self.degree}")
        d = self.degree
        # alpha^k reduced into the power basis, k < 2d
        red = [[int(i == k) for i in range(d)] for k in range(d)]
        for k in range(d, 2 * d):
            prev = [0] + red[k - 1]
            top = prev.pop()
            red.append([prev[i] - top * f[i] for i in range(d)])
        self._red = red
        self.alpha = self.element([0, 1] + [0] * (d - 2)) if d > 1 else self.element([-f[0]])
        fp = self.element(poly_deriv(f))
        self.disc = int((-1) ** (d * (d - 1) // 2) * fp.norm())
        if delta_override is None:
            self.delta = fp
        else:
            delta = self.element(delta_override)
            if not delta.is_totally_positive():
                raise BadDifferentGenerator("different generator is not totally positive")
            u = delta / fp
            if not (u.is_integral() and abs(u.norm()) == 1):
                raise BadDifferentGenerator("override does not generate the different")
            self.delta = delta

    # -- construction helpers
    def element(self, coeffs, den=1):
        return FieldElement(self, coeffs, den)

    def one(self):
        return self.element([1])

    def zero(self):
        return self.element([0])

    def __call__(self, x):
        if isinstance(x, FieldElement):
            return x
        if isinstance(x, (list, tuple)):
            return self.from_rationals(x)
        q = Fraction(x)
        return self.element([q.numerator], q.denominator)

    def from_rationals(self, coeffs):
        qs = [Fraction(c) for c in coeffs]
        den = 1
        for q in qs:
            den = den * q.denominator // gcd(den, q.denominator)
        return self.element([int(q * den) for q in qs], den)

    def key(self):
        return self.min_poly

    def __eq__(self, other):
        return isinstance(other, Field) and self.min_poly == other.min_poly

    def __hash__(self):
        return hash(self.min_poly)

    def __repr__(self):
        return f"Field({list(self.min_poly)}{', ' + self.label if self.label else ''})"

    # -- root intervals
    def root_interval(self, j, width):
        """Isolating interval of root ``j`` refined to width ``<= width``."""
        with self._lock:
            lo, hi = self._roots[j]
            if hi - lo <= width:
                return lo, hi
            f = self.min_poly
            s_hi = poly_eval(f, hi)
            while hi - lo > width:
                mid = (lo + hi) / 2
                v = poly_eval(f, mid)
                if v == 0:
                    lo = hi = mid
                    break
                if (v > 0) == (s_hi > 0):
                    hi, s_hi = mid, v
                else:
                    lo = mid
            self._roots[j] = (lo, hi)
            return lo, hi

    def root_intervals(self, width):
        return [self.root_interval(j, width) for j in range(self.degree)]

    def mult_matrix(self, x):
        """Matrix (rows = coordinates of ``x * alpha^i``) of multiplication by ``x``."""
        rows = []
        b = x
        for _ in range(self.degree):
            rows.append(list(b.coeffs))
            b = b * self.alpha
        return rows


class FieldElement:
    __slots__ = ("field", "num", "den")

    def __init__(self, field, coeffs, den=1):
        d = field.degree
        num = [int(c) for c in coeffs] + [0] * (d - len(coeffs))
        if len(num) > d:
            raise ValueError("too many coefficients")
        den = int(den)
        if den == 0:
            raise ZeroDivisionError
        if den < 0:
            num = [-c for c in num]
            den = -den
        g = den
        for c in num:
            g = gcd(g, c)
        if g > 1:
            num = [c // g for c in num]
            den //= g
        self.field = field
        self.num = tuple(num)
        self.den = den

    @property
    def coeffs(self):
        return [Fraction(c, self.den) for c in self.num]

    def _lift(self, other):
        if isinstance(other, FieldElement):
            return other
        return self.field(other)

    def __add__(self, other):
        other = self._lift(other)
        den = self.den * other.den // gcd(self.den, other.den)
        a, b = den // self.den, den // other.den
        return FieldElement(self.field, [a * x + b * y for x, y in zip(self.num, other.num)], den)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-c for c in self.num], self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, FieldElement):
            q = Fraction(other)
            return FieldElement(self.field, [c * q.numerator for c in self.num], self.den * q.denominator)
        F = self.field
        d = F.degree
        prod = [0] * (2 * d - 1)
        for i, a in enumerate(self.num):
            if a:
                for j, b in enumerate(other.num):
                    if b:
                        prod[i + j] += a * b
        out = prod[:d]
        red = F._red
        for k in range(d, 2 * d - 1):
            c = prod[k]
            if c:
                rk = red[k]
                for i in range(d):
                    out[i] += c * rk[i]
        return FieldElement(F, out, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        M = self.field.mult_matrix(self)
        inv = intmat.inverse(M)
        # row 0 of M^{-1} gives coordinates of x^{-1} (row convention)
        return self.field.from_rationals(inv[0])

    def __truediv__(self, other):
        if not isinstance(other, FieldElement):
            q = Fraction(other)
            return self * (1 / q)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            try:
                other = self.field(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_zero(self):
        return not any(self.num)

    def is_integral(self):
        return self.den == 1

    def is_rational(self):
        return not any(self.num[1:])

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.num):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*a" if i == 1 else f"{c}*a^{i}")
        s = " + ".join(terms) or "0"
        return s if self.den == 1 else f"({s})/{self.den}"

    def to_strings(self):
        return [str(c) for c in self.coeffs]

    # -- trace and norm through the multiplication matrix
    def trace(self):
        M = self.field.mult_matrix(self)
        return sum(Fraction(M[i][i]) for i in range(len(M)))

    def norm(self):
        return Fraction(intmat.det(self.field.mult_matrix(self)))

    def charpoly_den(self):
        return self.den

    # -- embeddings
    def _eval_interval(self, j, width):
        lo, hi = self.field.root_interval(j, width)
        r = Interval(lo, hi)
        acc = Interval(0)
        for c in reversed(self.num):
            acc = acc * r + c
        return acc * Fraction(1, self.den)

    def embed(self, bits):
        """``d`` rational intervals of width ``< 2^-bits`` containing ``sigma_j(x)``."""
        target = Fraction(1, 2 ** bits)
        out = []
        for j in range(self.field.degree):
            w = target
            while True:
                iv = self._eval_interval(j, w)
                if iv.width < target:
                    out.append(iv)
                    break
                w /= 4
        return out

    def signs(self):
        """Exact sign of every real embedding (0 only for the zero element)."""
        if self.is_zero():
            return [0] * self.field.degree
        out = []
        for j in range(self.field.degree):
            w = Fraction(1, 2 ** 8)
            while True:
                iv = self._eval_interval(j, w)
                if iv.lo > 0:
                    out.append(1)
                    break
                if iv.hi < 0:
                    out.append(-1)
                    break
                if iv.width == 0:
                    out.append(0)
                    break
                w /= 2 ** 8
        return out

    def is_totally_positive(self):
        if self.is_zero():
            return False
        return all(s > 0 for s in self.signs())


def make_field(f, delta_override=None, label=""):
    """Build a :class:`Field` from descending or ascending coefficients.

    ``f`` is taken as an ascending list of integer coefficients.
    """
    return Field(f, delta_override=delta_override, label=label)


def trace_norm(x):
    return x.trace(), x.norm()


def is_totally_positive(x):
    return x.is_totally_positive()


def embed(x, bits):
    return x.embed(bits)


def zeta7_field():
    """``Q(zeta_7)^+`` with ``alpha = zeta_7 + zeta_7^{-1}`` and ``delta = (2 - alpha)^2``."""
    return Field([-1, -2, 1, 1], delta_override=[4, -4, 1], label="Q(zeta7)+")
