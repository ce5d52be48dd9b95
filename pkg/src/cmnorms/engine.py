"""Norms of CM values of Borcherds lifts as exact prime factorizations.

For a principal part ``sum c(m, mu) q^-m phi_mu`` the log of the norm of the
lift at the CM cycle is a finite sum over ``(m, mu, c)`` and over the
vectors ``x in P'`` with ``m - Q(x)`` totally positive of Eisenstein
coefficients ``c * beta*(m - Q(x), nu')``. Each such coefficient is an
exact rational multiple of ``log N(p)``, so the result is a factorization.
"""

import json
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import sympy

from .cmext import CMExtension
from .lattice import build_quaternion_model, enumerate_bounded, in_inverse_different
from .numfield import zeta7_field


class DegenerateTerm(ArithmeticError):
    pass


class PrincipalPartError(ValueError):
    pass


class BoundViolation(ArithmeticError):
    pass


FINITE, ZERO, POLE, INDETERMINATE = "finite", "zero", "pole", "indeterminate"


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PPTerm:
    m: object
    c: int
    mu: tuple = None      # Smith residues in L'/L; None resolves from m


@dataclass
class PrincipalPart:
    terms: list

    @classmethod
    def from_pairs(cls, F, pairs):
        """``pairs`` of ``(m, c)`` or ``(m, c, mu)`` with ``m`` anything the
        field accepts."""
        out = []
        for p in pairs:
            m, c = F(p[0]), int(p[1])
            mu = tuple(p[2]) if len(p) > 2 and p[2] is not None else None
            if not m.is_totally_positive():
                raise PrincipalPartError(f"m = {m} is not totally positive")
            out.append(PPTerm(m, c, mu))
        return cls(out)

    def resolved(self, model):
        out = []
        for t in self.terms:
            mu = t.mu if t.mu is not None else model.resolve_mu(t.m)
            if not model.L_disc.coset_ok(t.m, mu):
                raise PrincipalPartError(f"m = {t.m} is not in Q(mu) + inverse different")
            out.append(PPTerm(t.m, t.c, mu))
        return PrincipalPart(out)

    def max_norm(self):
        return max((abs(t.m.norm()) for t in self.terms), default=0)


def elkies_principal_part(F=None):
    """``2 q^{-1/delta} phi_0 - 7 q^{-(2 - alpha)/(4 delta)} phi_mu``."""
    F = F or zeta7_field()
    a = F.alpha
    m1 = 1 / F.delta
    m2 = (2 - a) / (4 * F.delta)
    return PrincipalPart.from_pairs(F, [(m1, 2), (m2, -7)])


@dataclass(frozen=True)
class Calibration:
    """Scaling applied to the raw Eisenstein sum.

    ``cycle_multiplier`` weights the CM cycle, ``prefactor`` the CT pairing;
    ``constant_factor`` is the rescaling between the computed function and a
    reference normalization and enters only through ``constant_exponent``.
    """

    cycle_multiplier: Fraction = Fraction(1, 2)
    prefactor: Fraction = Fraction(1)
    constant_factor: Fraction = Fraction(1)
    constant_exponent: Fraction = Fraction(0)

    @classmethod
    def for_point_multiple(cls, point_multiple, h_k, w_k, **kw):
        """Calibration for the cycle ``point_multiple * P`` where ``P`` is one
        CM point of ``Z(O_k)``, using ``deg Z(O_k) = 4 h_k / w_k``."""
        if isinstance(point_multiple, float):
            raise TypeError("point_multiple must be exact, e.g. Fraction(2, 3)")
        mult = Fraction(point_multiple) * Fraction(w_k, 4 * h_k)
        return cls(cycle_multiplier=mult, **kw)

    def to_json(self):
        return {"multiplier": str(self.cycle_multiplier), "prefactor": str(self.prefactor),
                "constant": str(self.constant_factor),
                "constant_exponent": str(self.constant_exponent)}


REFERENCE_CONSTANT = Fraction(2 ** 6 * 3 ** 3)


# ---------------------------------------------------------------------------


def _split_top_level(s):
    """Split ``num/den`` at the first ``/`` outside parentheses."""
    depth = 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            return s[:i], s[i + 1:]
    return s, ""


@dataclass
class FactoredValue:
    """A rational number, 0 or infinity, kept as ``{p: exponent}``.

    Exponents are Fractions. ``indeterminate`` lists primes whose exponent
    is not determined; ``status`` is one of finite, zero, pole, indeterminate.
    """

    exps: dict = dc_field(default_factory=dict)
    status: str = FINITE
    indeterminate: frozenset = frozenset()
    bound: int = None
    sign_known = False  # only absolute values are determined

    def __post_init__(self):
        self.exps = {int(p): Fraction(e) for p, e in self.exps.items() if e}
        self.indeterminate = frozenset(self.indeterminate)
        for p in self.indeterminate:
            self.exps.pop(p, None)

    @classmethod
    def from_rational(cls, q):
        q = Fraction(q)
        if q == 0:
            return cls(status=ZERO)
        if q < 0:
            raise ValueError("negative value")
        exps = {}
        for p, k in sympy.factorint(q.numerator).items():
            exps[p] = Fraction(k)
        for p, k in sympy.factorint(q.denominator).items():
            exps[p] = exps.get(p, 0) - k
        return cls(exps)

    @classmethod
    def parse(cls, text):
        """Read ``2^6 * 3^3 / 13^7``-style products (also ``0``, ``inf``, ``1``)."""
        s = text.replace(" ", "")
        if s == "0":
            return cls(status=ZERO)
        if s in ("inf", "oo", "infinity", "∞"):
            return cls(status=POLE)
        num, den = _split_top_level(s)
        exps, indet = {}, set()
        for part, sign in ((num, 1), (den, -1)):
            if part.startswith("(") and part.endswith(")"):
                part = part[1:-1]
            if not part or part == "1":
                continue
            for f in part.replace("^*", "^?").split("*"):
                b, _, e = f.partition("^")
                b = int(b)
                if e == "?":
                    indet.add(b)
                    continue
                e = Fraction(e.strip("()")) if e else Fraction(1)
                for p, k in sympy.factorint(b).items():
                    exps[p] = exps.get(p, 0) + sign * k * e
        return cls(exps, indeterminate=indet)

    def is_finite(self):
        return self.status == FINITE

    def as_fraction(self):
        if self.status != FINITE or self.indeterminate:
            raise ValueError(f"value is {self.status}")
        out = Fraction(1)
        for p, e in self.exps.items():
            if e.denominator != 1:
                raise ValueError("non-integral exponent")
            out *= Fraction(p) ** int(e)
        return out

    def __mul__(self, other):
        st = {self.status, other.status}
        if INDETERMINATE in st:
            return FactoredValue(status=INDETERMINATE)
        if st == {ZERO, POLE}:
            return FactoredValue(status=INDETERMINATE)
        if ZERO in st:
            return FactoredValue(status=ZERO)
        if POLE in st:
            return FactoredValue(status=POLE)
        ex = dict(self.exps)
        for p, e in other.exps.items():
            ex[p] = ex.get(p, 0) + e
        return FactoredValue(ex, indeterminate=self.indeterminate | other.indeterminate)

    def __pow__(self, k):
        k = Fraction(k)
        if self.status != FINITE:
            if k == 0:
                return FactoredValue()
            if self.status in (ZERO, POLE) and k < 0:
                return FactoredValue(status=POLE if self.status == ZERO else ZERO)
            return FactoredValue(status=self.status)
        return FactoredValue({p: e * k for p, e in self.exps.items()},
                             indeterminate=self.indeterminate)

    def __truediv__(self, other):
        return self * other ** -1

    def agrees(self, other):
        """Equality away from either side's indeterminate primes."""
        if self.status != other.status:
            return False
        skip = self.indeterminate | other.indeterminate
        a = {p: e for p, e in self.exps.items() if p not in skip}
        b = {p: e for p, e in other.exps.items() if p not in skip}
        return a == b

    def __eq__(self, other):
        if not isinstance(other, FactoredValue):
            return NotImplemented
        return (self.status == other.status and self.exps == other.exps
                and self.indeterminate == other.indeterminate)

    def render(self):
        if self.status == ZERO:
            return "0"
        if self.status == POLE:
            return "infinity"
        if self.status == INDETERMINATE:
            return "?"

        def fmt(p, e):
            if e == 1:
                return str(p)
            return f"{p}^{e}" if e.denominator == 1 else f"{p}^({e})"

        pos = {p: fmt(p, e) for p, e in self.exps.items() if e > 0}
        pos.update({p: f"{p}^*" for p in self.indeterminate})
        num = [pos[p] for p in sorted(pos)]
        den = [fmt(p, -e) for p, e in sorted(self.exps.items()) if e < 0]
        top = " * ".join(num) if num else "1"
        if not den:
            return top
        bot = den[0] if len(den) == 1 else "(" + " * ".join(den) + ")"
        return f"{top} / {bot}"

    __str__ = render

    def to_json(self, calibration=None):
        out = {"status": self.status,
               "factors": [{"p": p, "exp": f"{e.numerator}/{e.denominator}"}
                           for p, e in sorted(self.exps.items())],
               "indeterminate": sorted(self.indeterminate),
               "bound": self.bound}
        if calibration is not None:
            out["calibration"] = calibration.to_json()
        return out

    @classmethod
    def from_json(cls, obj):
        exps = {int(f["p"]): Fraction(f["exp"]) for f in obj.get("factors", [])}
        return cls(exps, status=obj["status"], indeterminate=obj.get("indeterminate", ()),
                   bound=obj.get("bound"))


# ---------------------------------------------------------------------------


@dataclass
class Contribution:
    m: object          # the principal-part index
    c: int
    x: object          # coefficient of w0
    m_prime: object
    prime: object
    coefficient: Fraction
    indeterminate: bool = False


@dataclass
class PairingResult:
    contributions: list
    intersections: list   # (m, c, x) with m - Q(x) = 0 and nu' = 0
    indeterminate: set


def ct_pairing(model, pp):
    """Expand the CT pairing into per-prime contributions."""
    ext = model.ext
    contribs, hits, indet = [], [], set()
    zero_nu = model.N_disc.zero()
    for term in pp.resolved(model).terms:
        for pt in enumerate_bounded(model, term.m):
            nu = model.glue.match_coords(term.mu, pt.coords)
            if nu is None:
                continue
            m_prime = term.m - pt.q_value
            if pt.boundary:
                if nu == zero_nu:
                    hits.append((term.m, term.c, pt.coeff))
                    continue
                raise DegenerateTerm(f"Q(x) = m with nonzero coset at m = {term.m}")
            ok = in_inverse_different(model.field, m_prime - model.N_disc.q_mod(nu))
            if not ok:
                raise ArithmeticError("matched coset does not represent m - Q(x)")
            if ext.unramified_at_2:
                b = ext.beta_star(m_prime, model.o_of_coset(nu), True)
            else:
                w = model.dyadic_weight(nu, m_prime)
                b = ext.beta_star(m_prime, model.o_of_coset(nu, odd_only=True), True,
                                  dyadic_weight=w)
            if b.indeterminate:
                indet.add(b.prime.p if b.prime is not None else 2)
                contribs.append(Contribution(term.m, term.c, pt.coeff, m_prime, b.prime,
                                             None, True))
                continue
            if b.zero:
                continue
            contribs.append(Contribution(term.m, term.c, pt.coeff, m_prime, b.prime,
                                         b.coefficient))
    return PairingResult(contribs, hits, indet)


def small_prime_bound(model, pp):
    """Primes above this bound cannot occur in the result.

    ``m - Q(x)`` times the different may have denominators at the level of
    ``N``, so the norm bound ``N(m) D`` is scaled by ``|N'/N|``.
    """
    D = abs(model.field.disc)
    level = model.N_disc.order
    return max(math.floor(pp.max_norm() * D * level), level, D)


def cm_value_norm(F, pp, d, cal=None, model=None):
    """``Norm`` of the lift at the CM cycle of discriminant ``d`` as a
    :class:`FactoredValue`."""
    cal = cal or Calibration()
    if model is None:
        ext = CMExtension(F, F(d))
        model = build_quaternion_model(F, ext)
    ext = model.ext
    bound = small_prime_bound(model, pp)
    res = ct_pairing(model, pp)
    if res.intersections:
        total = sum(c for _, c, _ in res.intersections)
        status = ZERO if total > 0 else POLE if total < 0 else INDETERMINATE
        return FactoredValue(status=status, bound=bound)
    exps = {}
    for ctb in res.contributions:
        if ctb.indeterminate:
            continue
        P = ctb.prime
        e = cal.cycle_multiplier * cal.prefactor * ctb.c * ctb.coefficient * P.f_deg
        exps[P.p] = exps.get(P.p, 0) + e
    if cal.constant_exponent:
        for p, k in sympy.factorint(cal.constant_factor.numerator).items():
            exps[p] = exps.get(p, 0) + k * cal.constant_exponent
        for p, k in sympy.factorint(cal.constant_factor.denominator).items():
            exps[p] = exps.get(p, 0) - k * cal.constant_exponent
    indet = set(res.indeterminate)
    if not ext.unramified_at_2:
        indet.add(2)
    out = FactoredValue(exps, indeterminate=indet, bound=bound)
    if not cal.constant_exponent and any(p > bound for p in out.exps):
        raise BoundViolation(f"prime above the small-prime bound {bound}")
    return out


def component_constant(F, pp, d, multiplier, expected):
    """Ratio between ``expected`` and the computed norm at a calibration point."""
    got = cm_value_norm(F, pp, d, Calibration(cycle_multiplier=Fraction(multiplier)))
    return expected / got


# ---------------------------------------------------------------------------
# closed-form local Whittaker values at unimodular primes


class NonUnimodularPrime(ValueError):
    pass


def eisenstein_coeff_unimodular(q, ord_md, parity, X, v=1, unimodular=True):
    """Normalized local Whittaker value at a unimodular prime, as an exact
    rational in ``X = N(p)^-s``.

    ``parity`` is ``n mod 2``; ``ord_md`` is ``ord_p(m * different)``.
    For even ``n`` this is ``W(s, m, 0) * L(s + 1, chi)`` with ``v`` playing
    ``chi(varpi)``. For odd ``n`` it is ``L(r, chi^(m)) / zeta(2r) * b(m, r)``
    at ``X = q^-r`` (the value at ``s = r - 1/2``), with ``v`` the value of
    the twisted character on a uniformizer (ignored when ``ord_md`` is odd).
    """
    if not unimodular:
        raise NonUnimodularPrime("closed forms hold only at unimodular primes")
    q, X = Fraction(q), Fraction(X)
    if ord_md < 0:
        return Fraction(0)
    if parity % 2 == 0:
        return sum((Fraction(v) * X) ** i for i in range(ord_md + 1))
    k = ord_md // 2
    if ord_md % 2:
        v = 0
    num = 1 - v * X + v * q ** k * X ** (1 + 2 * k) - (q * X * X) ** (k + 1)
    b = num / (1 - q * X * X)
    return (1 - X * X) / (1 - v * X) * b


def eisenstein_series_odd(q, ord_md, X, v=1):
    """The same odd-``n`` value from the local density series."""
    q, X = Fraction(q), Fraction(X)
    a = ord_md
    if a < 0:
        return Fraction(0)
    if a % 2 == 0:
        s = sum((q * X * X) ** j for j in range(1, a // 2 + 1))
        return 1 + (1 - 1 / q) * s + v * q ** (a // 2) * X ** (a + 1)
    s = sum((q * X * X) ** j for j in range(1, (a - 1) // 2 + 1))
    return 1 + (1 - 1 / q) * s - (q * X * X) ** ((a + 1) // 2) / q


# ---------------------------------------------------------------------------
# reference table of CM values


CM_TABLE_LABELS = [
    ("-3", -3), ("-4", -4), ("a-2", [-2, 1, 0]), ("-8", -8), ("-11", -11),
    ("-15", -15), ("-19", -19), ("-23", -23), ("1-8a^2", [1, 0, -8]),
    ("a^2-8", [-8, 0, 1]), ("4a-7", [-7, 4, 0]),
]

CM_TABLE_GOLDEN = {
    "-3": "2^6 * 3^3",
    "-4": "0",
    "a-2": "inf",
    "-8": "2^* * 7^9 * 167^6 * 239^6 / 13^21",
    "-11": "2^18 * 7^9 * 11^3 * 43^6 * 127^6 * 139^6 * 307^6 * 659^6 / (13^21 * 83^21)",
    "-15": "3^18 * 7^18 * 11^6 * 43^12 * 71^12 * 839^6 * 911^6 * 2099^6 * 2339^6"
           " / (13^42 * 41^21 * 251^15)",
    "-19": "2^54 * 19^3 * 71^6 * 127^6 * 211^6 * 223^6 * 743^6 * 911^6 * 1091^6 * 1399^6"
           " * 2339^6 * 2659^6 * 2687^6 * 3571^6 * 4787^6 * 5167^6"
           " / (3^24 * 13^63 * 41^21 * 167^21 * 307^21)",
    "-23": "7^69 * 11^12 * 19^6 * 23^3 * 43^54 * 251^12 * 503^12 * 743^12 * 911^6 * 1091^6"
           " * 5167^6 * 5839^6 / (83^18 * 97^21 * 181^21 * 419^21 * 1049^21)",
    "1-8a^2": "43^6 * 71^2 * 83^2 * 167 / 13^7",
    "a^2-8": "7^7 * 43^2 * 71^2 * 139^2 * 239 / 13^7",
    "4a-7": "2^18 * 43^2 * 71^2 * 83^2 * 127^4 * 251 / 13^14",
}


def golden(label):
    return FactoredValue.parse(CM_TABLE_GOLDEN[label])


def cm_table(F=None, cal=None, labels=None, workers=1):
    """Rows ``(label, d, FactoredValue)`` over Q(zeta_7)^+ with the Elkies
    principal part."""
    F = F or zeta7_field()
    rows = [(lab, d) for lab, d in CM_TABLE_LABELS if labels is None or lab in labels]
    if workers and workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as ex:
            vals = list(ex.map(_table_row, [(d, cal) for _, d in rows]))
    else:
        vals = [_table_row((d, cal)) for _, d in rows]
    return [(lab, d, v) for (lab, d), v in zip(rows, vals)]


def _table_row(args):
    d, cal = args
    F = zeta7_field()
    return cm_value_norm(F, elkies_principal_part(F), F(d), cal)


def dumps(value, cal=None):
    return json.dumps(value.to_json(cal))
