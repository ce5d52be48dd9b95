"""Z-lattices in the trace-zero quaternion model and their discriminant groups.

The finite-adelic lattice is modelled inside ``V = {x in M_2(F) : tr x = 0}``
with ``Q(x) = det(x) / delta``. A vector ``[[b, a], [c, -b]]`` is stored as
the 3d rational coordinates of ``(a, b, c)`` in the power basis, so
``L = M_2(O_F) cap V`` is simply ``Z^(3d)``.

The CM point is cut out by ``W = F * iota(sqrt d)`` where ``iota`` is the
regular representation of ``O_k = O_F + O_F gamma`` on the basis
``(1, gamma)``. ``P = L cap W`` and ``N = L cap W^perp``.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product
from math import gcd, isqrt

from . import intmat
from .ideals import Ideal


class ModelMismatch(ArithmeticError):
    pass


class MultiMatch(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# vectors of V as flat rational lists (a | b | c)


def split3(F, v):
    d = F.degree
    return (F.from_rationals(v[:d]), F.from_rationals(v[d:2 * d]), F.from_rationals(v[2 * d:]))


def join3(a, b, c):
    return list(a.coeffs) + list(b.coeffs) + list(c.coeffs)


def quad_form(F, v):
    a, b, c = split3(F, v)
    return -(b * b + a * c) / F.delta


def bilinear(F, v, w):
    a, b, c = split3(F, v)
    a2, b2, c2 = split3(F, w)
    return -(2 * b * b2 + a * c2 + c * a2) / F.delta


def scale_vec(F, beta, v):
    a, b, c = split3(F, v)
    return join3(beta * a, beta * b, beta * c)


def trace_gram(F, basis):
    n = len(basis)
    G = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            t = bilinear(F, basis[i], basis[j]).trace()
            G[i][j] = G[j][i] = t
    return G


# ---------------------------------------------------------------------------


class OFLattice:
    """A Z-lattice in V with the trace of the bilinear form as Gram matrix."""

    def __init__(self, F, basis, name=""):
        self.field = F
        self.basis = [[Fraction(x) for x in r] for r in basis]
        self.name = name
        self.gram = trace_gram(F, self.basis)
        self._coord_cache = None

    @property
    def rank(self):
        return len(self.basis)

    def q_value(self, v):
        return quad_form(self.field, v)

    def vector(self, coords):
        n = len(self.basis[0])
        out = [Fraction(0)] * n
        for c, r in zip(coords, self.basis):
            if c:
                for j in range(n):
                    out[j] += c * r[j]
        return out

    def coords(self, v):
        """Rational coordinates of ``v`` in this basis (None if outside the span)."""
        return intmat.solve_rational(self.basis, v)

    def contains(self, v):
        c = self.coords(v)
        return c is not None and all(x.denominator == 1 for x in c)

    def dual(self):
        Ginv = intmat.inverse(self.gram)
        rows = [self.vector(r) for r in Ginv]
        return OFLattice(self.field, rows, name=self.name + "'")

    def is_even(self):
        """``Q(L) in partial^{-1}``: Q(b_i) and B(b_i, b_j) times delta integral."""
        F = self.field
        for i, v in enumerate(self.basis):
            if not (quad_form(F, v) * F.delta).is_integral():
                return False
            for w in self.basis[i + 1:]:
                if not (bilinear(F, v, w) * F.delta).is_integral():
                    return False
        return True

    def same_lattice(self, other):
        a, da = intmat.rational_rows_to_int(self.basis)
        b, db = intmat.rational_rows_to_int(other.basis)
        den = da * db // gcd(da, db)
        a = [[x * (den // da) for x in r] for r in a]
        b = [[x * (den // db) for x in r] for r in b]
        return intmat.hnf_basis(a) == intmat.hnf_basis(b)

    def disc_group(self):
        return DiscGroup(self)


class DiscGroup:
    """The finite quadratic module ``L'/L`` in Smith coordinates.

    Elements are tuples of residues modulo ``orders``; the zero coset is the
    all-zero tuple.
    """

    def __init__(self, lattice):
        self.lattice = lattice
        F = lattice.field
        G = lattice.gram
        for row in G:
            for x in row:
                if x.denominator != 1:
                    raise ModelMismatch(f"{lattice.name} is not integral for the trace form")
        Gi = [[int(x) for x in row] for row in G]
        diag, U, V = intmat.snf(Gi)
        self.dual = lattice.dual()
        # rows of Vinv * (dual basis) form the adapted basis
        Vinv = intmat.inverse(V)
        adapted = [self.dual.vector(r) for r in Vinv]
        keep = [i for i, dd in enumerate(diag) if abs(dd) != 1]
        self.orders = tuple(abs(diag[i]) for i in keep)
        self._keep = keep
        self._V = V
        self.generators = [adapted[i] for i in keep]
        self.field = F
        self.order = 1
        for o in self.orders:
            self.order *= o

    def __len__(self):
        return self.order

    def reduce_dual_coords(self, x):
        """Smith residues of the dual-lattice vector with integer dual coords ``x``."""
        y = intmat.vecmat(x, self._V)
        return tuple(y[i] % o for i, o in zip(self._keep, self.orders))

    def element_of(self, v):
        c = self.dual.coords(v)
        if c is None or any(x.denominator != 1 for x in c):
            raise ValueError("vector is not in the dual lattice")
        return self.reduce_dual_coords([int(x) for x in c])

    def lift(self, elt):
        n = len(self.generators[0]) if self.generators else 0
        out = [Fraction(0)] * n
        for c, g in zip(elt, self.generators):
            if c:
                for j in range(n):
                    out[j] += c * g[j]
        if not self.generators:
            out = [Fraction(0)] * len(self.lattice.basis[0])
        return out

    def elements(self):
        for t in product(*[range(o) for o in self.orders]):
            yield t

    def zero(self):
        return tuple(0 for _ in self.orders)

    def add(self, x, y):
        return tuple((a + b) % o for a, b, o in zip(x, y, self.orders))

    def scale(self, k, x):
        return tuple((k * a) % o for a, o in zip(x, self.orders))

    def q_mod(self, elt):
        """A representative of ``Q(mu)``; well defined modulo ``partial^{-1}``."""
        return quad_form(self.field, self.lift(elt))

    def coset_ok(self, m, elt):
        return in_inverse_different(self.field, m - self.q_mod(elt))

    def primary_parts(self):
        """Orders of the p-primary components, keyed by p."""
        import sympy
        out = {}
        for p, k in sympy.factorint(self.order).items():
            out[p] = p ** k
        return out


def in_inverse_different(F, x):
    return (x * F.delta).is_integral()


def q_of_coset(G, mu):
    return G.q_mod(mu)


# ---------------------------------------------------------------------------


@dataclass
class GlueData:
    """``H = L/(P + N)`` inside ``P'/P + N'/N`` and the induced coset matching."""

    L: OFLattice
    P: OFLattice
    N: OFLattice
    L_disc: DiscGroup
    P_disc: DiscGroup
    N_disc: DiscGroup
    H_order: int
    _A: list = dc_field(repr=False, default=None)
    _B: list = dc_field(repr=False, default=None)
    _mu: dict = dc_field(repr=False, default_factory=dict)

    def mu_lift(self, mu):
        """Integer (P'-coords, N'-coords) of a lift of ``mu`` in ``L'``."""
        if mu not in self._mu:
            v = self.L_disc.lift(mu)
            vp, vn = self._split(v)
            self._mu[mu] = (vp, vn)
        return self._mu[mu]

    def _split(self, v):
        cp = self.P_disc.dual.coords(_project(self, v, "P"))
        cn = self.N_disc.dual.coords(_project(self, v, "N"))
        if cp is None or cn is None or any(x.denominator != 1 for x in cp + cn):
            raise ModelMismatch("L' is not contained in P' + N'")
        return [int(x) for x in cp], [int(x) for x in cn]

    def match_coords(self, mu, x_coords):
        """``nu'`` in N'/N with ``(x, nu') in mu + L`` for ``x`` given by its
        P'-coordinates, or None."""
        vp, vn = self.mu_lift(mu)
        t = [a - b for a, b in zip(x_coords, vp)]
        A, B = self._A, self._B
        u = []
        for i, row in enumerate(A):
            # A is upper triangular with positive diagonal
            s = t[i] - sum(u[k] * A[k][i] for k in range(i))
            if s % row[i]:
                return None
            u.append(s // row[i])
        n = [vn[j] + sum(u[k] * B[k][j] for k in range(len(u))) for j in range(len(vn))]
        return self.N_disc.reduce_dual_coords(n)

    def match_cosets(self, mu, nu):
        """All ``nu'`` admissible with ``nu`` in P'/P (list of length 0 or 1)."""
        x = self.P_disc.dual.coords(self.P_disc.lift(nu))
        got = self.match_coords(mu, [int(c) for c in x])
        return [] if got is None else [got]

    def elements(self):
        """Enumerate H as pairs of Smith residues."""
        out = set()
        for nu in self.P_disc.elements():
            got = self.match_cosets(self.L_disc.zero(), nu)
            for g in got:
                out.add((nu, g))
        return sorted(out)


def _project(glue, v, which):
    """Orthogonal projection of ``v`` to ``W`` (``P``) or ``W^perp`` (``N``)."""
    cache = glue.__dict__.setdefault("_proj", {})
    if "W" not in cache:
        cache["W"] = glue.P.basis
    F = glue.L.field
    Pb = glue.P.basis
    # solve for c with v - sum c_i p_i orthogonal (trace form) to P
    G = glue.P.gram
    rhs = [bilinear(F, v, p).trace() for p in Pb]
    c = intmat.solve_rational(G, rhs)  # G symmetric
    vp = glue.P.vector(c)
    if which == "P":
        return vp
    return [a - b for a, b in zip(v, vp)]


# ---------------------------------------------------------------------------


@dataclass
class QuaternionModel:
    field: object
    ext: object
    w0: list
    L: OFLattice
    P: OFLattice
    N: OFLattice
    L_disc: DiscGroup
    P_disc: DiscGroup
    N_disc: DiscGroup
    glue: GlueData
    q_w0: object = None
    p_coeffs: list = None
    _o_cache: dict = dc_field(default_factory=dict, repr=False)

    def o_of_coset(self, nu_prime, odd_only=False):
        return o_of_coset(self, nu_prime, odd_only)

    def dyadic_weight(self, nu_prime, m):
        """Product of the local values at ramified primes above 2 (1 if none)."""
        primes = [P for P in self.ext.ramified_set if P.p == 2]
        if not primes:
            return None
        loc = self._okj()
        v = self.N_disc.lift(nu_prime)
        c = intmat.solve_rational(loc["basis"], v)
        F = self.field
        b = (F.from_rationals(c[:F.degree]), F.from_rationals(c[F.degree:]))
        a = m / loc["q"]
        w = Fraction(1)
        for P in primes:
            w *= self.ext.dyadic(P).weight(b, a)
            if not w:
                break
        return w

    def _okj(self):
        """A vector ``j`` with ``[N : O_k j]`` odd and the F-basis of ``k j``."""
        if "okj" in self._o_cache:
            return self._o_cache["okj"]
        F = self.field
        det_N = intmat.det(self.N.gram)
        cands = list(self.N.basis)
        cands += [[a + b for a, b in zip(u, w)] for i, u in enumerate(self.N.basis)
                  for w in self.N.basis[i + 1:]]
        for j in cands:
            gj = gamma_action(F, self.ext, j)
            basis = [scale_vec(F, F.alpha ** i, j) for i in range(F.degree)]
            basis += [scale_vec(F, F.alpha ** i, gj) for i in range(F.degree)]
            G = trace_gram(F, basis)
            dj = intmat.det(G)
            if dj == 0:
                continue
            ratio = dj / det_N
            idx = isqrt(int(ratio))
            if idx * idx == ratio and idx % 2:
                out = {"j": j, "basis": basis, "q": quad_form(F, j)}
                self._o_cache["okj"] = out
                return out
        raise ModelMismatch("no O_k-generator of N with odd index found")

    def to_json(self):
        """Gram matrices, Smith data and the glue echelon as plain JSON."""
        def mat(M):
            return [[str(x) for x in r] for r in M]

        def disc(G):
            return {"orders": list(G.orders), "order": G.order}

        return {
            "d": self.ext.delta_cm.to_strings(),
            "w0": [str(x) for x in self.w0],
            "gram": {"L": mat(self.L.gram), "P": mat(self.P.gram), "N": mat(self.N.gram)},
            "disc": {"L": disc(self.L_disc), "P": disc(self.P_disc), "N": disc(self.N_disc)},
            "glue": {"H": self.glue.H_order, "A": self.glue._A, "B": self.glue._B},
        }

    def resolve_mu(self, m):
        """The unique ``mu`` in L'/L with ``m in Q(mu) + partial^{-1}``."""
        hits = [mu for mu in self.L_disc.elements() if self.L_disc.coset_ok(m, mu)]
        if len(hits) != 1:
            raise ValueError(f"{len(hits)} cosets of L'/L fit m = {m}")
        return hits[0]


def build_quaternion_model(F, ext, check_shape=None):
    """Construct ``L``, ``P``, ``N``, their discriminant groups and the glue."""
    d = F.degree
    t = ext.gamma_trace
    n = ext.gamma_norm
    # iota(sqrt d) = [[-t, 2], [-2n, t]]
    w0 = join3(F(2), -t, -2 * n)
    L = OFLattice(F, intmat.identity(3 * d), name="L")
    # N = L cap W^perp: kernel of l -> (tr B(l, alpha^j w0))_j
    ws = [scale_vec(F, F.alpha ** j, w0) for j in range(d)]
    K = [[bilinear(F, e, w).trace() for w in ws] for e in L.basis]
    Kint, _ = intmat.rational_rows_to_int(K)
    N_basis = intmat.left_kernel(Kint)
    N = OFLattice(F, [L.vector(r) for r in N_basis], name="N")
    K2 = [[bilinear(F, e, nv).trace() for nv in N.basis] for e in L.basis]
    K2int, _ = intmat.rational_rows_to_int(K2)
    P_basis = intmat.left_kernel(K2int)
    P = OFLattice(F, [L.vector(r) for r in P_basis], name="P")
    if P.rank != d or N.rank != 2 * d:
        raise ModelMismatch("unexpected ranks for P and N")
    for lat in (L, P, N):
        if not lat.is_even():
            raise ModelMismatch(f"{lat.name} is not even")
    L_disc, P_disc, N_disc = DiscGroup(L), DiscGroup(P), DiscGroup(N)
    idx2 = Fraction(P_disc.order * N_disc.order, L_disc.order)
    H = isqrt(int(idx2))
    if H * H != idx2:
        raise ModelMismatch("index identity |H|^2 |L'/L| = |P'/P||N'/N| fails")
    dnorm = abs(ext.delta_cm.norm())
    if N_disc.order != dnorm:
        raise ModelMismatch(f"|N'/N| = {N_disc.order}, expected N(d) = {dnorm}")
    standard = check_shape if check_shape is not None else F.min_poly == (-1, -2, 1, 1)
    if standard and L_disc.order != 8:
        raise ModelMismatch(f"|L'/L| = {L_disc.order}, expected 8")
    q_w0 = quad_form(F, w0)
    # P basis as F-multiples of w0 (a-coordinate of w0 is 2)
    p_coeffs = [split3(F, v)[0] / 2 for v in P.basis]
    if standard:
        # (P, Q) = (O_F x0, Q(x0) x^2) with P' = (2 Q(x0) delta)^{-1} * O_F x0
        I = Ideal.from_generators(F, p_coeffs)
        expected = abs((F(2) * q_w0 * F.delta).norm()) * I.norm() ** 2
        if P_disc.order != expected:
            raise ModelMismatch(f"|P'/P| = {P_disc.order}, expected {expected}")

    glue = GlueData(L, P, N, L_disc, P_disc, N_disc, H)
    # coordinates of L in the basis (P' | N'), echelonized with P columns first
    rows = []
    for e in L.basis:
        vp = _project(glue, e, "P")
        vn = [a - b for a, b in zip(e, vp)]
        cp = P_disc.dual.coords(vp)
        cn = N_disc.dual.coords(vn)
        if any(x.denominator != 1 for x in cp + cn):
            raise ModelMismatch("L is not contained in P' + N'")
        rows.append([int(x) for x in cp + cn])
    Hm = intmat.hnf(rows)
    A = [r[:d] for r in Hm[:d]]
    B = [r[d:] for r in Hm[:d]]
    C = [r[d:] for r in Hm[d:]]
    for i in range(d):
        if A[i][i] <= 0 or any(A[j][i] for j in range(i + 1, d)):
            raise ModelMismatch("glue echelon form is degenerate")
    # L cap N' must be N itself (primitive sublattice)
    N_in_dual = [[int(x) for x in N_disc.dual.coords(v)] for v in N.basis]
    if intmat.hnf_basis(C) != intmat.hnf_basis(N_in_dual):
        raise ModelMismatch("L cap N' differs from N")
    glue._A, glue._B = A, B
    return QuaternionModel(F, ext, w0, L, P, N, L_disc, P_disc, N_disc, glue,
                           q_w0=q_w0, p_coeffs=p_coeffs)


def gamma_action(F, ext, v):
    """``iota(gamma) x`` for ``x`` in ``W^perp``; ``iota(gamma) = [[0, 1], [-n, t]]``."""
    a, b, c = split3(F, v)
    return join3(-b, c, -ext.gamma_norm * b + ext.gamma_trace * c)


def o_of_coset(model, nu_prime, odd_only=False):
    """Ramified primes of k/F at which the coset ``nu_prime`` of N'/N is
    locally integral."""
    cache = model._o_cache
    key = (nu_prime, odd_only)
    if key in cache:
        return cache[key]
    F = model.field
    ext = model.ext
    v = model.N_disc.lift(nu_prime)
    count = 0
    for P in ext.ramified_set:
        if odd_only and P.p == 2:
            continue
        I = Ideal.unit(F)
        for Q, e in ext.disc_factors.items():
            if Q != P:
                I = I * Q.power(e)
        if all(model.N.contains(scale_vec(F, b, v)) for b in I.basis_elements()):
            count += 1
    cache[key] = count
    return count


# ---------------------------------------------------------------------------
# enumeration of P' under the bound Q(x) << m


_SCALE_BITS = 80


def _upper_sqrt(q):
    """Rational upper bound for sqrt(q), q >= 0, within 2^-40 relative slack."""
    q = Fraction(q)
    if q <= 0:
        return Fraction(0)
    s = 2 ** 40
    n = q.numerator * s * s
    r = isqrt(n // q.denominator) + 1
    return Fraction(r, s)


def _mult_range(lo, hi, low, up):
    """Integers ``n`` with ``n * s`` in ``[low, up]`` for some ``s`` in
    ``[lo, hi]`` are confined to the returned range (None: no constraint)."""
    if lo <= 0 <= hi:
        return None
    if hi < 0:
        rng = _mult_range(-hi, -lo, low, up)
        return None if rng is None else (-rng[1], -rng[0])
    top = up // lo if up >= 0 else up // hi
    bot = -((-low) // lo) if low <= 0 else -((-low) // hi)
    return bot, top


@dataclass
class LatticePoint:
    coords: tuple
    coeff: object      # x = coeff * w0
    q_value: object
    boundary: bool = False


def enumerate_bounded(model, m):
    """All ``x`` in ``P'`` with ``m - Q(x)`` totally positive, plus the
    boundary points ``Q(x) = m`` (flagged)."""
    F = model.field
    d = F.degree
    q0 = model.q_w0
    r = m / q0
    if not r.is_totally_positive():
        raise ValueError("m / Q(w0) must be totally positive")
    # dual-lattice basis elements f_i in F with x = sum n_i f_i w0
    f = [split3(F, v)[0] / 2 for v in model.P_disc.dual.basis]
    T = [[(f[i] * f[j]).trace() for j in range(d)] for i in range(d)]
    Tinv = intmat.inverse(T)
    fstar = [sum((f[j] * Tinv[j][i] for j in range(d)), F.zero()) for i in range(d)]
    bits = 64
    r_emb = r.embed(bits)
    R = [_upper_sqrt(iv.hi) for iv in r_emb]
    box = []
    for i in range(d):
        em = fstar[i].embed(bits)
        bound = sum(R[j] * em[j].abs_upper() for j in range(d))
        box.append(int(bound) + 1)
    # integer-scaled interval images sigma_j(f_i) * 2^K for pruning
    K = _SCALE_BITS
    scale = 1 << K
    f_emb = [fi.embed(K + 8) for fi in f]
    lo = [[(f_emb[i][j].lo * scale).__floor__() for j in range(d)] for i in range(d)]
    hi = [[(f_emb[i][j].hi * scale).__ceil__() for j in range(d)] for i in range(d)]
    # r scaled by 2^(2K): sigma_j(r) lies in [rlo_j, rhi_j]
    r_emb2 = r.embed(2 * K + 8)
    s2 = scale * scale
    rlo = [(iv.lo * s2).__floor__() for iv in r_emb2]
    rhi = [(iv.hi * s2).__ceil__() for iv in r_emb2]

    Rs = [(R[j] * scale).__ceil__() for j in range(d)]

    def candidates():
        # scan all but the last coordinate; the last one is confined by
        # |sigma_j(z)| <= sqrt(sigma_j(r)) in every embedding
        last = d - 1
        for head in product(*[range(-b, b + 1) for b in box[:last]]):
            nmin, nmax = -box[last], box[last]
            for j in range(d):
                a = b = 0
                for i, c in enumerate(head):
                    if c > 0:
                        a += c * lo[i][j]
                        b += c * hi[i][j]
                    elif c < 0:
                        a += c * hi[i][j]
                        b += c * lo[i][j]
                rng = _mult_range(lo[last][j], hi[last][j], -Rs[j] - b, Rs[j] - a)
                if rng is not None:
                    nmin, nmax = max(nmin, rng[0]), min(nmax, rng[1])
                    if nmin > nmax:
                        break
            for c in range(nmin, nmax + 1):
                yield head + (c,)

    out = []
    for n in candidates():
        reject = False
        certain = True
        for j in range(d):
            a = b = 0
            for i in range(d):
                c = n[i]
                if c > 0:
                    a += c * lo[i][j]
                    b += c * hi[i][j]
                elif c < 0:
                    a += c * hi[i][j]
                    b += c * lo[i][j]
            # sigma_j(z)^2 * 2^(2K) lies in [sq_lo, sq_hi]
            if a <= 0 <= b:
                sq_lo, sq_hi = 0, max(a * a, b * b)
            else:
                sq_lo, sq_hi = min(a * a, b * b), max(a * a, b * b)
            if sq_lo > rhi[j]:
                reject = True
                break
            if sq_hi >= rlo[j]:
                certain = False
        if reject:
            continue
        z = F.zero()
        for c, fi in zip(n, f):
            if c:
                z = z + fi * c
        if certain:
            out.append(LatticePoint(tuple(n), z, q0 * z * z))
            continue
        diff = r - z * z
        if diff.is_zero():
            out.append(LatticePoint(tuple(n), z, q0 * z * z, boundary=True))
        elif diff.is_totally_positive():
            out.append(LatticePoint(tuple(n), z, q0 * z * z))
    out.sort(key=lambda pt: pt.coords)
    return out


def enumerate_naive(model, m, inflate=2):
    """Brute-force oracle: a coefficient box ``inflate`` times larger, exact filter."""
    F = model.field
    d = F.degree
    q0 = model.q_w0
    r = m / q0
    f = [split3(F, v)[0] / 2 for v in model.P_disc.dual.basis]
    # crude box from float-free bound: |n_i| <= sum_j R_j |sigma_j(f*_i)|, inflated
    T = [[(f[i] * f[j]).trace() for j in range(d)] for i in range(d)]
    Tinv = intmat.inverse(T)
    fstar = [sum((f[j] * Tinv[j][i] for j in range(d)), F.zero()) for i in range(d)]
    R = [_upper_sqrt(iv.hi) for iv in r.embed(32)]
    box = [inflate * (int(sum(R[j] * fstar[i].embed(32)[j].abs_upper() for j in range(d))) + 1)
           for i in range(d)]
    # a totally real y is >> 0 iff the coefficients of its characteristic
    # polynomial alternate in sign, i.e. e1, e2, e3 > 0 (cubic case below)
    if d != 3:
        raise NotImplementedError("naive oracle is written for cubic fields")
    # necessary condition tr(z^2) <= tr(r), checked in integers first
    Tint, den = intmat.rational_rows_to_int(T)
    cap = r.trace() * den
    out = []
    for n in product(*[range(-b, b + 1) for b in box]):
        qn = sum(n[i] * Tint[i][j] * n[j] for i in range(d) for j in range(d))
        if qn > cap:
            continue
        z = sum((fi * c for c, fi in zip(n, f) if c), F.zero())
        y = r - z * z
        e1 = y.trace()
        if y.is_zero():
            out.append(tuple(n))
            continue
        e2 = (e1 * e1 - (y * y).trace()) / 2
        if e1 > 0 and e2 > 0 and y.norm() > 0:
            out.append(tuple(n))
    return sorted(out)
