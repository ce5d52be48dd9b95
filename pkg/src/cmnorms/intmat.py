"""Exact integer linear algebra: Hermite and Smith normal forms.

Matrices are lists of rows of Python ints. Lattices are spanned by rows,
so ``U @ A = H`` is the row-style convention used throughout.
"""

from fractions import Fraction
from math import gcd


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    if not A:
        return []
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def vecmat(v, A):
    if not A:
        return []
    n = len(A[0])
    out = [0] * n
    for c, row in zip(v, A):
        if c:
            for j in range(n):
                out[j] += c * row[j]
    return out


def transpose(A):
    return [list(r) for r in zip(*A)]


def det(A):
    """Determinant of a square matrix with int or Fraction entries (Bareiss)."""
    n = len(A)
    if n == 0:
        return 1
    if any(isinstance(x, Fraction) for row in A for x in row):
        den = 1
        for row in A:
            for x in row:
                den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
        M = [[int(Fraction(x) * den) for x in row] for row in A]
        return Fraction(det(M), den ** n)
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def hnf(A, transform=False):
    """Row Hermite normal form.

    Returns ``H`` (and ``U`` with ``U A = H`` if ``transform``). Nonzero rows
    come first, pivots are positive and entries above a pivot are reduced
    into ``[0, pivot)``. Zero rows are kept at the bottom so ``H`` has the
    shape of ``A``.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    H = [list(r) for r in A]
    U = identity(m) if transform else None
    row = 0
    pivots = []
    for col in range(n):
        if row >= m:
            break
        # gcd-combine the column below `row` into position `row`
        while True:
            nz = [i for i in range(row, m) if H[i][col]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(H[i][col]))
            if i0 != row:
                H[row], H[i0] = H[i0], H[row]
                if U:
                    U[row], U[i0] = U[i0], U[row]
            done = True
            for i in range(row + 1, m):
                if H[i][col]:
                    q = H[i][col] // H[row][col]
                    Hi, Hr = H[i], H[row]
                    for j in range(col, n):
                        Hi[j] -= q * Hr[j]
                    if U:
                        Ui, Ur = U[i], U[row]
                        for j in range(m):
                            Ui[j] -= q * Ur[j]
                    if Hi[col]:
                        done = False
            if done:
                break
        if not H[row][col]:
            continue
        if H[row][col] < 0:
            H[row] = [-x for x in H[row]]
            if U:
                U[row] = [-x for x in U[row]]
        p = H[row][col]
        for i in range(row):
            q = H[i][col] // p
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[row])]
                if U:
                    U[i] = [a - q * b for a, b in zip(U[i], U[row])]
        pivots.append(col)
        row += 1
    if transform:
        return H, U
    return H


def hnf_basis(A):
    """Nonzero rows of the HNF of ``A``: a canonical basis of its row lattice."""
    if not A:
        return []
    return [r for r in hnf(A) if any(r)]


def pivots(H):
    out = []
    for r in H:
        for j, x in enumerate(r):
            if x:
                out.append(j)
                break
    return out


def solve_int(B, t):
    """Integer row vector ``c`` with ``c B = t``, or ``None`` if there is none."""
    if not B:
        return None if any(t) else []
    H, U = hnf(B, transform=True)
    rem = list(t)
    coeffs = [0] * len(B)
    for i, r in enumerate(H):
        if not any(r):
            break
        j = next(k for k, x in enumerate(r) if x)
        if rem[j] % r[j]:
            return None
        q = rem[j] // r[j]
        coeffs[i] = q
        if q:
            rem = [a - q * b for a, b in zip(rem, r)]
    if any(rem):
        return None
    return vecmat(coeffs, U)


def left_kernel(A):
    """Basis (rows) of the saturated lattice ``{x in Z^m : x A = 0}``."""
    m = len(A)
    if m == 0:
        return []
    H, U = hnf(A, transform=True)
    ker = [U[i] for i in range(m) if not any(H[i])]
    return hnf_basis(ker) if ker else []


def _xgcd(a, b):
    """``(g, x, y)`` with ``x*a + y*b = g = gcd(a, b) > 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def snf(A):
    """Smith normal form ``D = U A V`` with unimodular ``U``, ``V``.

    Returns ``(diag, U, V)`` where ``diag`` lists the invariant factors
    ``d_1 | d_2 | ...`` (length ``min(m, n)``, trailing zeros for rank
    deficiency).
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(r) for r in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def combine_rows(i, j, x, y, u, v):
        # rows (i, j) <- (x*r_i + y*r_j, u*r_i + v*r_j), x*v - y*u = 1
        for M in (D, U):
            ri, rj = M[i], M[j]
            M[i] = [x * a + y * b for a, b in zip(ri, rj)]
            M[j] = [u * a + v * b for a, b in zip(ri, rj)]

    def combine_cols(i, j, x, y, u, v):
        for M in (D, V):
            for r in M:
                a, b = r[i], r[j]
                r[i], r[j] = x * a + y * b, u * a + v * b

    def bezout(a, b):
        g, x, y = _xgcd(a, b)
        return x, y, -b // g, a // g

    for t in range(min(m, n)):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nz:
            break
        _, i0, j0 = min(nz)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            for i in range(t + 1, m):
                if D[i][t]:
                    a, b = D[t][t], D[i][t]
                    if b % a == 0:
                        combine_rows(t, i, 1, 0, -(b // a), 1)
                    else:
                        combine_rows(t, i, *bezout(a, b))
            for j in range(t + 1, n):
                if D[t][j]:
                    a, b = D[t][t], D[t][j]
                    if b % a == 0:
                        combine_cols(t, j, 1, 0, -(b // a), 1)
                    else:
                        combine_cols(t, j, *bezout(a, b))
            if any(D[i][t] for i in range(t + 1, m)):
                continue
            # divisibility: pivot must divide the remaining block
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % D[t][t]), None)
            if bad is None:
                break
            combine_rows(t, bad, 1, 1, 0, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    diag = [D[i][i] for i in range(min(m, n))]
    return diag, U, V


def rational_rows_to_int(rows):
    """Scale rational rows by a common denominator: returns ``(int_rows, den)``."""
    den = 1
    for r in rows:
        for x in r:
            q = Fraction(x).denominator
            den = den * q // gcd(den, q)
    return [[int(Fraction(x) * den) for x in r] for r in rows], den


def inverse(A):
    """Exact inverse of a square rational matrix (Gauss-Jordan over Fraction)."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c]), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[p] = M[p], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [row[n:] for row in M]


def solve_rational(B, t):
    """Rational row vector ``c`` with ``c B = t`` for ``B`` of full row rank.

    Returns ``None`` if ``t`` is not in the rational row span.
    """
    k = len(B)
    n = len(t)
    # transpose system: B^T c^T = t^T
    M = [[Fraction(B[i][j]) for i in range(k)] + [Fraction(t[j])] for j in range(n)]
    r = 0
    where = []
    for c in range(k):
        p = next((i for i in range(r, n) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(n):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        where.append(c)
        r += 1
    if any(M[i][k] for i in range(r, n)):
        return None
    out = [Fraction(0)] * k
    for i, c in enumerate(where):
        out[c] = M[i][k]
    return out
