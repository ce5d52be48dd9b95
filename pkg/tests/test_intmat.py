from fractions import Fraction

from hypothesis import given, settings, strategies as st

from cmnorms import intmat


def matrices(rows, cols, lo=-9, hi=9):
    return st.lists(st.lists(st.integers(lo, hi), min_size=cols, max_size=cols),
                    min_size=rows, max_size=rows)


def test_hnf_small():
    H = intmat.hnf([[2, 4], [1, 3]])
    assert H == [[1, 1], [0, 2]]


def test_snf_known():
    diag, U, V = intmat.snf([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert diag == [2, 6, 12]


def test_det_fraction():
    assert intmat.det([[Fraction(1, 2), 1], [0, 3]]) == Fraction(3, 2)


def test_solve_int_none():
    assert intmat.solve_int([[2, 0], [0, 2]], [1, 0]) is None
    assert intmat.solve_int([[2, 0], [0, 3]], [4, 9]) == [2, 3]


@settings(max_examples=200, deadline=None)
@given(matrices(3, 4))
def test_hnf_transform(A):
    H, U = intmat.hnf(A, transform=True)
    assert intmat.matmul(U, A) == H
    assert abs(intmat.det(U)) == 1
    piv = intmat.pivots(H)
    assert piv == sorted(piv)
    for i, j in enumerate(piv):
        assert H[i][j] > 0
        assert all(0 <= H[k][j] < H[i][j] for k in range(i))


@settings(max_examples=200, deadline=None)
@given(matrices(4, 3))
def test_snf_equivalence(A):
    diag, U, V = intmat.snf(A)
    D = intmat.matmul(intmat.matmul(U, A), V)
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            assert x == (diag[i] if i == j else 0)
    nz = [x for x in diag if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert abs(intmat.det(U)) == 1 and abs(intmat.det(V)) == 1


@settings(max_examples=200, deadline=None)
@given(matrices(4, 2))
def test_left_kernel(A):
    K = intmat.left_kernel(A)
    for k in K:
        assert intmat.vecmat(k, A) == [0, 0]
    H = intmat.hnf_basis(A)
    assert len(K) == 4 - len(H)


@settings(max_examples=200, deadline=None)
@given(matrices(3, 3, -5, 5), st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_inverse_and_solve(A, c):
    if intmat.det(A) == 0:
        return
    Ai = intmat.inverse(A)
    I = intmat.matmul(A, Ai)
    assert I == intmat.identity(3)
    t = intmat.vecmat(c, A)
    assert intmat.solve_rational(A, t) == c
    assert intmat.solve_int(A, t) == c


def test_snf_no_coefficient_blowup():
    # Gram matrix of a rank-5 sublattice; naive elimination explodes here
    G = [[156, -121, -59, -67, -2], [-121, -134, 78, 99, -92], [-59, 78, 6, 13, 21],
         [-67, 99, 13, -10, 65], [-2, -92, 21, 65, -100]]
    diag, U, V = intmat.snf(G)
    assert diag == [1, 1, 1, 1, 85954098]
    assert max(abs(x) for r in U + V for x in r) < 10 ** 40
