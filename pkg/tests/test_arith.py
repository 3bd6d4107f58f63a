import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from k3lattice.arith import (
    det, hnf, integer_kernel, is_fundamental, lattice_basis, lattice_contains,
    lattice_index, lattice_intersection, legendre, mat_inv, mat_mul,
    smith_normal_form, sqrt_mod, xgcd, ResidueClass,
)
from k3lattice.errors import InvalidArgument, SingularInput


def brute_legendre(x, p):
    x %= p
    if x == 0:
        return 0
    return 1 if any(y * y % p == x for y in range(1, p)) else -1


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 23, 101])
def test_legendre_matches_squares(p):
    for x in range(-p, 2 * p):
        assert legendre(x, p) == brute_legendre(x, p)


def test_legendre_rejects_bad_modulus():
    for p in (2, 9, 1, -3):
        with pytest.raises(InvalidArgument):
            legendre(1, p)


def test_sqrt_mod():
    assert sqrt_mod(2, 7) == 3
    assert sqrt_mod(3, 7) is None
    assert sqrt_mod(5, 1) == 0
    for m in (15, 21, 35, 105):
        for a in range(1, m):
            if Fraction(a, m).denominator != m:
                continue
            z = sqrt_mod(a, m)
            brute = [y for y in range(m) if y * y % m == a]
            assert z == (min(brute) if brute else None)
    with pytest.raises(InvalidArgument):
        sqrt_mod(1, 9)
    with pytest.raises(InvalidArgument):
        sqrt_mod(3, 15)


def test_fundamental():
    fund = [D for D in range(-40, 0) if is_fundamental(D)]
    assert fund == [-40, -39, -35, -31, -24, -23, -20, -19, -15, -11, -8, -7, -4, -3]


def test_xgcd_and_residues():
    for a, b in [(0, 5), (12, -18), (-7, 3), (240, 46)]:
        g, x, y = xgcd(a, b)
        assert g >= 0 and x * a + y * b == g
    r = ResidueClass(7, 12)
    assert (r * r.inverse()).value == 1
    assert (r + 9).value == 4


mats = st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=3, max_size=3)


@settings(max_examples=80, deadline=None)
@given(mats)
def test_snf_properties(M):
    U, S, V = smith_normal_form(M, allow_singular=True)
    assert mat_mul(mat_mul(U, M), V) == S
    assert abs(det(U)) == 1 and abs(det(V)) == 1
    d = [S[i][i] for i in range(3)]
    assert all(S[i][j] == 0 for i in range(3) for j in range(3) if i != j)
    for a, b in zip(d, d[1:]):
        assert (b == 0) or (a != 0 and b % a == 0)
    assert abs(d[0] * d[1] * d[2]) == abs(det(M))


def test_snf_singular_raises():
    with pytest.raises(SingularInput):
        smith_normal_form([[1, 2], [2, 4]])
    _, S, _ = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
    assert [S[i][i] for i in range(3)] == [2, 2, 156]


def test_det_and_inverse():
    A = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    assert det(A) == 18
    inv = mat_inv(A)
    assert mat_mul(A, inv) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert det([[Fraction(1, 2), 1], [1, 2]]) == 0


def test_hnf_and_kernel():
    H = hnf([[4, 6], [6, 9], [2, 3]])
    assert H == [[2, 3]]
    K = integer_kernel([[1, 2, 3]])
    assert len(K) == 2
    for k in K:
        assert k[0] + 2 * k[1] + 3 * k[2] == 0
    assert lattice_index(lattice_basis(K + [[1, 0, 0]])) == 1


def test_lattice_ops():
    rnd = random.Random(3)
    for _ in range(30):
        B1 = [[rnd.randint(-5, 5) for _ in range(2)] for _ in range(2)]
        B2 = [[rnd.randint(-5, 5) for _ in range(2)] for _ in range(2)]
        if det(B1) == 0 or det(B2) == 0:
            continue
        L1, L2 = lattice_basis(B1), lattice_basis(B2)
        assert lattice_index(L1) == abs(det(B1))
        X = lattice_intersection(L1, L2)
        # brute force: points of a box lie in X iff they lie in both
        for x in range(-12, 13):
            for y in range(-12, 13):
                v = (x, y)
                assert lattice_contains(X, v) == (lattice_contains(L1, v) and lattice_contains(L2, v))
    half = lattice_basis([[Fraction(1, 2), 0], [0, 3]])
    assert lattice_index(half) == Fraction(3, 2)
