"""Exact integer and rational primitives.

Matrices are plain lists of lists (or tuples of tuples) of ``int`` or
``Fraction``.  Nothing in here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from sympy import factorint, isprime
from sympy.ntheory.residue_ntheory import sqrt_mod as _sympy_sqrt_mod

from .errors import InvalidArgument, SingularInput

Rat = Fraction


@dataclass(frozen=True)
class ResidueClass:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus <= 0:
            raise InvalidArgument(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def __add__(self, other):
        other = self._coerce(other)
        return ResidueClass(self.value + other.value, self.modulus)

    def __mul__(self, other):
        other = self._coerce(other)
        return ResidueClass(self.value * other.value, self.modulus)

    def _coerce(self, other):
        if isinstance(other, int):
            return ResidueClass(other, self.modulus)
        if other.modulus != self.modulus:
            raise InvalidArgument("residue classes with different moduli")
        return other

    def inverse(self):
        return ResidueClass(pow(self.value, -1, self.modulus), self.modulus)


# ---------------------------------------------------------------------------
# number theory


def is_odd_prime(p) -> bool:
    return isinstance(p, int) and p > 2 and isprime(p)


def prime_divisors(n: int) -> list[int]:
    return sorted(factorint(abs(n)))


def squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factorint(abs(n)).values())


def is_fundamental(D: int) -> bool:
    """True for discriminants of imaginary quadratic fields."""
    if D >= 0:
        return False
    if D % 4 == 1:
        return squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and squarefree(m)
    return False


def legendre(x: int, p: int) -> int:
    """Legendre symbol (x/p) by Euler's criterion."""
    if not is_odd_prime(p):
        raise InvalidArgument(f"legendre needs an odd prime, got {p}")
    r = pow(x % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def sqrt_mod(a: int, m: int):
    """Smallest z in [0, m) with z^2 = a mod m, or None.

    m must be odd and squarefree with gcd(a, m) = 1.
    """
    if m <= 0 or m % 2 == 0 or not squarefree(m):
        raise InvalidArgument(f"modulus must be odd squarefree, got {m}")
    if gcd(a, m) != 1:
        raise InvalidArgument(f"gcd({a}, {m}) != 1")
    if m == 1:
        return 0
    roots = _sympy_sqrt_mod(a % m, m, all_roots=True)
    return min(roots) if roots else None


def xgcd(a: int, b: int):
    """Return (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def lcm(*ns: int) -> int:
    out = 1
    for n in ns:
        out = out * n // gcd(out, n) if n else out
    return abs(out)


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


# ---------------------------------------------------------------------------
# dense matrices


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(A):
    return [list(r) for r in zip(*A)]


def mat_mul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def mat_vec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def det(A):
    """Exact determinant (Bareiss for integers, elimination for rationals)."""
    n = len(A)
    if n == 0:
        return 1
    if all(isinstance(x, int) for row in A for x in row):
        return _bareiss(A)
    M = [[Fraction(x) for x in row] for row in A]
    sign, out = 1, Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            sign = -sign
        out *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return sign * out


def _bareiss(A) -> int:
    M = [list(r) for r in A]
    n, sign, prev = len(M), 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if M[r][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def mat_inv(A):
    """Inverse over Q by Gauss-Jordan."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise SingularInput("matrix is singular")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def solve_left(B, v):
    """Rational coordinates c with sum_i c[i] * B[i] = v (B square, rows)."""
    return mat_vec(transpose(mat_inv(B)), v)


# ---------------------------------------------------------------------------
# Smith and Hermite normal forms


def smith_normal_form(M, allow_singular: bool = False):
    """Return (U, S, V) with U*M*V = S diagonal, d1 | d2 | ..., U, V unimodular.

    The pivot is always the entry of smallest nonzero absolute value in
    the remaining block, ties broken row-major, so output is reproducible.
    """
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U, V = identity(m), identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in (A, V):
            for row in R:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        A[dst] = [a + f * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + f * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, f):
        for R in (A, V):
            for row in R:
                row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = abs(A[i][j])
                    if x and (best is None or x < best[0]):
                        best = (x, i, j)
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            piv = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // piv))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // piv))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % piv), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]

    if not allow_singular and m == n and any(A[i][i] == 0 for i in range(n)):
        raise SingularInput("singular matrix")
    return U, A, V


def hnf(rows):
    """Row Hermite normal form of an integer matrix; zero rows dropped."""
    A = [[int(x) for x in r] for r in rows]
    if not A:
        return []
    m, n = len(A), len(A[0])
    r = 0
    for col in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            b = A[i][col]
            if b == 0:
                continue
            a = A[r][col]
            g, x, y = xgcd(a, b)
            ra, rb = A[r], A[i]
            A[r] = [x * u + y * v for u, v in zip(ra, rb)]
            A[i] = [(-b // g) * u + (a // g) * v for u, v in zip(ra, rb)]
        if A[r][col] == 0:
            continue
        if A[r][col] < 0:
            A[r] = [-u for u in A[r]]
        piv = A[r][col]
        for i in range(r):
            f = A[i][col] // piv
            if f:
                A[i] = [u - f * v for u, v in zip(A[i], A[r])]
        r += 1
    return A[:r]


def integer_kernel(A):
    """Z-basis (as rows) of {x in Z^n : A x = 0}."""
    m = len(A)
    n = len(A[0])
    if m == 0:
        return identity(n)
    _, S, V = smith_normal_form(A, allow_singular=True)
    rank = sum(1 for i in range(min(m, n)) if S[i][i] != 0)
    return [[V[i][j] for i in range(n)] for j in range(rank, n)]


# ---------------------------------------------------------------------------
# Z-lattices inside Q^n, stored as canonical (HNF) row bases


def _common_denominator(vectors) -> int:
    return lcm(*(Fraction(x).denominator for v in vectors for x in v))


def lattice_basis(vectors):
    """Canonical Z-basis of the Z-span of rational vectors."""
    vectors = [list(v) for v in vectors]
    den = _common_denominator(vectors)
    H = hnf([[int(Fraction(x) * den) for x in v] for v in vectors])
    return tuple(tuple(Fraction(x, den) for x in row) for row in H)


def solve_rows(rows, v):
    """Rational c with sum_i c[i] * rows[i] = v, or None; rows independent."""
    k, n = len(rows), len(v)
    # eliminate on the transposed system rows^T c = v
    M = [[Fraction(rows[i][j]) for i in range(k)] + [Fraction(v[j])] for j in range(n)]
    piv_cols, r = [], 0
    for c in range(k):
        p = next((i for i in range(r, n) if M[i][c] != 0), None)
        if p is None:
            raise SingularInput("basis rows are dependent")
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(n):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        piv_cols.append(c)
        r += 1
    if any(M[i][k] != 0 for i in range(r, n)):
        return None
    return [M[i][k] for i in range(k)]


def lattice_coords(basis, v):
    c = solve_rows([list(b) for b in basis], list(v))
    if c is None:
        raise InvalidArgument("vector is outside the span of the lattice")
    return c


def lattice_contains(basis, v) -> bool:
    c = solve_rows([list(b) for b in basis], list(v))
    return c is not None and all(x.denominator == 1 for x in c)


def lattice_dual(basis):
    """Dual basis w.r.t. the standard dot product (full-rank input)."""
    inv = mat_inv([list(b) for b in basis])
    return tuple(tuple(r) for r in transpose(inv))


def lattice_intersection(b1, b2):
    return lattice_basis(lattice_dual(lattice_basis(list(lattice_dual(b1)) + list(lattice_dual(b2)))))


def lattice_index(basis) -> Fraction:
    """[Z^n : L] for a full-rank lattice, via the SNF of a cleared basis."""
    n = len(basis)
    den = _common_denominator(basis)
    _, S, _ = smith_normal_form([[int(Fraction(x) * den) for x in b] for b in basis])
    out = 1
    for i in range(n):
        out *= S[i][i]
    return Fraction(out, den ** n)
