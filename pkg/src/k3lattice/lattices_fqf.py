"""Even lattices, finite quadratic forms and binary genera.

A finite quadratic form is stored on a list of generators g_1..g_r of
orders n_1..n_r (the group is the direct sum of the cyclic groups) and a
symmetric matrix of Fractions: the diagonal holds q(g_i) in [0, 2), the
off-diagonal entries hold b(g_i, g_j) in [0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd

from sympy import factorint

from .arith import (
    det, integer_kernel, is_odd_prime, lcm, legendre, mat_mul, smith_normal_form,
    transpose,
)
from .binary_forms import Form, FormClass, Orientation, enumerate_classes, reduce
from .errors import CapacityError, InvalidArgument, TheoremViolation

TWO_PART_CAP = 2 ** 12


# ---------------------------------------------------------------------------
# even lattices


def signature(gram) -> tuple[int, int]:
    """(s+, s-) by exact congruence diagonalization over Q."""
    A = [[Fraction(x) for x in row] for row in gram]
    n = len(A)
    pos = neg = 0
    for i in range(n):
        if A[i][i] == 0:
            j = next((j for j in range(i + 1, n) if A[j][j] != 0), None)
            if j is not None:
                A[i], A[j] = A[j], A[i]
                for row in A:
                    row[i], row[j] = row[j], row[i]
            else:
                j = next((j for j in range(i + 1, n) if A[i][j] != 0), None)
                if j is None:
                    continue  # radical direction
                # e_i <- e_i + e_j turns the pivot into 2 A[i][j]
                A[i] = [x + y for x, y in zip(A[i], A[j])]
                for row in A:
                    row[i] += row[j]
        piv = A[i][i]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        # Schur complement on the trailing block
        for r in range(i + 1, n):
            f = A[r][i] / piv
            if f:
                for c in range(i + 1, n):
                    A[r][c] -= f * A[i][c]
    return pos, neg


@dataclass(frozen=True)
class EvenLattice:
    gram: tuple

    def __post_init__(self):
        G = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", G)
        n = len(G)
        if any(len(row) != n for row in G):
            raise InvalidArgument("gram matrix is not square")
        if any(G[i][j] != G[j][i] for i in range(n) for j in range(n)):
            raise InvalidArgument("gram matrix is not symmetric")
        if any(G[i][i] % 2 for i in range(n)):
            raise InvalidArgument("gram matrix is not even")
        if det(G) == 0:
            raise InvalidArgument("gram matrix is singular")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> int:
        return det(self.gram)

    @property
    def signature(self) -> tuple[int, int]:
        return signature(self.gram)

    def inner(self, x, y):
        return sum(x[i] * self.gram[i][j] * y[j] for i in range(self.rank) for j in range(self.rank))

    def is_divisible_by(self, p: int) -> bool:
        return all(x % p == 0 for row in self.gram for x in row)

    @classmethod
    def from_form(cls, f, n: int = 1) -> "EvenLattice":
        a, b, c = f.form if isinstance(f, FormClass) else f
        return cls(((2 * a * n, b * n), (b * n, 2 * c * n)))


def scale(L: EvenLattice, n: int) -> EvenLattice:
    if n == 0:
        raise InvalidArgument("scale factor must be nonzero")
    return EvenLattice(tuple(tuple(n * x for x in row) for row in L.gram))


def direct_sum_lattice(L: EvenLattice, M: EvenLattice) -> EvenLattice:
    n, m = L.rank, M.rank
    G = [[0] * (n + m) for _ in range(n + m)]
    for i in range(n):
        for j in range(n):
            G[i][j] = L.gram[i][j]
    for i in range(m):
        for j in range(m):
            G[n + i][n + j] = M.gram[i][j]
    return EvenLattice(G)


def is_primitive_embedding(E) -> bool:
    """Rows of E span a primitive sublattice of Z^n."""
    _, S, _ = smith_normal_form(E, allow_singular=True)
    return all(S[i][i] == 1 for i in range(len(E)))


def orthogonal_complement(L: EvenLattice, E, M: EvenLattice | None = None):
    """Complement of the sublattice spanned by the rows of E (L-coordinates).

    Returns (N, K): the complement lattice and its basis rows in L-coordinates.
    If M is given, E must be an isometric embedding of M.
    """
    E = [list(map(int, r)) for r in E]
    if any(len(r) != L.rank for r in E):
        raise InvalidArgument("embedding rows have the wrong length")
    EG = mat_mul(E, L.gram)
    if M is not None:
        if [list(r) for r in mat_mul(EG, transpose(E))] != [list(r) for r in M.gram]:
            raise InvalidArgument("embedding is not isometric")
    K = integer_kernel(EG)
    if not K:
        raise InvalidArgument("complement is zero")
    N = EvenLattice(mat_mul(mat_mul(K, L.gram), transpose(K)))
    return N, K


# ---------------------------------------------------------------------------
# finite quadratic forms


def _mod2(x) -> Fraction:
    return Fraction(x) % 2


def _mod1(x) -> Fraction:
    return Fraction(x) % 1


@dataclass(frozen=True)
class FiniteQuadraticForm:
    orders: tuple
    q: tuple  # symmetric matrix, see module docstring

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        r = len(orders)
        Q = [[Fraction(x) for x in row] for row in self.q]
        if len(Q) != r or any(len(row) != r for row in Q):
            raise InvalidArgument("q matrix does not match generator count")
        if any(n < 2 for n in orders):
            raise InvalidArgument("generator orders must exceed 1")
        for i in range(r):
            Q[i][i] = _mod2(Q[i][i])
            for j in range(r):
                if i != j:
                    Q[i][j] = _mod1(Q[i][j])
        for i in range(r):
            if (orders[i] ** 2 * Q[i][i]) % 2:
                raise InvalidArgument(f"q(g_{i}) incompatible with order {orders[i]}")
            for j in range(r):
                if Q[i][j] != Q[j][i] and i != j:
                    raise InvalidArgument("bilinear matrix is not symmetric")
                if i != j and (orders[i] * Q[i][j]) % 1:
                    raise InvalidArgument(f"b(g_{i}, g_{j}) incompatible with order {orders[i]}")
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "q", tuple(tuple(row) for row in Q))

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def size(self) -> int:
        out = 1
        for n in self.orders:
            out *= n
        return out

    @property
    def exponent(self) -> int:
        return lcm(*self.orders) if self.orders else 1

    def normalize(self, x):
        return tuple(int(c) % n for c, n in zip(x, self.orders))

    def element_order(self, x) -> int:
        return lcm(*(n // gcd(c, n) for c, n in zip(self.normalize(x), self.orders)))

    def b(self, x, y) -> Fraction:
        r = self.rank
        s = Fraction(0)
        for i in range(r):
            if x[i]:
                for j in range(r):
                    if y[j]:
                        s += x[i] * y[j] * (self.q[i][i] if i == j else self.q[i][j])
        return s % 1

    def value(self, x) -> Fraction:
        r = self.rank
        s = Fraction(0)
        for i in range(r):
            if x[i]:
                s += x[i] * x[i] * self.q[i][i]
                for j in range(i + 1, r):
                    s += 2 * x[i] * x[j] * self.q[i][j]
        return s % 2

    def elements(self):
        for x in product(*(range(n) for n in self.orders)):
            yield x

    def gram_on(self, vectors):
        """(orders, q-matrix) of the subgroup spanned by the given elements."""
        k = len(vectors)
        Q = [[self.value(vectors[i]) if i == j else self.b(vectors[i], vectors[j])
              for j in range(k)] for i in range(k)]
        return Q

    def restrict(self, vectors) -> "FiniteQuadraticForm":
        """Form on the given elements, assumed to be a direct-sum basis."""
        vectors = [self.normalize(v) for v in vectors]
        orders = [self.element_order(v) for v in vectors]
        keep = [i for i, n in enumerate(orders) if n > 1]
        vectors = [vectors[i] for i in keep]
        return FiniteQuadraticForm(tuple(orders[i] for i in keep), self.gram_on(vectors))

    def __neg__(self):
        return FiniteQuadraticForm(self.orders, tuple(tuple(-x for x in row) for row in self.q))

    def __add__(self, other):
        return direct_sum(self, other)

    def primes(self) -> list[int]:
        return sorted(factorint(self.size)) if self.size > 1 else []

    def p_generators(self, p: int):
        out = []
        for i, n in enumerate(self.orders):
            m = n
            while m % p == 0:
                m //= p
            if m != n:
                v = [0] * self.rank
                v[i] = m
                out.append(tuple(v))
        return out

    def p_part(self, p: int) -> "FiniteQuadraticForm":
        return self.restrict(self.p_generators(p))


def trivial_form() -> FiniteQuadraticForm:
    return FiniteQuadraticForm((), ())


def direct_sum(F: FiniteQuadraticForm, G: FiniteQuadraticForm) -> FiniteQuadraticForm:
    r, s = F.rank, G.rank
    Q = [[Fraction(0)] * (r + s) for _ in range(r + s)]
    for i in range(r):
        for j in range(r):
            Q[i][j] = F.q[i][j]
    for i in range(s):
        for j in range(s):
            Q[r + i][r + j] = G.q[i][j]
    return FiniteQuadraticForm(F.orders + G.orders, Q)


def disc_form(L: EvenLattice) -> FiniteQuadraticForm:
    """Discriminant form L^v/L from the Smith form U G V = S.

    The columns V e_i / d_i (d_i > 1) generate L^v/L with orders d_i.
    """
    if not isinstance(L, EvenLattice):
        L = EvenLattice(L)
    G = L.gram
    n = L.rank
    _, S, V = smith_normal_form(G)
    gens, orders = [], []
    for i in range(n):
        d = S[i][i]
        if d > 1:
            gens.append([Fraction(V[r][i], d) for r in range(n)])
            orders.append(d)
    k = len(gens)

    def ip(x, y):
        return sum(x[a] * G[a][c] * y[c] for a in range(n) for c in range(n))

    Q = [[ip(gens[i], gens[j]) for j in range(k)] for i in range(k)]
    return FiniteQuadraticForm(tuple(orders), Q)


# ---------------------------------------------------------------------------
# Jordan splitting of p-primary forms


@dataclass(frozen=True)
class JordanBlock:
    kind: str  # "cyclic", "U" or "V"
    order: int  # p^k
    elements: tuple
    q: Fraction  # q of the generator (cyclic only)


def _vp(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def jordan_blocks(F: FiniteQuadraticForm, p: int) -> list[JordanBlock]:
    """Orthogonal splitting of the p-part into cyclic, U_k and V_k blocks.

    Works on generating sets of the shrinking orthogonal complement and
    raises InvalidArgument if the p-part is degenerate.
    """
    gens = [F.normalize(v) for v in F.p_generators(p)]
    blocks = []
    while True:
        gens = [g for g in gens if any(g)]
        if not gens:
            return blocks
        pk = max(F.element_order(g) for g in gens)
        top = pk // p

        def full(z):  # b-value of exact denominator p^k
            return (top * z) % 1 != 0

        x = next((g for g in gens if full(F.b(g, g))), None)
        if x is None and p != 2:
            for g, h in product(gens, gens):
                s = F.normalize([a + c for a, c in zip(g, h)])
                if full(F.b(s, s)):
                    x = s
                    break
        if x is not None:
            u = int(F.b(x, x) * pk)
            inv = pow(u, -1, pk)
            new = []
            for g in gens:
                if g == x:
                    continue
                c = int(F.b(g, x) * pk) * inv % pk
                new.append(F.normalize([a - c * e for a, e in zip(g, x)]))
            blocks.append(JordanBlock("cyclic", pk, (x,), F.value(x)))
            gens = new
            continue
        pair = next(((g, h) for g, h in product(gens, gens) if full(F.b(g, h))), None)
        if pair is None:
            raise InvalidArgument(f"finite quadratic form is degenerate at p={p}")
        x, y = pair
        # 2x2 block: M = p^k * b-matrix, invertible mod 2
        m11, m12, m22 = (int(F.b(s, t) * pk) for s, t in ((x, x), (x, y), (y, y)))
        dm = (m11 * m22 - m12 * m12) % pk
        dinv = pow(dm, -1, pk)
        new = []
        for g in gens:
            if g == x or g == y:
                continue
            t1, t2 = int(F.b(g, x) * pk), int(F.b(g, y) * pk)
            # solve (al, be) M = (t1, t2) mod p^k
            al = (t1 * m22 - t2 * m12) * dinv % pk
            be = (t2 * m11 - t1 * m12) * dinv % pk
            new.append(F.normalize([a - al * e - be * f for a, e, f in zip(g, x, y)]))
        a = int(F.value(x) * pk) // 2
        c = int(F.value(y) * pk) // 2
        kind = "V" if a % 2 and c % 2 else "U"
        blocks.append(JordanBlock(kind, pk, (x, y), Fraction(0)))
        gens = new


def _block_signature(block: JordanBlock, p: int) -> int:
    k = _vp(block.order, p)
    if block.kind == "U":
        return 0
    if block.kind == "V":
        return 4 if k % 2 else 0
    v = int(block.q * block.order)  # q = v / p^k, v defined mod 2 p^k
    if p == 2:
        u = v % 8
        return (u + (4 if k % 2 and u in (3, 5) else 0)) % 8
    if k % 2 == 0:
        return 0
    w = v // 2 if v % 2 == 0 else (v + block.order) // 2
    return ((0 if p % 4 == 1 else 2) + (0 if legendre(w, p) == 1 else 4)) % 8


def milgram_signature(F: FiniteQuadraticForm) -> int:
    """Signature mod 8 determined by the Gauss sum of F, via Jordan blocks."""
    total = 0
    for p in F.primes():
        for blk in jordan_blocks(F, p):
            total += _block_signature(blk, p)
    return total % 8


def _odd_invariants(F: FiniteQuadraticForm, p: int):
    """Per exponent k: (rank, product of Legendre symbols of the scaled q-values)."""
    inv = {}
    for blk in jordan_blocks(F, p):
        k = _vp(blk.order, p)
        v = int(blk.q * blk.order)
        w = v // 2 if v % 2 == 0 else (v + blk.order) // 2
        r, e = inv.get(k, (0, 1))
        inv[k] = (r + 1, e * legendre(w, p))
    return sorted(inv.items())


def _two_part_isomorphic(F: FiniteQuadraticForm, G: FiniteQuadraticForm) -> bool:
    F2, G2 = F.p_part(2), G.p_part(2)
    if F2.size != G2.size:
        return False
    if F2.size > TWO_PART_CAP:
        raise CapacityError(f"2-part of order {F2.size} exceeds the cap {TWO_PART_CAP}")
    if F2.size == 1:
        return True
    # a direct-sum basis of F2 from its Jordan splitting
    basis = [e for blk in jordan_blocks(F2, 2) for e in blk.elements]
    src = [(F2.element_order(e), F2.value(e)) for e in basis]
    if sorted(n for n, _ in src) != sorted(_group_type(G2)):
        return False
    pool = {}
    for y in G2.elements():
        pool.setdefault((G2.element_order(y), G2.value(y)), []).append(y)
    cands = [pool.get(key, []) for key in src]
    bsrc = [[F2.b(basis[i], basis[j]) for j in range(len(basis))] for i in range(len(basis))]
    images = []

    def extend(i):
        if i == len(basis):
            return True
        for y in cands[i]:
            if all(G2.b(y, images[j]) == bsrc[i][j] for j in range(i)):
                images.append(y)
                if extend(i + 1):
                    return True
                images.pop()
        return False

    return extend(0)


def _group_type(F: FiniteQuadraticForm) -> list[int]:
    """Invariant factors of the p-group F as sorted prime-power orders."""
    out = []
    for n in F.orders:
        for p, e in factorint(n).items():
            out.append(p ** e)
    return sorted(out)


def fqf_isomorphic(F: FiniteQuadraticForm, G: FiniteQuadraticForm) -> bool:
    if F.size != G.size:
        return False
    if F.primes() != G.primes():
        return False
    for p in F.primes():
        if _group_type(F.p_part(p)) != _group_type(G.p_part(p)):
            return False
        if p == 2:
            if not _two_part_isomorphic(F, G):
                return False
        elif _odd_invariants(F, p) != _odd_invariants(G, p):
            return False
    return True


def rudakov_shafarevich_form(p: int, sigma: int = 1) -> FiniteQuadraticForm:
    """The form on (Z/p)^2 of Milgram signature 4 mod 8."""
    if not is_odd_prime(p):
        raise InvalidArgument(f"p must be an odd prime, got {p}")
    if sigma != 1:
        raise InvalidArgument("only Artin invariant 1 is supported")
    candidates = [1]
    if p % 4 == 1:
        candidates.append(next(u for u in range(2, p) if legendre(u, p) == -1))
    for u in candidates:
        F = FiniteQuadraticForm((p, p), ((Fraction(2, p), 0), (0, Fraction(2 * u, p))))
        if milgram_signature(F) == 4:
            return F
    raise TheoremViolation(f"no form on (Z/{p})^2 has signature 4")


def nikulin_complement_form(qL: FiniteQuadraticForm, qM: FiniteQuadraticForm) -> FiniteQuadraticForm:
    if gcd(qL.size, qM.size) != 1:
        raise InvalidArgument("discriminant groups must have coprime orders")
    return direct_sum(qL, -qM)


# ---------------------------------------------------------------------------
# genera of binary lattices


@dataclass(frozen=True)
class Genus:
    """Genus of rank-2 even lattices M[a,b,c][scale], (a,b,c) of discriminant D."""

    D: int
    members: tuple  # GL2 FormClasses of the unscaled forms
    scale: int = 1
    fingerprint: FiniteQuadraticForm = field(default=None, compare=False)

    def __post_init__(self):
        if not self.members:
            raise InvalidArgument("empty genus")
        if self.fingerprint is None:
            object.__setattr__(self, "fingerprint", disc_form(self.lattice(self.members[0])))

    @property
    def sign(self) -> int:
        return 1 if self.scale > 0 else -1

    @property
    def det(self) -> int:
        return -self.D * self.scale * self.scale

    def lattice(self, f) -> EvenLattice:
        return EvenLattice.from_form(f, self.scale)

    def lattices(self) -> list[EvenLattice]:
        return [self.lattice(f) for f in self.members]

    def __contains__(self, f) -> bool:
        f = reduce(f.form if isinstance(f, FormClass) else f, Orientation.GL2)
        return f in self.members

    def __len__(self):
        return len(self.members)


def scale_genus(G: Genus, n: int) -> Genus:
    if n == 0:
        raise InvalidArgument("scale factor must be nonzero")
    return Genus(G.D, G.members, G.scale * n)


def genus_partition(D: int) -> list[Genus]:
    """All GL2 classes of discriminant D grouped by discriminant form."""
    classes = enumerate_classes(D, primitive_only=False, orientation=Orientation.GL2)
    groups = []  # (fingerprint, [members])
    for f in classes:
        F = disc_form(EvenLattice.from_form(f))
        for fp, mem in groups:
            if fqf_isomorphic(fp, F):
                mem.append(f)
                break
        else:
            groups.append((F, [f]))
    return [Genus(D, tuple(mem), 1, fp) for fp, mem in groups]


def genus_of(f) -> Genus:
    f = f.form if isinstance(f, FormClass) else Form(*f)
    for G in genus_partition(f.discriminant):
        if f in G:
            return G
    raise TheoremViolation(f"{f} lies in no genus")
