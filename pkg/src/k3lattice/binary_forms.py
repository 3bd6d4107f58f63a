"""Positive-definite binary quadratic forms and the class group Cl_D.

A triple (a, b, c) stands for the even Gram matrix [[2a, b], [b, 2c]]
of discriminant b^2 - 4ac < 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import product
from math import gcd, isqrt

from .arith import is_fundamental, xgcd
from .errors import InvalidArgument, NotFundamental, TheoremViolation


class Orientation(str, enum.Enum):
    SL2 = "SL2"
    GL2 = "GL2"


@dataclass(frozen=True, order=True)
class Form:
    a: int
    b: int
    c: int

    def __iter__(self):
        yield self.a
        yield self.b
        yield self.c

    def __repr__(self):
        return f"Form({self.a}, {self.b}, {self.c})"

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def content(self) -> int:
        return gcd(gcd(self.a, self.b), self.c)

    def is_primitive(self) -> bool:
        return self.content == 1

    def is_positive_definite(self) -> bool:
        return self.a > 0 and self.c > 0 and self.discriminant < 0

    def gram(self):
        return ((2 * self.a, self.b), (self.b, 2 * self.c))

    def act(self, g) -> "Form":
        """Right action M -> g^T M g of g = ((p, q), (r, s))."""
        (p, q), (r, s) = g
        a, b, c = self
        return Form(
            a * p * p + b * p * r + c * r * r,
            2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
            a * q * q + b * q * s + c * s * s,
        )

    def scaled(self, n: int) -> "Form":
        return Form(n * self.a, n * self.b, n * self.c)

    def opposite(self) -> "Form":
        return Form(self.a, -self.b, self.c)

    @classmethod
    def from_gram(cls, G) -> "Form":
        (x, y), (_, z) = G
        if x % 2 or z % 2:
            raise InvalidArgument(f"gram {G} is not even")
        return cls(x // 2, y, z // 2)


@dataclass(frozen=True, order=True)
class FormClass:
    form: Form
    orientation: Orientation = Orientation.SL2

    def __iter__(self):
        return iter(self.form)

    def __repr__(self):
        a, b, c = self.form
        return f"[{a},{b},{c}]_{self.orientation.value}"

    @property
    def discriminant(self) -> int:
        return self.form.discriminant

    def to_gl2(self) -> "FormClass":
        return reduce(self.form, Orientation.GL2)


def _check_posdef(f: Form):
    if not f.is_positive_definite():
        raise InvalidArgument(f"{f} is not positive definite")


def _reduce_sl2(a: int, b: int, c: int):
    while True:
        # translate b into (-a, a]
        r = (a - b) // (2 * a)
        b, c = b + 2 * r * a, a * r * r + b * r + c
        if a < c or (a == c and b >= 0):
            return a, b, c
        a, b, c = c, -b, a


def reduce(f, orientation=Orientation.SL2) -> FormClass:
    """Unique reduced representative of the SL2 or GL2 orbit of f."""
    f = Form(*f)
    _check_posdef(f)
    a, b, c = _reduce_sl2(*f)
    if Orientation(orientation) is Orientation.GL2:
        b = abs(b)
    return FormClass(Form(a, b, c), Orientation(orientation))


def _check_disc(D: int):
    if not isinstance(D, int) or D >= 0 or D % 4 not in (0, 1):
        raise InvalidArgument(f"{D} is not a negative discriminant")


def enumerate_classes(D: int, primitive_only: bool = True,
                      orientation=Orientation.SL2) -> list[FormClass]:
    """All reduced classes of discriminant D, sorted by (a, b, c)."""
    _check_disc(D)
    orientation = Orientation(orientation)
    out = []
    for a in range(1, isqrt(-D // 3) + 1):
        lo = 0 if orientation is Orientation.GL2 else -a + 1
        for b in range(lo, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (b < 0 and c == a):
                continue
            f = Form(a, b, c)
            if primitive_only and not f.is_primitive():
                continue
            out.append(FormClass(f, orientation))
    return sorted(out)


def principal_form(D: int) -> Form:
    k = D % 2
    return Form(1, k, (k - D) // 4)


def _check_composable(f: Form, g: Form):
    if f.discriminant != g.discriminant:
        raise InvalidArgument(f"discriminants differ: {f}, {g}")
    if not (f.is_primitive() and g.is_primitive()):
        raise InvalidArgument(f"composition needs primitive forms: {f}, {g}")


def compose(f, g) -> FormClass:
    """Dirichlet composition of primitive forms, returned SL2-reduced."""
    f = f.form if isinstance(f, FormClass) else Form(*f)
    g = g.form if isinstance(g, FormClass) else Form(*g)
    _check_posdef(f)
    _check_posdef(g)
    _check_composable(f, g)
    (a1, b1, c1), (a2, b2, c2) = f, g
    if a1 > a2:
        (a1, b1, c1), (a2, b2, c2) = (a2, b2, c2), (a1, b1, c1)
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, y1, _ = xgcd(a2, a1)
    if s % d == 0:
        x2, y2, d1 = 0, -1, d
    else:
        d1, x2, y2 = xgcd(s, d)
        y2 = -y2
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - f.discriminant) // (4 * a3)
    h = Form(a3, b3, c3)
    if h.discriminant != f.discriminant:
        raise TheoremViolation(f"composition of {f} and {g} changed the discriminant")
    return reduce(h, Orientation.SL2)


def inverse(f) -> FormClass:
    f = f.form if isinstance(f, FormClass) else Form(*f)
    return reduce(f.opposite(), Orientation.SL2)


@dataclass(frozen=True)
class ClassGroup:
    D: int
    elements: tuple  # of FormClass, sorted
    table: dict  # (i, j) -> k

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> FormClass:
        return reduce(principal_form(self.D))

    def index(self, f) -> int:
        if not isinstance(f, FormClass):
            f = reduce(f)
        return self.elements.index(f)

    def mul(self, f, g) -> FormClass:
        return self.elements[self.table[self.index(f), self.index(g)]]

    def power(self, f, n: int) -> FormClass:
        out = self.identity
        for _ in range(n % self.order):
            out = self.mul(out, f)
        return out

    def element_order(self, f) -> int:
        x, k = f if isinstance(f, FormClass) else reduce(f), 1
        while x != self.identity:
            x, k = self.mul(x, f), k + 1
        return k

    def is_cyclic(self) -> bool:
        return any(self.element_order(x) == self.order for x in self.elements)


def class_group(D: int) -> ClassGroup:
    if not is_fundamental(D):
        raise NotFundamental(f"{D} is not a fundamental discriminant")
    elements = tuple(enumerate_classes(D, True, Orientation.SL2))
    pos = {x: i for i, x in enumerate(elements)}
    table = {}
    for (i, x), (j, y) in product(enumerate(elements), repeat=2):
        if j < i:
            table[i, j] = table[j, i]
            continue
        table[i, j] = pos[compose(x, y)]
    G = ClassGroup(D, elements, table)
    _check_group_axioms(G)
    return G


def _check_group_axioms(G: ClassGroup):
    h = G.order
    e = G.index(G.identity)
    for i in range(h):
        if G.table[e, i] != i:
            raise TheoremViolation(f"principal form is not an identity in Cl({G.D})")
        if G.table[i, G.index(inverse(G.elements[i]))] != e:
            raise TheoremViolation(f"inverse law fails in Cl({G.D})")
        if sorted(G.table[i, j] for j in range(h)) != list(range(h)):
            raise TheoremViolation(f"row {i} of Cl({G.D}) is not a permutation")
    # full associativity is cubic; check it on a bounded deterministic slice
    idx = range(min(h, 24))
    for i, j, k in product(idx, idx, idx):
        if G.table[G.table[i, j], k] != G.table[i, G.table[j, k]]:
            raise TheoremViolation(f"associativity fails in Cl({G.D})")


def squares_subgroup(G: ClassGroup) -> list[FormClass]:
    return sorted({G.mul(x, x) for x in G.elements})


def lifted_genus(f) -> list[FormClass]:
    """The coset f * Cl_D^2, i.e. the SL2 classes in the lifted genus of f."""
    f = f.form if isinstance(f, FormClass) else Form(*f)
    if not f.is_primitive():
        raise InvalidArgument(f"{f} is not primitive")
    D = f.discriminant
    if not is_fundamental(D):
        raise InvalidArgument(f"{D} is not a fundamental discriminant")
    G = class_group(D)
    return sorted({G.mul(f, s) for s in squares_subgroup(G)})


def lifted_genera(G: ClassGroup) -> list[list[FormClass]]:
    """Partition of Cl_D into Cl_D^2-cosets."""
    seen, out = set(), []
    sq = squares_subgroup(G)
    for x in G.elements:
        if x in seen:
            continue
        coset = sorted({G.mul(x, s) for s in sq})
        seen.update(coset)
        out.append(coset)
    return out
