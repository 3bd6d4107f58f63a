"""Fractional ideals of the maximal order of K = Q(sqrt D), D < 0 fundamental.

Elements are x + y*sqrt(D) with rational x, y.  Internally every element
also has integral-basis coordinates (u, v) with respect to (1, w),
w = (D + sqrt D)/2, which is a Z-basis of Z_K for both residues of D mod 4.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import (
    is_fundamental, lattice_basis, lattice_contains, lattice_coords,
    lattice_index, lattice_intersection,
)
from .binary_forms import Form, FormClass, Orientation, reduce
from .errors import InvalidArgument, TheoremViolation


@dataclass(frozen=True)
class QuadInt:
    x: Fraction
    y: Fraction
    D: int

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))

    @classmethod
    def from_coords(cls, u, v, D: int) -> "QuadInt":
        """u + v*w with w = (D + sqrt D)/2."""
        v = Fraction(v)
        return cls(Fraction(u) + v * D / 2, v / 2, D)

    @classmethod
    def omega(cls, D: int) -> "QuadInt":
        return cls(Fraction(D, 2), Fraction(1, 2), D)

    @classmethod
    def sqrt_d(cls, D: int) -> "QuadInt":
        return cls(0, 1, D)

    def coords(self):
        return (self.x - self.y * self.D, 2 * self.y)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords())

    def _same(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadInt(other, 0, self.D)
        if other.D != self.D:
            raise InvalidArgument("elements of different fields")
        return other

    def __add__(self, other):
        other = self._same(other)
        return QuadInt(self.x + other.x, self.y + other.y, self.D)

    __radd__ = __add__

    def __neg__(self):
        return QuadInt(-self.x, -self.y, self.D)

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return self._same(other) - self

    def __mul__(self, other):
        other = self._same(other)
        return QuadInt(self.x * other.x + self.y * other.y * self.D,
                       self.x * other.y + self.y * other.x, self.D)

    __rmul__ = __mul__

    def conj(self) -> "QuadInt":
        return QuadInt(self.x, -self.y, self.D)

    def norm(self) -> Fraction:
        return self.x * self.x - self.D * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def inverse(self) -> "QuadInt":
        n = self.norm()
        if n == 0:
            raise InvalidArgument("zero has no inverse")
        c = self.conj()
        return QuadInt(c.x / n, c.y / n, self.D)

    def __truediv__(self, other):
        return self * self._same(other).inverse()

    def __repr__(self):
        return f"({self.x} + {self.y}*sqrt({self.D}))"


def orientation_value(w1: QuadInt, w2: QuadInt) -> Fraction:
    """(w1 conj(w2) - w2 conj(w1)) / sqrt D, a rational number."""
    return 2 * (w2.x * w1.y - w1.x * w2.y)


def trace_form(x: QuadInt, y: QuadInt) -> Fraction:
    return (x * y.conj()).trace()


@dataclass(frozen=True)
class QuadIdeal:
    """Nonzero fractional ideal, stored by a canonical positively oriented basis."""

    D: int
    basis: tuple  # (QuadInt, QuadInt)

    @classmethod
    def from_generators(cls, elements, D: int) -> "QuadIdeal":
        """Z-span of the given elements; must be a full-rank Z_K-module."""
        rows = lattice_basis([e.coords() for e in elements])
        if len(rows) != 2:
            raise InvalidArgument("ideal must have rank 2")
        # HNF rows (h11, h12), (0, h22); the swapped order is positive
        r1, r2 = rows
        b = (QuadInt.from_coords(*r2, D), QuadInt.from_coords(*r1, D))
        I = cls(D, b)
        w = QuadInt.omega(D)
        if not all(I.contains(w * e) for e in b):
            raise InvalidArgument("lattice is not stable under Z_K")
        return I

    @classmethod
    def unit(cls, D: int) -> "QuadIdeal":
        return cls.from_generators([QuadInt(1, 0, D), QuadInt.omega(D)], D)

    @classmethod
    def principal(cls, g: QuadInt) -> "QuadIdeal":
        if g.norm() == 0:
            raise InvalidArgument("zero ideal")
        return cls.from_generators([g, g * QuadInt.omega(g.D)], g.D)

    @classmethod
    def from_z_basis(cls, w1: QuadInt, w2: QuadInt) -> "QuadIdeal":
        return cls.from_generators([w1, w2], w1.D)

    def coord_rows(self):
        return [e.coords() for e in self.basis]

    def contains(self, e: QuadInt) -> bool:
        return lattice_contains(self.coord_rows(), e.coords())

    def coordinates(self, e: QuadInt):
        return lattice_coords(self.coord_rows(), e.coords())

    def norm(self) -> Fraction:
        return lattice_index(self.coord_rows())

    def is_integral(self) -> bool:
        return all(e.is_integral() for e in self.basis)

    def orientation(self) -> Fraction:
        return orientation_value(*self.basis)

    def __mul__(self, other):
        if isinstance(other, QuadIdeal):
            return ideal_multiply(self, other)
        if isinstance(other, QuadInt):
            return QuadIdeal.from_generators([other * e for e in self.basis], self.D)
        if isinstance(other, (int, Fraction)):
            return scale(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def conj(self) -> "QuadIdeal":
        return ideal_conjugate(self)

    def inverse(self) -> "QuadIdeal":
        return ideal_inverse(self)

    def __truediv__(self, other):
        return self * other.inverse()

    def __repr__(self):
        w1, w2 = self.basis
        return f"QuadIdeal(D={self.D}, [{w1}, {w2}])"


def _check_same(I: QuadIdeal, J: QuadIdeal):
    if I.D != J.D:
        raise InvalidArgument("ideals of different fields")


def ideal_multiply(I: QuadIdeal, J: QuadIdeal) -> QuadIdeal:
    _check_same(I, J)
    return QuadIdeal.from_generators([a * b for a in I.basis for b in J.basis], I.D)


def ideal_conjugate(I: QuadIdeal) -> QuadIdeal:
    return QuadIdeal.from_generators([e.conj() for e in I.basis], I.D)


def ideal_norm(I: QuadIdeal) -> Fraction:
    return I.norm()


def scale(I: QuadIdeal, r) -> QuadIdeal:
    r = Fraction(r)
    if r == 0:
        raise InvalidArgument("zero ideal")
    return QuadIdeal.from_generators([e * r for e in I.basis], I.D)


def ideal_inverse(I: QuadIdeal) -> QuadIdeal:
    return scale(ideal_conjugate(I), 1 / I.norm())


def ideal_intersection(I: QuadIdeal, J: QuadIdeal) -> QuadIdeal:
    _check_same(I, J)
    rows = lattice_intersection(I.coord_rows(), J.coord_rows())
    return QuadIdeal.from_generators([QuadInt.from_coords(*r, I.D) for r in rows], I.D)


def ideal_sum(I: QuadIdeal, J: QuadIdeal) -> QuadIdeal:
    _check_same(I, J)
    return QuadIdeal.from_generators(list(I.basis) + list(J.basis), I.D)


def ideal_from_form(f) -> QuadIdeal:
    """The ideal with Z-basis ((-b + sqrt D)/2, a)."""
    f = f.form if isinstance(f, FormClass) else Form(*f)
    D = f.discriminant
    if not f.is_primitive():
        raise InvalidArgument(f"{f} is not primitive")
    if not is_fundamental(D):
        raise InvalidArgument(f"{D} is not a fundamental discriminant")
    if f.a <= 0:
        raise InvalidArgument(f"{f} is not positive definite")
    w1 = QuadInt(Fraction(-f.b, 2), Fraction(1, 2), D)
    w2 = QuadInt(f.a, 0, D)
    I = QuadIdeal.from_z_basis(w1, w2)
    if I.norm() != f.a:
        raise TheoremViolation(f"ideal of {f} has norm {I.norm()}")
    return I


def gram_of(I: QuadIdeal):
    """Gram matrix of the stored basis under Tr(x conj y)/N(I)."""
    n = I.norm()
    b = I.basis
    return [[trace_form(x, y) / n for y in b] for x in b]


def psi(I: QuadIdeal) -> FormClass:
    """Oriented lattice class of I: positive basis, Tr(x conj y)/N(I), SL2-reduced."""
    if I.orientation() <= 0:
        raise TheoremViolation("stored ideal basis is not positively oriented")
    G = gram_of(I)
    if any(x.denominator != 1 for row in G for x in row):
        raise TheoremViolation("ideal lattice is not integral")
    f = Form(int(G[0][0]) // 2, int(G[0][1]), int(G[1][1]) // 2)
    if G[0][0] % 2 or G[1][1] % 2 or f.discriminant != I.D:
        raise TheoremViolation(f"ideal lattice {G} is not even of discriminant {-I.D}")
    return reduce(f, Orientation.SL2)
