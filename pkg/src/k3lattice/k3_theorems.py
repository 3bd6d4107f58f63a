"""Lattice-theoretic content of the supersingular-reduction theorems for
singular K3 surfaces.

A singular K3 surface X enters only through its oriented transcendental
lattice T = M[a,b,c].  Its Neron-Severi discriminant d(X) equals the form
discriminant b^2 - 4ac, and q_NS is never built explicitly: it is -q_T.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import is_fundamental, is_odd_prime, legendre
from .binary_forms import (
    Form, FormClass, Orientation, class_group, lifted_genus, reduce, squares_subgroup,
)
from .errors import InvalidArgument, NotFundamental, PreconditionError, TheoremViolation
from .lattices_fqf import (
    EvenLattice, FiniteQuadraticForm, Genus, direct_sum, disc_form, fqf_isomorphic,
    genus_partition, rudakov_shafarevich_form, scale_genus,
)
from .quad_ideals import QuadIdeal, ideal_multiply, psi


class Verdict(str, enum.Enum):
    NONE = "no-supersingular-reduction"
    ALL = "all-primes-supersingular"
    EXCLUDED = "excluded-prime"


@dataclass(frozen=True)
class VerdictReport:
    d: int
    p: int
    verdict: Verdict
    chi: int | None
    # finitely many further primes may be exceptional for a given model
    model_caveat: bool = True


@dataclass(frozen=True)
class K3Presentation:
    T_class: FormClass

    @classmethod
    def from_form(cls, f) -> "K3Presentation":
        f = f.form if isinstance(f, FormClass) else Form(*f)
        if not f.is_positive_definite():
            raise InvalidArgument(f"transcendental form {tuple(f)} is not positive definite")
        return cls(reduce(f, Orientation.SL2))

    @property
    def form(self) -> Form:
        return self.T_class.form

    @property
    def d(self) -> int:
        """disc NS(X) = -disc T(X) = b^2 - 4ac < 0."""
        return self.form.discriminant

    @property
    def q_T(self) -> FiniteQuadraticForm:
        return disc_form(EvenLattice.from_form(self.form))

    @property
    def q_NS(self) -> FiniteQuadraticForm:
        return -self.q_T


@dataclass(frozen=True)
class ReductionReport:
    p: int
    verdict: Verdict
    genus: Genus | None = None  # G_p in L(2, -d)
    scaled: Genus | None = None  # G_p[-p]
    target: FiniteQuadraticForm | None = None
    candidates: int = 0
    notes: tuple = field(default=())

    def scaled_grams(self):
        return [L.gram for L in self.scaled.lattices()] if self.scaled else []


def supersingular_verdict(d: int, p: int) -> VerdictReport:
    if not is_odd_prime(p):
        raise InvalidArgument(f"p must be an odd prime, got {p}")
    if not isinstance(d, int) or d >= 0:
        raise InvalidArgument(f"d must be a negative integer, got {d}")
    if (2 * d) % p == 0:
        return VerdictReport(d, p, Verdict.EXCLUDED, None)
    chi = legendre(d, p)
    return VerdictReport(d, p, Verdict.NONE if chi == 1 else Verdict.ALL, chi)


def transcendental_genus(k: K3Presentation) -> Genus:
    """The genus of T(X): the unique binary genus with form q_T = -q_NS."""
    genera = genus_partition(k.d)
    target = -k.q_NS
    matches = [G for G in genera if fqf_isomorphic(G.fingerprint, target)]
    if len(matches) != 1:
        raise TheoremViolation(f"{len(matches)} genera match the transcendental form of {k.T_class}")
    G = matches[0]
    if k.T_class not in G:
        raise TheoremViolation(f"{k.T_class} is not in its own genus")
    return G


def reduction_genus(k: K3Presentation, p: int) -> ReductionReport:
    """Genus G_p with disc_form(G_p[-p]) = D(p,1) + (D_NS, -q_NS)."""
    v = supersingular_verdict(k.d, p)
    if v.verdict is not Verdict.ALL:
        return ReductionReport(p, v.verdict)
    target = direct_sum(rudakov_shafarevich_form(p), -k.q_NS)
    genera = genus_partition(k.d)
    matches = []
    for G in genera:
        if fqf_isomorphic(scale_genus(G, -p).fingerprint, target):
            matches.append(G)
    if len(matches) != 1:
        raise TheoremViolation(f"{len(matches)} genera match D({p},1) + q_T for {k.T_class}")
    G = matches[0]
    S = scale_genus(G, -p)
    for L in S.lattices():
        if L.signature != (0, 2):
            raise TheoremViolation(f"{L.gram} is not negative definite")
        if L.det != p * p * abs(k.d):
            raise TheoremViolation(f"{L.gram} has det {L.det}, expected {p * p * abs(k.d)}")
        if not L.is_divisible_by(p):
            raise TheoremViolation(f"{L.gram} is not divisible by {p}")
        if not fqf_isomorphic(disc_form(L), target):
            raise TheoremViolation(f"member {L.gram} has the wrong discriminant form")
    return ReductionReport(p, v.verdict, G, S, target, len(genera))


def degree_lower_bound(D: int) -> int:
    """|Cl_D^2|, a lower bound for the degree of a field of definition."""
    if not is_fundamental(D):
        raise NotFundamental(f"{D} is not a fundamental discriminant")
    return len(squares_subgroup(class_group(D)))


def shioda_mitani_form(abc) -> FormClass:
    """Oriented transcendental class of E' x E with tau' = (-b + sqrt D)/2a, tau = (b + sqrt D)/2."""
    f = Form(*abc)
    if not f.is_positive_definite():
        raise InvalidArgument(f"{tuple(f)} is not a positive-definite form")
    return reduce(f, Orientation.SL2)


def shioda_mitani_taus(abc):
    """(tau', tau) as (rational part, coefficient of sqrt D) pairs."""
    a, b, c = Form(*abc)
    return (Fraction(-b, 2 * a), Fraction(1, 2 * a)), (Fraction(b, 2), Fraction(1, 2))


def product_abelian_class(J1: QuadIdeal, J2: QuadIdeal) -> FormClass:
    return psi(ideal_multiply(J1, J2))


def theorem3_T_set(k: K3Presentation) -> list[FormClass]:
    """Predicted oriented transcendental classes of all conjugates: a lifted genus."""
    D = k.d
    if not is_fundamental(D):
        raise PreconditionError(f"disc NS = {D} is not a fundamental discriminant")
    if not k.form.is_primitive():
        raise PreconditionError(f"T = {tuple(k.form)} is not primitive")
    G = class_group(D)
    out = lifted_genus(k.T_class)
    sq = squares_subgroup(G)
    if len(out) != len(sq):
        raise TheoremViolation("lifted genus has the wrong size")
    members = set(out)
    if any(G.mul(x, s) not in members for x in out for s in sq):
        raise TheoremViolation("lifted genus is not closed under Cl_D^2")
    return out
