"""Maximal orders R of B = {[alpha, beta]} containing Z_K, after Dorman.

B is the quaternion algebra over Q of 2x2 matrices
    [alpha, beta] = ((alpha, beta), (-pq conj(beta), conj(alpha)))
with alpha, beta in K = Q(sqrt D), D odd fundamental.  An order R with
R cap [K,0] = [Z_K,0] is determined by a pair t = (I, mu + Q^-1 I) with
N(I) = 1 and pqD|mu|^2 = 1 mod D.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd

from sympy import nextprime

from .arith import (
    det, integer_kernel, is_fundamental, is_odd_prime, lattice_basis, lattice_contains,
    lattice_index, legendre, prime_divisors, solve_rows, sqrt_mod, xgcd,
)
from .binary_forms import Form, FormClass, Orientation, class_group, lifted_genus, reduce
from .errors import (
    CapacityError, ConstructionInvariantError, InvalidArgument, NotFundamental, TheoremViolation,
)
from .lattices_fqf import EvenLattice
from .quad_ideals import (
    QuadIdeal, QuadInt, ideal_conjugate, ideal_from_form, ideal_intersection,
    ideal_inverse, ideal_multiply, ideal_sum, psi, trace_form,
)

Q_SEARCH_LIMIT = 10 ** 6
FORM_SEARCH_BOX = 60


@dataclass(frozen=True)
class Context:
    D: int
    p: int
    q: int
    Q: QuadIdeal

    @property
    def pq(self) -> int:
        return self.p * self.q


@dataclass(frozen=True)
class QuatElement:
    alpha: QuadInt
    beta: QuadInt
    pq: int

    def __mul__(self, o: "QuatElement") -> "QuatElement":
        a, b, a2, b2 = self.alpha, self.beta, o.alpha, o.beta
        return QuatElement(a * a2 - b * b2.conj() * self.pq, a * b2 + b * a2.conj(), self.pq)

    def __add__(self, o):
        return QuatElement(self.alpha + o.alpha, self.beta + o.beta, self.pq)

    def conj(self) -> "QuatElement":
        return QuatElement(self.alpha.conj(), -self.beta, self.pq)

    def reduced_norm(self) -> Fraction:
        return self.alpha.norm() + self.pq * self.beta.norm()

    def coords(self):
        return tuple(self.alpha.coords()) + tuple(self.beta.coords())

    @classmethod
    def from_coords(cls, c, D: int, pq: int) -> "QuatElement":
        return cls(QuadInt.from_coords(c[0], c[1], D), QuadInt.from_coords(c[2], c[3], D), pq)


def quat_form(x: QuatElement, y: QuatElement) -> Fraction:
    """Tr(alpha conj alpha') + pq Tr(beta conj beta')."""
    return trace_form(x.alpha, y.alpha) + x.pq * trace_form(x.beta, y.beta)


def _check_context_inputs(D: int, p: int):
    if not is_odd_prime(p):
        raise InvalidArgument(f"p must be an odd prime, got {p}")
    if not is_fundamental(D):
        raise NotFundamental(f"{D} is not a fundamental discriminant")
    if D % 2 == 0:
        raise InvalidArgument(f"D must be odd, got {D}")
    if legendre(D, p) != -1:
        raise InvalidArgument(f"p = {p} must be inert in Q(sqrt {D})")


def _q_ok(D: int, p: int, q: int) -> bool:
    return (q != p and D % q != 0
            and all(legendre(-p * q, l) == 1 for l in prime_divisors(D)))


def choose_q(D: int, p: int, skip: int = 0) -> int:
    """Smallest odd prime q (after skipping `skip` valid ones) with chi_l(-pq) = 1 for l | D."""
    _check_context_inputs(D, p)
    q = 2
    while True:
        q = nextprime(q)
        if q > Q_SEARCH_LIMIT:
            raise CapacityError(f"no auxiliary prime q below {Q_SEARCH_LIMIT}")
        if _q_ok(D, p, q):
            if skip == 0:
                return q
            skip -= 1


def split_q(D: int, q: int) -> QuadIdeal:
    """Q = (q, (-b_q + sqrt D)/2) with b_q the least nonnegative root of b^2 = D mod 4q."""
    b = next((b for b in range(2 * q) if (b * b - D) % (4 * q) == 0), None)
    if b is None or D % q == 0:
        raise TheoremViolation(f"{q} does not split in Q(sqrt {D})")
    Q = QuadIdeal.from_z_basis(QuadInt(Fraction(-b, 2), Fraction(1, 2), D), QuadInt(q, 0, D))
    if Q.norm() != q:
        raise TheoremViolation(f"ideal above {q} has norm {Q.norm()}")
    return Q


def make_context(D: int, p: int, q: int | None = None) -> Context:
    _check_context_inputs(D, p)
    if q is None:
        q = choose_q(D, p)
    elif not (is_odd_prime(q) and _q_ok(D, p, q)):
        raise InvalidArgument(f"q = {q} violates the residue condition for D = {D}, p = {p}")
    return Context(D, p, q, split_q(D, q))


@dataclass(frozen=True)
class DormanParam:
    ctx: Context
    I: QuadIdeal
    mu: QuadInt
    A: QuadIdeal | None = None
    n: int | None = None
    z: int | None = None


def _sqrt_d(D):
    return QuadIdeal.principal(QuadInt.sqrt_d(D))


def _qinv_i(ctx: Context, I: QuadIdeal) -> QuadIdeal:
    return ideal_multiply(ideal_inverse(ctx.Q), I)


def _m_t(ctx: Context, I: QuadIdeal) -> QuadIdeal:
    return ideal_multiply(ideal_inverse(_sqrt_d(ctx.D)), _qinv_i(ctx, I))


def _check_mu(ctx: Context, I: QuadIdeal, mu: QuadInt):
    if not _m_t(ctx, I).contains(mu):
        raise ConstructionInvariantError("mu is not in D^-1 Q^-1 I")
    v = ctx.pq * ctx.D * mu.norm()
    if v.denominator != 1 or (v - 1) % ctx.D:
        raise ConstructionInvariantError(f"pqD|mu|^2 = {v} is not 1 mod {ctx.D}")


def make_param(I: QuadIdeal, ctx: Context) -> DormanParam:
    """mu = z n m / sqrt D from I = A conj(A)^-1, n = N(A), m = 1/n mod D, -pq z^2 = 1 mod D."""
    D = ctx.D
    if I.norm() != 1:
        raise InvalidArgument(f"N(I) = {I.norm()}, expected 1")
    unit = QuadIdeal.unit(D)
    A = ideal_intersection(I, unit)
    if ideal_sum(A, ideal_conjugate(A)) != unit or ideal_multiply(A, ideal_inverse(ideal_conjugate(A))) != I:
        raise TheoremViolation("I is not of the form A conj(A)^-1 with A + conj(A) = Z_K")
    n = int(A.norm())
    if gcd(n, D) != 1:
        raise TheoremViolation(f"N(A) = {n} is not prime to D")
    m = pow(n, -1, -D)
    z = sqrt_mod(-pow(ctx.pq, -1, -D) % -D, -D)
    if z is None:
        raise TheoremViolation(f"-1/pq is not a square mod {D}")
    if (-ctx.pq * (z * n * m) ** 2 - 1) % D:
        raise TheoremViolation("-pq (znm)^2 is not 1 mod D")
    mu = QuadInt(0, Fraction(z * n * m, D), D)  # znm / sqrt D
    _check_mu(ctx, I, mu)
    return DormanParam(ctx, I, mu, A, n, z)


@dataclass(frozen=True)
class MaximalOrder:
    param: DormanParam
    basis: tuple  # four QuatElements
    gram: tuple
    lattice: tuple  # canonical coordinate basis

    @property
    def disc(self) -> int:
        return det(self.gram)

    def contains(self, x: QuatElement) -> bool:
        return lattice_contains(self.lattice, x.coords())


def f_t(param: DormanParam, beta: QuadInt) -> QuadInt:
    """pq sqrt(D) conj(mu) beta, a representative of f_t(beta) mod Z_K."""
    return QuadInt.sqrt_d(param.ctx.D) * param.mu.conj() * beta * param.ctx.pq


def _order_basis(param: DormanParam):
    ctx = param.ctx
    D, pq = ctx.D, ctx.pq
    M = _m_t(ctx, param.I)
    out = [QuatElement(QuadInt(1, 0, D), QuadInt(0, 0, D), pq),
           QuatElement(QuadInt.omega(D), QuadInt(0, 0, D), pq)]
    for beta in M.basis:
        out.append(QuatElement(f_t(param, beta), beta, pq))
    return out, M


def _canonical(elements):
    return lattice_basis([e.coords() for e in elements])


def _enumerate_mod_d(M: QuadIdeal, D: int):
    b1, b2 = M.basis
    for c1, c2 in product(range(-D), repeat=2):
        yield b1 * c1 + b2 * c2


def build_order(param: DormanParam) -> MaximalOrder:
    ctx = param.ctx
    D, pq = ctx.D, ctx.pq
    basis, M = _order_basis(param)
    lat = _canonical(basis)
    R = MaximalOrder(param, tuple(basis), tuple(tuple(quat_form(x, y) for y in basis) for x in basis), lat)

    def fail(msg):
        raise ConstructionInvariantError(f"R_t for I={param.I}: {msg}")

    one = QuatElement(QuadInt(1, 0, D), QuadInt(0, 0, D), pq)
    if not R.contains(one):
        fail("1 is not in R")
    for x, y in product(basis, basis):
        if not R.contains(x * y):
            fail("not closed under multiplication")
    # R cap [K, 0] = [Z_K, 0]: integer combinations with zero beta part
    beta_cols = [[Fraction(e.coords()[k]) for e in basis] for k in (2, 3)]
    den = 1
    for row in beta_cols:
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
    K = integer_kernel([[int(x * den) for x in row] for row in beta_cols])
    alphas = [sum((basis[i].alpha * c for i, c in enumerate(k)), QuadInt(0, 0, D)) for k in K]
    if QuadIdeal.from_generators(alphas, D) != QuadIdeal.unit(D):
        fail("R cap [K,0] differs from [Z_K,0]")
    if lattice_index(lat) != Fraction(1, ctx.q * abs(D)):
        fail(f"N_B(R) = {lattice_index(lat)}, expected 1/{ctx.q * abs(D)}")
    if any(x.denominator != 1 for row in R.gram for x in row) or any(R.gram[i][i] % 2 for i in range(4)):
        fail("norm form is not even integral on R")
    if R.disc != ctx.p ** 2:
        fail(f"disc = {R.disc}, expected {ctx.p ** 2}")
    _check_f_tilde(param, M, fail)
    return R


def _check_f_tilde(param: DormanParam, M: QuadIdeal, fail):
    """f_t induces M/DM = D^-1/Z_K with kernel exactly DM."""
    D = param.ctx.D
    DM = ideal_multiply(_sqrt_d(D), M)
    if DM.norm() / M.norm() != -D:
        fail("|M/DM| != |D|")
    in_dm = 0
    for beta in _enumerate_mod_d(M, D):
        is_dm = DM.contains(beta)
        in_dm += is_dm
        if f_t(param, beta).is_integral() != is_dm:
            fail("kernel of f_t differs from DM")
    if in_dm != -D:
        fail("unexpected count of DM cosets")


def recover_param(R: MaximalOrder) -> DormanParam:
    """tau(R) = (D Q pr_2(R), mu_R) read off the order itself."""
    ctx = R.param.ctx
    D = ctx.D
    M = QuadIdeal.from_generators([e.beta for e in R.basis if e.beta.norm() != 0], D)
    I = ideal_multiply(ideal_multiply(_sqrt_d(D), ctx.Q), M)
    target = QuadInt(0, Fraction(1, D), D)  # 1/sqrt D
    for beta in _enumerate_mod_d(M, D):
        # alpha of any element of R over beta gives f_R(beta)
        c = _lift_alpha(R, beta)
        if (c - target).is_integral():
            return DormanParam(ctx, I, beta)
    raise TheoremViolation("no mu_R with f_R(mu_R) = 1/sqrt D")


def _lift_alpha(R: MaximalOrder, beta: QuadInt) -> QuadInt:
    b1, b2 = R.basis[2], R.basis[3]
    c = solve_rows([b1.beta.coords(), b2.beta.coords()], beta.coords())
    return b1.alpha * c[0] + b2.alpha * c[1]


def same_param_class(t1: DormanParam, t2: DormanParam) -> bool:
    if t1.I != t2.I:
        return False
    return _qinv_i(t1.ctx, t1.I).contains(t1.mu - t2.mu)


def representative_independence(param: DormanParam) -> bool:
    """Shifting mu by generators of Q^-1 I leaves R_t unchanged."""
    R = build_order(param)
    for g in _qinv_i(param.ctx, param.I).basis:
        t2 = DormanParam(param.ctx, param.I, param.mu + g)
        _check_mu(param.ctx, param.I, t2.mu)
        if _canonical(_order_basis(t2)[0]) != R.lattice:
            return False
    return True


# ---------------------------------------------------------------------------
# the complement lattices (J -> RJ)^perp


def _check_j(J: QuadIdeal, D: int) -> int:
    if J.D != D:
        raise InvalidArgument("J lives in a different field")
    if not J.is_integral():
        raise InvalidArgument("J must be an integral ideal")
    dJ = int(J.norm())
    if gcd(dJ, D) != 1:
        raise InvalidArgument(f"N(J) = {dJ} is not prime to D = {D}")
    return dJ


@dataclass(frozen=True)
class ComplementResult:
    lattice: EvenLattice
    form_class: FormClass  # SL2 class of the (imprimitive) form
    psi_class: FormClass  # psi(Q^-1 I conj J)
    scale: int  # p d_J


def complement_lattice(param: DormanParam, J: QuadIdeal) -> ComplementResult:
    ctx = param.ctx
    D, p, pq = ctx.D, ctx.p, ctx.pq
    dJ = _check_j(J, D)
    X = ideal_multiply(_qinv_i(ctx, param.I), ideal_conjugate(J))
    x1, x2 = X.basis
    G = [[pq * trace_form(x, y) for y in (x1, x2)] for x in (x1, x2)]
    if any(v.denominator != 1 for row in G for v in row):
        raise TheoremViolation("complement form is not integral")
    L = EvenLattice(G)
    if L.det != p * p * dJ * dJ * -D:
        raise TheoremViolation(f"complement det {L.det} != p^2 d_J^2 |D|")
    if not L.is_divisible_by(p):
        raise TheoremViolation("complement gram is not divisible by p")
    f = Form(int(G[0][0]) // 2, int(G[0][1]), int(G[1][1]) // 2)
    cls = reduce(f, Orientation.SL2)
    ps = psi(X)
    n = p * dJ
    if cls.form != ps.form.scaled(n):
        raise TheoremViolation(f"complement class {cls} != psi class {ps} scaled by {n}")
    return ComplementResult(L, cls, ps, n)


def complement_direct(R: MaximalOrder, J: QuadIdeal) -> QuadIdeal:
    """[0, K] cap R[J, 0] computed from the order itself (independent check)."""
    D, pq = R.param.ctx.D, R.param.ctx.pq
    gens = [r * QuatElement(g, QuadInt(0, 0, D), pq) for r in R.basis for g in J.basis]
    lat = lattice_basis([e.coords() for e in gens])
    alpha_cols = [[Fraction(row[k]) for row in lat] for k in (0, 1)]
    den = 1
    for row in alpha_cols:
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
    K = integer_kernel([[int(x * den) for x in row] for row in alpha_cols])
    betas = []
    for k in K:
        c = [sum(k[i] * lat[i][j] for i in range(4)) for j in range(4)]
        betas.append(QuadInt.from_coords(c[2], c[3], D))
    return QuadIdeal.from_generators(betas, D)


# ---------------------------------------------------------------------------
# the sweep over Cl_D^2


def coprime_representative(f, D: int) -> Form:
    """An SL2-equivalent form whose first coefficient is prime to D."""
    f = f.form if isinstance(f, FormClass) else Form(*f)
    for r in range(1, FORM_SEARCH_BOX + 1):
        for x in range(-r, r + 1):
            for y in (-r, r) if abs(x) != r else range(-r, r + 1):
                if gcd(x, y) != 1:
                    continue
                a = f.a * x * x + f.b * x * y + f.c * y * y
                if gcd(a, D) != 1:
                    continue
                g, u, v = xgcd(x, y)  # u x + v y = 1
                h = f.act(((x, -v), (y, u)))
                if h.a != a or reduce(h) != reduce(f):
                    raise TheoremViolation("bad change of basis")
                return h
    raise CapacityError(f"no representative of {f} with first coefficient prime to {D}")


@dataclass(frozen=True)
class SweepReport:
    D: int
    p: int
    q: int
    J: QuadIdeal
    scale: int
    classes: tuple
    expected: tuple
    orders_built: int


def default_j(D: int) -> QuadIdeal:
    return QuadIdeal.unit(D)


def genus_sweep(D: int, p: int, J: QuadIdeal | None = None, q: int | None = None,
                check_representatives: bool = True) -> SweepReport:
    ctx = make_context(D, p, q)
    J = J or default_j(D)
    dJ = _check_j(J, D)
    G = class_group(D)
    seen = set()
    built = 0
    for f in G.elements:
        h = coprime_representative(f, D)
        A = ideal_from_form(h)
        I = ideal_multiply(A, ideal_inverse(ideal_conjugate(A)))
        t = make_param(I, ctx)
        R = build_order(t)
        built += 1
        back = recover_param(R)
        if not same_param_class(back, t):
            raise TheoremViolation("tau(R_t) does not recover t")
        if check_representatives and not representative_independence(t):
            raise TheoremViolation("R_t depends on the representative of mu")
        res = complement_lattice(t, J)
        direct = complement_direct(R, J)
        X = ideal_multiply(_qinv_i(ctx, I), ideal_conjugate(J))
        if direct != X:
            raise TheoremViolation("direct complement differs from Q^-1 I conj(J)")
        seen.add(res.form_class)
    n = p * dJ
    base = psi(ideal_multiply(ideal_inverse(ctx.Q), ideal_conjugate(J)))
    expected = tuple(FormClass(c.form.scaled(n), Orientation.SL2) for c in lifted_genus(base))
    classes = tuple(sorted(seen))
    if classes != tuple(sorted(expected)):
        raise TheoremViolation(f"sweep {classes} differs from the scaled lifted genus {expected}")
    return SweepReport(D, p, ctx.q, J, n, classes, tuple(sorted(expected)), built)


def ideal_from_pair(D: int, a: int, b: int) -> QuadIdeal:
    """The ideal [a, (-b + sqrt D)/2]; requires b^2 = D mod 4a."""
    if a <= 0 or (b * b - D) % (4 * a):
        raise InvalidArgument(f"[{a}, (-{b} + sqrt {D})/2] is not an ideal")
    return ideal_from_form((a, b, (b * b - D) // (4 * a)))
