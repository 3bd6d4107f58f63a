import random
from fractions import Fraction as F

import pytest

from k3lattice.arith import lattice_index
from k3lattice.binary_forms import class_group, reduce
from k3lattice.dorman_orders import (
    QuatElement, build_order, choose_q, coprime_representative, genus_sweep, ideal_from_pair,
    make_context, make_param, quat_form, recover_param, representative_independence,
    same_param_class, split_q,
)
from k3lattice.errors import InvalidArgument, NotFundamental
from k3lattice.quad_ideals import (
    QuadIdeal, QuadInt, ideal_conjugate, ideal_from_form, ideal_inverse, ideal_multiply,
)


def params(D, p, q=None):
    ctx = make_context(D, p, q)
    for f in class_group(D).elements:
        A = ideal_from_form(coprime_representative(f, D))
        yield make_param(ideal_multiply(A, ideal_inverse(ideal_conjugate(A))), ctx)


def test_choose_q():
    assert choose_q(-7, 5) == 11
    assert choose_q(-15, 7) == 17
    assert choose_q(-23, 5) == 3
    assert choose_q(-7, 5, skip=1) == 23
    with pytest.raises(InvalidArgument):
        choose_q(-7, 2)
    with pytest.raises(InvalidArgument):
        choose_q(-7, 11)  # 11 splits
    with pytest.raises(NotFundamental):
        choose_q(-12, 5)
    with pytest.raises(InvalidArgument):
        choose_q(-20, 3)  # even D
    with pytest.raises(InvalidArgument):
        make_context(-7, 5, 13)


def test_split_q():
    Q = split_q(-23, 3)
    assert Q.norm() == 3 and Q.is_integral()
    assert ideal_multiply(Q, ideal_conjugate(Q)) == QuadIdeal.principal(QuadInt(3, 0, -23))


def test_quaternion_arithmetic():
    D, pq = -7, 55
    rnd = random.Random(3)

    def rq():
        return QuadInt(F(rnd.randint(-5, 5), 2), F(rnd.randint(-5, 5), 2), D)

    for _ in range(50):
        x = QuatElement(rq(), rq(), pq)
        y = QuatElement(rq(), rq(), pq)
        z = QuatElement(rq(), rq(), pq)
        assert (x * y) * z == x * (y * z)
        assert (x * y).reduced_norm() == x.reduced_norm() * y.reduced_norm()
        assert quat_form(x, x) == 2 * x.reduced_norm()
        assert QuatElement.from_coords(x.coords(), D, pq) == x


@pytest.mark.parametrize("D,p", [(-7, 5), (-15, 7), (-23, 5), (-7, 3), (-11, 7)])
def test_orders_are_maximal(D, p):
    for t in params(D, p):
        R = build_order(t)
        assert R.disc == p * p
        assert lattice_index(R.lattice) == F(1, t.ctx.q * -D)
        assert same_param_class(recover_param(R), t)


def test_random_membership_probes():
    rnd = random.Random(11)
    for D, p in ((-7, 5), (-23, 5)):
        for t in params(D, p):
            R = build_order(t)
            for _ in range(20):
                c = [rnd.randint(-4, 4) for _ in range(4)]
                x = R.basis[0]
                acc = None
                for k, e in zip(c, R.basis):
                    term = QuatElement(e.alpha * k, e.beta * k, e.pq)
                    acc = term if acc is None else acc + term
                assert R.contains(acc)
                assert acc.reduced_norm().denominator == 1
                assert (acc * x).reduced_norm().denominator == 1
                # a generic half of an element is not in R
                half = QuatElement(acc.alpha * F(1, 2), acc.beta * F(1, 2), acc.pq)
                if any(v % 2 for v in c):
                    assert not R.contains(half)


def test_representative_independence():
    for t in params(-23, 5):
        assert representative_independence(t)


def test_q_independence():
    for D, p in ((-7, 5), (-23, 5)):
        a = genus_sweep(D, p)
        b = genus_sweep(D, p, q=choose_q(D, p, skip=1))
        assert a.q != b.q and a.classes == b.classes


@pytest.mark.parametrize("D,p,J,classes", [
    (-7, 5, None, [(5, 5, 10)]),
    (-7, 5, (2, 1), [(10, 10, 20)]),
    (-15, 7, None, [(14, 7, 14)]),
    (-15, 7, (2, 1), [(14, 14, 56)]),
    (-23, 5, None, [(5, 5, 30), (10, -5, 15), (10, 5, 15)]),
    (-23, 5, (2, 1), [(10, 10, 60), (20, -10, 30), (20, 10, 30)]),
])
def test_genus_sweep(D, p, J, classes):
    r = genus_sweep(D, p, ideal_from_pair(D, *J) if J else None)
    assert [tuple(c) for c in r.classes] == classes
    assert r.orders_built == class_group(D).order


def test_sweep_errors():
    with pytest.raises(InvalidArgument):
        ideal_from_pair(-7, 3, 1)
    with pytest.raises(InvalidArgument):
        genus_sweep(-15, 7, ideal_from_pair(-15, 3, 3))  # norm not prime to D
    with pytest.raises(InvalidArgument):
        genus_sweep(-7, 11)


def test_coprime_representative():
    for D in (-15, -23, -39, -55):
        for f in class_group(D).elements:
            h = coprime_representative(f, D)
            assert reduce(h) == reduce(f.form)
