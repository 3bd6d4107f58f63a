import random
from fractions import Fraction
from itertools import product

import pytest

from k3lattice.arith import det, is_fundamental, lattice_basis, lattice_contains, prime_divisors
from k3lattice.binary_forms import Orientation, class_group, lifted_genera, reduce
from k3lattice.errors import CapacityError, InvalidArgument
from k3lattice.lattices_fqf import (
    EvenLattice, FiniteQuadraticForm, disc_form, fqf_isomorphic, genus_partition,
    jordan_blocks, milgram_signature, nikulin_complement_form, orthogonal_complement,
    rudakov_shafarevich_form, scale, scale_genus, signature, trivial_form,
)

from lattice_gen import dual_value_counts, gauss_sum_signature, random_gram

F = Fraction


def value_counts(Fq):
    out = {}
    for x in Fq.elements():
        v = Fq.value(x)
        out[v] = out.get(v, 0) + 1
    return out


def test_signature_exact():
    assert signature([[0, 1], [1, 0]]) == (1, 1)
    assert signature([[2, 1], [1, 2]]) == (2, 0)
    assert signature([[0, 0, 1], [0, -2, 0], [1, 0, 0]]) == (1, 2)
    assert EvenLattice([[-6, -3], [-3, -12]]).signature == (0, 2)


def test_lattice_validation():
    for bad in ([[1]], [[2, 1], [0, 2]], [[2, 2], [2, 2]]):
        with pytest.raises(InvalidArgument):
            EvenLattice(bad)


def test_disc_form_examples():
    F1 = disc_form(EvenLattice([[-2]]))
    assert F1.orders == (2,) and F1.q[0][0] == F(3, 2)
    assert disc_form(EvenLattice([[0, 1], [1, 0]])).size == 1
    F7 = disc_form(EvenLattice([[2, 1], [1, 4]]))
    assert F7.orders == (7,)
    assert fqf_isomorphic(F7, FiniteQuadraticForm((7,), ((F(8, 7),),)))
    assert value_counts(F7) == dual_value_counts([[2, 1], [1, 4]])


def test_disc_form_against_brute_force():
    rnd = random.Random(5)
    for _ in range(40):
        G = random_gram(rnd, max_rank=2, bound=8)
        if abs(det(G)) > 60:
            continue
        Fq = disc_form(EvenLattice(G))
        assert Fq.size == abs(det(G))
        assert value_counts(Fq) == dual_value_counts(G)


def test_fqf_isomorphic_examples():
    f = disc_form(EvenLattice.from_form((1, 1, 6)))
    g = disc_form(EvenLattice.from_form((2, 1, 3)))
    assert fqf_isomorphic(f, f) and fqf_isomorphic(f, g)
    f24 = disc_form(EvenLattice.from_form((1, 0, 6)))
    g24 = disc_form(EvenLattice.from_form((2, 0, 3)))
    assert not fqf_isomorphic(f24, g24)
    # the small represented values differ: (1,0,6) represents 1, (2,0,3) does not
    assert value_counts(f24) != value_counts(g24)


def test_fqf_isomorphic_respects_value_counts():
    rnd = random.Random(8)
    forms = []
    for _ in range(60):
        G = random_gram(rnd, max_rank=2, bound=6)
        d = abs(det(G))
        if 1 < d <= 40:
            forms.append(disc_form(EvenLattice(G)))
    for a in forms:
        for b in forms:
            if fqf_isomorphic(a, b):
                assert value_counts(a) == value_counts(b)


def test_two_part_cap():
    big = FiniteQuadraticForm((2 ** 13,), ((F(1, 2 ** 13),),))
    with pytest.raises(CapacityError):
        fqf_isomorphic(big, big)


def test_milgram_examples():
    assert milgram_signature(trivial_form()) == 0
    assert milgram_signature(disc_form(EvenLattice([[-2]]))) == 7
    assert milgram_signature(disc_form(EvenLattice([[2, 1], [1, 4]]))) == 2
    # D4 has discriminant form V_1, signature 4
    D4 = [[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]]
    assert milgram_signature(disc_form(EvenLattice(D4))) == 4
    assert [b.kind for b in jordan_blocks(disc_form(EvenLattice(D4)), 2)] == ["V"]


def test_milgram_matches_gauss_sum_oracle():
    rnd = random.Random(17)
    checked = 0
    while checked < 60:
        G = random_gram(rnd)
        if abs(det(G)) > 500:
            continue
        Fq = disc_form(EvenLattice(G))
        sp, sn = signature(G)
        assert milgram_signature(Fq) == (sp - sn) % 8 == gauss_sum_signature(Fq)
        checked += 1


def test_degenerate_form_rejected():
    u1 = FiniteQuadraticForm((2, 2), ((F(0), F(1, 2)), (F(1, 2), F(1))))
    assert [b.kind for b in jordan_blocks(u1, 2)] == ["U"]
    v1 = FiniteQuadraticForm((2, 2), ((F(1), F(1, 2)), (F(1, 2), F(1))))
    assert [b.kind for b in jordan_blocks(v1, 2)] == ["V"]
    assert milgram_signature(u1) == 0 == gauss_sum_signature(u1)
    assert milgram_signature(v1) == 4 == gauss_sum_signature(v1)
    with pytest.raises(InvalidArgument):
        jordan_blocks(FiniteQuadraticForm((3,), ((F(0),),)), 3)


def test_rudakov_shafarevich():
    for p in (3, 5, 7, 11, 13):
        Dp = rudakov_shafarevich_form(p)
        assert Dp.orders == (p, p)
        assert milgram_signature(Dp) == 4 == gauss_sum_signature(Dp)
    with pytest.raises(InvalidArgument):
        rudakov_shafarevich_form(2)
    with pytest.raises(InvalidArgument):
        rudakov_shafarevich_form(3, sigma=2)


def test_scale():
    L = EvenLattice.from_form((1, 1, 2))
    assert scale(L, 1) == L
    M = scale(L, -3)
    assert M.gram == ((-6, -3), (-3, -12)) and M.det == 63
    with pytest.raises(InvalidArgument):
        scale(L, 0)


def test_scale_genus_injective():
    genera = genus_partition(-15)
    scaled = [scale_genus(G, -5) for G in genera]
    for i, A in enumerate(scaled):
        assert A.det == 25 * 15 and A.sign == -1
        for j, B in enumerate(scaled):
            assert fqf_isomorphic(A.fingerprint, B.fingerprint) == (i == j)


def test_orthogonal_complement_examples():
    N, K = orthogonal_complement(EvenLattice([[2, 0], [0, 4]]), [[1, 0]])
    assert N.gram == ((4,),)
    N, K = orthogonal_complement(EvenLattice([[-2, 0], [0, -2]]), [[1, 1]], EvenLattice([[-4]]))
    assert N.gram == ((-4,),) and [abs(x) for x in K[0]] == [1, 1]
    with pytest.raises(InvalidArgument):
        orthogonal_complement(EvenLattice([[2, 0], [0, 4]]), [[1, 0]], EvenLattice([[4]]))


def test_orthogonal_complement_brute_force():
    rnd = random.Random(23)
    for _ in range(20):
        G = random_gram(rnd, max_rank=3, bound=6)
        n = len(G)
        if n < 2:
            continue
        v = [rnd.randint(-2, 2) for _ in range(n)]
        if not any(v):
            continue
        L = EvenLattice(G)
        Gv = [sum(G[i][j] * v[j] for j in range(n)) for i in range(n)]
        if not any(Gv):
            continue
        try:
            N, K = orthogonal_complement(L, [v])
        except InvalidArgument:
            continue  # degenerate complement
        B = lattice_basis(K)
        for x in product(range(-3, 4), repeat=n):
            orth = sum(Gv[i] * x[i] for i in range(n)) == 0
            assert lattice_contains(B, x) == orth


def test_nikulin_complement_form_examples():
    q3 = FiniteQuadraticForm((3,), ((F(2, 3),),))
    assert nikulin_complement_form(q3, trivial_form()) == q3
    neg = nikulin_complement_form(trivial_form(), q3)
    assert neg.q[0][0] == F(4, 3)
    with pytest.raises(InvalidArgument):
        nikulin_complement_form(q3, q3)


def test_genus_partition_examples():
    g23 = genus_partition(-23)
    assert len(g23) == 1 and [tuple(f) for f in g23[0].members] == [(1, 1, 6), (2, 1, 3)]
    g15 = genus_partition(-15)
    assert [[tuple(f) for f in G.members] for G in g15] == [[(1, 1, 4)], [(2, 1, 2)]]
    assert len(genus_partition(-3)) == 1


def test_genera_match_lifted_genera():
    for D in range(-200, 0):
        if not is_fundamental(D):
            continue
        gl = sorted(sorted(reduce(f.form, Orientation.GL2) for f in coset)
                    for coset in lifted_genera(class_group(D)))
        gl = [sorted(set(c)) for c in gl]
        genera = sorted(sorted(G.members) for G in genus_partition(D))
        assert genera == sorted(gl)
        assert len(genera) == 2 ** (len(prime_divisors(D)) - 1)
