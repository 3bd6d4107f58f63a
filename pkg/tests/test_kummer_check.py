import numpy as np

from k3lattice.kummer_check import (
    X_BIT, Y_BIT, Z_MASK, _popcount16, build_nodal_code, f2_rank, q_value, scan_overcodes,
    span, verify_maximality, verify_shioda_inose_M, z_bit,
)


def test_code_shape():
    code = build_nodal_code()
    assert code.rank == 7 and len(code.elements) == 128
    assert code.F[0] == Y_BIT | z_bit(1, 1) | z_bit(2, 1) | z_bit(3, 1) | z_bit(4, 1)
    assert code.G[0] == X_BIT | z_bit(1, 1) | z_bit(1, 2) | z_bit(1, 3) | z_bit(1, 4)
    assert f2_rank(code.F) == 4 and f2_rank(code.G) == 4


def test_q_value():
    assert q_value(0) == 0
    assert q_value(X_BIT | Y_BIT) == 2
    assert q_value(z_bit(1, 1)) == 3  # -1/2 mod 2, doubled
    assert q_value(X_BIT | Y_BIT | z_bit(1, 1) | z_bit(2, 2)) == 0


def test_span_and_rank():
    assert span([1, 2]) == [0, 1, 2, 3]
    assert f2_rank([1, 2, 3]) == 2


def test_maximality():
    r = verify_maximality()
    assert r.counterexamples == 0
    assert r.index_exponent == 7 and r.disc_N == -2 ** 18 and r.disc_closure == -16
    assert r.words_scanned == 2 ** 18
    assert r.isotropic_cosets > 0  # the weight-4 rule does real work


def test_dropping_weight_rule_finds_extensions():
    code = build_nodal_code()
    table = _popcount16()

    def pop(W):
        return table[W & Z_MASK].astype(np.int64)

    def qtwice(W):
        return (2 * ((W >> 16) & 1) * ((W >> 17) & 1) - pop(W)) % 4

    iso, wt4, inH = scan_overcodes(code.elements, 18, qtwice, Z_MASK, pop)
    assert int((iso & ~inH).sum()) > 0
    assert int((iso & ~wt4 & ~inH).sum()) == 0
    # a smaller code is not maximal
    H = span(code.generators[:6])
    iso, wt4, inH = scan_overcodes(H, 18, qtwice, Z_MASK, pop)
    assert int((iso & ~wt4 & ~inH).sum()) > 0


def test_shioda_inose():
    r = verify_shioda_inose_M()
    assert r.admissible == (0, 255) and r.index == 2 and r.disc_closure == 64
