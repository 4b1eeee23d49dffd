import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hecke_forge.gf import GF
from hecke_forge.linalg import (
    DimensionError,
    QuotientStructure,
    SparseEchelon,
    echelonize,
    kernel_of,
    membership,
    rank,
)

SMALL = [(2, 1), (3, 1), (2, 2)]


def brute_span(F, vectors, n):
    # every F-linear combination, as a set of tuples
    out = set()
    for coeffs in itertools.product(range(F.q), repeat=len(vectors)):
        acc = [0] * n
        for c, v in zip(coeffs, vectors):
            for k in range(n):
                acc[k] = F.add(acc[k], F.mul(c, int(v[k])))
        out.add(tuple(acc))
    return out


def small_matrix(draw, q, rows_max=4, cols_max=4):
    m = draw(st.integers(1, rows_max))
    n = draw(st.integers(1, cols_max))
    return [draw(st.lists(st.integers(0, q - 1), min_size=n, max_size=n)) for _ in range(m)], n


@given(st.sampled_from(SMALL), st.data())
def test_rank_matches_span_size(pf, data):
    F = GF(*pf)
    M, n = small_matrix(data.draw, F.q)
    span = brute_span(F, M, n)
    r = rank(F, M, n)
    assert F.q**r == len(span)


@given(st.sampled_from(SMALL), st.data())
def test_echelon_basis_spans_the_same_space(pf, data):
    F = GF(*pf)
    M, n = small_matrix(data.draw, F.q)
    B = echelonize(F, M, n)
    assert brute_span(F, list(B.rows), n) == brute_span(F, M, n)
    for i, pc in enumerate(B.pivots):
        assert B.rows[i, pc] == 1
        assert all(B.rows[j, pc] == 0 for j in range(B.rank) if j != i)


@given(st.sampled_from(SMALL), st.data())
def test_kernel_matches_brute_force(pf, data):
    F = GF(*pf)
    M, n = small_matrix(data.draw, F.q)
    K = kernel_of(F, np.array(M))
    want = set()
    for x in itertools.product(range(F.q), repeat=n):
        if all(F.matmul(np.array([row]), np.array(x).reshape(n, 1))[0, 0] == 0 for row in M):
            want.add(x)
    assert brute_span(F, list(K.rows), n) == want


@given(st.sampled_from(SMALL), st.data())
def test_membership_coefficients(pf, data):
    F = GF(*pf)
    M, n = small_matrix(data.draw, F.q)
    B = echelonize(F, M, n)
    span = brute_span(F, M, n)
    for x in itertools.product(range(F.q), repeat=n):
        ok, coeffs = membership(np.array(x), B)
        assert ok == (x in span)
        if ok and B.rank:
            assert tuple(F.matmul(coeffs.reshape(1, -1), B.rows)[0]) == x


def test_membership_dimension_error():
    F = GF(3)
    B = echelonize(F, [[1, 0, 0]], 3)
    with pytest.raises(DimensionError):
        membership(np.array([1, 0]), B)


@pytest.mark.parametrize("pf", SMALL)
def test_quotient_projection(pf, rng):
    F = GF(*pf)
    n = 5
    gens = [[rng.randrange(F.q) for _ in range(n)] for _ in range(2)]
    Q = QuotientStructure(echelonize(F, gens, n))
    assert Q.dim == n - rank(F, gens, n)
    for g in gens:
        assert Q.is_zero(np.array(g))
    for _ in range(20):
        v = np.array([rng.randrange(F.q) for _ in range(n)])
        # projection is linear, lift is a section, and v - lift(project(v)) lies in the subspace
        assert np.array_equal(Q.project(Q.lift(Q.project(v))), Q.project(v))
        assert Q.is_zero(F.vsub(v, Q.lift(Q.project(v))))


def to_sparse(v):
    return {i: int(x) for i, x in enumerate(v) if x}


@given(st.sampled_from(SMALL + [(5, 1)]), st.data())
def test_sparse_echelon_agrees_with_dense(pf, data):
    F = GF(*pf)
    M, n = small_matrix(data.draw, F.q, rows_max=6, cols_max=6)
    S = SparseEchelon(F)
    for i, row in enumerate(M):
        S.add(to_sparse(row), ("row", i))
    B = echelonize(F, M, n)
    assert S.rank == B.rank
    probe = data.draw(st.lists(st.integers(0, F.q - 1), min_size=n, max_size=n))
    res = S.test(to_sparse(probe))
    assert res.member == membership(np.array(probe), B)[0]
    if res.member:
        assert S.verify(to_sparse(probe), res.combination)


def test_sparse_certificate_catches_a_wrong_combination():
    F = GF(5)
    S = SparseEchelon(F)
    S.add({0: 1, 2: 3}, "a")
    S.add({1: 2, 2: 1}, "b")
    target = {0: 2, 1: 2, 2: 2}
    res = S.test(target)
    assert res.member and S.verify(target, res.combination)
    assert not S.verify(target, {"a": 1, "b": 1})
    with pytest.raises(KeyError):
        S.add({0: 1}, "a")


def test_sparse_rank_growth_flag():
    F = GF(3)
    S = SparseEchelon(F)
    assert S.add({3: 1}, 1)
    assert not S.add({3: 2}, 2)
    assert S.add({1: 1, 3: 1}, 3)
    assert S.reduce({1: 2, 3: 1}) == {}
    assert S.reduce({0: 1, 1: 1}) == {0: 1}
    assert not S.test({0: 1}).member
