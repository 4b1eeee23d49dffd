import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hecke_forge.gf import GF
from hecke_forge.linalg import kernel_of, rank
from hecke_forge.weights import (
    FunctionOnP1,
    MultiHomogPoly,
    ProfileError,
    WeightProfile,
    action_matrix,
    borel_generators,
    gl2_act,
    gl2_elements,
    iota0,
    iota_p_1,
    mat2_mul,
    p1_points,
    psi,
    psi_matrix,
    summand_decomposition,
    theta_ideal,
    theta_multiples,
    verify_p1,
    x_power,
    y_power,
)

F9 = GF(3, 2)
MAIN = WeightProfile(F9, (9, 13))
SMALL_PROFILES = [
    WeightProfile(GF(3, 2), (2, 1)),
    WeightProfile(GF(2, 2), (1, 2)),
    WeightProfile(GF(5), (3,)),
    WeightProfile(GF(2, 3), (1, 0, 2)),
]


# independent oracle: expand each slot by repeated multiplication of linear forms
def _poly_mul(F, a, b):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = F.add(out.get(i + j, 0), F.mul(x, y))
    return {k: v for k, v in out.items() if v}


def _linear_form_power(F, x_coeff, y_coeff, m):
    # (x X + y Y)^m as {y-degree: coeff}
    acc = {0: 1}
    for _ in range(m):
        acc = _poly_mul(F, acc, {k: v for k, v in ((0, x_coeff), (1, y_coeff)) if v})
    return acc


def oracle_act(g, P):
    prof = P.profile
    F = prof.field
    out = {}
    for exps, coeff in P.terms().items():
        slot_polys = []
        for j, (rj, i) in enumerate(zip(prof.r_digits, exps)):
            a, b, c, d = (F.frobenius(x, j) for x in g)
            slot_polys.append(_poly_mul(F, _linear_form_power(F, a, c, rj - i), _linear_form_power(F, b, d, i)))
        for combo in itertools.product(*(sp.items() for sp in slot_polys)):
            key = tuple(k for k, _ in combo)
            val = coeff
            for _, v in combo:
                val = F.mul(val, v)
            out[key] = F.add(out.get(key, 0), val)
    return MultiHomogPoly.from_terms(prof, {k: v for k, v in out.items() if v})


def random_poly(rng, prof):
    return MultiHomogPoly(prof, np.array([rng.randrange(prof.field.q) for _ in range(prof.dim)]))


def random_gl2(rng, F):
    while True:
        g = tuple(rng.randrange(F.q) for _ in range(4))
        if F.sub(F.mul(g[0], g[3]), F.mul(g[1], g[2])):
            return g


@pytest.mark.parametrize("prof", SMALL_PROFILES + [WeightProfile(F9, (4, 2))])
def test_action_matches_expansion_oracle(prof, rng):
    for _ in range(10):
        g = random_gl2(rng, prof.field)
        P = random_poly(rng, prof)
        assert gl2_act(g, P) == oracle_act(g, P)


@pytest.mark.parametrize("prof", SMALL_PROFILES + [MAIN])
def test_action_is_a_left_action(prof, rng):
    F = prof.field
    for _ in range(5):
        g, h = random_gl2(rng, F), random_gl2(rng, F)
        assert np.array_equal(action_matrix(prof, mat2_mul(F, g, h)), F.matmul(action_matrix(prof, g), action_matrix(prof, h)))
    assert np.array_equal(action_matrix(prof, (1, 0, 0, 1)), np.eye(prof.dim, dtype=np.int64))


def test_action_rejects_singular():
    with pytest.raises(ValueError):
        gl2_act((1, 1, 1, 1), x_power(MAIN))


def test_profile_basics():
    assert MAIN.r == 48 and MAIN.dim == 10 * 14 and MAIN.shape == (10, 14)
    assert MAIN.satisfies_comparison_hypotheses()
    for exps in MAIN.exponents[:20]:
        assert MAIN.exponents[MAIN.index(exps)] == exps
    with pytest.raises(ProfileError):
        WeightProfile(F9, (1,))
    with pytest.raises(ProfileError):
        WeightProfile(F9, (2, 2)).require_comparison_hypotheses()  # r_j < q
    with pytest.raises(ProfileError):
        WeightProfile(GF(5), (8,)).require_comparison_hypotheses()  # f = 1


def test_polynomial_arithmetic():
    a, b = x_power(MAIN), y_power(MAIN)
    assert (a + b) - b == a
    assert (a.scale(2) + a).is_zero()
    assert -(-a) == a
    assert a.terms() == {(0, 0): 1}
    assert b.terms() == {(9, 13): 1}


@pytest.mark.parametrize("prof", [MAIN, WeightProfile(GF(3), (8,)), WeightProfile(GF(2, 2), (4, 4)),
                                  WeightProfile(GF(5), (8,)), WeightProfile(GF(3, 2), (10, 10))])
def test_psi_kernel_is_theta_ideal(prof):
    F = prof.field
    M = psi_matrix(prof)
    assert rank(F, M, prof.dim) == F.q + 1
    assert kernel_of(F, M) == theta_ideal(prof).subspace
    assert theta_ideal(prof).dim == F.q + 1


def test_main_quotient_dimensions():
    assert theta_ideal(MAIN).subspace.rank == 130
    assert theta_ideal(MAIN).dim == 10


def test_theta_multiples_lie_in_kernel():
    M = psi_matrix(MAIN)
    T = theta_multiples(MAIN)
    assert not F9.matmul(M, T.T).any()


def test_psi_examples():
    prof = MAIN
    F = prof.field
    delta = psi(iota0(prof) - x_power(prof))
    assert delta.values == tuple(int(i == F.q) for i in range(F.q + 1))
    # X^r evaluates to c^r: 1 on [1:d], 0 on [0:1]
    assert psi(x_power(prof)).values == (1,) * F.q + (0,)


@pytest.mark.parametrize("prof", [MAIN, WeightProfile(GF(5), (8,))])
def test_psi_equivariance(prof, rng):
    F = prof.field
    for g in borel_generators(F)[:: max(1, len(borel_generators(F)) // 12)] + [(0, 1, 1, 0)]:
        P = random_poly(rng, prof)
        assert psi(gl2_act(g, P), check_projective=False) == psi(P, check_projective=False).translate(g)


@given(st.data())
def test_translation_is_a_left_action(data):
    F = GF(3, 2)
    vals = tuple(data.draw(st.lists(st.integers(0, 8), min_size=10, max_size=10)))
    phi = FunctionOnP1(F, vals)
    g = data.draw(st.sampled_from(list(itertools.islice(gl2_elements(F), 0, 5000, 37))))
    h = data.draw(st.sampled_from(list(itertools.islice(gl2_elements(F), 0, 5000, 41))))
    assert phi.translate(h).translate(g) == phi.translate(mat2_mul(F, g, h))
    assert FunctionOnP1.constant(F, 4).translate(g) == FunctionOnP1.constant(F, 4)


def test_p1_points_order():
    F = GF(3)
    assert p1_points(F) == ((1, 0), (1, 1), (1, 2), (0, 1))


def test_verify_p1_main_profile():
    res = verify_p1(MAIN, exhaustive=False)
    assert res["passed"]
    assert res["dims"] == {"V0": 1, "Vp-1": 9, "quotient": 10}


def test_verify_p1_detects_a_wrong_embedding():
    # dropping the Y^(p-1) -> Y^r correction breaks the decomposition
    def plain(profile, i_digits):
        return MultiHomogPoly.monomial(profile, i_digits)

    res = verify_p1(MAIN, exhaustive=False, iota=plain)
    assert not res["passed"]

    def swapped(profile, i_digits):
        return MultiHomogPoly.monomial(profile, tuple(reversed(i_digits))) if i_digits != (2, 2) else y_power(profile)

    res = verify_p1(MAIN, exhaustive=False, iota=swapped)
    assert not res["passed"]
    assert res["counterexample"] is not None


def test_iota_p_1_validation():
    assert iota_p_1(MAIN, (2, 2)) == y_power(MAIN)
    assert iota_p_1(MAIN, (0, 0)) == x_power(MAIN)
    with pytest.raises(ProfileError):
        iota_p_1(MAIN, (3, 0))


def test_summand_projections(rng):
    D = summand_decomposition(MAIN)
    F = MAIN.field
    for _ in range(10):
        v = np.array([rng.randrange(F.q) for _ in range(10)])
        a, b = D.project(v, "V0"), D.project(v, "Vp-1")
        assert np.array_equal(F.vadd(a, b), v)
        assert np.array_equal(D.project(a, "V0"), a)
        assert not D.project(a, "Vp-1").any()
        assert np.array_equal(D.join(D.split(v)), v)
    with pytest.raises(ValueError):
        D.project(np.zeros(10, dtype=np.int64), "V7")


def test_summand_projection_is_equivariant(rng):
    # both summands are subrepresentations, so projecting commutes with the action
    Q = theta_ideal(MAIN)
    D = summand_decomposition(MAIN)
    for _ in range(5):
        g = random_gl2(rng, F9)
        P = random_poly(rng, MAIN)
        lhs = D.project(Q.project(gl2_act(g, P).coeffs), "V0")
        lifted = Q.lift(D.project(Q.project(P.coeffs), "V0"))
        rhs = Q.project(gl2_act(g, MultiHomogPoly(MAIN, lifted)).coeffs)
        assert np.array_equal(lhs, rhs)
