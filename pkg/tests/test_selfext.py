import pytest

from hecke_forge.hecke import HeckeModule, OperatorWord
from hecke_forge.localfield import MIXED_CHAR, make_field
from hecke_forge.report import FAIL, INFO, PASS
from hecke_forge.selfext import (
    X_GENERATORS,
    Y_GENERATORS,
    IdealTruncation,
    UnsupportedError,
    candidates,
    check_forward_inclusions,
    check_invariance_mod_ideal,
    check_reverse_inclusions,
    check_tau_isomorphism,
    i1_generators,
    independence_mod_ideal,
    selfext_report,
)

Q3 = make_field(3, 1, MIXED_CHAR)
Q5 = make_field(5, 1, MIXED_CHAR)
H3 = HeckeModule(Q3)
H5 = HeckeModule(Q5)


@pytest.mark.parametrize("K", [Q3, Q5, make_field(3, 1)])
def test_i1_generators(K):
    gens = i1_generators(K)
    assert len(gens) == 4
    H = HeckeModule(K)
    idv = H.identity_vector()
    for u in gens:
        assert K.in_IZ(u)
        a, b, c, d = K.residue_matrix(u)
        assert (a, c, d) == (1, 0, 1)
        assert H.g_act(u, idv) == idv


def test_unsupported_fields():
    with pytest.raises(UnsupportedError):
        i1_generators(make_field(2, 1, MIXED_CHAR))
    with pytest.raises(UnsupportedError):
        i1_generators(make_field(3, 2))
    with pytest.raises(UnsupportedError):
        selfext_report(make_field(2, 1, MIXED_CHAR))
    with pytest.raises(UnsupportedError):
        selfext_report(Q5, r=1)


def test_forward_inclusions_over_f9():
    rep = check_forward_inclusions(HeckeModule(make_field(3, 2)), 2)
    assert len(rep.checks) == 4
    assert all(c.status == PASS for c in rep.checks)


def test_forward_inclusions_q5():
    rep = check_forward_inclusions(H5, 2)
    assert all(c.status == PASS for c in rep.checks)


def test_reverse_inclusions_q3():
    rep = check_reverse_inclusions(H3, 1, 2)
    for c in rep.checks:
        assert c.status == PASS
        assert c.witness["kernel_dim"] > 0
        assert c.witness["certified"] == c.witness["kernel_dim"]


def test_image_vector_is_in_kernel_and_trivially_certified():
    idv = H5.identity_vector()
    v = H5.eval_word("T12 + T10", idv)
    assert H5.tm10(v).is_zero()
    ideal = IdealTruncation.of(H5, ["T12 + T10"], 0)
    cert = ideal.certify(v)
    assert cert["member"] and cert["reverified"]
    assert cert["combination"] == {("T12 + T10", next(iter(idv.terms))): 1}


def test_certificates_reexpand(rng):
    ideal = IdealTruncation.of(H3, Y_GENERATORS, 2)
    edges = H3.basis(1)
    for _ in range(5):
        e = rng.choice(edges)
        v = H3.eval_word("Tm10 + 2*(T12 + T10)^2", H3.basis_vector(e))
        cert = ideal.certify(v)
        assert cert["member"]
        acc = H3.zero()
        for (name, edge), c in cert["combination"].items():
            acc = acc + H3.eval_word(name, H3.basis_vector(edge)).scale(c)
        assert acc == v
    # a vector outside the span is not certified
    assert not ideal.certify(H3.identity_vector())["member"]
    assert ideal.certify(H3.zero())["member"]


def test_ideal_truncation_is_monotone():
    _, kernel = H3.operator_kernel("Tm10", 1)
    small = IdealTruncation.of(H3, ["T12 + T10"], 2)
    large = IdealTruncation.of(H3, ["T12 + T10"], 3)
    assert small.span.rank <= large.span.rank
    for v in kernel:
        if small.certify(v)["member"]:
            assert large.certify(v)["member"]
    for vec in small.span.inputs.values():
        assert large.certify(vec)["member"]


def test_invariance_certificates():
    ideal = IdealTruncation.of(H3, X_GENERATORS, 3)
    idv = H3.identity_vector()
    res = check_invariance_mod_ideal(H3, idv, ideal)
    assert res["certified"]
    assert all(g["difference"] == [] for g in res["generators"])
    for _, vec in candidates(H3, "tau'"):
        assert check_invariance_mod_ideal(H3, vec, ideal)["certified"]
    with pytest.raises(ValueError):
        check_invariance_mod_ideal(H3, idv, IdealTruncation.of(H3, X_GENERATORS, 1))


def test_candidates():
    for pres in ("tau", "tau'"):
        cs = candidates(H3, pres)
        assert len(cs) == 4
        assert all(v.depth <= 2 for _, v in cs)
    with pytest.raises(ValueError):
        candidates(H3, "sigma")


def test_independence_count():
    ideal = IdealTruncation.of(H3, Y_GENERATORS, 3)
    cs = [v for _, v in candidates(H3, "tau")]
    assert independence_mod_ideal(H3, cs, ideal)["survivors"] == 4
    assert independence_mod_ideal(H3, [cs[0], cs[0]], ideal)["survivors"] <= 1
    extra = H3.eval_word("Tm10", H3.identity_vector())
    assert independence_mod_ideal(H3, cs + [extra], ideal)["survivors"] == 4
    assert "consistency" in independence_mod_ideal(H3, cs, ideal)["note"]


def test_tau_isomorphism_q3():
    rep = check_tau_isomorphism(H3, 1, 2)
    for c in rep.checks:
        assert c.status == PASS
        assert c.witness["checked"] == c.witness["certified"] > 0


def test_word_identity_used_for_the_zero_case():
    # -T12 (T10 + Tm10) vanishes identically, so those memberships are exact zeros
    for e in H5.basis(1):
        assert H5.word_image_sparse(OperatorWord.parse("-T12*(T10 + Tm10)"), e) == {}


@pytest.mark.parametrize("r", [0, 2, None])
def test_full_report_p3(r):
    rep = selfext_report(Q3, r=r, depth=3, buffer=2, module=H3)
    assert rep.ok(strict=True)
    assert not [c for c in rep.checks if c.status == FAIL]
    info = [c for c in rep.checks if c.status == INFO]
    assert len(info) == 1 and not info[0].normative


def test_equal_char_report_is_marked_experimental():
    rep = selfext_report(make_field(3, 1), r=0, depth=2, buffer=2)
    assert rep.params["experimental"] is True
    assert rep.ok()
