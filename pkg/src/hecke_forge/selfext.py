"""Kernel/image identities and the two self-extension presentations.

tau  = ind / Y with Y = Im(Tm10) + Im((T12 + T10)^2)   (character r = 0)
tau' = ind / X with X = Im(T10 + Tm10) + Im(T12^2)     (character r = p - 1)

Ideals are truncated to images of the edge basis of bounded depth.  A
membership found in a truncation is an exact certificate; a membership not
found is only inconclusive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .hecke import HeckeModule, InducedVector, OperatorWord
from .linalg import SparseEchelon
from .localfield import MIXED_CHAR, LocalField, LocalMat
from .report import INCONCLUSIVE, INFO, PASS, Report

W_ = OperatorWord.parse

X_GENERATORS = ("T10 + Tm10", "T12^2")
Y_GENERATORS = ("Tm10", "(T12 + T10)^2")


class UnsupportedError(ValueError):
    pass


def require_odd(K: LocalField) -> None:
    if K.p == 2:
        raise UnsupportedError("the self-extension checks need an odd prime p")
    if K.f != 1:
        raise UnsupportedError("the self-extension checks need f = 1")


def i1_generators(K: LocalField) -> list[LocalMat]:
    """(1,1;0,1), (1,0;pi,1), (1+pi,0;0,1), (1,0;0,1+pi).

    For Q_p with p odd these topologically generate I(1).
    """
    require_odd(K)
    one, zero, pi = K.one(), K.zero(), K.uniformizer()
    return [
        K.mat(one, one, zero, one),
        K.mat(one, zero, pi, one),
        K.mat(one + pi, zero, zero, one),
        K.mat(one, zero, zero, one + pi),
    ]


def combination_json(combination: dict) -> list:
    rows = [[word, str(edge), int(c)] for (word, edge), c in combination.items()]
    rows.sort(key=lambda r: (r[0], r[1]))
    return rows


def vector_json(vec: dict) -> list:
    return [[str(k), int(vec[k])] for k in sorted(vec)]


@dataclass
class IdealTruncation:
    """Span of the images of ``generators`` on the edge basis of depth <= ``depth``."""

    module: HeckeModule
    generators: tuple[OperatorWord, ...]
    depth: int
    span: SparseEchelon = field(init=False)
    names: list = field(init=False)

    def __post_init__(self):
        self.names = [g if isinstance(g, str) else str(g) for g in self.generators]
        self.generators = tuple(W_(g) if isinstance(g, str) else g for g in self.generators)
        H = self.module
        self.span = SparseEchelon(H.F)
        basis = H.basis(self.depth)
        for name, word in zip(self.names, self.generators):
            for e, img in zip(basis, H.images(word, basis)):
                self.span.add(img, (name, e))

    @classmethod
    def of(cls, module: HeckeModule, generators, depth: int) -> "IdealTruncation":
        return cls(module, tuple(generators), depth)

    def certify(self, vec) -> dict:
        """Membership with a re-expanded certificate."""
        sparse = vec.to_sparse() if isinstance(vec, InducedVector) else dict(vec)
        res = self.span.test(sparse)
        if res.member:
            ok = self.span.verify(sparse, res.combination)
            return {"member": ok, "combination": res.combination, "reverified": ok}
        return {"member": False, "combination": {}, "reverified": False}


# --- identities -----------------------------------------------------------------

FORWARD_IDENTITIES = (
    ("Tm10 (T12 + T10)", "Tm10*(T12 + T10)"),
    ("(T10 + Tm10) T12", "(T10 + Tm10)*T12"),
    ("(T12 + T10) Tm10", "(T12 + T10)*Tm10"),
    ("T12 (T10 + Tm10)", "T12*(T10 + Tm10)"),
)


def check_word_vanishes(H: HeckeModule, word, depth: int) -> dict:
    """Evaluate ``word`` on every edge basis vector of depth <= depth."""
    word = W_(word) if isinstance(word, str) else word
    basis = H.basis(depth)
    for e, img in zip(basis, H.images(word, basis)):
        if img:
            return {"holds": False, "checked": len(basis), "offending": str(e), "image": vector_json(img)}
    return {"holds": True, "checked": len(basis)}


def check_forward_inclusions(H: HeckeModule, depth: int) -> Report:
    rep = Report("forward-inclusions", {"depth": depth, **H.K.describe()})
    for name, text in FORWARD_IDENTITIES:
        res = check_word_vanishes(H, text, depth)
        rep.add(f"{name} = 0 on depth <= {depth}", "Im in Ker (kernel/image lemmas)", res["holds"], res)
    return rep


REVERSE_PAIRS = (
    ("Ker Tm10 in Im (T12 + T10)", "Tm10", "T12 + T10"),
    ("Ker (T10 + Tm10) in Im T12", "T10 + Tm10", "T12"),
)


def check_reverse_inclusions(H: HeckeModule, depth: int, buffer: int = 2) -> Report:
    rep = Report("reverse-inclusions", {"depth": depth, "buffer": buffer, **H.K.describe()})
    for name, kword, iword in REVERSE_PAIRS:
        _, kernel = H.operator_kernel(kword, depth)
        ideal = IdealTruncation.of(H, [iword], depth + buffer)
        results = []
        for i, v in enumerate(kernel):
            cert = ideal.certify(v)
            results.append(
                {
                    "index": i,
                    "vector": v.to_json(),
                    "certified": cert["member"],
                    "combination": combination_json(cert["combination"]),
                }
            )
        found = sum(r["certified"] for r in results)
        status = PASS if found == len(results) else INCONCLUSIVE
        rep.add(
            f"{name}: kernel depth <= {depth}, image depth <= {depth + buffer}",
            "Ker in Im (kernel/image lemmas)",
            status,
            {"kernel_dim": len(results), "certified": found, "vectors": results},
        )
    return rep


def check_invariance_mod_ideal(H: HeckeModule, candidate: InducedVector, ideal: IdealTruncation) -> dict:
    """(u - 1) candidate in the ideal truncation for every I(1) generator u."""
    if ideal.depth < candidate.depth + 2:
        raise ValueError("the ideal truncation must reach two levels past the candidate")
    per = []
    for i, u in enumerate(i1_generators(H.K)):
        diff = H.g_act(u, candidate) - candidate
        cert = ideal.certify(diff)
        per.append(
            {
                "generator": i,
                "difference": diff.to_json(),
                "certified": cert["member"],
                "combination": combination_json(cert["combination"]),
            }
        )
    return {"certified": all(p["certified"] for p in per), "generators": per}


def independence_mod_ideal(H: HeckeModule, candidates: list[InducedVector], ideal: IdealTruncation) -> dict:
    """Number of candidates independent modulo the truncated span.

    Four survivors is consistent with a four-dimensional invariant space; it
    does not certify independence in the true quotient because the truncation
    is smaller than the ideal.
    """
    work = SparseEchelon(H.F, track=False)
    work.rows = {k: dict(v) for k, v in ideal.span.rows.items()}
    survivors = 0
    for i, c in enumerate(candidates):
        if work.add(c.to_sparse(), ("candidate", i)):
            survivors += 1
    return {
        "survivors": survivors,
        "candidates": len(candidates),
        "note": "consistency count only; the truncated ideal is smaller than the ideal",
    }


def candidates(H: HeckeModule, presentation: str) -> list[tuple[str, InducedVector]]:
    """The four I(1)-invariant generators of tau (r = 0) or tau' (r = p - 1)."""
    idv = H.identity_vector()
    bv = H.induced(H.K.beta)
    if presentation == "tau":
        op, name = W_("T12 + T10"), "(T12 + T10)"
    elif presentation == "tau'":
        op, name = W_("T12"), "T12"
    else:
        raise ValueError(f"unknown presentation {presentation!r}")
    return [
        ("[[id,1]]", idv),
        ("[[beta,1]]", bv),
        (f"{name}[[id,1]]", H.eval_word(op, idv)),
        (f"{name}[[beta,1]]", H.eval_word(op, bv)),
    ]


def check_words_in_ideal(H: HeckeModule, outer, inner_words, ideal: IdealTruncation, depth: int) -> dict:
    """outer(g(b)) in the ideal for each g in inner_words and basis b of depth <= depth."""
    outer = W_(outer) if isinstance(outer, str) else outer
    checked = certified = 0
    missing = []
    combos = []
    for g in inner_words:
        word = outer * (W_(g) if isinstance(g, str) else g)
        for e in H.basis(depth):
            vec = H.word_image_sparse(word, e)
            cert = ideal.certify(vec)
            checked += 1
            if cert["member"]:
                certified += 1
                combos.append([str(word), str(e), combination_json(cert["combination"])])
            else:
                missing.append([str(word), str(e)])
    return {"checked": checked, "certified": certified, "not_found": missing, "certificates": combos}


def check_tau_isomorphism(H: HeckeModule, depth: int, buffer: int = 2) -> Report:
    """Finite-depth well-definedness of f + X -> -T12 f + Y and of T10 on the Breuil quotients."""
    require_odd(H.K)
    rep = Report("tau-isomorphism", {"depth": depth, "buffer": buffer, **H.K.describe()})
    Y = IdealTruncation.of(H, Y_GENERATORS, depth + buffer)
    res = check_words_in_ideal(H, "-T12", X_GENERATORS, Y, depth)
    rep.add(
        f"-T12 maps X into Y on depth <= {depth}",
        "tau' -> tau isomorphism",
        PASS if res["certified"] == res["checked"] else INCONCLUSIVE,
        res,
    )
    target = IdealTruncation.of(H, ("T10 + Tm10", "T12"), depth + buffer)
    res = check_words_in_ideal(H, "T10", ("Tm10", "T12 + T10"), target, depth)
    rep.add(
        f"T10 maps (Tm10) + (T12 + T10) into (T10 + Tm10) + (T12) on depth <= {depth}",
        "Breuil isomorphism induced by T10",
        PASS if res["certified"] == res["checked"] else INCONCLUSIVE,
        res,
    )
    return rep


LEMMA_WORD = "(T12 + T10)^2 - T10*(Tm10 + T10)^2*T10"


def selfext_report(K: LocalField, r: int | None = None, depth: int = 3, buffer: int = 2, module=None) -> Report:
    """All self-extension checks; ``r`` in {0, p-1} selects one presentation, None runs both."""
    require_odd(K)
    p = K.p
    if r is None:
        presentations = ["tau", "tau'"]
    elif r == 0:
        presentations = ["tau"]
    elif r == p - 1:
        presentations = ["tau'"]
    else:
        raise UnsupportedError(f"r must be 0 or p - 1 = {p - 1}, got {r}")
    if depth < buffer:
        raise ValueError("depth must be at least the buffer")
    H = module or HeckeModule(K)
    experimental = K.mode != MIXED_CHAR
    params = {"p": p, "f": K.f, "r": r, "depth": depth, "buffer": buffer, "mode": K.mode}
    if experimental:
        params["experimental"] = True
    rep = Report("selfext", params)
    rep.extend(check_forward_inclusions(H, depth))
    rep.extend(check_reverse_inclusions(H, depth - buffer, buffer))
    res = check_word_vanishes(H, LEMMA_WORD, depth)
    rep.add(f"{LEMMA_WORD} = 0 on depth <= {depth}", "square identity (T12 + T10)^2 = T10 (Tm10 + T10)^2 T10", res["holds"], res)

    ideals = {"tau": Y_GENERATORS, "tau'": X_GENERATORS}
    for pres in presentations:
        ideal = IdealTruncation.of(H, ideals[pres], depth)
        cands = candidates(H, pres)
        for label, vec in cands:
            res = check_invariance_mod_ideal(H, vec, ideal)
            rep.add(
                f"{pres}: {label} is I(1)-invariant mod ({' + '.join(ideal.names)}) at depth {depth}",
                "I(1)-invariants of the self-extension",
                PASS if res["certified"] else INCONCLUSIVE,
                res,
            )
        ind = independence_mod_ideal(H, [v for _, v in cands], ideal)
        rep.add(
            f"{pres}: independence consistency count",
            "four-dimensional invariants (consistency only)",
            PASS if ind["survivors"] == 4 else INCONCLUSIVE,
            ind,
        )
    rep.extend(check_tau_isomorphism(H, depth - buffer, buffer))

    # computable fragment of the non-splitness argument, recorded only
    idv = H.identity_vector()
    rep.add(
        "shape of w[[id,1]] and T12[[id,1]]",
        "non-split extension (informational)",
        INFO,
        {
            "w": H.g_act(K.w, idv).to_json(),
            "T12": H.t12(idv).to_json(),
            "T10": H.t10(idv).to_json(),
        },
        normative=False,
    )
    return rep
