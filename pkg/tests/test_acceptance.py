"""End-to-end acceptance criteria; each test prints one pass/fail line."""

import subprocess
import sys
import time

import pytest

from hecke_forge import suites
from hecke_forge.gf import GF
from hecke_forge.hecke import HeckeModule
from hecke_forge.linalg import kernel_of, rank
from hecke_forge.localfield import MIXED_CHAR, make_field
from hecke_forge.report import PASS
from hecke_forge.selfext import LEMMA_WORD
from hecke_forge.weights import WeightProfile, psi_matrix, theta_ideal

MAIN = WeightProfile(GF(3, 2), (9, 13))


@pytest.fixture
def announce(capsys):
    def _announce(number, title, ok, started):
        with capsys.disabled():
            verdict = "PASS" if ok else "FAIL"
            print(f"\n[acceptance] criterion {number} {verdict}: {title} ({time.time() - started:.1f}s)")
        assert ok
    return _announce


@pytest.mark.parametrize("p,f", [(3, 1), (5, 1), (3, 2)])
def test_criterion_1_relations(p, f, announce):
    t0 = time.time()
    rep = suites.relations_suite(HeckeModule(make_field(p, f)), 3)
    ok = len(rep.checks) == 3 and all(c.status == PASS for c in rep.checks)
    ok = ok and all(c.witness["checked"] == 2 * (p**f + 1) * sum((p**f) ** n for n in range(4)) for c in rep.checks)
    announce(1, f"Hecke relations on every edge of depth <= 3, p={p} f={f}", ok, t0)


def test_criterion_2_lucas(announce):
    t0 = time.time()
    rep = suites.lucas_suite(200, (2, 3, 5))
    ok = len(rep.checks) == 6 and rep.ok(strict=True)
    announce(2, "Lucas binomials and digit divisibility, n <= 200", ok and time.time() - t0 < 5, t0)


def test_criterion_3_binomial_sum_lemma(announce):
    t0 = time.time()
    rep = suites.binom_lemma_suite()
    covered = {(p, f) for (p, f) in suites.LEMMA_PROFILES}
    ok = covered >= {(p, f) for p in (2, 3, 5) for f in (1, 2)}
    ok = ok and all(len(rs) >= 3 for rs in suites.LEMMA_PROFILES.values())
    ok = ok and (9, 13) in suites.LEMMA_PROFILES[(3, 2)]
    ok = ok and rep.ok(strict=True)
    announce(3, "binomial sum lemma three ways", ok, t0)


def test_criterion_4_psi(announce):
    t0 = time.time()
    F = MAIN.field
    M = psi_matrix(MAIN)
    ker = kernel_of(F, M)
    ideal = theta_ideal(MAIN).subspace
    ok = rank(F, M, MAIN.dim) == 10 and ker.rank == 130 and ideal.rank == 130 and ker == ideal
    ok = ok and suites.psi_suite(MAIN).ok(strict=True)
    announce(4, "psi surjective with kernel the theta ideal at r = (9, 13)", ok, t0)


def test_criterion_5_p1_decomposition(announce):
    t0 = time.time()
    rep = suites.p1_suite(MAIN, exhaustive=True)
    dims = [c.witness["dims"] for c in rep.checks]
    ok = len(rep.checks) == 5 and rep.ok(strict=True)
    ok = ok and dims[0] == {"V0": 1, "Vp-1": 9, "quotient": 10}
    announce(5, "theta quotient splits as V0 + V(q-1), exhaustive over GL2(F9)", ok, t0)


def test_criterion_6_comparison(announce):
    t0 = time.time()
    rep = suites.comparison_suite(HeckeModule(make_field(3, 2)), MAIN, depth=2, translates=10)
    ok = len(rep.checks) == 6 and rep.ok(strict=True)
    announce(6, "comparison map on T12 and both intertwining identities", ok, t0)


def test_criterion_7_self_extensions(announce):
    t0 = time.time()
    K = make_field(5, 1, MIXED_CHAR)
    rep = suites.selfext_suite(K, None, depth=3, buffer=2)
    by_label = {}
    for c in rep.checks:
        by_label.setdefault(c.label, []).append(c)
    forward = by_label["Im in Ker (kernel/image lemmas)"]
    reverse = by_label["Ker in Im (kernel/image lemmas)"]
    invariance = by_label["I(1)-invariants of the self-extension"]
    independence = by_label["four-dimensional invariants (consistency only)"]
    ok = len(forward) == 4 and all(c.status == PASS for c in forward)
    ok = ok and len(reverse) == 2 and all(
        c.status == PASS and c.witness["certified"] == c.witness["kernel_dim"] > 0 for c in reverse)
    ok = ok and rep.get(f"{LEMMA_WORD} = 0 on depth <= 3").status == PASS
    ok = ok and len(invariance) == 8 and all(c.status == PASS for c in invariance)
    ok = ok and len(independence) == 2 and all(c.witness["survivors"] == 4 for c in independence)
    iso = by_label["tau' -> tau isomorphism"] + by_label["Breuil isomorphism induced by T10"]
    ok = ok and len(iso) == 2 and all(c.status == PASS and c.witness["checked"] == c.witness["certified"] for c in iso)
    ok = ok and rep.ok(strict=True)
    announce(7, "self-extension suite at p = 5 over Q5, depth 3, buffer 2", ok, t0)


def test_criterion_8_determinism(announce):
    t0 = time.time()
    cmd = [sys.executable, "-m", "hecke_forge", "all", "--output", "json"]
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    ok = first.returncode == 0 and second.returncode == 0 and first.stdout == second.stdout and len(first.stdout) > 0
    announce(8, f"two runs of `all` give byte-identical JSON ({len(first.stdout)} bytes)", ok, t0)
