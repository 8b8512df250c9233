from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest

from pingpong.certify import (Certificate, EtaFamily, FailureReport, ViolationReport, WordTrace,
                              build_etas, certify, check_nonincidence, compute_pairings,
                              dump_certificate, find_z, make_generators, recheck, search_h,
                              strip_metadata, trace_word, verify_free_up_to, word_matrix)
from pingpong.errors import DuplicateGamma, Exhausted, MembershipViolation
from pingpong.exact import Matrix
from pingpong.groups import Element, GroupSpec, random_torus_conjugate
from pingpong.projective import ProjPointC
from pingpong.words import FreeWord, enumerate_reduced

GOLDEN_PAIRINGS = {
    (1, 2, 1, 1): 2, (1, 2, -1, 1): -1, (1, 2, 1, -1): -1, (1, 2, -1, -1): 1,
    (2, 1, 1, 1): 1, (2, 1, -1, 1): 1, (2, 1, 1, -1): 1, (2, 1, -1, -1): 2,
}


def test_golden_pairings(sl2, golden_gammas):
    fam = build_etas(golden_gammas, Element.identity(sl2))
    assert compute_pairings(fam) == GOLDEN_PAIRINGS
    assert find_z(fam) == ProjPointC((1, 3))


def test_golden_certificate_and_verification(sl2, golden_gammas):
    cert = certify(golden_gammas, Element.identity(sl2), (-1, 1), max_len=8)
    assert isinstance(cert, Certificate)
    assert cert.verification.total == 13120
    assert cert.verification.failures == 0
    assert recheck(json.loads(dump_certificate(cert))).ok


def test_duplicate_and_membership_errors(sl2):
    g = Element(sl2, Matrix([[1, 1], [1, 2]]))
    minus = Element(sl2, Matrix([[-1, -1], [-1, -2]]))
    with pytest.raises(DuplicateGamma):
        build_etas([g, minus], Element.identity(sl2))
    with pytest.raises(MembershipViolation):
        build_etas([Element(sl2, Matrix([[2, 0], [0, 1]]))], Element.identity(sl2))


def negative_family():
    return EtaFamily.from_matrices([Matrix.identity(2), Matrix.diagonal([1, 2])])


def test_negative_control_violation_and_trace():
    fam = negative_family()
    rep = check_nonincidence(fam)
    assert isinstance(rep, ViolationReport)
    assert len(rep.violations) == 4
    summary = verify_free_up_to(fam, (-1, 1), 3, z=ProjPointC((1, 3)))
    assert not summary.ok
    f = summary.first_failure
    assert len(f.word) == 2 and f.check == "off_hyperplane"
    gens = make_generators(fam, (-1, 1))
    comm = word_matrix(FreeWord.parse("x1 x2 x1^-1 x2^-1"), gens)
    assert comm.is_identity()


def test_trace_matches_engine_on_golden(sl2, golden_gammas):
    fam = build_etas(golden_gammas, Element.identity(sl2))
    gens = make_generators(fam, (-1, 1))
    z = find_z(fam)
    for w in enumerate_reduced(2, 4):
        tr = trace_word(w, gens, fam, z)
        assert isinstance(tr, WordTrace) and tr.ok


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_trace_and_engine_agree_on_random_families(seed):
    """Reference tracer and fast engine give the same failure count and first failure."""
    rng = random.Random(seed)
    mats = []
    for _ in range(2):
        mats.append(Matrix([[rng.choice((0, 0, 1, -1, 2)) + (i == j) for j in range(2)] for i in range(2)]))
    mats = [m if m.det() != 0 else Matrix.identity(2) for m in mats]
    if mats[0] == mats[1]:
        mats[1] = Matrix([[1, 1], [0, 1]])
    fam = EtaFamily.from_matrices(mats)
    z = find_z(fam)
    gens = make_generators(fam, (-1, 1))
    ref = [w for w in enumerate_reduced(2, 4) if isinstance(trace_word(w, gens, fam, z), FailureReport)]
    fast = verify_free_up_to(fam, (-1, 1), 4, z)
    assert fast.failures == len(ref)
    if ref:
        first = trace_word(ref[0], gens, fam, z)
        assert fast.first_failure.word == first.word
        assert fast.first_failure.position == first.position
        assert fast.first_failure.check == first.check


def test_trace_and_engine_agree_sl3():
    spec = GroupSpec.SL(3)
    gammas = [random_torus_conjugate(spec, s)[0] for s in (1, 2)]
    h, cert = search_h(gammas, spec, budget=20, seed=3)
    gens = make_generators(cert.family, (-1, 0, 1))
    for w in enumerate_reduced(2, 3):
        assert trace_word(w, gens, cert.family, cert.z).ok
    assert verify_free_up_to(cert.family, (-1, 0, 1), 3, cert.z).ok


def test_parallel_matches_serial(sl2, golden_gammas):
    fam = build_etas(golden_gammas, Element.identity(sl2))
    a = verify_free_up_to(fam, (-1, 1), 6, jobs=1)
    b = verify_free_up_to(fam, (-1, 1), 6, jobs=3)
    assert a.to_json() == b.to_json()
    neg = negative_family()
    z = ProjPointC((1, 3))
    assert verify_free_up_to(neg, (-1, 1), 4, z, jobs=1).to_json() == \
        verify_free_up_to(neg, (-1, 1), 4, z, jobs=2).to_json()


def test_word_matrix_not_identity(sl2, golden_gammas):
    fam = build_etas(golden_gammas, Element.identity(sl2))
    gens = make_generators(fam, (-1, 1))
    for w in enumerate_reduced(2, 3):
        assert not word_matrix(w, gens).is_identity()


def test_search_h_exhausted():
    spec = GroupSpec.SL(2)
    g1 = Element(spec, Matrix.diagonal([2, Fraction(1, 2)]))
    g2 = Element(spec, Matrix.diagonal([3, Fraction(1, 3)]))
    # h = I leaves both diagonal, so the first candidate always fails
    with pytest.raises(Exhausted) as ei:
        search_h([g1, g2], spec, budget=1, seed=0)
    assert len(ei.value.attempts) == 1
    h, cert = search_h([g1, g2], spec, budget=50, seed=0)
    assert cert.search_attempt > 1
    obj = json.loads(dump_certificate(cert))
    assert recheck(obj).ok
    obj["seed"] = 1
    assert not recheck(obj).ok


def test_recheck_rejects_tampering(sl2, golden_gammas):
    cert = certify(golden_gammas, Element.identity(sl2), (-1, 1), max_len=3)
    obj = json.loads(dump_certificate(cert))
    obj["pairings"][3]["value"] = "5"
    assert not recheck(obj).ok
    obj = json.loads(dump_certificate(cert))
    obj["etas"][1][0][0] = "3"
    assert not recheck(obj).ok
    obj = json.loads(dump_certificate(cert))
    obj["verification"]["words"] += 1
    assert not recheck(obj).ok
    assert not recheck({"schema": "other"}).ok


def test_recheck_checks_search_provenance():
    spec = GroupSpec.SO(2)
    rng = random.Random(5)
    gammas = [random_torus_conjugate(spec, rng)[0] for _ in range(2)]
    _, cert = search_h(gammas, spec, budget=50, seed=9)
    obj = json.loads(dump_certificate(cert))
    assert recheck(obj).ok
    obj["search_attempt"] = cert.search_attempt + 1
    assert not recheck(obj).ok


def test_determinism_modulo_metadata(sl2, golden_gammas):
    a = json.loads(dump_certificate(certify(golden_gammas, Element.identity(sl2), (-1, 1), 4, seed=1)))
    b = json.loads(dump_certificate(certify(golden_gammas, Element.identity(sl2), (-1, 1), 4, seed=1)))
    assert strip_metadata(a) == strip_metadata(b)
    assert dump_certificate(certify(golden_gammas, Element.identity(sl2), (-1, 1), 4, seed=1), "x") == \
        dump_certificate(certify(golden_gammas, Element.identity(sl2), (-1, 1), 4, seed=1), "x")
