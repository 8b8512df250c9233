from __future__ import annotations

import pytest

from pingpong.errors import InvalidWitness
from pingpong.exact import Matrix
from pingpong.groups import Element, GroupSpec, random_torus_conjugate
from pingpong.repspan import (RankExperiment, diagonal_pairing, diagonal_pairing_search,
                              scalar_plus_skew_exclusion, span_rank)


@pytest.mark.parametrize("spec,cov,target", [
    (GroupSpec.SL(2), "vstar", 4),
    (GroupSpec.SL(3), "wstar", 8),
    (GroupSpec.SO(2), "wstar", 14),
])
def test_rank_targets(spec, cov, target):
    rep = span_rank(RankExperiment(spec, seed=42, covector=cov))
    assert rep.target == target
    assert rep.achieved == target
    assert rep.ok


def test_rank_report_deterministic():
    a = span_rank(RankExperiment(GroupSpec.SL(3), seed=1)).to_json()
    b = span_rank(RankExperiment(GroupSpec.SL(3), seed=1)).to_json()
    assert a == b
    assert a["samples"] == 14


def test_too_few_samples_misses_target():
    rep = span_rank(RankExperiment(GroupSpec.SL(3), samples=3, seed=0))
    assert rep.achieved <= 3 and not rep.ok


def test_diagonal_pairing_search():
    spec = GroupSpec.SO(2)
    g, _, _ = random_torus_conjugate(spec, 4)
    res = diagonal_pairing_search(spec, g, budget=50, seed=0)
    assert res.value != 0
    assert diagonal_pairing(spec, g, res.h, spec.basis_vector(0)) == res.value
    with pytest.raises(ValueError):
        diagonal_pairing_search(spec, Element.identity(spec))
    with pytest.raises(ValueError):
        diagonal_pairing_search(GroupSpec.SL(2), Element.identity(GroupSpec.SL(2)))


def test_exclusion_and_witness():
    spec = GroupSpec.SO(2)
    g, u, d = random_torus_conjugate(spec, 9)
    assert scalar_plus_skew_exclusion(spec, g, (u, d))
    ident = Element.identity(spec)
    assert scalar_plus_skew_exclusion(spec, ident, (ident, ident))
    with pytest.raises(InvalidWitness):
        scalar_plus_skew_exclusion(spec, g, (ident, d))
    with pytest.raises(InvalidWitness):
        scalar_plus_skew_exclusion(spec, g, (u, Element(spec, Matrix.identity(5) + Matrix.unit(5, 0, 4))))
