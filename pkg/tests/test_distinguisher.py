"""Pairwise verdicts, certificates and non-R-covered witnesses."""

import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from plugflow import distinguisher as dist
from plugflow.handedness import old_handedness


# -- hypothesis record ---------------------------------------------------------------

def test_hypothesis_requires_order():
    with pytest.raises(ValueError):
        dist.EquivalenceHypothesis(2, 1, "preserving")
    with pytest.raises(ValueError):
        dist.EquivalenceHypothesis(1, 2, "sideways")


# -- action cases ---------------------------------------------------------------------

def test_h_action_lists_both_cases():
    for i in (1, 2, 3):
        cases = dist.h_action_cases(i, 1, 2, 2, 7)
        assert [c.case for c in cases] == [1, 2, 2]
        assert {c.edge_type for c in cases if c.case == 2} == {"u", "s"}


def test_h_action_case2_gated_by_classification():
    cases = dist.h_action_cases(1, 1, 2, 2, 7)
    for c in cases:
        if c.case == 2:
            assert c.feasible
            assert f"C_i^{c.edge_type}" in c.gate


def test_h_action_case2_never_swaps_edge_types():
    cases = dist.h_action_cases(2, 1, 2, 2, 7)
    for c in cases:
        if c.case == 2 and c.feasible:
            assert c.gate.endswith(f"C_i^{c.edge_type}")


# -- hoTEB outcomes ----------------------------------------------------------------------

def test_hoteb_preserving_always_unique_old():
    hyp = dist.EquivalenceHypothesis(1, 2, "preserving")
    for i in range(1, 9):
        assert dist.hoTEB_outcome(i, hyp, 7, 2) == dist.MAPS_TO_UNIQUE_OLD


def test_hoteb_reversing_inside_range():
    hyp = dist.EquivalenceHypothesis(1, 3, "reversing")
    # crossing index of torus 3 is 2, inside (1, 3]
    assert dist.hoTEB_outcome(3, hyp, 7, 2) == dist.MAPS_TO_UNIQUE_OLD


def test_hoteb_reversing_outside_range_forces_extension():
    hyp = dist.EquivalenceHypothesis(1, 2, "reversing")
    assert dist.hoTEB_outcome(1, hyp, 7, 1) == dist.FORCES_EVEN_EXTENSION


def test_hoteb_endpoint_tori_force_extensions():
    # the tori used by the main argument always land in the extension case
    for n in (1, 2, 3):
        for m1, m2 in itertools.combinations(range(1, 2 * n), 2):
            hyp = dist.EquivalenceHypothesis(m1, m2, "reversing")
            assert dist.hoTEB_outcome(1, hyp, 7, n) == dist.FORCES_EVEN_EXTENSION
            assert dist.hoTEB_outcome(4 * n - 1, hyp, 7, n) \
                == dist.FORCES_EVEN_EXTENSION


def test_hoteb_range_error():
    hyp = dist.EquivalenceHypothesis(1, 2, "preserving")
    with pytest.raises(ValueError):
        dist.hoTEB_outcome(9, hyp, 7, 2)


# -- distinguish ---------------------------------------------------------------------------

def test_distinguish_example_pair():
    v = dist.distinguish(1, 2, 2, 7)
    assert v.tag == dist.INEQUIVALENT
    preserving = next(b for b in v.branches if b.orientation == "preserving")
    assert preserving.witness_torus in (3, 4)
    reversing = next(b for b in v.branches if b.orientation == "reversing")
    assert reversing.table_cells["handedness"] == {"1": "L", "7": "R"}


def test_distinguish_outside_proven_range():
    v = dist.distinguish(0, 1, 1, 7)
    assert v.tag == dist.INCONCLUSIVE
    assert v.reason == "outside proven range"
    assert dist.distinguish(1, 4, 2, 7).tag == dist.INCONCLUSIVE


def test_distinguish_rejects_equal_indices():
    with pytest.raises(ValueError):
        dist.distinguish(1, 1, 2, 7)


def test_distinguish_symmetric():
    a = dist.distinguish(1, 3, 3, 7)
    b = dist.distinguish(3, 1, 3, 7)
    assert a.tag == b.tag == dist.INEQUIVALENT


def test_all_pairs_n3_both_signs():
    for k in (7, -7):
        for m1, m2 in itertools.combinations(range(1, 6), 2):
            v = dist.distinguish(m1, m2, 3, k)
            assert v.tag == dist.INEQUIVALENT, (m1, m2, k)
            assert dist.verify_certificate(v)


def test_verdicts_depend_only_on_sign_of_k():
    for m1, m2 in [(1, 2), (2, 3)]:
        tags = {k: dist.distinguish(m1, m2, 2, k).tag
                for k in (1, 7, 100, -1, -7, -100)}
        assert set(tags.values()) == {dist.INEQUIVALENT}
        witnesses = {k: dist.distinguish(m1, m2, 2, k).branches[1].witness_torus
                     for k in (1, 7, 100)}
        assert len(set(witnesses.values())) == 1


def test_preserving_witness_is_least_flip():
    v = dist.distinguish(1, 3, 2, 7)
    b = next(br for br in v.branches if br.orientation == "preserving")
    flips = [i for i in range(2 * 1 + 1, 2 * 3 + 1)
             if old_handedness(i, 1, 2) != old_handedness(i, 3, 2)]
    assert b.witness_torus == min(flips)


def test_certificate_json_schema():
    v = dist.distinguish(1, 2, 2, 7)
    doc = json.loads(dist.certificate_to_json(v))
    assert doc["pair"] == [1, 2]
    assert doc["verdict"] == "Inequivalent"
    assert {b["orientation"] for b in doc["branches"]} \
        == {"preserving", "reversing"}
    for b in doc["branches"]:
        assert set(b) == {"orientation", "witness_torus", "lemma", "table_cells"}


def test_tampered_certificate_fails_verification():
    v = dist.distinguish(1, 2, 2, 7)
    bad_branches = tuple(
        dist.BranchCertificate(b.orientation, 2, b.lemma, b.table_cells)
        if b.orientation == "preserving" else b
        for b in v.branches)
    tampered = dist.DistinguishVerdict(v.tag, v.m1, v.m2, v.n, v.k, bad_branches)
    assert not dist.verify_certificate(tampered)


# -- non-R-covered certificates ------------------------------------------------------------

def test_non_r_covered_counts():
    cert = dist.non_r_covered_certificate(0, 1)
    torus1 = cert["punctured_tori"][0]
    assert torus1["torus"] == 1
    assert len(torus1["surviving_reeb_annuli"]) == 3


def test_non_r_covered_distinct_boundary_orbits():
    cert = dist.non_r_covered_certificate(1, 2)
    for torus in cert["punctured_tori"]:
        for ann in torus["surviving_reeb_annuli"]:
            a, b = ann["boundary_orbits"]
            assert a != b


@given(st.integers(1, 4), st.data())
@settings(max_examples=20, deadline=None)
def test_non_r_covered_all_m(n, data):
    m = data.draw(st.integers(0, 2 * n))
    cert = dist.non_r_covered_certificate(m, n)
    assert len(cert["punctured_tori"]) == 4 * n
    for entry in cert["punctured_tori"]:
        i = entry["torus"]
        assert len(entry["surviving_reeb_annuli"]) == 2 * i + 1
        assert entry["reeb_witness"]["boundary_orbits"][0] \
            != entry["reeb_witness"]["boundary_orbits"][1]


def test_non_r_covered_range():
    with pytest.raises(ValueError):
        dist.non_r_covered_certificate(3, 1)
