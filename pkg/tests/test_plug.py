"""Plug model: counts, the involution, genus bookkeeping, boundary frames."""

import pytest
from hypothesis import given, strategies as st

from plugflow import plug


def test_build_plug_rejects_zero():
    with pytest.raises(ValueError):
        plug.build_plug(0)


def test_torus_and_annulus_counts_n1():
    spec = plug.build_plug(1)
    assert len(spec.tori) == 8
    assert len(spec.torus(1, "in").annuli) == 4


def test_entrance_component_table():
    spec = plug.build_plug(1)
    assert spec.torus(1, "in").component == "-"
    assert spec.torus(2, "in").component == "+"
    assert spec.torus(1, "out").component == "+"
    assert spec.torus(2, "out").component == "-"


def test_counts_n2():
    spec = plug.build_plug(2)
    assert len(spec.tori) == 16
    assert len(spec.torus(8, "in").annuli) == 18


def test_orbit_counts_per_component():
    spec = plug.build_plug(1)
    per_sign = sum(2 * i + 2 for i in range(1, 5))
    assert len(spec.orbits) == 2 * per_sign


def test_every_torus_covered_exactly_once():
    spec = plug.build_plug(2)
    seen = [(t.i, t.component) for t in spec.tori.values()]
    assert len(seen) == len(set(seen)) == 16


# -- sigma ---------------------------------------------------------------------

def test_sigma_swaps_sides():
    spec = plug.build_plug(1)
    assert plug.sigma(spec, spec.torus(1, "in")).side == "out"


def test_sigma_on_torus_3():
    spec = plug.build_plug(1)
    image = plug.sigma(spec, spec.torus(3, "in"))
    assert (image.i, image.side) == (3, "out")


def test_sigma_annulus_swaps_foliation_preserves_indices():
    a = plug.LaminationAnnulus(2, 1, "s")
    assert plug.sigma_annulus(a) == plug.LaminationAnnulus(2, 1, "u")
    assert plug.sigma_annulus(plug.sigma_annulus(a)) == a


def test_sigma_orbit_swaps_sign():
    spec = plug.build_plug(1)
    o = spec.orbit(1, 2, "+")
    assert plug.sigma(spec, o).sign == "-"
    assert plug.sigma(spec, plug.sigma(spec, o)) == o


@given(st.integers(1, 8), st.integers(0, 30), st.sampled_from(["+", "-"]))
def test_sigma_orbit_involution_and_kind_swap(i, j, sign):
    spec_orbit = plug.BoundaryOrbit(i, j % (2 * i + 2), sign,
                                    plug._orbit_kind(i, sign))
    other = plug.sigma_orbit(spec_orbit)
    assert plug.sigma_orbit(other) == spec_orbit
    assert other.kind != spec_orbit.kind


def test_annuli_chain_shares_compact_leaves():
    spec = plug.build_plug(1)
    annuli = spec.torus(1, "in").annuli
    for a, b in zip(annuli, annuli[1:] + annuli[:1]):
        assert a.boundary_leaves()[1] == b.boundary_leaves()[0]


# -- genus ------------------------------------------------------------------------

def test_genus_small_values():
    assert plug.genus_of_surface(1) == 6
    assert plug.genus_of_surface(2) == 19


def test_genus_n3_against_literal_sum():
    total = 0
    for i in range(1, 13):
        total += 2 - (2 * i + 2)
    assert 4 - 4 * plug.genus_of_surface(3) == total
    assert plug.genus_of_surface(3) == 40


@given(st.integers(1, 50))
def test_genus_satisfies_index_relation(n):
    total = sum(2 - (2 * i + 2) for i in range(1, 4 * n + 1))
    assert 4 - 4 * plug.genus_of_surface(n) == total


# -- frames -------------------------------------------------------------------------

def test_frame_sign_table():
    assert plug.frame_sign(2, "s", "expanding") == 1
    assert plug.frame_sign(1, "u", "contracting") == 1
    assert plug.frame_sign(2, "s", "contracting") == -1


@given(st.integers(1, 16), st.sampled_from(["contracting", "expanding"]))
def test_frame_sign_independent_of_foliation(i, choice):
    assert plug.frame_sign(i, "s", choice) == plug.frame_sign(i, "u", choice)


def test_contracting_orientation_rule():
    assert plug.contracting_equals_dynamical("u")
    assert not plug.contracting_equals_dynamical("s")


@given(st.integers(1, 12), st.sampled_from(["s", "u"]),
       st.sampled_from(["contracting", "expanding"]))
def test_frame_record_sign_matches_function(i, fol, choice):
    frame = plug.FrameAtCompactLeaf(i, fol, choice)
    assert frame.sign == plug.frame_sign(i, fol, choice)
    assert frame.sign in (-1, 1)


# -- serialization ---------------------------------------------------------------------

def test_json_round_trip():
    spec = plug.build_plug(2)
    text = plug.plug_to_json(spec)
    back = plug.plug_from_json(text)
    assert back == spec
    assert plug.plug_to_json(back) == text
