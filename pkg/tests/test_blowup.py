import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from plainchart.blowup import (
    overlap_unit_certificate,
    plain_blowup_atlas,
    polynomial_ring_certificate,
    rees_charts,
    rees_plain_correspondence,
    shifted_generators,
    transition_map,
    transitions_inverse,
    verify_atlas,
)
from plainchart.geometry import AffinePatch, CenterSpec
from plainchart.grobner import Ideal, ideal_equality
from plainchart.polycore import evaluate, exact_divide, substitute
from plainchart.sampling import random_center

from conftest import P, R

XYZ = R("x", "y", "z")
CHECKS = ["shifted_generators", "center_generators", "structure_maps",
          "exceptional_principal", "transitions_inverse", "proof_identities"]


def elliptic_center():
    return CenterSpec(AffinePatch.make(XYZ), ("z",), P(XYZ, "x-x^3+y^2"), (0, 0, 0), "x")


@pytest.fixture(scope="module")
def atlas():
    return plain_blowup_atlas(elliptic_center(), [["s"], ["t"]], "w")


def test_shifted_generators():
    sg = shifted_generators(elliptic_center())
    assert sg.f_list == (P(XYZ, "x+z-(x+z)^3+y^2"),)
    assert sg.g_list == (P(XYZ, "1-3*x^2-3*x*z-z^2"),)
    assert sg.h_list == (P(XYZ, "-3*x*z-z^2"),)
    assert sg.neighborhood.inequalities == (P(XYZ, "1-3*x^2-3*x*z-z^2"),)


def test_elliptic_chart_coordinates(atlas):
    assert [ch.ring.variables for ch in atlas.charts] == [("x", "y", "s"), ("w", "y", "t")]
    xys, wyt = atlas.charts[0].ring, atlas.charts[1].ring
    assert atlas.charts[0].patch.inequalities == (
        P(xys, "1-3*x^2-3*x*s*(x-x^3+y^2)-s^2*(x-x^3+y^2)^2"),)
    assert atlas.charts[1].patch.inequalities == (
        P(wyt, "1-3*w^2+3*w*t*(w-w^3+y^2)-t^2*(w-w^3+y^2)^2"),)
    assert atlas.charts[0].exceptional == P(xys, "x-x^3+y^2")
    assert atlas.charts[1].exceptional == P(wyt, "w-w^3+y^2")


def test_elliptic_overlaps_and_transition(atlas):
    xys, wyt = atlas.charts[0].ring, atlas.charts[1].ring
    rho01 = P(xys, "1+s-3*x^2*s-3*x*s^2*(x-x^3+y^2)-s^3*(x-x^3+y^2)^2")
    rho10 = P(wyt, "1-t+3*w^2*t-3*w*t^2*(w-w^3+y^2)+t^3*(w-w^3+y^2)^2")
    assert atlas.overlap(0, 1).inequalities[-1] == rho01
    assert atlas.overlap(1, 0).inequalities[-1] == rho10
    m = transition_map(atlas, 0, 1)
    assert m.components == (
        (P(xys, "x+x*s-x^3*s+y^2*s"), xys.one),
        (P(xys, "y"), xys.one),
        (P(xys, "s"), rho01),
    )
    assert transition_map(atlas, 1, 1).components[0] == (wyt.var("w"), wyt.one)


def test_elliptic_structure_maps(atlas):
    xys, wyt = atlas.charts[0].ring, atlas.charts[1].ring
    assert atlas.charts[0].structure_map.components == (
        (P(xys, "x"), xys.one), (P(xys, "y"), xys.one), (P(xys, "s*(x-x^3+y^2)"), xys.one))
    # chart 1: z = t*f_1, x = w - z
    z = P(wyt, "t*(w-w^3+y^2)")
    assert atlas.charts[1].structure_map.components[0][0] == wyt.var("w") - z
    assert atlas.charts[1].structure_map.components[2][0] == z


def test_verify_atlas_passes(atlas):
    report = verify_atlas(atlas)
    assert [c.name for c in report.checks] == CHECKS
    assert report.ok, report.as_dict()


def test_ratio_is_unit_only_on_overlap(atlas):
    assert overlap_unit_certificate(atlas, 0, 1)
    assert overlap_unit_certificate(atlas, 1, 0)
    from plainchart.grobner import is_unit_on_patch
    assert not is_unit_on_patch(atlas.ratios[(0, 1)], atlas.charts[0].patch)


def test_shifted_generator_pulls_back_to_multiple_of_f(atlas):
    ch = atlas.charts[0]
    assign = dict(zip(XYZ.variables, (n for n, _ in ch.structure_map.components)))
    f1 = substitute(atlas.generators.f_list[0], assign, ch.ring)
    assert exact_divide(f1, ch.exceptional) == atlas.ratios[(0, 1)]


@pytest.mark.parametrize("k", range(3))
def test_numerator_mutation_breaks_only_transitions(atlas, k):
    m = atlas.transitions[(0, 1)]
    comps = list(m.components)
    n, d = comps[k]
    comps[k] = (n + m.source.ring.var("y") ** 2, d)
    broken = dataclasses.replace(m, components=tuple(comps))
    bad = dataclasses.replace(atlas, transitions={**atlas.transitions, (0, 1): broken})
    report = verify_atlas(bad)
    assert not report.get("transitions_inverse").passed
    assert all(c.passed for c in report.checks if c.name != "transitions_inverse")
    assert not transitions_inverse(bad, 0, 1)


def test_rejects_bad_center():
    from plainchart.geometry import CenterError
    with pytest.raises(CenterError):
        plain_blowup_atlas(CenterSpec(AffinePatch.make(XYZ), ("z",), P(XYZ, "x^2-y^3"), (0, 0, 0)))


def test_codimension_two_center():
    ring = R("a", "b", "c", "d")
    c = CenterSpec(AffinePatch.make(ring), ("c", "d"), P(ring, "a+b^2"), (0, 0, 0, 0), "a")
    atlas = plain_blowup_atlas(c)
    assert len(atlas.charts) == 3
    assert len(atlas.transitions) == 6
    assert atlas.charts[0].fractions == ("t_1", "t_2")
    assert verify_atlas(atlas).ok


def test_point_away_from_origin():
    c = CenterSpec(AffinePatch.make(XYZ), ("z",), P(XYZ, "x^2+y^2-1"), (1, 0, 0), "x")
    atlas = plain_blowup_atlas(c)
    assert atlas.charts[0].patch.sample == (1, 0, 0)
    assert verify_atlas(atlas).ok


@settings(max_examples=12)
@given(st.integers(0, 10_000))
def test_random_centers_satisfy_the_theorem(seed):
    c = random_center(seed, max_vars=3, max_deg=2)
    atlas = plain_blowup_atlas(c)
    report = verify_atlas(atlas)
    assert report.ok, (seed, report.as_dict())
    sg = atlas.generators
    for xi, fi, gi, hi in zip(c.subvariety, sg.f_list, sg.g_list, sg.h_list):
        assert fi == c.f + c.ring.var(xi) * gi
        assert evaluate(hi, c.point) == 0


# -- Rees charts ----------------------------------------------------------------------


def test_rees_plane_origin():
    xy = R("x", "y")
    charts = rees_charts(AffinePatch.make(xy), [P(xy, "x"), P(xy, "y")])
    assert [rc.patch.ring.variables for rc in charts] == [("x", "y", "x_2"), ("x", "y", "x_1")]
    r1, r2 = charts[0].patch.ring, charts[1].patch.ring
    assert ideal_equality(charts[0].relations, Ideal(r1, [P(r1, "x*x_2-y")]))
    assert ideal_equality(charts[1].relations, Ideal(r2, [P(r2, "y*x_1-x")]))
    assert polynomial_ring_certificate(charts[0].relations) == ("x", "x_2")
    assert polynomial_ring_certificate(charts[1].relations) == ("y", "x_1")


def test_rees_charts_reject_relations():
    xy = R("x", "y")
    curve = AffinePatch.make(xy, [], [P(xy, "y-x^2")])
    with pytest.raises(ValueError):
        rees_charts(curve, [P(xy, "x")])


def test_non_polynomial_chart_has_no_certificate():
    ring = R("x", "y")
    assert polynomial_ring_certificate(Ideal(ring, [P(ring, "x^2-y^3")])) is None
    assert polynomial_ring_certificate(Ideal(ring)) == ("x", "y")


def test_rees_plain_consistency(atlas):
    rees = rees_charts(atlas.base, atlas.generators.center_generators)
    corr = rees_plain_correspondence(atlas, rees)
    assert [c.equal for c in corr] == [True, True]
    for c, rc in zip(corr, rees):
        assert set(c.assignment) == set(rc.patch.ring.variables)
