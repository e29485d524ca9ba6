"""Boundary inputs and a few extra algebraic properties across modules."""

import dataclasses
import random
from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from plainchart.blowup import plain_blowup_atlas, rees_charts, verify_atlas
from plainchart.geometry import (
    AffinePatch,
    CenterSpec,
    RationalMap,
    compose,
    identity_map,
    map_equal_on_patch,
    pullback_ideal,
    smoothness_check,
)
from plainchart.grobner import (
    GREVLEX,
    Ideal,
    buchberger_reduced,
    elimination_ideal,
    ideal_membership,
    is_unit_on_patch,
    normal_form,
    ring_map_kernel,
)
from plainchart.polycore import evaluate
from plainchart.projection import (
    LinearProjection,
    hypersurface_model,
    implicitize,
    verify_local_iso,
)

from conftest import P, R, from_sympy, polynomials, to_sympy

XYZ = R("x", "y", "z")
XY = R("x", "y")


# -- ideals -----------------------------------------------------------------------------


def test_trivial_memberships():
    I = Ideal(XY, [P(XY, "x"), P(XY, "y")])
    assert not ideal_membership(XY.one, I)
    assert normal_form(XY.one, buchberger_reduced(Ideal(XY, [P(XY, "x")]), GREVLEX)) == XY.one


@given(polynomials(XYZ, max_terms=3, max_deg=2), polynomials(XYZ, max_terms=3, max_deg=2))
def test_membership_stable_under_generator_shift(a, b):
    f1, f2 = P(XYZ, "x*y-z"), P(XYZ, "y^2-x")
    shifted = Ideal(XYZ, [f1, f2 + b * f1])
    assert ideal_membership(a * f1 + b * f2, shifted)


def test_eliminating_nothing_keeps_the_basis():
    I = Ideal(XYZ, [P(XYZ, "y-x^2"), P(XYZ, "z-x^3")])
    assert elimination_ideal(I, []) == Ideal(XYZ, buchberger_reduced(I, GREVLEX).basis)


def test_single_image_kernel_is_zero():
    Rt = R("x", "t")
    assert ring_map_kernel(["y"], [P(Rt, "x*t")], "t").is_zero()


def test_two_image_kernel_matches_resultant():
    Rt = R("x", "t")
    K = ring_map_kernel(["a", "b"], [P(Rt, "x*t"), P(Rt, "(x^2+1)*t")], "t")
    a, b, t, x = sympy.symbols("a b t x")
    res = sympy.resultant(a - x * t, b - (x**2 + 1) * t, t)
    KR = K.ring
    expected = from_sympy(sympy.expand(res), KR)
    assert ideal_membership(expected, K)
    assert all(ideal_membership(g, Ideal(KR, [expected])) for g in K.generators)


# -- units and smoothness ---------------------------------------------------------------

PATCH = AffinePatch.make(XYZ, [P(XYZ, "x+1"), P(XYZ, "y-2")])
unit_candidates = st.sampled_from(
    ["x+1", "y-2", "(x+1)^2*(y-2)", "3", "x", "y+z", "x*y-1", "z"])


@given(unit_candidates, unit_candidates)
def test_unit_is_multiplicative(a, b):
    f, g = P(XYZ, a), P(XYZ, b)
    both = is_unit_on_patch(f, PATCH) and is_unit_on_patch(g, PATCH)
    assert is_unit_on_patch(f * g, PATCH) == both


def test_node_is_not_smooth_but_elliptic_is():
    plane = AffinePatch.make(XY)
    assert not smoothness_check(Ideal(XY, [P(XY, "y^2-x^2*(x+1)")]), 1, plane)
    assert smoothness_check(Ideal(XY, [P(XY, "y^2-x^3+x")]), 1, plane)
    chart = AffinePatch.make(XYZ, [P(XYZ, "1-3*x^2-3*x*z-z^2")])
    assert smoothness_check(Ideal(XYZ, [P(XYZ, "z"), P(XYZ, "x-x^3+y^2")]), 2, chart)


def test_smoothness_unchanged_by_unit_factor():
    patch = AffinePatch.make(XY, [P(XY, "x+2")])
    f = P(XY, "y^2-x^2*(x+1)")
    for g in (f, f * P(XY, "x+2"), f * P(XY, "(x+2)^3")):
        assert not smoothness_check(Ideal(XY, [g]), 1, patch)
    h = P(XY, "y-x^2")
    assert smoothness_check(Ideal(XY, [h * P(XY, "x+2")]), 1, patch)


# -- maps -------------------------------------------------------------------------------


def _random_affine(rng, patch):
    # affine substitutions; the caller supplies denominators where wanted
    comps = []
    for v in patch.variables:
        a, b = rng.randint(1, 5), rng.randint(-5, 5)
        comps.append((P(patch.ring, f"{a}*{v}+({b})"), patch.ring.one))
    return comps


def test_compose_is_associative_on_random_fractional_maps():
    rng = random.Random(3)
    A = AffinePatch.make(XY, [P(XY, "x^2+1")])
    for _ in range(20):
        comps = _random_affine(rng, A)
        f = RationalMap.make(A, A, [(n, P(XY, "x^2+1")) for n, _ in comps])
        plane = AffinePatch.make(XY)
        g = RationalMap.make(A, plane, _random_affine(rng, A))
        h = RationalMap.make(plane, plane, _random_affine(rng, plane))
        left = compose(h, compose(g, f))
        right = compose(compose(h, g), f)
        assert map_equal_on_patch(left, right)
        for pt in [(1, 2), (Fraction(1, 3), -1), (0, 0)]:
            assert left(pt) == right(pt)


def test_perturbed_numerator_breaks_equality():
    rng = random.Random(5)
    A = AffinePatch.make(XY, [P(XY, "x^2+1")])
    base = RationalMap.make(A, A, [(P(XY, "x*y"), P(XY, "x^2+1")), P(XY, "y-x")])
    for _ in range(20):
        k = rng.randrange(2)
        bump = P(XY, f"{rng.randint(1, 4)}*{rng.choice(['x', 'y', '1'])}")
        comps = list(base.components)
        comps[k] = (comps[k][0] + bump, comps[k][1])
        assert not map_equal_on_patch(base, RationalMap.make(A, A, comps))


def test_pullback_along_identity_and_composition():
    plane = AffinePatch.make(XY)
    I = Ideal(XY, [P(XY, "x^2-y")])
    assert pullback_ideal(identity_map(plane), I) == I
    f = RationalMap.make(plane, plane, [P(XY, "x+y"), P(XY, "y")])
    g = RationalMap.make(plane, plane, [P(XY, "x"), P(XY, "x*y")])
    twice = pullback_ideal(f, pullback_ideal(g, I))
    once = pullback_ideal(compose(g, f), I)
    assert all(ideal_membership(p, once) for p in twice.generators)
    assert all(ideal_membership(p, twice) for p in once.generators)


# -- blowup edge cases ------------------------------------------------------------------


def test_empty_subvariety_gives_a_single_chart():
    center = CenterSpec(AffinePatch.make(XYZ), (), P(XYZ, "x-x^3+y^2"), (0, 0, 0))
    atlas = plain_blowup_atlas(center)
    assert len(atlas.charts) == 1
    assert verify_atlas(atlas).ok


def test_center_with_f_equal_to_shift_variable():
    center = CenterSpec(AffinePatch.make(XYZ), ("z",), P(XYZ, "x"), (0, 0, 0))
    atlas = plain_blowup_atlas(center)
    assert all(chart.patch.is_affine_space() for chart in atlas.charts)
    assert verify_atlas(atlas).ok


def test_single_generator_rees_chart():
    (chart,) = rees_charts(AffinePatch.make(XY), [P(XY, "x")])
    assert chart.relations.is_zero()


# -- projection -------------------------------------------------------------------------

TWISTED = Ideal(XYZ, [P(XYZ, "y-x^2"), P(XYZ, "z-x^3")])


@settings(max_examples=20)
@given(st.fractions(min_value=-5, max_value=5, max_denominator=6))
def test_implicit_equation_vanishes_on_projected_points(s):
    proj = LinearProjection.of([[1, 1, 0], [0, 1, -2]])
    H = implicitize(TWISTED, proj)
    assert evaluate(H, proj((s, s**2, s**3))) == 0


def test_corrupted_model_denominator_is_rejected():
    proj = LinearProjection.of([[1, 0, 0], [0, 0, 1]])
    model = hypersurface_model(TWISTED, proj, (0, 0, 0))
    U = model.inverse.source.ring
    comps = list(model.inverse.components)
    comps[1] = (comps[1][0], P(U, "2"))
    bad = RationalMap.make(model.inverse.source, model.inverse.target, comps, check=False)
    assert not verify_local_iso(TWISTED, proj, dataclasses.replace(model, inverse=bad))


def test_to_sympy_helper_is_exact():
    f = P(XYZ, "1/3*x^2 - y")
    assert from_sympy(to_sympy(f), XYZ) == f
