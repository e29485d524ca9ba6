from fractions import Fraction

import pytest
import sympy
from hypothesis import given

from plainchart.geometry import (
    AffinePatch,
    CenterError,
    CenterSpec,
    MapError,
    PatchError,
    RationalMap,
    compose,
    determinant,
    find_sample_point,
    identity_map,
    jacobian,
    lands_in_target,
    map_equal_on_patch,
    minors,
    pullback_ideal,
    smoothness_check,
    substitute_fraction,
    validate_center,
)
from plainchart.grobner import Ideal, ideal_equality

from conftest import P, R, points, polynomials, to_sympy, from_sympy

XYZ = R("x", "y", "z")
UVW = R("u", "v", "w")


def circle_patches():
    src = AffinePatch.make(XYZ, [P(XYZ, "y+1")],
                           [P(XYZ, "x^2+y^2-1"), P(XYZ, "z")], sample=(1, 0, 0))
    tgt = AffinePatch.make(UVW, [P(UVW, "u^2-v+1")], [P(UVW, "v"), P(UVW, "w")],
                           sample=(1, 0, 0))
    fwd = RationalMap.make(src, tgt, [(P(XYZ, "x"), P(XYZ, "y+1")),
                                      (P(XYZ, "x^2+y^2-1"), P(XYZ, "y+1")), P(XYZ, "z")])
    inv = RationalMap.make(tgt, src, [(P(UVW, "2*u"), P(UVW, "u^2-v+1")),
                                      (P(UVW, "-u^2+v+1"), P(UVW, "u^2-v+1")), P(UVW, "w")])
    return src, tgt, fwd, inv


# -- patches ------------------------------------------------------------------------------


def test_sample_prefers_origin_and_is_seeded():
    assert find_sample_point(XYZ, [P(XYZ, "x+1")]) == (0, 0, 0)
    a = find_sample_point(XYZ, [P(XYZ, "x")], seed=3)
    assert a == find_sample_point(XYZ, [P(XYZ, "x")], seed=3)
    assert a[0] != 0
    assert all(abs(c) <= 10 and c.denominator <= 8 for c in a)


def test_patch_construction():
    x = P(XYZ, "x")
    patch = AffinePatch.make(XYZ, [x, 2 * x, XYZ.const(5)])
    assert patch.inequalities == (x,)
    assert patch.contains(patch.sample)
    with pytest.raises(PatchError):
        AffinePatch.make(XYZ, [XYZ.zero])
    with pytest.raises(PatchError):
        AffinePatch.make(XYZ, [x], sample=(0, 0, 0))
    with pytest.raises(PatchError):
        AffinePatch.make(XYZ, [], [x - 1, x], sample=None)
    assert AffinePatch.make(XYZ).is_affine_space()


def test_restrict_keeps_sample_when_possible():
    patch = AffinePatch.make(XYZ, [P(XYZ, "x-1")])
    smaller = patch.restrict(P(XYZ, "y-1"))
    assert smaller.sample == patch.sample
    moved = patch.restrict(P(XYZ, "x"))
    assert moved.contains(moved.sample)


# -- rational maps -------------------------------------------------------------------------


def test_identity_map_equal_to_itself():
    patch = AffinePatch.make(XYZ, [P(XYZ, "x*y+1")])
    ident = identity_map(patch)
    assert map_equal_on_patch(compose(ident, ident), ident)
    assert lands_in_target(ident)


def test_circle_maps_are_inverse():
    src, tgt, fwd, inv = circle_patches()
    assert fwd((1, 0, 0)) == (1, 0, 0)
    assert lands_in_target(fwd) and lands_in_target(inv)
    assert map_equal_on_patch(compose(inv, fwd), identity_map(src))
    assert map_equal_on_patch(compose(fwd, inv), identity_map(tgt))


def test_circle_maps_are_not_inverse_off_the_circle():
    _, _, fwd, inv = circle_patches()
    plain = AffinePatch.make(XYZ, [P(XYZ, "y+1")], sample=(1, 0, 0))
    fwd_plain = RationalMap.make(plain, AffinePatch.make(UVW, [P(UVW, "u^2-v+1")], sample=(1, 0, 0)),
                                 fwd.components)
    inv_plain = RationalMap.make(fwd_plain.target, plain, inv.components, check=False)
    with pytest.raises(MapError):
        compose(inv_plain, fwd_plain)


def test_surface_chart():
    src = AffinePatch.make(R("u", "v"), [P(R("u", "v"), "u^2*v^2+1")])
    uv = src.ring
    tgt = AffinePatch.make(XYZ, [P(XYZ, "1-x*y")], [P(XYZ, "x-(x^2+z^2)*y")])
    fwd = RationalMap.make(src, tgt, [(P(uv, "u^2*v"), P(uv, "u^2*v^2+1")), P(uv, "v"),
                                      (P(uv, "u"), P(uv, "u^2*v^2+1"))])
    inv = RationalMap.make(tgt, src, [(P(XYZ, "z"), P(XYZ, "1-x*y")), P(XYZ, "y")])
    assert lands_in_target(fwd) and lands_in_target(inv)
    assert map_equal_on_patch(compose(inv, fwd), identity_map(src))
    assert map_equal_on_patch(compose(fwd, inv), identity_map(tgt))


def test_map_checks_denominators_and_sample():
    plane = AffinePatch.make(XYZ)
    with pytest.raises(MapError):
        RationalMap.make(plane, plane, [(P(XYZ, "1"), P(XYZ, "x")), P(XYZ, "y"), P(XYZ, "z")])
    line = AffinePatch.make(XYZ, [P(XYZ, "x-1")])
    with pytest.raises(MapError):
        RationalMap.make(plane, line, [P(XYZ, "1"), P(XYZ, "y"), P(XYZ, "z")])
    with pytest.raises(MapError):
        RationalMap.make(plane, plane, [P(XYZ, "x")])


def test_map_inequality_detected():
    plane = AffinePatch.make(XYZ)
    a = RationalMap.make(plane, plane, [P(XYZ, "x"), P(XYZ, "y"), P(XYZ, "z")])
    b = RationalMap.make(plane, plane, [P(XYZ, "x"), P(XYZ, "y+x^2"), P(XYZ, "z")])
    assert not map_equal_on_patch(a, b)


@given(polynomials(XYZ, max_terms=3, max_deg=2), polynomials(XYZ, max_terms=3, max_deg=2),
       points(XYZ))
def test_substitute_fraction_evaluates(f, n, pt):
    d = P(XYZ, "x^2+1")
    comps = [(n, d), (P(XYZ, "y"), XYZ.one), (P(XYZ, "z"), d)]
    num, den = substitute_fraction(f, comps, XYZ)
    x, y, z = pt
    dv = x * x + 1
    inner = (n(*pt) / dv, y, z / dv)
    assert num(*pt) / den(*pt) == f(*inner)


def test_pullback_ideal_of_blowup_chart():
    plane = AffinePatch.make(R("x", "y"))
    chart = AffinePatch.make(R("x", "s"))
    xs = chart.ring
    m = RationalMap.make(chart, plane, [P(xs, "x"), P(xs, "x*s")])
    pulled = pullback_ideal(m, Ideal(plane.ring, [P(plane.ring, "x"), P(plane.ring, "y")]))
    assert ideal_equality(pulled, Ideal(xs, [P(xs, "x")]))


# -- Jacobians ------------------------------------------------------------------------------


def test_determinant_matches_sympy():
    entries = [[P(XYZ, "x"), P(XYZ, "y^2"), P(XYZ, "1")],
               [P(XYZ, "z"), P(XYZ, "x+y"), P(XYZ, "2")],
               [P(XYZ, "x*z"), P(XYZ, "0"), P(XYZ, "y")]]
    expected = sympy.Matrix([[to_sympy(e) for e in row] for row in entries]).det()
    assert determinant(entries) == from_sympy(expected, XYZ)


def test_jacobian_and_minors():
    I = Ideal(XYZ, [P(XYZ, "x^2+y^2-1"), P(XYZ, "z")])
    J = jacobian(I)
    assert J[0] == [P(XYZ, "2*x"), P(XYZ, "2*y"), XYZ.zero]
    assert set(minors(J, 2)) == {P(XYZ, "2*x"), P(XYZ, "2*y")}


def test_smoothness():
    plane = AffinePatch.make(XYZ)
    assert smoothness_check(Ideal(XYZ, [P(XYZ, "x^2+y^2-1"), P(XYZ, "z")]), 2, plane)
    assert smoothness_check(Ideal(XYZ, [P(XYZ, "x-(x^2+z^2)*y")]), 1, plane)
    assert not smoothness_check(Ideal(XYZ, [P(XYZ, "x^2-y^3")]), 1, plane)
    # the cusp is smooth away from the origin
    away = AffinePatch.make(XYZ, [P(XYZ, "x")])
    assert smoothness_check(Ideal(XYZ, [P(XYZ, "x^2-y^3")]), 1, away)


# -- centers -------------------------------------------------------------------------------


def elliptic(**kw):
    args = dict(ambient=AffinePatch.make(XYZ), subvariety=("z",), f=P(XYZ, "x-x^3+y^2"),
                point=(0, 0, 0))
    args.update(kw)
    return CenterSpec(**args)


def test_validate_center_defaults_shift():
    c = validate_center(elliptic())
    assert c.shift_var == "x"
    assert c.point == (Fraction(0),) * 3


@pytest.mark.parametrize("kw, invariant", [
    (dict(subvariety=("q",)), "subvariety"),
    (dict(f=P(XYZ, "x+z")), "f-variables"),
    (dict(point=(2, 0, 0)), "f(p)=0"),
    (dict(point=(0, 0, 1)), "point-on-F"),
    (dict(f=P(XYZ, "x^2-y^3")), "smooth-at-p"),
    (dict(shift_var="y"), "shift-partial"),
    (dict(shift_var="z"), "shift-var"),
    (dict(ambient=AffinePatch.make(XYZ, [P(XYZ, "y+x")])), "point-in-ambient"),
])
def test_validate_center_errors(kw, invariant):
    with pytest.raises(CenterError) as info:
        validate_center(elliptic(**kw))
    assert info.value.invariant == invariant


def test_center_error_suggests_shift():
    with pytest.raises(CenterError) as info:
        validate_center(elliptic(shift_var="y"))
    assert tuple(info.value.suggestions) == ("x",)
