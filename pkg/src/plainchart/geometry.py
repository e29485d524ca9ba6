"""Principal open patches, rational maps between them, and smoothness checks."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .grobner import (
    Ideal,
    contains_one,
    ideal_membership,
    is_unit_on_patch,
)
from .polycore import (
    PolyRing,
    Polynomial,
    RingMismatchError,
    as_rational,
    evaluate,
    partial_derivative,
    substitute,
    to_string,
)

RationalPoint = tuple[Fraction, ...]

SAMPLE_BOX = 10
SAMPLE_MAX_DENOMINATOR = 8
SAMPLE_TRIALS = 10_000


class PatchError(ValueError):
    """A patch could not be constructed (e.g. no rational sample point found)."""


class MapError(ValueError):
    """A rational map violates its invariants."""


class CenterError(ValueError):
    """A blowup center failed validation.

    ``suggestions`` lists alternative shift variables whose partial
    derivative does not vanish at the base point.
    """

    def __init__(self, message: str, invariant: str, suggestions: Sequence[str] = ()):
        super().__init__(message)
        self.invariant = invariant
        self.suggestions = tuple(suggestions)


def point(*coords) -> RationalPoint:
    return tuple(as_rational(c) for c in coords)


def _nonconstant_unique(polys: Iterable[Polynomial]) -> tuple[Polynomial, ...]:
    """Drop constants and duplicates up to scalar multiples."""
    seen, out = set(), []
    for p in polys:
        if p.is_constant():
            if p.is_zero():
                raise PatchError("inequality 0 != 0 defines the empty set")
            continue
        m = p.monic()
        if m not in seen:
            seen.add(m)
            out.append(p)
    return tuple(out)


def on_patch(ring: PolyRing, inequalities, relations: Ideal, pt: Sequence[Fraction]) -> bool:
    return (all(evaluate(h, pt) != 0 for h in inequalities)
            and all(evaluate(g, pt) == 0 for g in relations.generators))


def find_sample_point(
    ring: PolyRing,
    inequalities: Sequence[Polynomial] = (),
    relations: Ideal | None = None,
    seed: int = 0,
    trials: int = SAMPLE_TRIALS,
) -> RationalPoint:
    """Random search for a rational point of the patch.

    Coordinates are drawn from [-10, 10] with denominators at most 8; the
    origin is tried first.
    """
    relations = relations or Ideal(ring)
    origin = (Fraction(0),) * ring.nvars
    if on_patch(ring, inequalities, relations, origin):
        return origin
    rng = random.Random(seed)
    for _ in range(trials):
        pt = []
        for _ in range(ring.nvars):
            q = rng.randint(1, SAMPLE_MAX_DENOMINATOR)
            pt.append(Fraction(rng.randint(-SAMPLE_BOX * q, SAMPLE_BOX * q), q))
        if on_patch(ring, inequalities, relations, pt):
            return tuple(pt)
    raise PatchError(f"no rational sample point found in {trials} trials")


@dataclass(frozen=True)
class AffinePatch:
    """Principal open subset ``{h != 0 for h in inequalities}`` of V(relations)."""

    ring: PolyRing
    inequalities: tuple[Polynomial, ...]
    relations: Ideal
    sample: RationalPoint

    @classmethod
    def make(
        cls,
        ring: PolyRing,
        inequalities: Iterable[Polynomial] = (),
        relations: Ideal | Iterable[Polynomial] | None = None,
        sample: Sequence | None = None,
        seed: int = 0,
    ) -> "AffinePatch":
        ineqs = _nonconstant_unique(h.in_ring(ring) for h in inequalities)
        if relations is None:
            relations = Ideal(ring)
        elif not isinstance(relations, Ideal):
            relations = Ideal(ring, [g.in_ring(ring) for g in relations])
        else:
            relations = relations.in_ring(ring)
        if sample is None:
            sample = find_sample_point(ring, ineqs, relations, seed=seed)
        else:
            sample = tuple(as_rational(c) for c in sample)
            if len(sample) != ring.nvars:
                raise PatchError("sample point has the wrong number of coordinates")
            if not on_patch(ring, ineqs, relations, sample):
                raise PatchError(f"sample point {format_point(sample)} is not on the patch")
        return cls(ring, ineqs, relations, tuple(sample))

    def restrict(self, *extra: Polynomial, sample: Sequence | None = None) -> "AffinePatch":
        """The smaller patch where ``extra`` also do not vanish."""
        if sample is None and all(evaluate(h, self.sample) != 0 for h in extra):
            sample = self.sample
        return AffinePatch.make(self.ring, self.inequalities + tuple(extra), self.relations, sample)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.ring.variables

    def contains(self, pt: Sequence[Fraction]) -> bool:
        return on_patch(self.ring, self.inequalities, self.relations, pt)

    def is_affine_space(self) -> bool:
        return not self.inequalities and self.relations.is_zero()


def format_point(pt: Sequence[Fraction]) -> str:
    return "(" + ", ".join(str(c) for c in pt) + ")"


# -- rational maps ----------------------------------------------------------------

Fraction2 = tuple[Polynomial, Polynomial]


def substitute_fraction(
    f: Polynomial,
    components: Sequence[Fraction2],
    target: PolyRing,
    also: Sequence[Polynomial] = (),
) -> Fraction2:
    """``f(n_1/d_1, ..., n_k/d_k)`` as a single fraction ``(num, den)``.

    Components sharing a denominator ``d`` form a group; with ``E`` the
    largest total degree of a term of ``f`` (or of any polynomial in
    ``also``) in the group's variables, ``den`` is the product of the
    ``d^E``.  Passing the other half of a fraction in ``also`` gives both
    halves the same denominator, so they can be divided.
    """
    nums = [n.in_ring(target) for n, _ in components]
    dens = [d.in_ring(target) for _, d in components]
    if all(d == 1 for d in dens):
        return substitute(f, dict(zip(f.ring.variables, nums)), target), target.one
    groups: dict[Polynomial, list[int]] = {}
    for l, d in enumerate(dens):
        if d != 1:
            groups.setdefault(d, []).append(l)
    group_dens = list(groups)
    members = list(groups.values())

    def group_degrees(exp):
        return [sum(exp[l] for l in ls) for ls in members]

    top = [0] * len(members)
    for poly in (f, *also):
        for exp in poly.terms:
            top = [max(a, b) for a, b in zip(top, group_degrees(exp))]

    def cached_power(table, base, k):
        if k not in table:
            table[k] = cached_power(table, base, k - 1) * base
        return table[k]

    n_pows = [{0: target.one, 1: n} for n in nums]
    d_pows = [{0: target.one, 1: d} for d in group_dens]
    num = target.zero
    for exp, c in f.terms.items():
        term = target.const(c)
        for l, e in enumerate(exp):
            if e:
                term = term * cached_power(n_pows[l], nums[l], e)
        for g, s in enumerate(group_degrees(exp)):
            if top[g] - s:
                term = term * cached_power(d_pows[g], group_dens[g], top[g] - s)
        num = num + term
    den = target.one
    for g, E in enumerate(top):
        if E:
            den = den * cached_power(d_pows[g], group_dens[g], E)
    return num, den


@dataclass(frozen=True)
class RationalMap:
    """Map ``source -> target`` given by fractions ``num/den`` per target coordinate."""

    source: AffinePatch
    target: AffinePatch
    components: tuple[Fraction2, ...]

    @classmethod
    def make(
        cls,
        source: AffinePatch,
        target: AffinePatch,
        components: Sequence,
        check: bool = True,
    ) -> "RationalMap":
        comps = []
        for comp in components:
            if isinstance(comp, Polynomial):
                num, den = comp, source.ring.one
            else:
                num, den = comp
            if den.is_zero():
                raise MapError("zero denominator")
            comps.append((num.in_ring(source.ring), den.in_ring(source.ring)))
        m = cls(source, target, tuple(comps))
        if len(comps) != target.ring.nvars:
            raise MapError(f"map has {len(comps)} components, target needs {target.ring.nvars}")
        if check:
            m.check()
        return m

    def check(self) -> None:
        for num, den in self.components:
            if not is_unit_on_patch(den, self.source):
                raise MapError(f"denominator {to_string(den)} is not a unit on the source patch")
        image = self(self.source.sample)
        if not self.target.contains(image):
            raise MapError(f"sample {format_point(self.source.sample)} maps to "
                           f"{format_point(image)}, outside the target patch")

    def __call__(self, pt: Sequence) -> RationalPoint:
        return tuple(evaluate(n, pt) / evaluate(d, pt) for n, d in self.components)

    def as_assignments(self) -> dict[str, Fraction2]:
        return dict(zip(self.target.ring.variables, self.components))


def identity_map(patch: AffinePatch) -> RationalMap:
    return RationalMap(patch, patch, tuple((v, patch.ring.one) for v in patch.ring.gens()))


def compose(g: RationalMap, f: RationalMap) -> RationalMap:
    """``g o f``: first ``f``, then ``g``."""
    if f.target.ring.variables != g.source.ring.variables:
        raise MapError("incompatible patches: target of the first map is not the source of the second")
    src = f.source.ring
    comps = []
    for num, den in g.components:
        n2, d2 = substitute_fraction(num, f.components, src, also=[den])
        d3, n3 = substitute_fraction(den, f.components, src, also=[num])
        # num/den after substitution is (n2/d2) / (d3/n3) with d2 == n3
        if d3.is_zero():
            raise MapError("denominator vanishes identically after composition")
        if not is_unit_on_patch(d3, f.source):
            raise MapError(f"denominator {to_string(d3)} is not a unit after composition")
        comps.append((n2, d3))
    return RationalMap(f.source, g.target, tuple(comps))


def _equal_fractions(a: Fraction2, b: Fraction2, patch: AffinePatch) -> bool:
    diff = a[0] * b[1] - b[0] * a[1]
    if diff.is_zero():
        return True
    if patch.relations.is_zero():
        return False
    return ideal_membership(diff, patch.relations, patch.inequalities)


def map_equal_on_patch(f: RationalMap, g: RationalMap) -> bool:
    """Symbolic equality of two maps on the source patch (relations, localized)."""
    if f.source.ring.variables != g.source.ring.variables:
        raise RingMismatchError("maps have different source rings")
    if f.target.ring.variables != g.target.ring.variables:
        raise RingMismatchError("maps have different target rings")
    patch = f.source
    try:
        if f(patch.sample) != g(patch.sample):
            return False
    except ZeroDivisionError:
        pass
    return all(_equal_fractions(a, b, patch) for a, b in zip(f.components, g.components))


def patch_points(patch: AffinePatch, count: int = 3, seed: int = 0,
                 trials: int = 200) -> list[RationalPoint]:
    """The sample plus random points of the patch (relation-free patches only)."""
    pts = [patch.sample]
    if not patch.relations.is_zero():
        return pts
    rng = random.Random(seed)
    for _ in range(trials):
        if len(pts) >= count:
            break
        pt = tuple(Fraction(rng.randint(-SAMPLE_BOX, SAMPLE_BOX), rng.randint(1, SAMPLE_MAX_DENOMINATOR))
                   for _ in patch.ring.variables)
        if patch.contains(pt):
            pts.append(pt)
    return pts


def refuted_inverse(f: RationalMap, g: RationalMap, points: Sequence[RationalPoint]) -> bool:
    """True if ``g(f(p)) != p`` at some point, which disproves ``g o f = id``."""
    for pt in points:
        try:
            if g(f(pt)) != tuple(pt):
                return True
        except ZeroDivisionError:
            return True
    return False


def maps_inverse(f: RationalMap, g: RationalMap) -> bool:
    """``g o f`` and ``f o g`` are identities on the respective source patches."""
    if refuted_inverse(f, g, patch_points(f.source)) or refuted_inverse(
            g, f, patch_points(g.source)):
        return False
    try:
        return (map_equal_on_patch(compose(g, f), identity_map(f.source))
                and map_equal_on_patch(compose(f, g), identity_map(g.source)))
    except MapError:
        return False


def lands_in_target(m: RationalMap) -> bool:
    """Target relations pull back into the source relations and target
    inequalities pull back to units, both on the source patch."""
    for g in m.target.relations.generators:
        num, _ = substitute_fraction(g, m.components, m.source.ring)
        if not num.is_zero() and (m.source.relations.is_zero() or not ideal_membership(
                num, m.source.relations, m.source.inequalities)):
            return False
    for h in m.target.inequalities:
        num, _ = substitute_fraction(h, m.components, m.source.ring)
        if num.is_zero() or not is_unit_on_patch(num, m.source):
            return False
    return True


def pullback_ideal(m: RationalMap, I: Ideal) -> Ideal:
    """Cleared-denominator pullbacks of the generators of ``I``, plus the source relations."""
    if I.ring.variables != m.target.ring.variables:
        raise RingMismatchError("ideal does not live on the target of the map")
    for _, den in m.components:
        if not is_unit_on_patch(den, m.source):
            raise MapError(f"denominator {to_string(den)} is not a unit on the source patch")
    gens = [substitute_fraction(g, m.components, m.source.ring)[0] for g in I.generators]
    return Ideal(m.source.ring, gens + list(m.source.relations.generators))


# -- Jacobians and smoothness -----------------------------------------------------


def jacobian(I: Ideal, vars: Sequence[str] | None = None) -> list[list[Polynomial]]:
    vars = list(vars or I.ring.variables)
    return [[partial_derivative(g, v) for v in vars] for g in I.generators]


def determinant(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Laplace expansion along the first row; intended for small minors."""
    n = len(matrix)
    if n == 1:
        return matrix[0][0]
    total = None
    for j in range(n):
        entry = matrix[0][j]
        if entry.is_zero():
            continue
        sub = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = entry * determinant(sub)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else matrix[0][0].ring.zero


def minors(matrix: Sequence[Sequence[Polynomial]], k: int) -> list[Polynomial]:
    rows, cols = len(matrix), len(matrix[0]) if matrix else 0
    out = []
    for rs in combinations(range(rows), k):
        for cs in combinations(range(cols), k):
            d = determinant([[matrix[r][c] for c in cs] for r in rs])
            if not d.is_zero():
                out.append(d)
    return out


def smoothness_check(I: Ideal, codim: int, patch: AffinePatch) -> bool:
    """Jacobian criterion: I plus the codim-minors is the unit ideal on the patch."""
    if I.ring.variables != patch.ring.variables:
        raise RingMismatchError("ideal and patch live in different rings")
    J = jacobian(I)
    gens = list(I.generators) + list(patch.relations.generators)
    gens += minors(J, codim) if codim > 0 and J else []
    return contains_one(Ideal(I.ring, gens), patch.inequalities)


# -- blowup centers ---------------------------------------------------------------------


@dataclass(frozen=True)
class CenterSpec:
    """Smooth hypersurface ``f = 0`` inside the coordinate subvariety where
    the ``subvariety`` coordinates vanish, with a base point on it."""

    ambient: AffinePatch
    subvariety: tuple[str, ...]
    f: Polynomial
    point: RationalPoint
    shift_var: str | None = None

    @property
    def ring(self) -> PolyRing:
        return self.ambient.ring

    @property
    def remaining(self) -> tuple[str, ...]:
        return tuple(v for v in self.ring.variables if v not in self.subvariety)


def validate_center(c: CenterSpec) -> CenterSpec:
    """Check the invariants of ``c`` and resolve a default shift variable."""
    ring = c.ring
    for v in c.subvariety:
        if v not in ring:
            raise CenterError(f"unknown subvariety variable {v!r}", "subvariety")
    if len(set(c.subvariety)) != len(c.subvariety):
        raise CenterError("repeated subvariety variable", "subvariety")
    f = c.f.in_ring(ring) if c.f.ring.variables != ring.variables else c.f
    pt = tuple(as_rational(x) for x in c.point)
    if len(pt) != ring.nvars:
        raise CenterError("base point has the wrong number of coordinates", "point")
    bad = [v for v in f.variables_used() if v in c.subvariety]
    if bad:
        raise CenterError(f"f involves subvariety variables {bad}", "f-variables")
    if f.is_constant():
        raise CenterError("f must be nonconstant", "f-variables")
    off = [v for v in c.subvariety if pt[ring.index(v)] != 0]
    if off:
        raise CenterError(f"point is off the coordinate subvariety (nonzero {off})", "point-on-F")
    if evaluate(f, pt) != 0:
        raise CenterError(f"f(p) = {evaluate(f, pt)} != 0", "f(p)=0")
    if not all(evaluate(h, pt) != 0 for h in c.ambient.inequalities):
        raise CenterError("point lies outside the ambient patch", "point-in-ambient")
    nonzero = [v for v in c.remaining if evaluate(partial_derivative(f, v), pt) != 0]
    if not nonzero:
        raise CenterError("all partial derivatives of f vanish at p: singular point", "smooth-at-p")
    shift = c.shift_var
    if shift is None:
        shift = nonzero[-1]
    elif shift not in c.remaining:
        raise CenterError(f"shift variable {shift!r} is not a free coordinate of F",
                          "shift-var", nonzero)
    elif shift not in nonzero:
        raise CenterError(
            f"partial derivative of f in {shift} vanishes at p; try {', '.join(nonzero)}",
            "shift-partial", nonzero)
    return CenterSpec(c.ambient, tuple(c.subvariety), f, pt, shift)
