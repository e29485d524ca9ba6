"""Charts of blowups of affine space.

Two constructions live here:

* :func:`rees_charts` presents the chart ``Spec R[a_1/a_i, ..., a_m/a_i]``
  of the blowup along ``(a_1, ..., a_m)`` by a relation ideal, computed as
  the dehomogenized kernel of ``y_k -> a_k * t``.
* :func:`plain_blowup_atlas` covers the blowup along a smooth hypersurface
  ``f = 0`` of a coordinate subvariety ``x_1 = ... = x_r = 0`` by ``r + 1``
  charts that are open subsets of affine space.  The center is presented by
  ``f`` and the shifted copies ``f_i = f(..., a + x_i)`` of ``f``, where
  ``a`` is the shift variable; each chart inverts one of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import NamedTuple, Sequence

from .geometry import (
    AffinePatch,
    CenterSpec,
    MapError,
    RationalMap,
    find_sample_point,
    identity_map,
    lands_in_target,
    maps_inverse,
    pullback_ideal,
    validate_center,
)
from .grobner import (
    Ideal,
    buchberger_reduced,
    elimination_ideal,
    ideal_equality,
    is_unit_on_patch,
    ring_map_kernel,
)
from .polycore import (
    LEX,
    NotDivisibleError,
    PolyRing,
    Polynomial,
    evaluate,
    exact_divide,
    partial_derivative,
    substitute,
    taylor_shift,
    to_string,
)


class AtlasError(RuntimeError):
    """An atlas failed one of its construction invariants."""


@dataclass(frozen=True)
class ShiftedGenerators:
    center: CenterSpec
    f_list: tuple[Polynomial, ...]
    g_list: tuple[Polynomial, ...]
    h_list: tuple[Polynomial, ...]
    derivative: Polynomial  # partial of f in the shift variable
    neighborhood: AffinePatch

    @property
    def center_generators(self) -> tuple[Polynomial, ...]:
        """``(f, f_1, ..., f_r)``: chart ``k`` inverts entry ``k``."""
        return (self.center.f,) + self.f_list


def shifted_generators(c: CenterSpec) -> ShiftedGenerators:
    c = validate_center(c)
    a = c.shift_var
    df = partial_derivative(c.f, a)
    fs, gs, hs = [], [], []
    for xi in c.subvariety:
        fi = taylor_shift(c.f, a, xi)
        try:
            gi = exact_divide(fi - c.f, c.ring.var(xi))
        except NotDivisibleError:  # pragma: no cover - f_i - f always vanishes on x_i = 0
            raise AssertionError("shifted generator difference not divisible") from None
        fs.append(fi)
        gs.append(gi)
        hs.append(gi - df)
    V = c.ambient.restrict(*gs, sample=c.point)
    return ShiftedGenerators(c, tuple(fs), tuple(gs), tuple(hs), df, V)


@dataclass(frozen=True)
class BlowupChart:
    index: int
    label: str
    patch: AffinePatch
    structure_map: RationalMap
    exceptional: Polynomial
    fractions: tuple[str, ...]  # chart names of x_j / (inverted generator)
    shifted: str | None = None  # chart name of a + x_i on the shifted charts

    @property
    def ring(self) -> PolyRing:
        return self.patch.ring


@dataclass(frozen=True)
class BlowupAtlas:
    base: AffinePatch
    center: CenterSpec
    generators: ShiftedGenerators
    charts: tuple[BlowupChart, ...]
    transitions: dict = field(compare=False)
    ratios: dict = field(compare=False, repr=False)  # (chart, k) -> generator_k / generator_chart

    def overlap(self, i: int, j: int) -> AffinePatch:
        return self.transitions[(i, j)].source


def _chart_names(ring: PolyRing, remaining, shift, chart, r, fraction_names, shifted_name):
    taken = set(remaining)
    if fraction_names is None:
        wanted = [f"t_{k + 1}" for k in range(r)]
    else:
        wanted = list(fraction_names[chart] if fraction_names and isinstance(
            fraction_names[0], (list, tuple)) else fraction_names)
        if len(wanted) != r:
            raise ValueError(f"need {r} fraction names per chart")
    coords = list(remaining)
    w = None
    if chart > 0:
        taken.discard(shift)
        w = shifted_name if shifted_name not in taken else PolyRing(tuple(taken)).fresh(shifted_name)
        coords[coords.index(shift)] = w
        taken.add(w)
    fracs = []
    for name in wanted:
        name = name if name not in taken else PolyRing(tuple(taken)).fresh(name)
        fracs.append(name)
        taken.add(name)
    return tuple(coords) + tuple(fracs), tuple(fracs), w


def plain_blowup_atlas(
    c: CenterSpec,
    fraction_names: Sequence | None = None,
    shifted_name: str = "w",
) -> BlowupAtlas:
    """Atlas of ``r + 1`` plain charts for the blowup of V along ``f = x_1 = ... = x_r = 0``.

    ``fraction_names`` names the adjoined fractions ``x_j / f`` (one list for
    every chart, or one list per chart); ``shifted_name`` names ``a + x_i``.
    """
    sg = shifted_generators(c)
    c = sg.center
    V = sg.neighborhood
    ring = c.ring
    a = c.shift_var
    r = len(c.subvariety)
    remaining = c.remaining
    gens = sg.center_generators
    p = c.point

    charts = []
    for k in range(r + 1):
        coords, fracs, w = _chart_names(ring, remaining, a, k, r, fraction_names, shifted_name)
        cring = PolyRing(coords)
        if k == 0:
            inverted = c.f.in_ring(cring)
        else:
            inverted = substitute(c.f, {a: cring.var(w)}, cring)
        assign = {}
        for xj, tj in zip(c.subvariety, fracs):
            assign[xj] = cring.var(tj) * inverted
        if k > 0:
            assign[a] = cring.var(w) - assign[c.subvariety[k - 1]]
        for v in remaining:
            if v not in assign:
                assign[v] = cring.var(v)
        ineqs = [substitute(h, assign, cring) for h in V.inequalities]
        sample = [p[ring.index(v)] for v in remaining] + [Fraction(0)] * r
        patch = AffinePatch.make(cring, ineqs, sample=sample)
        smap = RationalMap.make(patch, V, [assign[v] for v in ring.variables])
        label = "f" if k == 0 else f"f_{k}"
        charts.append(BlowupChart(k, label, patch, smap, inverted, fracs, w))

    ratios = {}
    for ch in charts:
        assign = dict(zip(ring.variables, (n for n, _ in ch.structure_map.components)))
        for k, G in enumerate(gens):
            pulled = substitute(G, assign, ch.ring)
            try:
                ratios[(ch.index, k)] = exact_divide(pulled, ch.exceptional)
            except NotDivisibleError:
                raise AtlasError(f"generator {k} is not a multiple of the exceptional "
                                 f"equation on chart {ch.index}") from None

    transitions = {}
    overlaps = {}
    for ci in charts:
        for cj in charts:
            if ci.index != cj.index:
                overlaps[(ci.index, cj.index)] = ci.patch.restrict(ratios[(ci.index, cj.index)])
    for ci in charts:
        for cj in charts:
            if ci.index == cj.index:
                continue
            src = overlaps[(ci.index, cj.index)]
            tgt = overlaps[(cj.index, ci.index)]
            transitions[(ci.index, cj.index)] = RationalMap.make(
                src, tgt, _transition_components(c, ci, cj, ratios))

    atlas = BlowupAtlas(V, c, sg, tuple(charts), transitions, ratios)
    for i, j in transitions:
        if i < j and not transitions_inverse(atlas, i, j):
            raise AtlasError(f"transition maps between charts {i} and {j} are not inverse")
    return atlas


def _transition_components(c: CenterSpec, src: BlowupChart, dst: BlowupChart, ratios):
    """Coordinates of ``dst`` as fractions in the coordinates of ``src``."""
    ring = src.ring
    one = ring.one
    old = dict(zip(c.ring.variables, (n for n, _ in src.structure_map.components)))
    rho = ratios[(src.index, dst.index)]
    comps = {}
    for tj_src, tj_dst in zip(src.fractions, dst.fractions):
        comps[tj_dst] = (ring.var(tj_src), rho)
    for v in c.remaining:
        if dst.index > 0 and v == c.shift_var:
            comps[dst.shifted] = (old[v] + old[c.subvariety[dst.index - 1]], one)
        else:
            comps[v] = (old[v], one)
    return [comps[v] for v in dst.ring.variables]


def transition_map(atlas: BlowupAtlas, i: int, j: int) -> RationalMap:
    if i == j:
        return identity_map(atlas.charts[i].patch)
    try:
        return atlas.transitions[(i, j)]
    except KeyError:
        raise ValueError(f"no transition between charts {i} and {j}") from None


def transitions_inverse(atlas: BlowupAtlas, i: int, j: int) -> bool:
    return maps_inverse(atlas.transitions[(i, j)], atlas.transitions[(j, i)])


# -- Rees charts -----------------------------------------------------------------


class ReesChart(NamedTuple):
    patch: AffinePatch
    relations: Ideal
    structure_map: RationalMap


def rees_charts(
    base: AffinePatch,
    generators: Sequence[Polynomial],
    prefix: str = "x_",
) -> list[ReesChart]:
    """Affine charts of the blowup of ``base`` along ``(a_1, ..., a_m)``.

    Chart ``i`` has the base coordinates plus ``x_j`` (j != i) standing for
    ``a_j / a_i``; its relations are the kernel of ``y_k -> a_k t``
    dehomogenized at ``y_i = 1``.
    """
    if not base.relations.is_zero():
        raise ValueError("Rees charts are only supported over open subsets of affine space")
    ring = base.ring
    gens = [g.in_ring(ring) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    if any(g.is_zero() for g in gens):
        raise ValueError("zero generator")
    m = len(gens)
    t = ring.fresh("_t")
    rt = ring.extend([t])
    ys = [rt.fresh(f"_y{k + 1}") for k in range(m)]
    kernel = ring_map_kernel(ys, [g.in_ring(rt) * rt.var(t) for g in gens], t)
    names = []
    for k in range(m):
        name = f"{prefix}{k + 1}"
        names.append(name if name not in ring else ring.fresh(name, names))
    charts = []
    for i in range(m):
        cring = ring.extend([names[k] for k in range(m) if k != i])
        assign = {ys[k]: (cring.one if k == i else cring.var(names[k])) for k in range(m)}
        rel = Ideal(cring, [substitute(g, assign, cring) for g in kernel.generators])
        b = find_sample_point(ring, base.inequalities + (gens[i],), seed=i)
        ai = evaluate(gens[i], b)
        sample = list(b) + [evaluate(gens[k], b) / ai for k in range(m) if k != i]
        patch = AffinePatch.make(cring, base.inequalities, rel, sample=sample)
        smap = RationalMap.make(patch, base, list(cring.gens()[: ring.nvars]))
        charts.append(ReesChart(patch, rel, smap))
    return charts


def polynomial_ring_certificate(relations: Ideal) -> tuple[str, ...] | None:
    """Free variables if the quotient is visibly a polynomial ring.

    Succeeds when some lex order puts the reduced basis in graph form
    ``x_i - q_i(smaller variables)``; the quotient is then the polynomial
    ring in the variables that are not leading.
    """
    ring = relations.ring
    if relations.is_zero():
        return ring.variables
    for perm in permutations(ring.variables):
        lring = PolyRing(perm, LEX)
        G = buchberger_reduced(relations.in_ring(lring))
        leads = []
        for g in G.basis:
            exp, _ = g.leading_term()
            if sum(exp) != 1:
                break
            leads.append(perm[exp.index(1)])
        else:
            return tuple(v for v in ring.variables if v not in leads)
    return None


class Correspondence(NamedTuple):
    chart: int
    assignment: dict  # Rees coordinate -> polynomial in plain chart coordinates
    kernel: Ideal
    equal: bool


def rees_plain_correspondence(atlas: BlowupAtlas, rees: Sequence[ReesChart]) -> list[Correspondence]:
    """Identify each plain chart with the Rees chart inverting the same generator.

    The Rees coordinates map to the plain chart by the structure map and the
    generator ratios; the kernel of that ring map must equal the Rees
    relation ideal after inverting the base inequalities.
    """
    if len(rees) != len(atlas.charts):
        raise ValueError("Rees presentation has a different number of charts")
    base_vars = atlas.center.ring.variables
    out = []
    for ch, rc in zip(atlas.charts, rees):
        qring = rc.patch.ring
        extra = [v for v in qring.variables if v not in base_vars]
        others = [k for k in range(len(atlas.charts)) if k != ch.index]
        images = {v: n for v, (n, _) in zip(base_vars, ch.structure_map.components)}
        for v, k in zip(extra, others):
            images[v] = atlas.ratios[(ch.index, k)]
        # identify plain coordinates that map identically; eliminate the rest
        rename = {}
        for q, img in images.items():
            used = img.variables_used()
            if len(used) == 1 and img == ch.ring.var(used[0]) and used[0] not in rename:
                rename[used[0]] = q
        taken = set(qring.variables)
        plain_names = {}
        for v in ch.ring.variables:
            if v in rename:
                plain_names[v] = rename[v]
            else:
                plain_names[v] = PolyRing(tuple(taken)).fresh("_p" + v)
                taken.add(plain_names[v])
        drop = [plain_names[v] for v in ch.ring.variables if v not in rename]
        big = PolyRing(tuple(drop) + qring.variables)
        to_big = {v: big.var(n) for v, n in plain_names.items()}
        gens = []
        for q, img in images.items():
            moved = substitute(img, to_big, big)
            diff = big.var(q) - moved
            if not diff.is_zero():
                gens.append(diff)
        if drop:
            kernel = elimination_ideal(Ideal(big, gens), drop).in_ring(qring)
        else:
            kernel = Ideal(qring, [g.in_ring(qring) for g in gens])
        equal = ideal_equality(kernel, rc.relations, atlas.base.inequalities)
        out.append(Correspondence(ch.index, images, kernel, equal))
    return out


# -- verification -------------------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class AtlasReport:
    checks: list[Check]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def get(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def as_dict(self) -> list[dict]:
        return [{"check": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks]


def _check_shifted(atlas: BlowupAtlas) -> Check:
    sg = atlas.generators
    c = sg.center
    bad = []
    dp = evaluate(sg.derivative, c.point)
    for xi, fi, gi, hi in zip(c.subvariety, sg.f_list, sg.g_list, sg.h_list):
        if fi != c.f + c.ring.var(xi) * gi:
            bad.append(f"f_i != f + {xi}*g_i")
        if hi != gi - sg.derivative or evaluate(hi, c.point) != 0:
            bad.append(f"h_i({xi}) does not vanish at p")
        if evaluate(gi, c.point) != dp or dp == 0:
            bad.append(f"g_i({xi})(p) != partial f(p)")
    return Check("shifted_generators", not bad, "; ".join(bad))


def _check_center_ideal(atlas: BlowupAtlas) -> Check:
    c = atlas.center
    ring = c.ring
    proof = Ideal(ring, atlas.generators.center_generators)
    plain = Ideal(ring, [c.f] + [ring.var(x) for x in c.subvariety])
    ok = ideal_equality(proof, plain, atlas.base.inequalities)
    return Check("center_generators", ok, "" if ok else "(f, f_1..f_r) != (f, x_1..x_r) on V")


def _check_structure(atlas: BlowupAtlas) -> Check:
    bad = []
    for ch in atlas.charts:
        m = ch.structure_map
        try:
            if not atlas.base.contains(m(ch.patch.sample)):
                bad.append(f"chart {ch.index}: sample image outside V")
            elif not lands_in_target(m):
                bad.append(f"chart {ch.index}: map does not land in V")
        except (ZeroDivisionError, MapError) as exc:
            bad.append(f"chart {ch.index}: {exc}")
    return Check("structure_maps", not bad, "; ".join(bad))


def _check_exceptional(atlas: BlowupAtlas) -> Check:
    ring = atlas.center.ring
    center = Ideal(ring, atlas.generators.center_generators)
    bad = []
    for ch in atlas.charts:
        try:
            pulled = pullback_ideal(ch.structure_map, center)
        except MapError as exc:
            bad.append(f"chart {ch.index}: {exc}")
            continue
        principal = Ideal(ch.ring, [ch.exceptional])
        if not ideal_equality(pulled, principal, ch.patch.inequalities):
            bad.append(f"chart {ch.index}: pullback is not ({to_string(ch.exceptional)})")
    return Check("exceptional_principal", not bad, "; ".join(bad))


def _check_transitions(atlas: BlowupAtlas) -> Check:
    bad = []
    for i, j in sorted(atlas.transitions):
        if i < j and not transitions_inverse(atlas, i, j):
            bad.append(f"charts {i}<->{j}")
    return Check("transitions_inverse", not bad,
                 "" if not bad else "not mutually inverse: " + ", ".join(bad))


def _check_identities(atlas: BlowupAtlas) -> Check:
    """f_i/f = 1 + g_i x_i/f on the f-chart; f/f_i = 1 - g_i x_i/f_i and
    g_j x_j/f_i = f_j/f_i - f/f_i on the f_i-chart."""
    c = atlas.center
    r = len(c.subvariety)
    bad = []
    for ch in atlas.charts:
        assign = dict(zip(c.ring.variables, (n for n, _ in ch.structure_map.components)))
        g_star = [substitute(g, assign, ch.ring) for g in atlas.generators.g_list]
        t = [ch.ring.var(n) for n in ch.fractions]
        rho = [atlas.ratios[(ch.index, k)] for k in range(r + 1)]
        if rho[ch.index] != 1:
            bad.append(f"chart {ch.index}: inverted generator ratio is not 1")
        if ch.index == 0:
            for i in range(r):
                if rho[i + 1] != 1 + g_star[i] * t[i]:
                    bad.append(f"chart 0: f_{i + 1}/f != 1 + g_{i + 1}*x_{i + 1}/f")
        else:
            i = ch.index - 1
            if rho[0] != 1 - g_star[i] * t[i]:
                bad.append(f"chart {ch.index}: f/f_{ch.index} != 1 - g*x/f_{ch.index}")
            for j in range(r):
                if j != i and g_star[j] * t[j] != rho[j + 1] - rho[0]:
                    bad.append(f"chart {ch.index}: x_{j + 1}/f_{ch.index} identity fails")
    return Check("proof_identities", not bad, "; ".join(bad))


def verify_atlas(atlas: BlowupAtlas) -> AtlasReport:
    """Run every atlas check; failures are report entries, not exceptions."""
    return AtlasReport([
        _check_shifted(atlas),
        _check_center_ideal(atlas),
        _check_structure(atlas),
        _check_exceptional(atlas),
        _check_transitions(atlas),
        _check_identities(atlas),
    ])


def overlap_unit_certificate(atlas: BlowupAtlas, i: int, j: int) -> bool:
    """The ratio of the generators inverted on charts j and i is a unit on the overlap."""
    return is_unit_on_patch(atlas.ratios[(i, j)], atlas.overlap(i, j))

