"""Generic linear projection of a smooth subvariety onto a hypersurface.

A random rational matrix ``M`` (m x n, m = dim Z + 1) is accepted only
after its hypersurface model is certified: the image is cut out by one
polynomial ``H``, every coordinate of ``Z`` is recovered as a fraction of
the image coordinates with denominator nonzero at ``pi(q)``, and both
compositions of the projection with that inverse are identities.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .geometry import (
    AffinePatch,
    MapError,
    PatchError,
    RationalMap,
    compose,
    identity_map,
    map_equal_on_patch,
    substitute_fraction,
)
from .grobner import Ideal, buchberger_reduced, elimination_ideal, ideal_membership
from .polycore import (
    MonomialOrder,
    PolyRing,
    Polynomial,
    as_rational,
    content_free,
    evaluate,
    partial_derivative,
)

ENTRY_BOUND = 100
RETRIES = 20


class ProjectionError(RuntimeError):
    """A projection was rejected; ``mode`` names the failure."""

    RANK = "rank-deficient"
    NOT_HYPERSURFACE = "not-hypersurface"
    NOT_BIRATIONAL = "not-birational-at-point"
    UNCERTIFIED = "verification-failed"
    EXHAUSTED = "retries-exhausted"

    def __init__(self, mode: str, message: str, last_mode: str | None = None):
        super().__init__(f"{mode}: {message}")
        self.mode = mode
        self.last_mode = last_mode


def matrix_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    m = [list(map(as_rational, row)) for row in rows]
    rank, ncols = 0, len(m[0]) if m else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                factor = m[i][col] / m[rank][col]
                m[i] = [a - factor * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


@dataclass(frozen=True)
class LinearProjection:
    matrix: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def of(cls, rows) -> "LinearProjection":
        return cls(tuple(tuple(as_rational(v) for v in row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> "LinearProjection":
        return cls.of([[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def m(self) -> int:
        return len(self.matrix)

    @property
    def n(self) -> int:
        return len(self.matrix[0])

    def rank(self) -> int:
        return matrix_rank(self.matrix)

    def __call__(self, pt: Sequence) -> tuple[Fraction, ...]:
        return tuple(sum(a * as_rational(x) for a, x in zip(row, pt)) for row in self.matrix)

    def linear_forms(self, ring: PolyRing) -> list[Polynomial]:
        xs = ring.gens()
        out = []
        for row in self.matrix:
            form = ring.zero
            for a, x in zip(row, xs):
                if a:
                    form = form + x.scale(a)
            out.append(form)
        return out


@dataclass(frozen=True)
class HypersurfaceModel:
    projection: LinearProjection
    H: Polynomial
    forward: RationalMap  # pi restricted to Z, into W
    inverse: RationalMap  # alpha: W -> Z
    base_point: tuple[Fraction, ...]
    image_point: tuple[Fraction, ...]

    @property
    def patch(self) -> AffinePatch:
        return self.inverse.source


def image_ring(Z: Ideal, m: int) -> PolyRing:
    names = []
    for k in range(m):
        names.append(Z.ring.fresh(f"u_{k + 1}", names))
    return PolyRing(tuple(names))


def _graph(Z: Ideal, proj: LinearProjection, U: PolyRing, order: MonomialOrder,
           xs: Sequence[str]) -> Ideal:
    ring = PolyRing(tuple(xs) + U.variables, order)
    forms = proj.linear_forms(Z.ring)
    gens = [g.in_ring(ring) for g in Z.generators]
    gens += [ring.var(u) - form.in_ring(ring) for u, form in zip(U.variables, forms)]
    return Ideal(ring, gens)


def implicitize(Z: Ideal, proj: LinearProjection) -> Polynomial:
    """Equation of the closure of the image of ``Z``."""
    if proj.n != Z.ring.nvars:
        raise ValueError("projection does not match the ambient dimension")
    if proj.rank() != proj.m:
        raise ProjectionError(ProjectionError.RANK, "projection matrix is rank deficient")
    U = image_ring(Z, proj.m)
    graph = _graph(Z, proj, U, Z.ring.order, Z.ring.variables)
    image = elimination_ideal(graph, Z.ring.variables)
    if len(image.generators) != 1:
        raise ProjectionError(
            ProjectionError.NOT_HYPERSURFACE,
            f"image ideal has {len(image.generators)} generators, expected one")
    return content_free(image.generators[0].in_ring(U))


def local_inverse(Z: Ideal, proj: LinearProjection, q: Sequence) -> RationalMap:
    """Recover each coordinate of ``Z`` as ``n(u)/d(u)`` with ``d(pi(q)) != 0``.

    For each source variable the graph ideal is put in a block order that
    eliminates the other source variables first; a basis element of degree
    one in the variable yields the fraction.
    """
    H = implicitize(Z, proj)
    U = H.ring
    q = tuple(as_rational(v) for v in q)
    p = proj(q)
    xs = Z.ring.variables
    n = len(xs)
    comps = []
    for l, x in enumerate(xs):
        others = [v for v in xs if v != x]
        order = MonomialOrder.block(n - 1, 1)
        graph = _graph(Z, proj, U, order, others + [x])
        G = buchberger_reduced(graph)
        best = None
        for g in G.basis:
            if any(g.degree_in(v) > 0 for v in others) or g.degree_in(x) != 1:
                continue
            # g = d(u) * x + e(u)
            xi = g.ring.index(x)
            d = Polynomial(U, {e[n:]: c for e, c in g.terms.items() if e[xi] == 1})
            e = Polynomial(U, {e[n:]: c for e, c in g.terms.items() if e[xi] == 0})
            if evaluate(d, p) == 0:
                continue
            den = content_free(d)
            scale = den.leading_term()[1] / d.leading_term()[1]
            cand = (den, -e.scale(scale))
            # prefer low-degree denominators
            if best is None or (den.total_degree(), len(den.terms)) < (
                    best[0].total_degree(), len(best[0].terms)):
                best = cand
        if best is None:
            raise ProjectionError(
                ProjectionError.NOT_BIRATIONAL,
                f"no inverse for {x} defined at the image point {tuple(map(str, p))}")
        comps.append((best[1], best[0]))
    dens = [d for _, d in comps]
    W = AffinePatch.make(U, dens, Ideal(U, [H]), sample=p)
    forms = proj.linear_forms(Z.ring)
    source = AffinePatch.make(
        Z.ring, [substitute_fraction(d, [(f, Z.ring.one) for f in forms], Z.ring)[0] for d in dens],
        Z, sample=q)
    return RationalMap.make(W, source, comps)


def hypersurface_model(Z: Ideal, proj: LinearProjection, q: Sequence) -> HypersurfaceModel:
    q = tuple(as_rational(v) for v in q)
    try:
        alpha = local_inverse(Z, proj, q)
    except (MapError, PatchError) as exc:
        raise ProjectionError(ProjectionError.NOT_BIRATIONAL, str(exc)) from None
    W = alpha.source
    H = W.relations.generators[0]
    forms = proj.linear_forms(Z.ring)
    try:
        pi = RationalMap.make(alpha.target, W, forms)
    except MapError as exc:
        raise ProjectionError(ProjectionError.UNCERTIFIED, str(exc)) from None
    return HypersurfaceModel(proj, H, pi, alpha, q, proj(q))


def verify_local_iso(Z: Ideal, proj: LinearProjection, model: HypersurfaceModel) -> bool:
    """Certify that ``pi`` restricts to an isomorphism between the model patches."""
    if model.projection != proj:
        return False
    alpha, pi = model.inverse, model.forward
    W, source = alpha.source, alpha.target
    H = model.H
    p = model.image_point
    try:
        # (a) alpha o pi is the identity on Z near q
        if not map_equal_on_patch(compose(alpha, pi), identity_map(source)):
            return False
        # (b) alpha lands on Z, and pi o alpha is the identity on W
        for g in Z.generators:
            num, _ = substitute_fraction(g, alpha.components, W.ring)
            if not ideal_membership(num, Ideal(W.ring, [H]), W.inequalities):
                return False
        if not map_equal_on_patch(compose(pi, alpha), identity_map(W)):
            return False
    except MapError:
        return False
    # (c) the image point is a smooth point of H
    if evaluate(H, p) != 0:
        return False
    if proj(model.base_point) != p:
        return False
    return any(evaluate(partial_derivative(H, u), p) != 0 for u in H.ring.variables)


def _smooth_at(Z: Ideal, q, dim: int) -> bool:
    jac = [[evaluate(partial_derivative(g, v), q) for v in Z.ring.variables] for g in Z.generators]
    return matrix_rank(jac) == Z.ring.nvars - dim if jac else dim == Z.ring.nvars


def project_to_hypersurface(
    Z: Ideal,
    dim_Z: int,
    q: Sequence,
    seed: int = 0,
    retries: int = RETRIES,
) -> tuple[LinearProjection, HypersurfaceModel]:
    """Sample projections from ``seed`` until one yields a certified model."""
    q = tuple(as_rational(v) for v in q)
    n = Z.ring.nvars
    m = dim_Z + 1
    if len(q) != n:
        raise ValueError("base point has the wrong number of coordinates")
    if any(evaluate(g, q) != 0 for g in Z.generators):
        raise ValueError("base point is not on Z")
    if not _smooth_at(Z, q, dim_Z):
        raise ValueError("Z is not smooth of the given dimension at the base point")
    if m > n:
        raise ValueError("dimension too large for the ambient space")
    if m == n:
        candidates = [LinearProjection.identity(n)]
    else:
        rng = random.Random(seed)
        candidates = (
            LinearProjection.of([[rng.randint(-ENTRY_BOUND, ENTRY_BOUND) for _ in range(n)]
                                 for _ in range(m)])
            for _ in range(retries))
    last = None
    for proj in candidates:
        try:
            if proj.rank() != m:
                raise ProjectionError(ProjectionError.RANK, "rank deficient sample")
            model = hypersurface_model(Z, proj, q)
            if not verify_local_iso(Z, proj, model):
                raise ProjectionError(ProjectionError.UNCERTIFIED, "model not certified")
            return proj, model
        except ProjectionError as exc:
            last = exc
    raise ProjectionError(ProjectionError.EXHAUSTED,
                          f"no certified projection in {retries} tries; last: {last}",
                          last_mode=last.mode if last else None)


def generic_projection(Z: Ideal, dim_Z: int, q: Sequence, seed: int = 0,
                       retries: int = RETRIES) -> LinearProjection:
    return project_to_hypersurface(Z, dim_Z, q, seed, retries)[0]


def check_projection(Z: Ideal, proj: LinearProjection, q: Sequence) -> HypersurfaceModel:
    """Build and certify the model for a given matrix, raising on failure."""
    if proj.rank() != proj.m:
        raise ProjectionError(ProjectionError.RANK, "projection matrix is rank deficient")
    model = hypersurface_model(Z, proj, q)
    if not verify_local_iso(Z, proj, model):
        raise ProjectionError(ProjectionError.UNCERTIFIED, "model not certified")
    return model
