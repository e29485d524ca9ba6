"""Buchberger's algorithm and the ideal computations built on it.

Internally a polynomial is a list of ``(key, exponent, coeff)`` triples
sorted by descending key, where ``key`` is the image of the exponent under
the order's weight matrix.  Keys are linear in the exponent, so multiplying
by a monomial shifts every key by the same vector and keeps the list sorted.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .polycore import (
    GREVLEX,
    MonomialOrder,
    NotDivisibleError,
    PolyRing,
    Polynomial,
    RingMismatchError,
    exact_divide,
)

DEFAULT_BUDGET = 10_000
RESERVED_PREFIX = "_w"

_budget = contextvars.ContextVar("groebner_budget", default=DEFAULT_BUDGET)


class BudgetExceededError(RuntimeError):
    """The pair-reduction budget of a Groebner computation ran out."""


@contextlib.contextmanager
def budget(limit: int):
    """Temporarily change the number of S-pair reductions allowed per basis."""
    token = _budget.set(int(limit))
    try:
        yield
    finally:
        _budget.reset(token)


# -- internal polynomial kernel ---------------------------------------------


def _keyfunc(order: MonomialOrder, n: int):
    rows = order.weights(n)
    sparse = [[(j, w) for j, w in enumerate(row) if w] for row in rows]

    def key(exp):
        return tuple(sum(w * exp[j] for j, w in row) for row in sparse)

    return key


def _internal(p: Polynomial, key) -> list:
    return sorted(((key(e), e, c) for e, c in p.terms.items()), key=lambda t: t[0], reverse=True)


def _external(ring: PolyRing, ip: list) -> Polynomial:
    return Polynomial._raw(ring, {e: c for _, e, c in ip})


def _merge_sub(p: list, i: int, c: Fraction, mexp, mkey, g: list, j: int) -> list:
    """Return p[i:] - c * x^mexp * g[j:]."""
    out = []
    np_, ng = len(p), len(g)
    while i < np_ and j < ng:
        pk, pe, pc = p[i]
        gk, ge, gc = g[j]
        sk = tuple(a + b for a, b in zip(gk, mkey))
        if pk > sk:
            out.append(p[i])
            i += 1
        elif pk < sk:
            out.append((sk, tuple(a + b for a, b in zip(ge, mexp)), -c * gc))
            j += 1
        else:
            v = pc - c * gc
            if v:
                out.append((pk, pe, v))
            i += 1
            j += 1
    if i < np_:
        out.extend(p[i:])
    while j < ng:
        gk, ge, gc = g[j]
        out.append((tuple(a + b for a, b in zip(gk, mkey)),
                    tuple(a + b for a, b in zip(ge, mexp)), -c * gc))
        j += 1
    return out


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _reduce(p: list, basis: list) -> list:
    """Full reduction of p by a list of monic internal polynomials."""
    rem = []
    i = 0
    lead = [(g[0][1], g[0][0], g) for g in basis]
    while i < len(p):
        k, e, c = p[i]
        for ge, gk, g in lead:
            if _divides(ge, e):
                mexp = tuple(a - b for a, b in zip(e, ge))
                mkey = tuple(a - b for a, b in zip(k, gk))
                p = _merge_sub(p, i + 1, c, mexp, mkey, g, 1)
                i = 0
                break
        else:
            rem.append(p[i])
            i += 1
    return rem


def _monic(p: list) -> list:
    lc = p[0][2]
    if lc == 1:
        return p
    inv = 1 / lc
    return [(k, e, c * inv) for k, e, c in p]


def _spoly(f: list, g: list, key) -> list:
    fe, fk = f[0][1], f[0][0]
    ge, gk = g[0][1], g[0][0]
    lcm = tuple(max(a, b) for a, b in zip(fe, ge))
    lk = key(lcm)
    mf = tuple(a - b for a, b in zip(lcm, fe))
    mg = tuple(a - b for a, b in zip(lcm, ge))
    mfk = tuple(a - b for a, b in zip(lk, fk))
    mgk = tuple(a - b for a, b in zip(lk, gk))
    shifted = [(tuple(a + b for a, b in zip(k, mfk)), tuple(a + b for a, b in zip(e, mf)), c)
               for k, e, c in f[1:]]
    return _merge_sub(shifted, 0, Fraction(1), mg, mgk, g, 1)


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a, b) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def _buchberger(gens: list, key, limit: int) -> list:
    """Reduced Groebner basis of internal polynomials (Gebauer-Moeller pair update)."""
    polys: list[list] = []
    G: list[int] = []
    B: list[tuple[int, int]] = []

    def lm(i):
        return polys[i][0][1]

    def update(h_idx: int):
        nonlocal G, B
        h = lm(h_idx)
        C = [(g, h_idx) for g in G]
        D = []
        while C:
            g1, _ = p = C.pop(0)
            l1 = _lcm(lm(g1), h)
            if _coprime(lm(g1), h) or not any(
                _divides(_lcm(lm(g2), h), l1) for g2, _ in C + D
            ):
                D.append(p)
        E = [p for p in D if not _coprime(lm(p[0]), h)]
        newB = []
        for g1, g2 in B:
            l12 = _lcm(lm(g1), lm(g2))
            if (_divides(h, l12) and _lcm(lm(g1), h) != l12 and _lcm(lm(g2), h) != l12):
                continue
            newB.append((g1, g2))
        B = newB + E
        G = [g for g in G if not _divides(h, lm(g))] + [h_idx]

    for f in gens:
        r = _reduce(f, [polys[g] for g in G])
        if r:
            polys.append(_monic(r))
            update(len(polys) - 1)

    steps = 0
    while B:
        best = min(B, key=lambda pr: (sum(_lcm(lm(pr[0]), lm(pr[1]))),
                                      key(_lcm(lm(pr[0]), lm(pr[1]))), pr))
        B.remove(best)
        steps += 1
        if steps > limit:
            raise BudgetExceededError(f"Groebner basis exceeded {limit} pair reductions")
        s = _spoly(polys[best[0]], polys[best[1]], key)
        h = _reduce(s, [polys[g] for g in G])
        if h:
            polys.append(_monic(h))
            update(len(polys) - 1)
            if len(polys[-1]) == 1 and not any(polys[-1][0][1]):
                # the unit ideal
                return [polys[-1]]

    basis = [polys[g] for g in G]
    basis = [b for b in basis if not any(
        other is not b and _divides(other[0][1], b[0][1]) and other[0][1] != b[0][1]
        for other in basis)]
    reduced = []
    for idx, b in enumerate(basis):
        others = basis[:idx] + basis[idx + 1:]
        tail = _reduce(b[1:], others)
        reduced.append([b[0]] + tail)
    reduced.sort(key=lambda b: b[0][0], reverse=True)
    return reduced


# -- public types ---------------------------------------------------------------


@dataclass(frozen=True, init=False)
class Ideal:
    ring: PolyRing
    generators: tuple[Polynomial, ...]

    def __init__(self, ring: PolyRing, generators: Iterable[Polynomial] = ()):
        gens = []
        for g in generators:
            if not isinstance(g, Polynomial):
                g = ring.const(g)
            if g.ring.variables != ring.variables:
                raise RingMismatchError(
                    f"generator in ring {g.ring.variables}, ideal in {ring.variables}")
            if g:
                gens.append(g.in_ring(ring))
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "generators", tuple(gens))

    def is_zero(self) -> bool:
        return not self.generators

    def __add__(self, other: "Ideal") -> "Ideal":
        if other.ring.variables != self.ring.variables:
            raise RingMismatchError("cannot add ideals of different rings")
        return Ideal(self.ring, self.generators + other.generators)

    def in_ring(self, ring: PolyRing) -> "Ideal":
        return Ideal(ring, [g.in_ring(ring) for g in self.generators])

    def __contains__(self, f: Polynomial) -> bool:
        return ideal_membership(f, self)

    def __repr__(self):
        return f"Ideal({', '.join(map(str, self.generators))})"


@dataclass(frozen=True)
class GroebnerBasis:
    ideal: Ideal
    order: MonomialOrder
    basis: tuple[Polynomial, ...]

    @property
    def ring(self) -> PolyRing:
        return self.ideal.ring.with_order(self.order)

    def is_unit_ideal(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant()


@lru_cache(maxsize=512)
def _cached_basis(variables, order, gens):
    ring = PolyRing(variables, order)
    key = _keyfunc(order, len(variables))
    internal = [_internal(g, key) for g in gens]
    internal.sort(key=lambda p: (p[0][0], len(p)))
    result = _buchberger(internal, key, _budget.get())
    return tuple(_external(ring, b) for b in result)


def buchberger_reduced(I: Ideal, order: MonomialOrder | None = None) -> GroebnerBasis:
    """The reduced Groebner basis of ``I`` for ``order`` (default: the ring's order)."""
    order = order or I.ring.order
    if I.is_zero():
        return GroebnerBasis(I, order, ())
    # generator order does not change the reduced basis; sorting improves cache hits
    gens = tuple(sorted((g.monic() for g in I.generators),
                        key=lambda g: sorted(g.terms.items())))
    return GroebnerBasis(I, order, _cached_basis(I.ring.variables, order, gens))


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    if f.ring.variables != G.ideal.ring.variables:
        raise RingMismatchError("polynomial and basis live in different rings")
    ring = G.ring
    if f.is_zero() or not G.basis:
        return f.in_ring(ring)
    key = _keyfunc(G.order, ring.nvars)
    rem = _reduce(_internal(f, key), [_internal(b, key) for b in G.basis])
    return _external(ring, rem)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder | None = None) -> Polynomial:
    order = order or f.ring.order
    key = _keyfunc(order, f.ring.nvars)
    s = _spoly(_monic(_internal(f, key)), _monic(_internal(g, key)), key)
    return _external(f.ring, s)


def is_groebner(G: GroebnerBasis) -> bool:
    """Every S-polynomial of basis pairs reduces to zero."""
    return all(normal_form(s_polynomial(a, b, G.order), G).is_zero()
               for a, b in combinations(G.basis, 2))


# -- localization ---------------------------------------------------------------


def _product(ring: PolyRing, polys: Sequence[Polynomial]) -> Polynomial:
    out = ring.one
    for p in polys:
        out = out * p.in_ring(ring)
    return out


def localized(I: Ideal, inequalities: Sequence[Polynomial]) -> tuple[Ideal, PolyRing]:
    """``I + (1 - w * prod(inequalities))`` in the ring extended by a fresh ``w``.

    Its intersection with the original ring is the saturation of ``I`` by the
    inequalities, i.e. the ideal of the localization.
    """
    h = _product(I.ring, [q for q in inequalities if not q.is_constant()])
    if h.is_constant():
        return I, I.ring
    w = I.ring.fresh(RESERVED_PREFIX)
    ring = I.ring.extend([w])
    gens = [g.in_ring(ring) for g in I.generators]
    gens.append(ring.one - ring.var(w) * h.in_ring(ring))
    return Ideal(ring, gens), ring


def _divisible_by_generator(f: Polynomial, I: Ideal) -> bool:
    for g in I.generators:
        try:
            exact_divide(f, g)
            return True
        except NotDivisibleError:
            continue
    return False


def ideal_membership(f: Polynomial, I: Ideal, localize: Sequence[Polynomial] = ()) -> bool:
    """Decide ``f in I``; with ``localize``, membership after inverting those polynomials."""
    if f.ring.variables != I.ring.variables:
        raise RingMismatchError("polynomial and ideal live in different rings")
    if f.is_zero():
        return True
    if I.is_zero():
        # the polynomial ring is a domain: the zero ideal is saturated
        return False
    if _divisible_by_generator(f, I):
        return True
    J, ring = localized(I, localize)
    G = buchberger_reduced(J, GREVLEX)
    return normal_form(f.in_ring(ring), G).is_zero()


def ideal_equality(I: Ideal, J: Ideal, localize: Sequence[Polynomial] = ()) -> bool:
    if I.ring.variables != J.ring.variables:
        raise RingMismatchError("ideals live in different rings")
    return (all(ideal_membership(g, J, localize) for g in I.generators)
            and all(ideal_membership(g, I, localize) for g in J.generators))


def contains_one(I: Ideal, localize: Sequence[Polynomial] = ()) -> bool:
    J, _ = localized(I, localize)
    if any(g.is_constant() for g in J.generators):
        return True
    return buchberger_reduced(J, GREVLEX).is_unit_ideal()


def elimination_ideal(I: Ideal, drop: Iterable[str]) -> Ideal:
    """Generators of ``I`` intersected with the subring omitting ``drop``."""
    drop = list(dict.fromkeys(drop))
    for v in drop:
        I.ring.index(v)
    keep = [v for v in I.ring.variables if v not in drop]
    if not keep:
        raise ValueError("cannot eliminate every variable")
    sub = PolyRing(keep, I.ring.order)
    if not drop:
        return Ideal(sub, buchberger_reduced(I, I.ring.order).basis)
    big = PolyRing(drop + keep, MonomialOrder.block(len(drop)))
    G = buchberger_reduced(I.in_ring(big), big.order)
    kept = [g for g in G.basis if not any(g.degree_in(v) > 0 for v in drop)]
    return Ideal(sub, [g.in_ring(sub) for g in kept])


def is_unit_on_patch(f: Polynomial, patch, modulo: Ideal | None = None) -> bool:
    """Whether ``f`` is invertible on the principal open set ``patch``.

    True iff ``modulo + relations + (f)`` becomes the unit ideal once the
    patch inequalities are inverted (Rabinowitsch).
    """
    ring = patch.ring
    if f.ring.variables != ring.variables:
        raise RingMismatchError("polynomial and patch live in different rings")
    if f.is_constant() and not f.is_zero():
        return True
    # cheap certificate: f is a constant times a product of inequalities
    rest = f
    changed = True
    while changed and not rest.is_constant():
        changed = False
        for h in patch.inequalities:
            if h.is_constant():
                continue
            try:
                rest = exact_divide(rest, h)
                changed = True
            except NotDivisibleError:
                pass
    if rest.is_constant() and not rest.is_zero():
        return True
    gens = [f] + list(patch.relations.generators)
    if modulo is not None:
        gens += list(modulo.generators)
    return contains_one(Ideal(ring, gens), patch.inequalities)


def ring_map_kernel(source_vars: Sequence[str], images: Sequence[Polynomial], t: str) -> Ideal:
    """Kernel of ``R[y_1..y_m] -> R[t]``, ``y_i -> a_i * t``.

    ``images`` live in ``R[t]``; the result lives in ``R[y_1..y_m]``.
    """
    if len(source_vars) != len(images):
        raise ValueError("need one image per source variable")
    if not images:
        raise ValueError("no images given")
    rt = images[0].ring
    rt.index(t)
    tvar = rt.var(t)
    for img in images:
        if img.ring.variables != rt.variables:
            raise RingMismatchError("images live in different rings")
        try:
            a = exact_divide(img, tvar)
        except NotDivisibleError:
            raise ValueError(f"image {img} is not of the form a*{t}") from None
        if a.degree_in(t) > 0 or a.is_zero():
            raise ValueError(f"image {img} is not of the form a*{t} with a in the base ring")
    clash = set(source_vars) & set(rt.variables)
    if clash:
        raise ValueError(f"source variables {sorted(clash)} clash with the base ring")
    ring = rt.extend(source_vars)
    gens = [ring.var(y) - img.in_ring(ring) for y, img in zip(source_vars, images)]
    return elimination_ideal(Ideal(ring, gens), [t])
