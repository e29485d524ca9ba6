"""Seeded random inputs for the experiment scripts and the property tests."""

from __future__ import annotations

import random
from fractions import Fraction

from .geometry import AffinePatch, CenterSpec
from .grobner import Ideal
from .polycore import PolyRing, Polynomial, evaluate, partial_derivative


def random_polynomial(rng: random.Random, ring: PolyRing, variables, max_deg: int,
                      max_terms: int = 4, coeff: int = 5) -> Polynomial:
    idx = [ring.index(v) for v in variables]
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        deg = rng.randint(1, max_deg)
        exp = [0] * ring.nvars
        for _ in range(deg):
            exp[rng.choice(idx)] += 1
        terms[tuple(exp)] = rng.choice([c for c in range(-coeff, coeff + 1) if c])
    return Polynomial(ring, terms)


def random_center(seed: int, max_vars: int = 4, max_codim: int = 2,
                  max_deg: int = 3) -> CenterSpec:
    """A smooth center through the origin with a nonzero shift partial.

    ``f`` involves only the coordinates left free by the subvariety and has
    a linear term in the chosen shift variable, so ``df/da(0) != 0``.
    """
    rng = random.Random(seed)
    n = rng.randint(2, max_vars)
    names = [f"x{k + 1}" for k in range(n)]
    ring = PolyRing(tuple(names))
    r = rng.randint(1, min(max_codim, n - 1))
    sub = sorted(rng.sample(names, r), key=names.index)
    free = [v for v in names if v not in sub]
    shift = rng.choice(free)
    f = random_polynomial(rng, ring, free, max_deg)
    f = f - f.ring.const(evaluate(f, [0] * n))
    lin = [0] * n
    lin[ring.index(shift)] = 1
    if evaluate(partial_derivative(f, shift), [0] * n) == 0:
        f = f + Polynomial(ring, {tuple(lin): rng.choice([-2, -1, 1, 2])})
    point = (Fraction(0),) * n
    return CenterSpec(AffinePatch.make(ring, sample=point), tuple(sub), f, point, shift)


def random_ideal(seed: int, nvars: int = 3, max_gens: int = 3, max_deg: int = 3) -> Ideal:
    rng = random.Random(seed)
    ring = PolyRing(tuple(f"x{k + 1}" for k in range(nvars)))
    gens = []
    for _ in range(rng.randint(1, max_gens)):
        g = random_polynomial(rng, ring, ring.variables, max_deg, max_terms=3)
        gens.append(g + ring.const(rng.randint(-3, 3)))
    return Ideal(ring, gens)
