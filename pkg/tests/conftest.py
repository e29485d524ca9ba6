"""Shared fixtures, hypothesis strategies and the sympy bridge used as an oracle."""

from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from plainchart.polycore import PolyRing, Polynomial

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def R(*names, order=None) -> PolyRing:
    return PolyRing(tuple(names)) if order is None else PolyRing(tuple(names), order)


def P(ring: PolyRing, text: str) -> Polynomial:
    return ring.parse(text)


# -- sympy bridge -----------------------------------------------------------------


def to_sympy(f: Polynomial):
    syms = sympy.symbols(f.ring.variables)
    expr = sympy.Integer(0)
    for exp, c in f.terms.items():
        mono = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, exp):
            mono *= s ** k
        expr += mono
    return expr


def from_sympy(expr, ring: PolyRing) -> Polynomial:
    syms = sympy.symbols(ring.variables)
    poly = sympy.Poly(sympy.expand(expr), *syms, domain="QQ")
    terms = {}
    for exp, c in poly.terms():
        q = sympy.Rational(c)
        terms[tuple(exp)] = Fraction(int(q.p), int(q.q))
    return Polynomial(ring, terms)


# -- strategies ---------------------------------------------------------------------

small_rationals = st.builds(
    Fraction, st.integers(-9, 9), st.integers(1, 4))


@st.composite
def polynomials(draw, ring: PolyRing, max_terms: int = 4, max_deg: int = 3,
                coeffs=small_rationals):
    n = ring.nvars
    count = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(count):
        exp = tuple(draw(st.lists(st.integers(0, max_deg), min_size=n, max_size=n)))
        if sum(exp) > max_deg:
            continue
        terms[exp] = draw(coeffs)
    return Polynomial(ring, terms)


def points(ring: PolyRing):
    return st.tuples(*[small_rationals for _ in ring.variables])


@pytest.fixture
def xyz() -> PolyRing:
    return R("x", "y", "z")


# -- acceptance summary -----------------------------------------------------------------

ACCEPTANCE: dict[int, tuple[str, bool, float, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, elapsed, detail = ACCEPTANCE[number]
        line = f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title} ({elapsed:.2f}s)"
        terminalreporter.write_line(line + (f": {detail}" if detail and not ok else ""))
