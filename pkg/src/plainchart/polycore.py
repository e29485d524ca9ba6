"""Exact sparse multivariate polynomials over the rationals.

Coefficients are :class:`fractions.Fraction` values; a polynomial is a map
from exponent vectors to nonzero coefficients, attached to a
:class:`PolyRing` that fixes variable names and the monomial order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, gcd, lcm
from typing import Iterable, Mapping, Sequence, Union

Rational = Fraction
Exponent = tuple[int, ...]
Scalar = Union[int, Fraction]


class RingMismatchError(ValueError):
    """Operands live in rings with different variables."""


class NotDivisibleError(ArithmeticError):
    """Raised by :func:`exact_divide` when the quotient is not a polynomial."""


class UnknownVariableError(KeyError):
    pass


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order given by block sizes.

    ``grevlex`` and ``lex`` are whole-ring orders.  ``block`` compares the
    first block by grevlex, breaking ties with grevlex on the next block and
    so on; it eliminates the variables of the first block.
    """

    kind: str = "grevlex"
    blocks: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.kind == "block" and (not self.blocks or min(self.blocks) < 0):
            raise ValueError("block order needs nonnegative block sizes")

    @classmethod
    def block(cls, *sizes: int) -> "MonomialOrder":
        return cls("block", tuple(sizes))

    def weights(self, nvars: int) -> tuple[tuple[int, ...], ...]:
        """Weight matrix whose rows, compared lexicographically, realize the order."""
        if self.kind == "lex":
            return tuple(tuple(int(i == j) for j in range(nvars)) for i in range(nvars))
        if self.kind == "grevlex":
            spans = [(0, nvars)]
        else:
            if sum(self.blocks) > nvars:
                raise ValueError("block sizes exceed the number of variables")
            spans, start = [], 0
            for size in self.blocks:
                spans.append((start, start + size))
                start += size
            if start < nvars:
                spans.append((start, nvars))
        rows = []
        for lo, hi in spans:
            if lo == hi:
                continue
            rows.append(tuple(int(lo <= j < hi) for j in range(nvars)))
            # the final reversed row is implied by the degree row
            for i in range(hi - 1, lo, -1):
                rows.append(tuple(-int(j == i) for j in range(nvars)))
        return tuple(rows)

    def key(self, nvars: int):
        rows = self.weights(nvars)

        def sort_key(exp: Exponent) -> tuple[int, ...]:
            return tuple(sum(w * e for w, e in zip(row, exp) if w) for row in rows)

        return sort_key


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


@dataclass(frozen=True)
class PolyRing:
    """Polynomial ring over Q in named variables."""

    variables: tuple[str, ...]
    order: MonomialOrder = GREVLEX
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        variables = tuple(self.variables)
        object.__setattr__(self, "variables", variables)
        if any(not isinstance(v, str) or not v for v in variables):
            raise ValueError("variable names must be nonempty strings")
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(variables)})

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariableError(f"variable {name!r} not in ring {self.variables}") from None

    def __contains__(self, name) -> bool:
        return name in self._index

    def var(self, name: str) -> "Polynomial":
        exp = [0] * self.nvars
        exp[self.index(name)] = 1
        return Polynomial(self, {tuple(exp): Fraction(1)})

    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(self.var(v) for v in self.variables)

    def const(self, c: Scalar) -> "Polynomial":
        c = as_rational(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return self.const(1)

    def with_order(self, order: MonomialOrder) -> "PolyRing":
        return PolyRing(self.variables, order)

    def extend(self, names: Sequence[str], front: bool = False) -> "PolyRing":
        names = tuple(names)
        return PolyRing(names + self.variables if front else self.variables + names, self.order)

    def fresh(self, base: str, taken: Iterable[str] = ()) -> str:
        """A variable name starting with ``base`` not used in this ring or ``taken``."""
        used = set(self.variables) | set(taken)
        if base not in used:
            return base
        k = 1
        while f"{base}{k}" in used:
            k += 1
        return f"{base}{k}"

    def parse(self, text: str) -> "Polynomial":
        from .cli.parser import parse_poly

        return parse_poly(text, self)


class Polynomial:
    """Immutable sparse polynomial: exponent vector -> nonzero Fraction."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[Exponent, Scalar] | None = None):
        self.ring = ring
        clean: dict[Exponent, Fraction] = {}
        n = ring.nvars
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != n or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent vector {exp} for ring of arity {n}")
            c = as_rational(c)
            if c:
                clean[exp] = clean.get(exp, 0) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring: PolyRing, terms: dict) -> "Polynomial":
        # terms must already be clean
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.ring.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def variables_used(self) -> tuple[str, ...]:
        used = set()
        for exp in self.terms:
            used.update(i for i, e in enumerate(exp) if e)
        return tuple(v for i, v in enumerate(self.ring.variables) if i in used)

    def sorted_terms(self, order: MonomialOrder | None = None) -> list[tuple[Exponent, Fraction]]:
        key = (order or self.ring.order).key(self.ring.nvars)
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_term(self, order: MonomialOrder | None = None) -> tuple[Exponent, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = (order or self.ring.order).key(self.ring.nvars)
        exp = max(self.terms, key=key)
        return exp, self.terms[exp]

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        _, lc = self.leading_term()
        return self.scale(1 / lc)

    def scale(self, c: Scalar) -> "Polynomial":
        c = as_rational(c)
        if not c:
            return self.ring.zero
        return Polynomial._raw(self.ring, {e: v * c for e, v in self.terms.items()})

    def in_ring(self, ring: PolyRing) -> "Polynomial":
        """Re-express in ``ring``, matching variables by name."""
        if ring.variables == self.ring.variables:
            return self if ring == self.ring else Polynomial._raw(ring, self.terms)
        used = set(self.variables_used())
        idx = [ring.index(v) if v in used else ring._index.get(v) for v in self.ring.variables]
        out = {}
        n = ring.nvars
        for exp, c in self.terms.items():
            new = [0] * n
            for i, e in zip(idx, exp):
                if e:
                    new[i] = e
            out[tuple(new)] = c
        return Polynomial._raw(ring, out)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring.variables != self.ring.variables:
                raise RingMismatchError(
                    f"ring mismatch: {self.ring.variables} vs {other.ring.variables}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Polynomial._raw(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result, base = self.ring.one, self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring.variables == other.ring.variables and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == self.ring.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.variables, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({to_string(self)!r})"

    def __str__(self):
        return to_string(self)

    def __call__(self, *point):
        return evaluate(self, point)


# -- operations ---------------------------------------------------------------


def ring_ops(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if a.ring.variables != b.ring.variables:
        raise RingMismatchError(f"ring mismatch: {a.ring.variables} vs {b.ring.variables}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown ring operation {op!r}")


def exact_divide(f: Polynomial, d: Polynomial) -> Polynomial:
    """Return q with q*d == f, or raise NotDivisibleError."""
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    f = d._coerce(f)
    order = GREVLEX
    key = order.key(f.ring.nvars)
    d_exp, d_c = d.leading_term(order)
    rem = dict(f.terms)
    quot: dict[Exponent, Fraction] = {}
    d_items = list(d.terms.items())
    while rem:
        exp = max(rem, key=key)
        if any(a < b for a, b in zip(exp, d_exp)):
            raise NotDivisibleError(f"{to_string(d)} does not divide {to_string(f)}")
        m = tuple(a - b for a, b in zip(exp, d_exp))
        c = rem[exp] / d_c
        quot[m] = c
        for de, dc in d_items:
            e = tuple(a + b for a, b in zip(m, de))
            v = rem.get(e, 0) - c * dc
            if v:
                rem[e] = v
            else:
                rem.pop(e, None)
    return Polynomial._raw(f.ring, quot)


def divides(d: Polynomial, f: Polynomial) -> bool:
    try:
        exact_divide(f, d)
    except NotDivisibleError:
        return False
    return True


def partial_derivative(f: Polynomial, var: str) -> Polynomial:
    i = f.ring.index(var)
    out = {}
    for exp, c in f.terms.items():
        if exp[i]:
            e = list(exp)
            e[i] -= 1
            out[tuple(e)] = c * exp[i]
    return Polynomial._raw(f.ring, out)


def taylor_shift(f: Polynomial, target: str, shift: str) -> Polynomial:
    """Replace ``target`` by ``target + shift`` and expand."""
    ti, si = f.ring.index(target), f.ring.index(shift)
    if ti == si:
        raise ValueError("target and shift variable must differ")
    out: dict[Exponent, Fraction] = {}
    for exp, c in f.terms.items():
        k = exp[ti]
        for j in range(k + 1):
            e = list(exp)
            e[ti] = k - j
            e[si] += j
            e = tuple(e)
            v = out.get(e, 0) + c * comb(k, j)
            if v:
                out[e] = v
            else:
                del out[e]
    return Polynomial._raw(f.ring, out)


def substitute(
    f: Polynomial,
    assignments: Mapping[str, Polynomial],
    target: PolyRing | None = None,
) -> Polynomial:
    """Simultaneously substitute polynomials for variables of ``f``.

    Unassigned variables map to the same-named variable of ``target``
    (which defaults to ``f.ring``).
    """
    target = target or f.ring
    for name in assignments:
        f.ring.index(name)
    images = []
    for i, name in enumerate(f.ring.variables):
        if name in assignments:
            img = assignments[name]
            if img.ring.variables != target.variables:
                img = img.in_ring(target)
            images.append(img)
        elif any(e[i] for e in f.terms):
            images.append(target.var(name))
        else:
            images.append(None)
    powers: list[dict[int, Polynomial]] = [{0: target.one, 1: img} for img in images]

    def power(i: int, k: int) -> Polynomial:
        cache = powers[i]
        if k not in cache:
            cache[k] = power(i, k - 1) * images[i]
        return cache[k]

    acc: dict[Exponent, Fraction] = {}
    for exp, c in f.terms.items():
        term = target.const(c)
        for i, e in enumerate(exp):
            if e:
                term = term * power(i, e)
        for te, tc in term.terms.items():
            v = acc.get(te, 0) + tc
            if v:
                acc[te] = v
            else:
                del acc[te]
    return Polynomial._raw(target, acc)


def evaluate(f: Polynomial, point: Sequence) -> Fraction:
    if len(point) != f.ring.nvars:
        raise ValueError(f"point has {len(point)} coordinates, ring has {f.ring.nvars}")
    point = [as_rational(v) for v in point]
    tables: list[list[Fraction]] = [[Fraction(1)] for _ in point]
    total = Fraction(0)
    for exp, c in f.terms.items():
        term = c
        for i, e in enumerate(exp):
            if e:
                table = tables[i]
                while len(table) <= e:
                    table.append(table[-1] * point[i])
                term *= table[e]
        total += term
    return total


def content_free(f: Polynomial) -> Polynomial:
    """Scale to the primitive integer polynomial with positive leading coefficient."""
    if f.is_zero():
        return f
    den = 1
    for c in f.terms.values():
        den = lcm(den, c.denominator)
    num = 0
    for c in f.terms.values():
        num = gcd(num, (c * den).numerator)
    g = f.scale(Fraction(den, num))
    if g.leading_term(GREVLEX)[1] < 0:
        g = -g
    return g


# -- printing ----------------------------------------------------------------


def _monomial_str(ring: PolyRing, exp: Exponent) -> str:
    parts = []
    for name, e in zip(ring.variables, exp):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def to_string(f: Polynomial) -> str:
    """Canonical text: terms in descending grevlex order, explicit '*' and '^'."""
    if f.is_zero():
        return "0"
    out = []
    for i, (exp, c) in enumerate(f.sorted_terms(GREVLEX)):
        mono = _monomial_str(f.ring, exp)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if i == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)
