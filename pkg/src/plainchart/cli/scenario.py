"""Scenario files and their execution.

A scenario is a JSON object::

    {"ring": ["x", "y", "z"], "command": "member",
     "payload": {...}, "options": {"order": "grevlex", "seed": 0, "budget": 10000}}

:func:`run_scenario` returns an :class:`Outcome` whose ``status`` is the
process exit code: 0 pass, 1 verification failure, 2 input error,
3 budget exceeded.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable

from .. import blowup, geometry, grobner, projection
from ..geometry import AffinePatch, CenterSpec, RationalMap
from ..grobner import BudgetExceededError, Ideal
from ..polycore import GREVLEX, LEX, PolyRing, UnknownVariableError, to_string
from . import serialize as ser
from .parser import ParseError, parse_poly, parse_rational

COMMANDS = ("blowup", "rees", "project", "verify-map", "member")

PASS, FAIL, INPUT_ERROR, BUDGET_EXCEEDED = 0, 1, 2, 3


class ScenarioError(ValueError):
    """Malformed scenario input."""


@dataclass
class Options:
    order: str = "grevlex"
    seed: int = 0
    budget: int = grobner.DEFAULT_BUDGET

    def __post_init__(self):
        if self.order not in ("grevlex", "lex"):
            raise ScenarioError(f"unknown order {self.order!r}")
        self.seed = int(self.seed)
        self.budget = int(self.budget)


@dataclass
class Scenario:
    ring: tuple[str, ...]
    command: str
    payload: dict
    options: Options = field(default_factory=Options)

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        if not isinstance(d, dict):
            raise ScenarioError("scenario must be a JSON object")
        missing = [k for k in ("ring", "command", "payload") if k not in d]
        if missing:
            raise ScenarioError(f"scenario is missing {', '.join(missing)}")
        if d["command"] not in COMMANDS:
            raise ScenarioError(f"unknown command {d['command']!r}; expected one of {COMMANDS}")
        opts = d.get("options") or {}
        unknown = set(opts) - {"order", "seed", "budget"}
        if unknown:
            raise ScenarioError(f"unknown options {sorted(unknown)}")
        return cls(tuple(d["ring"]), d["command"], dict(d["payload"]), Options(**opts))

    def to_dict(self) -> dict:
        return {
            "ring": list(self.ring),
            "command": self.command,
            "payload": self.payload,
            "options": {"order": self.options.order, "seed": self.options.seed,
                        "budget": self.options.budget},
        }

    @property
    def poly_ring(self) -> PolyRing:
        try:
            return PolyRing(self.ring, LEX if self.options.order == "lex" else GREVLEX)
        except ValueError as exc:
            raise ScenarioError(str(exc)) from None


def load_scenario(text: str) -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON: {exc}") from None
    return Scenario.from_dict(data)


@dataclass
class Outcome:
    status: int
    result: dict
    lines: list[str]

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def json(self) -> str:
        return json.dumps(self.result, indent=2) + "\n"

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


# -- payload helpers -----------------------------------------------------------------


def _polys(items, ring):
    if isinstance(items, str):
        raise ScenarioError("expected a list of polynomials")
    return [parse_poly(s, ring) for s in items]


def _point(items, ring):
    if items is None:
        return tuple(parse_rational(0) for _ in ring.variables)
    pt = tuple(parse_rational(c) for c in items)
    if len(pt) != ring.nvars:
        raise ScenarioError(f"point needs {ring.nvars} coordinates")
    return pt


def _patch(data: dict, default: PolyRing) -> AffinePatch:
    data = dict(data or {})
    ring = PolyRing(tuple(data["ring"]), default.order) if "ring" in data else default
    ineqs = _polys(data.get("inequalities", []), ring)
    rels = Ideal(ring, _polys(data.get("relations", []), ring))
    sample = data.get("sample")
    if sample is not None:
        sample = _point(sample, ring)
    return AffinePatch.make(ring, ineqs, rels, sample=sample)


def _check(name: str, passed: bool, detail: str = "") -> dict:
    return {"check": name, "passed": bool(passed), "detail": detail}


# -- commands --------------------------------------------------------------------------


def _run_blowup(s: Scenario):
    ring = s.poly_ring
    p = s.payload
    ambient = AffinePatch.make(ring, _polys(p.get("inequalities", []), ring),
                               sample=_point(p.get("point"), ring))
    center = CenterSpec(ambient, tuple(p.get("subvariety", [])), parse_poly(p["f"], ring),
                        _point(p.get("point"), ring), p.get("shift_var"))
    atlas = blowup.plain_blowup_atlas(center, p.get("fraction_names"),
                                      p.get("shifted_name", "w"))
    report = blowup.verify_atlas(atlas)
    result = {"command": "blowup", "ok": report.ok, "atlas": ser.atlas_to_dict(atlas),
              "report": report.as_dict()}
    lines = [f"blowup of V along f = {to_string(atlas.center.f)}, "
             f"{', '.join(atlas.center.subvariety) or '(no subvariety variables)'} = 0; "
             f"shift variable {atlas.center.shift_var}"]
    lines.append(f"V: {_describe(atlas.base)}")
    for ch in atlas.charts:
        lines.append(f"chart {ch.index} (inverts {ch.label}) coordinates "
                     f"({', '.join(ch.ring.variables)})")
        for v, (n, _) in zip(atlas.center.ring.variables, ch.structure_map.components):
            lines.append(f"  {v} = {to_string(n)}")
        for h in ch.patch.inequalities:
            lines.append(f"  {to_string(h)} != 0")
        lines.append(f"  exceptional: {to_string(ch.exceptional)} = 0")
    for (i, j), m in sorted(atlas.transitions.items()):
        lines.append(f"transition {i} -> {j} on {_describe(m.source)}")
        for v, (n, d) in zip(m.target.ring.variables, m.components):
            lines.append(f"  {v} = {_frac(n, d)}")
    lines += _report_lines(report.as_dict())
    return (PASS if report.ok else FAIL), result, lines


def _run_rees(s: Scenario):
    ring = s.poly_ring
    p = s.payload
    base = AffinePatch.make(ring, _polys(p.get("inequalities", []), ring))
    gens = _polys(p["generators"], ring)
    charts = blowup.rees_charts(base, gens, p.get("prefix", "x_"))
    out, checks, lines = [], [], []
    for i, rc in enumerate(charts):
        free = blowup.polynomial_ring_certificate(rc.relations)
        cring = rc.patch.ring
        extra = [v for v in cring.variables if v not in ring.variables]
        others = [k for k in range(len(gens)) if k != i]
        # a_i * x_k - a_k must hold on the chart
        expected = [gens[i].in_ring(cring) * cring.var(v) - gens[k].in_ring(cring)
                    for v, k in zip(extra, others)]
        ok = all(grobner.ideal_membership(e, rc.relations) for e in expected)
        checks.append(_check(f"chart {i + 1} ratio relations", ok))
        out.append({
            "index": i + 1,
            "patch": ser.patch_to_dict(rc.patch),
            "relations": [to_string(g) for g in rc.relations.generators],
            "polynomial_ring_in": list(free) if free is not None else None,
        })
        lines.append(f"chart {i + 1}: coordinates ({', '.join(cring.variables)})")
        for g in rc.relations.generators:
            lines.append(f"  {to_string(g)} = 0")
        if free is not None:
            lines.append(f"  coordinate ring is polynomial in {', '.join(free)}")
    ok = all(c["passed"] for c in checks)
    lines += _report_lines(checks)
    return (PASS if ok else FAIL), {"command": "rees", "ok": ok, "charts": out,
                                    "report": checks}, lines


def _run_project(s: Scenario):
    ring = s.poly_ring
    p = s.payload
    Z = Ideal(ring, _polys(p["ideal"], ring))
    q = _point(p.get("point"), ring)
    dim = int(p["dim"])
    result: dict[str, Any] = {"command": "project"}
    try:
        if "matrix" in p:
            proj = projection.LinearProjection.of(
                [[parse_rational(v) for v in row] for row in p["matrix"]])
            model = projection.check_projection(Z, proj, q)
        else:
            proj, model = projection.project_to_hypersurface(Z, dim, q, seed=s.options.seed)
    except projection.ProjectionError as exc:
        mode = exc.last_mode or exc.mode
        result.update(ok=False, failure=mode, detail=str(exc))
        return FAIL, result, [f"projection rejected: {exc}"]
    result.update(
        ok=True,
        matrix=[[str(v) for v in row] for row in proj.matrix],
        hypersurface=to_string(model.H),
        image_ring=list(model.H.ring.variables),
        image_point=[str(v) for v in model.image_point],
        inverse=ser.components_to_list(model.inverse),
        patch=ser.patch_to_dict(model.patch),
    )
    lines = ["projection matrix: " + "; ".join(" ".join(str(v) for v in row)
                                               for row in proj.matrix),
             f"H = {to_string(model.H)}",
             f"W: {_describe(model.patch)}"]
    for v, (n, d) in zip(ring.variables, model.inverse.components):
        lines.append(f"  {v} = {_frac(n, d)}")
    lines.append("local isomorphism certified")
    return PASS, result, lines


def _run_verify_map(s: Scenario):
    ring = s.poly_ring
    p = s.payload
    source = _patch(p.get("source"), ring)
    target = _patch(p.get("target"), ring)
    checks = []
    fwd = RationalMap.make(source, target,
                           ser.components_from_list(p["forward"], source.ring))
    checks.append(_check("forward lands in target", geometry.lands_in_target(fwd)))
    if "inverse" in p:
        inv = RationalMap.make(target, source,
                               ser.components_from_list(p["inverse"], target.ring))
        checks.append(_check("inverse lands in source", geometry.lands_in_target(inv)))
        checks.append(_check("inverse o forward = id",
                             geometry.map_equal_on_patch(geometry.compose(inv, fwd),
                                                         geometry.identity_map(source))))
        checks.append(_check("forward o inverse = id",
                             geometry.map_equal_on_patch(geometry.compose(fwd, inv),
                                                         geometry.identity_map(target))))
    if "expected" in p:
        exp = RationalMap.make(source, target,
                               ser.components_from_list(p["expected"], source.ring))
        checks.append(_check("forward = expected", geometry.map_equal_on_patch(fwd, exp)))
    ok = all(c["passed"] for c in checks)
    result = {"command": "verify-map", "ok": ok, "source": ser.patch_to_dict(source),
              "target": ser.patch_to_dict(target), "report": checks}
    lines = [f"source: {_describe(source)}", f"target: {_describe(target)}"]
    lines += _report_lines(checks)
    return (PASS if ok else FAIL), result, lines


def _run_member(s: Scenario):
    ring = s.poly_ring
    p = s.payload
    I = Ideal(ring, _polys(p["ideal"], ring))
    f = parse_poly(p["polynomial"], ring)
    ineqs = _polys(p.get("inequalities", []), ring)
    member = grobner.ideal_membership(f, I, ineqs)
    G = grobner.buchberger_reduced(I)
    nf = grobner.normal_form(f, G)
    result = {"command": "member", "ok": member, "member": member,
              "basis": [to_string(g) for g in G.basis], "normal_form": to_string(nf)}
    lines = [f"basis ({s.options.order}): " + ", ".join(to_string(g) for g in G.basis),
             f"normal form of {to_string(f)}: {to_string(nf)}",
             f"member: {'yes' if member else 'no'}"]
    return (PASS if member else FAIL), result, lines


HANDLERS: dict[str, Callable] = {
    "blowup": _run_blowup,
    "rees": _run_rees,
    "project": _run_project,
    "verify-map": _run_verify_map,
    "member": _run_member,
}


def _describe(patch: AffinePatch) -> str:
    parts = [f"{to_string(g)} = 0" for g in patch.relations.generators]
    parts += [f"{to_string(h)} != 0" for h in patch.inequalities]
    coords = ", ".join(patch.ring.variables)
    return f"({coords})" + (": " + ", ".join(parts) if parts else ": all of affine space")


def _frac(n, d) -> str:
    return to_string(n) if d == 1 else f"({to_string(n)})/({to_string(d)})"


def _report_lines(checks: list[dict]) -> list[str]:
    return [f"[{'PASS' if c['passed'] else 'FAIL'}] {c['check']}"
            + (f": {c['detail']}" if c.get("detail") else "") for c in checks]


def run_scenario(s: Scenario) -> Outcome:
    try:
        with grobner.budget(s.options.budget):
            status, result, lines = HANDLERS[s.command](s)
    except BudgetExceededError as exc:
        return Outcome(BUDGET_EXCEEDED, {"command": s.command, "ok": False, "error": str(exc)},
                       [f"error: {exc}"])
    except (ParseError, ScenarioError, geometry.CenterError, geometry.PatchError,
            geometry.MapError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        if isinstance(exc, KeyError) and not isinstance(exc, UnknownVariableError):
            msg = f"missing field {msg!r}"
        error = {"command": s.command, "ok": False, "error": f"{type(exc).__name__}: {msg}"}
        if isinstance(exc, geometry.CenterError) and exc.suggestions:
            error["suggestions"] = list(exc.suggestions)
        return Outcome(INPUT_ERROR, error, [f"error: {error['error']}"])
    return Outcome(status, result, lines)
