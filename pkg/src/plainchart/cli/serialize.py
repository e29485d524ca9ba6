"""JSON-ready dictionaries for patches, maps and atlases.

Polynomials are written as canonical strings and numbers as exact
``"p/q"`` strings, so output is diff-able and reloadable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from ..blowup import BlowupAtlas, BlowupChart, ShiftedGenerators
from ..geometry import AffinePatch, CenterSpec, RationalMap
from ..grobner import Ideal
from ..polycore import PolyRing, Polynomial, to_string
from .parser import parse_poly, parse_rational


def num(c: Fraction) -> str:
    return str(c)


def poly(p: Polynomial) -> str:
    return to_string(p)


def patch_to_dict(patch: AffinePatch) -> dict[str, Any]:
    return {
        "ring": list(patch.ring.variables),
        "inequalities": [poly(h) for h in patch.inequalities],
        "relations": [poly(g) for g in patch.relations.generators],
        "sample": [num(c) for c in patch.sample],
    }


def patch_from_dict(d: dict, ring: PolyRing | None = None) -> AffinePatch:
    ring = PolyRing(tuple(d["ring"])) if "ring" in d else ring
    if ring is None:
        raise ValueError("patch needs a ring")
    ineqs = [parse_poly(s, ring) for s in d.get("inequalities", [])]
    rels = Ideal(ring, [parse_poly(s, ring) for s in d.get("relations", [])])
    sample = d.get("sample")
    if sample is not None:
        sample = [parse_rational(c) for c in sample]
    return AffinePatch.make(ring, ineqs, rels, sample=sample)


def components_to_list(m: RationalMap) -> list[dict[str, str]]:
    return [{"num": poly(n), "den": poly(d)} for n, d in m.components]


def components_from_list(items, ring: PolyRing) -> list:
    out = []
    for item in items:
        if isinstance(item, str):
            out.append((parse_poly(item, ring), ring.one))
        elif isinstance(item, dict):
            out.append((parse_poly(item["num"], ring), parse_poly(item.get("den", "1"), ring)))
        else:
            n, d = item
            out.append((parse_poly(n, ring), parse_poly(d, ring)))
    return out


def map_to_dict(m: RationalMap) -> dict[str, Any]:
    return {
        "source": patch_to_dict(m.source),
        "target": patch_to_dict(m.target),
        "components": components_to_list(m),
    }


def map_from_dict(d: dict, check: bool = True) -> RationalMap:
    source = patch_from_dict(d["source"])
    target = patch_from_dict(d["target"])
    return RationalMap.make(source, target, components_from_list(d["components"], source.ring),
                            check=check)


def center_to_dict(c: CenterSpec) -> dict[str, Any]:
    return {
        "ambient": patch_to_dict(c.ambient),
        "subvariety": list(c.subvariety),
        "f": poly(c.f),
        "point": [num(v) for v in c.point],
        "shift_var": c.shift_var,
    }


def center_from_dict(d: dict) -> CenterSpec:
    ambient = patch_from_dict(d["ambient"])
    return CenterSpec(
        ambient,
        tuple(d["subvariety"]),
        parse_poly(d["f"], ambient.ring),
        tuple(parse_rational(v) for v in d["point"]),
        d.get("shift_var"),
    )


def atlas_to_dict(atlas: BlowupAtlas) -> dict[str, Any]:
    sg = atlas.generators
    return {
        "center": center_to_dict(atlas.center),
        "base": patch_to_dict(atlas.base),
        "shifted": {
            "f": [poly(p) for p in sg.f_list],
            "g": [poly(p) for p in sg.g_list],
            "h": [poly(p) for p in sg.h_list],
            "derivative": poly(sg.derivative),
        },
        "charts": [
            {
                "index": ch.index,
                "label": ch.label,
                "patch": patch_to_dict(ch.patch),
                "structure_map": components_to_list(ch.structure_map),
                "exceptional": poly(ch.exceptional),
                "fractions": list(ch.fractions),
                "shifted": ch.shifted,
            }
            for ch in atlas.charts
        ],
        "transitions": [
            {"from": i, "to": j, "map": map_to_dict(atlas.transitions[(i, j)])}
            for i, j in sorted(atlas.transitions)
        ],
        "ratios": [
            {"chart": i, "generator": k, "ratio": poly(atlas.ratios[(i, k)])}
            for i, k in sorted(atlas.ratios)
        ],
    }


def atlas_from_dict(d: dict) -> BlowupAtlas:
    """Rebuild an atlas; every map is re-validated on construction."""
    center = center_from_dict(d["center"])
    ring = center.ring
    base = patch_from_dict(d["base"])
    sh = d["shifted"]
    sg = ShiftedGenerators(
        center,
        tuple(parse_poly(s, ring) for s in sh["f"]),
        tuple(parse_poly(s, ring) for s in sh["g"]),
        tuple(parse_poly(s, ring) for s in sh["h"]),
        parse_poly(sh["derivative"], ring),
        base,
    )
    charts = []
    for cd in d["charts"]:
        patch = patch_from_dict(cd["patch"])
        smap = RationalMap.make(patch, base, components_from_list(cd["structure_map"], patch.ring))
        charts.append(BlowupChart(
            cd["index"], cd["label"], patch, smap, parse_poly(cd["exceptional"], patch.ring),
            tuple(cd["fractions"]), cd.get("shifted")))
    transitions = {(t["from"], t["to"]): map_from_dict(t["map"]) for t in d["transitions"]}
    ratios = {}
    for item in d["ratios"]:
        ch = charts[item["chart"]]
        ratios[(item["chart"], item["generator"])] = parse_poly(item["ratio"], ch.ring)
    return BlowupAtlas(base, center, sg, tuple(charts), transitions, ratios)
