"""Blow up A^3 along the elliptic curve z = x - x^3 + y^2 = 0 and print the atlas.

Also identifies each plain chart with the corresponding Rees chart and
checks that the ratio of inverted generators is a unit exactly on the
overlap.
"""

from plainchart.blowup import (
    overlap_unit_certificate,
    plain_blowup_atlas,
    rees_charts,
    rees_plain_correspondence,
    verify_atlas,
)
from plainchart.geometry import AffinePatch, CenterSpec
from plainchart.grobner import is_unit_on_patch
from plainchart.polycore import PolyRing, to_string


def main() -> None:
    ring = PolyRing(("x", "y", "z"))
    center = CenterSpec(AffinePatch.make(ring), ("z",), ring.parse("x - x^3 + y^2"),
                        (0, 0, 0), "x")
    atlas = plain_blowup_atlas(center, [["s"], ["t"]], "w")

    for ch in atlas.charts:
        print(f"chart {ch.index}: coordinates {', '.join(ch.ring.variables)}")
        for h in ch.patch.inequalities:
            print(f"  {to_string(h)} != 0")
        print(f"  exceptional divisor: {to_string(ch.exceptional)} = 0")

    for (i, j), m in sorted(atlas.transitions.items()):
        rho = atlas.ratios[(i, j)]
        print(f"overlap {i} -> {j}: {to_string(rho)} != 0")
        print(f"  unit on overlap: {overlap_unit_certificate(atlas, i, j)}, "
              f"unit on whole chart: {is_unit_on_patch(rho, atlas.charts[i].patch)}")

    for check in verify_atlas(atlas).checks:
        print(f"[{'PASS' if check.passed else 'FAIL'}] {check.name}")

    rees = rees_charts(atlas.base, atlas.generators.center_generators)
    for corr, rc in zip(rees_plain_correspondence(atlas, rees), rees):
        rels = ", ".join(to_string(g) for g in rc.relations.generators)
        print(f"Rees chart {corr.chart}: ({rels}) matches plain chart: {corr.equal}")


if __name__ == "__main__":
    main()
