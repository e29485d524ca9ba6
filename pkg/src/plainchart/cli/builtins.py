"""Hard-coded worked examples, runnable via ``plainchart example <name>``."""

from __future__ import annotations

import copy

from .scenario import Scenario

_EXAMPLES: dict[str, dict] = {
    # circle x^2+y^2-1 = z = 0 near q = (1, 0, 0), straightened onto the u-axis
    "circle": {
        "ring": ["x", "y", "z"],
        "command": "verify-map",
        "payload": {
            "source": {
                "ring": ["x", "y", "z"],
                "relations": ["x^2+y^2-1", "z"],
                "inequalities": ["y+1"],
                "sample": ["1", "0", "0"],
            },
            "target": {
                "ring": ["u", "v", "w"],
                "relations": ["v", "w"],
                "inequalities": ["u^2-v+1"],
                "sample": ["1", "0", "0"],
            },
            "forward": [
                {"num": "x", "den": "y+1"},
                {"num": "x^2+y^2-1", "den": "y+1"},
                "z",
            ],
            "inverse": [
                {"num": "2*u", "den": "u^2-v+1"},
                {"num": "-u^2+v+1", "den": "u^2-v+1"},
                "w",
            ],
        },
    },
    # S = V(x-(x^2+z^2)y) minus V(1-xy) is isomorphic to A^2 minus V(u^2v^2+1)
    "surface-3-3": {
        "ring": ["x", "y", "z"],
        "command": "verify-map",
        "payload": {
            "source": {
                "ring": ["u", "v"],
                "inequalities": ["u^2*v^2+1"],
                "sample": ["0", "0"],
            },
            "target": {
                "ring": ["x", "y", "z"],
                "relations": ["x-(x^2+z^2)*y"],
                "inequalities": ["1-x*y"],
                "sample": ["0", "0", "0"],
            },
            "forward": [
                {"num": "u^2*v", "den": "u^2*v^2+1"},
                "v",
                {"num": "u", "den": "u^2*v^2+1"},
            ],
            "inverse": [
                {"num": "z", "den": "1-x*y"},
                "y",
            ],
        },
    },
    # the space curve y^2 = x^3-x, z^2 = y^3-y lies on z^2 = y(x^3-x-1)
    "space-curve-2-2": {
        "ring": ["x", "y", "z"],
        "command": "member",
        "payload": {
            "ideal": ["y^2-x^3+x", "z^2-y^3+y"],
            "polynomial": "z^2-y*(x^3-x-1)",
        },
    },
    # blowup of V(z) along the elliptic curve z = x-x^3+y^2 = 0 at the origin
    "elliptic-blowup": {
        "ring": ["x", "y", "z"],
        "command": "blowup",
        "payload": {
            "subvariety": ["z"],
            "f": "x-x^3+y^2",
            "point": ["0", "0", "0"],
            "shift_var": "x",
            "fraction_names": [["s"], ["t"]],
            "shifted_name": "w",
        },
    },
    # blowup of the plane at the origin: two charts, each an affine plane
    "a2-origin": {
        "ring": ["x", "y"],
        "command": "rees",
        "payload": {"generators": ["x", "y"]},
    },
}


def available() -> list[str]:
    return sorted(_EXAMPLES)


def builtin_examples(name: str) -> Scenario:
    try:
        data = _EXAMPLES[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; available: {', '.join(available())}") from None
    return Scenario.from_dict(copy.deepcopy(data))
