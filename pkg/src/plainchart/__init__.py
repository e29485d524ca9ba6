"""Exact plain charts for blowups of affine space along smooth centers."""

from .blowup import (
    BlowupAtlas,
    plain_blowup_atlas,
    rees_charts,
    rees_plain_correspondence,
    shifted_generators,
    transition_map,
    verify_atlas,
)
from .geometry import (
    AffinePatch,
    CenterSpec,
    RationalMap,
    compose,
    map_equal_on_patch,
    smoothness_check,
    validate_center,
)
from .grobner import (
    GroebnerBasis,
    Ideal,
    buchberger_reduced,
    elimination_ideal,
    ideal_equality,
    ideal_membership,
    is_unit_on_patch,
    normal_form,
)
from .polycore import GREVLEX, LEX, MonomialOrder, PolyRing, Polynomial
from .projection import (
    HypersurfaceModel,
    LinearProjection,
    ProjectionError,
    generic_projection,
    project_to_hypersurface,
    verify_local_iso,
)

__all__ = [
    "AffinePatch", "BlowupAtlas", "CenterSpec", "GREVLEX", "GroebnerBasis",
    "HypersurfaceModel", "Ideal", "LEX", "LinearProjection", "MonomialOrder",
    "PolyRing", "Polynomial", "ProjectionError", "RationalMap", "buchberger_reduced",
    "compose", "elimination_ideal", "generic_projection", "ideal_equality",
    "ideal_membership", "is_unit_on_patch", "map_equal_on_patch", "normal_form",
    "plain_blowup_atlas", "project_to_hypersurface", "rees_charts",
    "rees_plain_correspondence", "shifted_generators", "smoothness_check",
    "transition_map", "validate_center", "verify_atlas", "verify_local_iso",
]
