from ._field import FieldSpec
from ._orthogonal_array import OrthogonalArray, complete_oa, emit_oa, oa_from_affine, parse_oa, validate_oa
from ._planes import (
    AffinePlane,
    ProjectivePlane,
    affine_from_projective,
    check_orthogonal_classes,
    parallel_classes,
    projective_from_affine,
    projective_plane,
    validate_affine_plane,
    validate_projective_plane,
)
