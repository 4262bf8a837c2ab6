"""
hjelmslev

A toolkit for building and checking 2-uniform Hjelmslev planes from classical
seeds: a projective or affine plane of order m as the base, affine planes of
order m as point neighbourhoods, and orthogonal arrays OA(2, k, m) that decide
how neighbourhood lines are stitched together.

This package provides:
- IncidenceStructure: immutable points-and-lines carrier with a canonical
  text form (INC 1) and SHA-256 digests
- Seeds: PG(2,q) over any supported field, affine planes and their parallel
  classes, orthogonal arrays and their one-column completion
- construct_ph / construct_ah: the projective and affine constructions, driven
  by a replayable ConstructionChoices ledger
- truncate_ph / extend_ah: move between projective and affine Hjelmslev planes
- verify_ph / verify_ah / verify_2_uniform: axiom checks reporting verdicts,
  parameters (t, r) and witnesses
- restriction, quotient, fingerprint: the views used by the checks, exposed

Environment variables:
- HJELMSLEV_BITSET_THRESHOLD: largest point count using packed-bit line
  intersections (default 4096)
- HJELMSLEV_THREADS: worker threads for construction (default: all cores)
- HJELMSLEV_LOG_LEVEL: CLI log level (default WARNING)

Basic usage:
```python
from hjelmslev import (
    affine_from_projective,
    canonical_choices,
    construct_ph,
    oa_from_affine,
    projective_plane,
    verify_2_uniform,
    verify_ph,
)

base = projective_plane(3)                      # 13 points, 13 lines
affine = affine_from_projective(base, 0)        # AG(2,3)
oa = oa_from_affine(affine)                     # OA(2,4,3)

# One neighbourhood plane and one OA are broadcast to every point and line
choices = canonical_choices(base, [affine], [oa])
plane = construct_ph(base, [affine], [oa], choices)

plane.structure.num_points                      # 117
verify_ph(plane.structure).parameters           # (3, 3)
verify_2_uniform(plane.structure).uniformity    # 2
```

Replaying a construction:
```python
from hjelmslev import random_choices, read_artifact, write_artifact

choices = random_choices(base, [affine], [oa], seed=7)
write_artifact("h3.ch", choices)

# Later, or on another machine: same seeds + same ledger -> same plane
again = construct_ph(base, [affine], [oa], read_artifact("h3.ch"))
```

Affine planes and the round trip:
```python
from hjelmslev import construct_ah, extend_ah, truncate_ph, canonicalize

ah = construct_ah(affine, [affine], [oa.take_columns(range(3))],
                  canonical_choices(affine, [affine], [oa.take_columns(range(3))]))
ph = extend_ah(ah, [affine], oa)
back = truncate_ph(ph, len(ph.line_classes) - 1)
canonicalize(back.structure).digest == canonicalize(ah.structure).digest   # True
```

The same operations are available from the command line as `hjelmslev`
(see `hjelmslev --help`).
"""

from ._choices import ConstructionChoices, canonical_choices, random_choices
from ._config import Settings, configure, get_settings, reset_settings
from ._errors import (
    BadField,
    DuplicateLine,
    EmptyLine,
    FormatError,
    HjelmslevError,
    IdOutOfRange,
    Inconsistent,
    InvalidChoices,
    MissingProvenance,
    NotAffine,
    NotCompletable,
    NotProjective,
    NotProjectiveKind,
    NotTransitive,
    PointOutOfRange,
    ShapeError,
    SizeMismatch,
    UnsupportedOrder,
)
from ._hjelmslev import CompositePoint, HjelmslevPlane, Provenance, construct_ah, construct_ph, extend_ah, truncate_ph
from ._incidence import (
    CanonicalForm,
    IncidenceStructure,
    canonicalize,
    common_lines,
    common_points,
    emit_structure,
    lines_through,
    new_structure,
    parse_structure,
)
from ._io import read_artifact, write_artifact
from ._report import VerificationReport
from ._seeds import (
    AffinePlane,
    FieldSpec,
    OrthogonalArray,
    ProjectivePlane,
    affine_from_projective,
    check_orthogonal_classes,
    complete_oa,
    emit_oa,
    oa_from_affine,
    parallel_classes,
    parse_oa,
    projective_from_affine,
    projective_plane,
    validate_affine_plane,
    validate_oa,
    validate_projective_plane,
)
from ._types import Axioms, Kind
from ._verify import (
    Fingerprint,
    NeighbourPartition,
    Quotient,
    Restriction,
    detect_kind,
    fingerprint,
    neighbour_partition,
    parameters,
    quotient,
    restriction,
    verify_2_uniform,
    verify_ah,
    verify_ph,
)

__all__ = [
    "AffinePlane",
    "Axioms",
    "BadField",
    "CanonicalForm",
    "CompositePoint",
    "ConstructionChoices",
    "DuplicateLine",
    "EmptyLine",
    "FieldSpec",
    "Fingerprint",
    "FormatError",
    "HjelmslevError",
    "HjelmslevPlane",
    "IdOutOfRange",
    "IncidenceStructure",
    "Inconsistent",
    "InvalidChoices",
    "Kind",
    "MissingProvenance",
    "NeighbourPartition",
    "NotAffine",
    "NotCompletable",
    "NotProjective",
    "NotProjectiveKind",
    "NotTransitive",
    "OrthogonalArray",
    "PointOutOfRange",
    "ProjectivePlane",
    "Provenance",
    "Quotient",
    "Restriction",
    "Settings",
    "ShapeError",
    "SizeMismatch",
    "UnsupportedOrder",
    "VerificationReport",
    "affine_from_projective",
    "canonical_choices",
    "canonicalize",
    "check_orthogonal_classes",
    "common_lines",
    "common_points",
    "complete_oa",
    "configure",
    "construct_ah",
    "construct_ph",
    "detect_kind",
    "emit_oa",
    "emit_structure",
    "extend_ah",
    "fingerprint",
    "get_settings",
    "lines_through",
    "neighbour_partition",
    "new_structure",
    "oa_from_affine",
    "parallel_classes",
    "parameters",
    "parse_oa",
    "parse_structure",
    "projective_from_affine",
    "projective_plane",
    "quotient",
    "random_choices",
    "read_artifact",
    "reset_settings",
    "restriction",
    "truncate_ph",
    "validate_affine_plane",
    "validate_oa",
    "validate_projective_plane",
    "verify_2_uniform",
    "verify_ah",
    "verify_ph",
    "write_artifact",
]
