import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ._choices import BasePlane, ConstructionChoices, broadcast, check_choices, resolve_seeds
from ._config import get_settings
from ._errors import IdOutOfRange, MissingProvenance, NotProjectiveKind, SizeMismatch
from ._incidence import IncidenceStructure
from ._seeds import AffinePlane, OrthogonalArray, ProjectivePlane, complete_oa, projective_from_affine
from ._types import Kind
from ._verify import neighbour_partition, parameters

logger = logging.getLogger(__name__)


class CompositePoint(NamedTuple):
    """
    A point of a constructed plane as (base point, point of its neighbourhood
    plane). Flattened ids are base * m² + local.
    """

    base: int
    local: int

    def flatten(self, m: int) -> int:
        return self.base * m * m + self.local

    @classmethod
    def from_flat(cls, flat: int, m: int) -> "CompositePoint":
        base, local = divmod(flat, m * m)
        return cls(base, local)


class Provenance:
    """
    How a plane was built: the base plane, one neighbourhood plane per base
    point, one orthogonal array per base line (broadcasts already expanded),
    and the choices ledger.
    """

    def __init__(
        self,
        base: BasePlane,
        neighbourhoods: Sequence[AffinePlane],
        oas: Sequence[OrthogonalArray],
        choices: ConstructionChoices,
    ):
        self.base = base
        self.neighbourhoods = list(neighbourhoods)
        self.oas = list(oas)
        self.choices = choices

    def __repr__(self):
        return f"Provenance(base={self.base!r}, choices={self.choices!r})"


class HjelmslevPlane:
    """
    HjelmslevPlane - a (t, r) projective or affine Hjelmslev plane

    Holds the incidence structure, its neighbour classes (point classes
    indexed like the base points, line classes like the base lines), the
    parameters (t, r) and, for constructed planes, the provenance needed to
    rebuild or extend it.

    Usage:
        ```python
        from hjelmslev import construct_ph, canonical_choices, verify_ph

        choices = canonical_choices(base, [affine], [oa])
        plane = construct_ph(base, [affine], [oa], choices)
        plane.t, plane.r            # (3, 3) for order-3 seeds
        verify_ph(plane.structure).passed
        ```
    """

    def __init__(
        self,
        structure: IncidenceStructure,
        kind: str,
        t: int,
        r: int,
        point_classes: Sequence[Sequence[int]],
        line_classes: Sequence[Sequence[int]],
        provenance: Optional[Provenance] = None,
    ):
        if kind not in Kind.ALL:
            raise ValueError(f"kind must be one of {Kind.ALL}, got {kind!r}")
        self.structure = structure
        self.kind = kind
        self.t = t
        self.r = r
        self.point_classes: Tuple[Tuple[int, ...], ...] = tuple(tuple(c) for c in point_classes)
        self.line_classes: Tuple[Tuple[int, ...], ...] = tuple(tuple(c) for c in line_classes)
        self.provenance = provenance

    @classmethod
    def from_structure(cls, structure: IncidenceStructure, kind: str = Kind.PROJECTIVE) -> "HjelmslevPlane":
        """
        Wrap a bare structure (e.g. one read from a file): neighbour classes
        and parameters are recomputed, and there is no provenance.

        Raises:
            NotTransitive: If the neighbour relation is not an equivalence
            Inconsistent: If the parameters cannot be derived consistently
        """
        partition = neighbour_partition(structure, kind)
        t, r = parameters(structure, partition, kind)
        return cls(structure, kind, t, r, partition.point_classes, partition.line_classes)

    def __repr__(self):
        return (
            f"HjelmslevPlane({self.kind}, t={self.t}, r={self.r}, "
            f"points={self.structure.num_points}, lines={self.structure.num_lines})"
        )


def construct_ph(
    plane: ProjectivePlane,
    neighbourhoods: Sequence[AffinePlane],
    oas: Sequence[OrthogonalArray],
    choices: ConstructionChoices,
) -> HjelmslevPlane:
    """
    Build a 2-uniform (m, m) projective Hjelmslev plane.

    Every point of the order-m base plane is replaced by a copy of its
    neighbourhood plane. For every base line l and every row of the OA(2,m+1,m)
    of l, one line is emitted: the union, over the points P of l, of the
    neighbourhood line that the ledger maps to the row's symbol in the column
    labelled P. The result has (m²+m+1)·m² points and lines, m²+m points per
    line and m²+m lines per point.

    Args:
        plane: Base projective plane of order m
        neighbourhoods: Affine planes of order m, one per base point or one
            for all
        oas: OA(2, m+1, m), one per base line or one for all
        choices: The ledger of free choices

    Raises:
        SizeMismatch: If orders, shapes or list lengths disagree
        InvalidChoices: If the ledger does not fit the seeds
    """
    if not isinstance(plane, ProjectivePlane):
        raise SizeMismatch("construct_ph needs a ProjectivePlane base")
    return _construct(plane, neighbourhoods, oas, choices)


def construct_ah(
    plane: AffinePlane,
    neighbourhoods: Sequence[AffinePlane],
    oas: Sequence[OrthogonalArray],
    choices: ConstructionChoices,
) -> HjelmslevPlane:
    """
    Build a 2-uniform (m, m) affine Hjelmslev plane.

    Same assembly as construct_ph over an affine base plane of order m with
    OA(2, m, m) per base line: m⁴ points, (m²+m)·m² lines, m² points per line
    and m²+m lines per point.

    Raises:
        SizeMismatch: If orders, shapes or list lengths disagree
        InvalidChoices: If the ledger does not fit the seeds
    """
    if not isinstance(plane, AffinePlane):
        raise SizeMismatch("construct_ah needs an AffinePlane base")
    return _construct(plane, neighbourhoods, oas, choices)


def _construct(
    base: BasePlane,
    neighbourhoods: Sequence[AffinePlane],
    oas: Sequence[OrthogonalArray],
    choices: ConstructionChoices,
) -> HjelmslevPlane:
    kind, m, neighbourhoods, oas = resolve_seeds(base, neighbourhoods, oas)
    check_choices(base, neighbourhoods, choices)
    s = base.structure
    block = m * m

    # (point, class line) -> flattened points of that neighbourhood line
    def lookup(line: int, column: int, point: int) -> np.ndarray:
        by_symbol = choices.symbol_lines(line, column)
        local = neighbourhoods[point].structure.lines
        return np.array([sorted(local[by_symbol[x]]) for x in range(m)], dtype=np.int64) + point * block

    def assemble(line: int) -> List[FrozenSet[int]]:
        rows = oas[line].rows
        parts = [lookup(line, j, p)[rows[:, j]] for j, p in enumerate(choices.columns[line])]
        joined = np.concatenate(parts, axis=1)
        logger.debug("assembled %d lines for base line %d", len(joined), line)
        return [frozenset(int(x) for x in row) for row in joined]

    with ThreadPoolExecutor(max_workers=get_settings().threads) as pool:
        per_line = list(pool.map(assemble, range(s.num_lines)))

    lines = [g for group in per_line for g in group]
    labels = {
        CompositePoint(p, x).flatten(m): f"({s.point_label(p)},{neighbourhoods[p].structure.point_label(x)})"
        for p in range(s.num_points)
        for x in range(block)
    }
    structure = IncidenceStructure(s.num_points * block, lines, point_labels=labels)

    point_classes = [range(p * block, (p + 1) * block) for p in range(s.num_points)]
    line_classes = [range(l * block, (l + 1) * block) for l in range(s.num_lines)]
    logger.info(
        "constructed %s Hjelmslev plane of order %d: %d points, %d lines",
        kind,
        m,
        structure.num_points,
        structure.num_lines,
    )
    return HjelmslevPlane(
        structure, kind, m, m, point_classes, line_classes, Provenance(base, neighbourhoods, oas, choices)
    )


def truncate_ph(plane: HjelmslevPlane, line_class: int) -> HjelmslevPlane:
    """
    Turn a (t, r) PH plane into a (t, r) AH plane by deleting one line class
    and every point on its lines.

    Surviving points and lines keep their relative order and labels;
    surviving lines lose exactly their deleted points. The result carries no
    provenance.

    Raises:
        NotProjectiveKind: If the plane is affine
        IdOutOfRange: If line_class is not a line class of the plane
    """
    if plane.kind != Kind.PROJECTIVE:
        raise NotProjectiveKind("only projective Hjelmslev planes can be truncated")
    if line_class < 0 or line_class >= len(plane.line_classes):
        raise IdOutOfRange(f"line class {line_class} outside [0, {len(plane.line_classes)})")

    s = plane.structure
    dropped_lines = set(plane.line_classes[line_class])
    dropped_points = frozenset().union(*(s.lines[g] for g in dropped_lines))

    kept_points = [p for p in range(s.num_points) if p not in dropped_points]
    point_id = {old: new for new, old in enumerate(kept_points)}
    kept_lines = [g for g in range(s.num_lines) if g not in dropped_lines]
    line_id = {old: new for new, old in enumerate(kept_lines)}

    lines = [frozenset(point_id[p] for p in s.lines[g] if p not in dropped_points) for g in kept_lines]
    labels = {point_id[p]: s.point_labels[p] for p in kept_points if p in s.point_labels}
    structure = IncidenceStructure(len(kept_points), lines, point_labels=labels)

    point_classes = [[point_id[p] for p in c if p in point_id] for c in plane.point_classes]
    line_classes = [[line_id[g] for g in c] for i, c in enumerate(plane.line_classes) if i != line_class]
    logger.info("truncated line class %d: removed %d points", line_class, len(dropped_points))
    return HjelmslevPlane(
        structure, Kind.AFFINE, plane.t, plane.r, [c for c in point_classes if c], line_classes
    )


def extend_ah(
    plane: HjelmslevPlane,
    new_neighbourhoods: Sequence[AffinePlane],
    infinity_oa: OrthogonalArray,
) -> HjelmslevPlane:
    """
    Extend an affine Hjelmslev plane built by construct_ah to a projective
    one that truncates back to it.

    The base affine plane is completed with a point per parallel class and
    the line at infinity; each OA(2,m,m) gains a column (complete_oa) that is
    labelled by the new point of its line; the new points' neighbourhood
    planes give their classes to their m+1 lines canonically; the line at
    infinity reads infinity_oa. Truncating the result at the last line class
    (the line at infinity) gives back the input, digest for digest.

    Args:
        plane: An affine plane with provenance from construct_ah
        new_neighbourhoods: m+1 affine planes of order m (or one for all),
            for the points at infinity in class order
        infinity_oa: An OA(2, m+1, m) for the line at infinity

    Raises:
        MissingProvenance: If the plane was not produced by construct_ah
        SizeMismatch: If the new seeds do not have order m
        NotCompletable: If a per-line OA cannot be completed
    """
    prov = plane.provenance
    if plane.kind != Kind.AFFINE or prov is None or not isinstance(prov.base, AffinePlane):
        raise MissingProvenance("extend_ah needs an affine plane built by construct_ah")

    affine = prov.base
    m = affine.order
    n = affine.structure.num_points
    infinity_line = affine.structure.num_lines
    new_neighbourhoods = broadcast(new_neighbourhoods, m + 1, "neighbourhood planes at infinity")
    if any(p.order != m for p in new_neighbourhoods):
        raise SizeMismatch(f"neighbourhood planes at infinity must have order {m}")
    if infinity_oa.columns != m + 1 or infinity_oa.symbols != m:
        raise SizeMismatch(f"infinity OA must be OA(2,{m + 1},{m})")

    projective = projective_from_affine(affine)
    neighbourhoods = prov.neighbourhoods + new_neighbourhoods

    completed: Dict[int, OrthogonalArray] = {}
    for oa in prov.oas:
        if id(oa) not in completed:
            completed[id(oa)] = complete_oa(oa)
    oas = [completed[id(oa)] for oa in prov.oas] + [infinity_oa]

    old = prov.choices
    point_classes = {p: dict(a) for p, a in old.point_classes.items()}
    for c, cls in enumerate(affine.parallel_classes):
        through = sorted(cls) + [infinity_line]
        point_classes[n + c] = {l: i for i, l in enumerate(through)}

    def canonical_symbols(point: int, line: int) -> Dict[int, int]:
        chosen = neighbourhoods[point].parallel_classes[point_classes[point][line]]
        return {g: i for i, g in enumerate(chosen)}

    columns = {}
    symbols = {}
    for l, cols in old.columns.items():
        extra = n + affine.class_of(l)
        columns[l] = list(cols) + [extra]
        symbols[l] = list(old.symbols[l]) + [canonical_symbols(extra, l)]
    columns[infinity_line] = list(range(n, n + m + 1))
    symbols[infinity_line] = [canonical_symbols(p, infinity_line) for p in columns[infinity_line]]

    choices = ConstructionChoices(point_classes, columns, symbols, old.seed)
    logger.info("extending affine Hjelmslev plane of order %d by %d neighbourhoods at infinity", m, m + 1)
    return construct_ph(projective, neighbourhoods, oas, choices)
