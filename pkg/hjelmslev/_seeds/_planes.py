import logging
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .._errors import IdOutOfRange, NotAffine, NotProjective, UnsupportedOrder
from .._incidence import IncidenceStructure
from .._report import VerificationReport
from .._types import Axioms
from ._field import FieldSpec

logger = logging.getLogger(__name__)

ParallelClass = Tuple[int, ...]


class ProjectivePlane:
    """
    ProjectivePlane - a validated projective plane of order m

    m²+m+1 points and lines, m+1 points on every line and m+1 lines through
    every point. Build one from a field with projective_plane(), or wrap an
    externally supplied structure (any plane, Desarguesian or not) with
    ProjectivePlane.from_structure().
    """

    def __init__(self, structure: IncidenceStructure, order: int):
        self.structure = structure
        self.order = order

    @classmethod
    def from_structure(cls, structure: IncidenceStructure) -> "ProjectivePlane":
        """
        Raises:
            NotProjective: If the structure fails validate_projective_plane
        """
        report = validate_projective_plane(structure)
        if not report:
            axiom, witness = report.violations[0]
            raise NotProjective(f"not a projective plane: {axiom} {list(witness)}")
        return cls(structure, report.parameters[1])

    def __repr__(self):
        return f"ProjectivePlane(order={self.order})"


class AffinePlane:
    """
    AffinePlane - a validated affine plane of order m with its parallelism

    Holds m² points, m²+m lines and the m+1 parallel classes in canonical
    order: classes sorted by their lexicographically smallest line, lines
    within a class sorted lexicographically (lines compared as ascending
    point sequences). The numbering is what ConstructionChoices refers to,
    so it must be reproducible.
    """

    def __init__(self, structure: IncidenceStructure, parallel_classes: Optional[Sequence[Sequence[int]]] = None):
        """
        Args:
            structure: An affine plane
            parallel_classes: Known classes (any order); recovered with
                parallel_classes() when omitted

        Raises:
            NotAffine: If the structure is not an affine plane, or the classes
                are not a parallelism of mutually orthogonal classes
        """
        report = validate_affine_plane(structure)
        if not report:
            axiom, witness = report.violations[0]
            raise NotAffine(f"not an affine plane: {axiom} {list(witness)}")
        self.structure = structure
        self.order = report.parameters[1]

        classes = parallel_classes if parallel_classes is not None else _recover_classes(structure)
        self.parallel_classes: Tuple[ParallelClass, ...] = _canonical_classes(structure, classes)
        if len(self.parallel_classes) != self.order + 1 or any(len(c) != self.order for c in self.parallel_classes):
            raise NotAffine(f"expected {self.order + 1} parallel classes of {self.order} lines")
        for i, a in enumerate(self.parallel_classes):
            for b in self.parallel_classes[i + 1 :]:
                if not check_orthogonal_classes(structure, a, b):
                    raise NotAffine(f"parallel classes {list(a)} and {list(b)} are not orthogonal")

        self._class_of = {line: c for c, cls in enumerate(self.parallel_classes) for line in cls}

    @classmethod
    def from_structure(cls, structure: IncidenceStructure) -> "AffinePlane":
        return cls(structure)

    def class_of(self, line: int) -> int:
        """Index of the parallel class containing a line."""
        return self._class_of[line]

    def __repr__(self):
        return f"AffinePlane(order={self.order})"


def _line_key(structure: IncidenceStructure, line: int) -> Tuple[int, ...]:
    return tuple(sorted(structure.lines[line]))


def _canonical_classes(structure: IncidenceStructure, classes: Sequence[Sequence[int]]) -> Tuple[ParallelClass, ...]:
    ordered = [tuple(sorted(cls, key=lambda g: _line_key(structure, g))) for cls in classes]
    ordered.sort(key=lambda cls: _line_key(structure, cls[0]))
    return tuple(ordered)


def projective_plane(order: int, field: Optional[FieldSpec] = None) -> ProjectivePlane:
    """
    PG(2, q) by homogeneous coordinates.

    Points are the normalised non-zero triples (1,a,b), (0,1,b), (0,0,1) over
    GF(q), listed in that order; line j is the point with the same index read
    as dual coordinates, and a point lies on a line iff their dot product is 0.

    Args:
        order: The plane order q, a prime power
        field: The field to use; FieldSpec.for_order(order) when omitted

    Raises:
        UnsupportedOrder: If order is not a prime power or disagrees with field
        BadField: If the field description is invalid
    """
    if field is None:
        field = FieldSpec.for_order(order)
    elif field.order != order:
        raise UnsupportedOrder(f"plane order {order} does not match field order {field.order}")

    GF = field.galois_field
    q = order
    triples = [(1, a, b) for a in range(q) for b in range(q)]
    triples += [(0, 1, b) for b in range(q)]
    triples.append((0, 0, 1))
    coords = GF(np.array(triples, dtype=np.int64))

    on_line = np.asarray((coords @ coords.T) == 0)
    lines = [np.flatnonzero(on_line[:, j]) for j in range(len(triples))]
    structure = IncidenceStructure(len(triples), lines)
    logger.debug("generated PG(2,%d) over %r", q, field)
    return ProjectivePlane(structure, q)


def affine_from_projective(plane: ProjectivePlane, line: int) -> AffinePlane:
    """
    Delete a line and its points from a projective plane.

    Surviving points keep their relative order; surviving lines keep their
    relative order. Parallel classes are the surviving lines grouped by the
    deleted point they passed through. Point labels of the projective plane,
    if any, are carried over.

    Raises:
        IdOutOfRange: If line is not a line of the plane
    """
    s = plane.structure
    if line < 0 or line >= s.num_lines:
        raise IdOutOfRange(f"line {line} outside [0, {s.num_lines})")

    removed = s.lines[line]
    kept = [p for p in range(s.num_points) if p not in removed]
    new_id = {old: new for new, old in enumerate(kept)}

    lines: List[frozenset] = []
    groups: Dict[int, List[int]] = {}
    for g, points in enumerate(s.lines):
        if g == line:
            continue
        (infinite,) = points & removed
        groups.setdefault(infinite, []).append(len(lines))
        lines.append(frozenset(new_id[p] for p in points if p not in removed))

    labels = {new_id[p]: s.point_labels[p] for p in kept if p in s.point_labels}
    affine = IncidenceStructure(len(kept), lines, point_labels=labels)
    return AffinePlane(affine, list(groups.values()))


def projective_from_affine(plane: AffinePlane) -> ProjectivePlane:
    """
    Complete an affine plane with its points and line at infinity.

    Parallel class c gains the new point m²+c, which is added to each of its
    lines; the line at infinity is appended as the last line. Line ids of the
    affine plane are unchanged. When the affine plane is labelled, the new
    points are labelled "inf<c>".
    """
    m = plane.order
    s = plane.structure
    n = s.num_points
    lines = [points | {n + plane.class_of(g)} for g, points in enumerate(s.lines)]
    lines.append(frozenset(range(n, n + m + 1)))

    labels = dict(s.point_labels)
    if labels:
        labels.update({n + c: f"inf{c}" for c in range(m + 1)})
    return ProjectivePlane(IncidenceStructure(n + m + 1, lines, point_labels=labels), m)


def _recover_classes(structure: IncidenceStructure) -> Tuple[ParallelClass, ...]:
    """
    Partition the lines of an affine plane into parallel classes.

    Two lines share a class iff they are equal or disjoint. The classes are
    returned in canonical order (see AffinePlane).

    Raises:
        NotAffine: If "equal or disjoint" is not an equivalence relation, or a
            class does not cover every point exactly once
    """
    sizes = structure.intersection_sizes()
    parallel = sizes == 0
    np.fill_diagonal(parallel, True)

    classes: List[ParallelClass] = []
    assigned = np.zeros(structure.num_lines, dtype=bool)
    for g in range(structure.num_lines):
        if assigned[g]:
            continue
        members = np.flatnonzero(parallel[g])
        for h in members:
            if not np.array_equal(parallel[h], parallel[g]):
                other = int(np.flatnonzero(parallel[h] != parallel[g])[0])
                raise NotAffine(f"parallelism is not transitive: lines {g}, {int(h)}, {other}")
        covered = structure.incidence[members].sum(axis=0)
        if not np.all(covered == 1):
            raise NotAffine(f"parallel class of line {g} does not partition the points")
        assigned[members] = True
        classes.append(tuple(int(h) for h in members))

    return _canonical_classes(structure, classes)


def parallel_classes(plane: Union[AffinePlane, IncidenceStructure]) -> Tuple[ParallelClass, ...]:
    if isinstance(plane, AffinePlane):
        return plane.parallel_classes
    return _recover_classes(plane)


def check_orthogonal_classes(
    plane: Union[AffinePlane, IncidenceStructure], first: Sequence[int], second: Sequence[int]
) -> bool:
    """
    True iff every line of the first class meets every line of the second in
    exactly one point. A class is never orthogonal to itself.
    """
    structure = plane.structure if isinstance(plane, AffinePlane) else plane
    sizes = structure.intersection_sizes()
    return bool(np.all(sizes[np.ix_(list(first), list(second))] == 1))


def _first_pair(mask: np.ndarray) -> Optional[Tuple[int, int]]:
    hits = np.argwhere(np.triu(mask, 1))
    if len(hits) == 0:
        return None
    return int(hits[0][0]), int(hits[0][1])


def _join_table(structure: IncidenceStructure) -> np.ndarray:
    join = np.full((structure.num_points, structure.num_points), -1, dtype=np.int64)
    for g, line in enumerate(structure.lines):
        points = sorted(line)
        join[np.ix_(points, points)] = g
    return join


def validate_projective_plane(structure: IncidenceStructure) -> VerificationReport:
    """
    Check the projective-plane axioms: two distinct points lie on exactly one
    common line, two distinct lines meet in exactly one point, and there are
    four points with no three collinear.

    On pass the report's parameters are (1, m) with m the order (a
    projective plane is a (1, m) PH plane).
    """
    pair = _first_pair(structure.pair_counts() != 1)
    if pair:
        return VerificationReport.failed(Axioms.POINTS_JOINED, *pair)
    pair = _first_pair(structure.intersection_sizes() != 1)
    if pair:
        return VerificationReport.failed(Axioms.LINES_MEET, *pair)

    # With unique joins and meets, any triangle extends to a quadrangle
    # unless the structure is degenerate, so one greedy attempt decides it.
    n = structure.num_points
    if n < 4:
        return VerificationReport.failed(Axioms.QUADRANGLE, *range(n))
    join = _join_table(structure)
    a, b = 0, 1
    ab = structure.lines[join[a, b]]
    off = [p for p in range(n) if p not in ab]
    if not off:
        return VerificationReport.failed(Axioms.QUADRANGLE, int(join[a, b]))
    c = off[0]
    sides = ab | structure.lines[join[a, c]] | structure.lines[join[b, c]]
    if len(sides) == n:
        return VerificationReport.failed(Axioms.QUADRANGLE, a, b, c)

    m = len(structure.lines[0]) - 1
    if n != m * m + m + 1 or structure.num_lines != n:
        return VerificationReport.failed(Axioms.COUNTS, n, structure.num_lines)
    return VerificationReport(parameters=(1, m))


def validate_affine_plane(structure: IncidenceStructure) -> VerificationReport:
    """
    Check the affine-plane axioms: two distinct points lie on exactly one
    common line, through a point off a line there is exactly one parallel,
    and there are three non-collinear points.

    On pass the report's parameters are (1, m) with m the order.
    """
    pair = _first_pair(structure.pair_counts() != 1)
    if pair:
        return VerificationReport.failed(Axioms.POINTS_JOINED, *pair)

    incidence = structure.incidence.astype(np.int64)
    disjoint = (structure.intersection_sizes() == 0).astype(np.int64)
    parallels_through = disjoint @ incidence
    bad = np.argwhere((incidence == 0) & (parallels_through != 1))
    if len(bad):
        line, point = int(bad[0][0]), int(bad[0][1])
        return VerificationReport.failed(Axioms.PARALLEL, point, line)

    n = structure.num_points
    if n < 3:
        return VerificationReport.failed(Axioms.TRIANGLE, *range(n))
    first = min(structure.lines_through(0))
    if len(structure.lines[first]) == n:
        return VerificationReport.failed(Axioms.TRIANGLE, first)

    m = len(structure.lines[0])
    if n != m * m or structure.num_lines != m * m + m:
        return VerificationReport.failed(Axioms.COUNTS, n, structure.num_lines)
    return VerificationReport(parameters=(1, m))
