import hashlib
import logging
from collections import Counter
from math import isqrt
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ._errors import Inconsistent, NotTransitive, PointOutOfRange
from ._incidence import IncidenceStructure
from ._report import VerificationReport, Violation
from ._seeds import validate_affine_plane, validate_projective_plane
from ._types import Axioms, Kind, Parameters

logger = logging.getLogger(__name__)

Classes = Tuple[Tuple[int, ...], ...]


class NeighbourPartition:
    """
    NeighbourPartition - point and line neighbour classes of a structure

    Classes are sorted by their smallest member, so class i of a constructed
    plane is the neighbourhood of base point (or base line) i.
    """

    def __init__(self, point_classes: Sequence[Sequence[int]], line_classes: Sequence[Sequence[int]]):
        self.point_classes: Classes = tuple(tuple(c) for c in point_classes)
        self.line_classes: Classes = tuple(tuple(c) for c in line_classes)
        self.point_class_of: Dict[int, int] = {p: i for i, c in enumerate(self.point_classes) for p in c}
        self.line_class_of: Dict[int, int] = {g: i for i, c in enumerate(self.line_classes) for g in c}

    def __repr__(self):
        return f"NeighbourPartition(point_classes={len(self.point_classes)}, line_classes={len(self.line_classes)})"


class Quotient:
    """
    Quotient - the image of a structure with every neighbour class collapsed

    point_map[p] is the image point of p (its point class); line_map[g] is
    the image line of g. class_lines[c] is the image line of line class c;
    two classes with the same image line collapse onto one.
    """

    def __init__(
        self,
        point_map: Sequence[int],
        line_map: Sequence[int],
        class_lines: Sequence[int],
        image: IncidenceStructure,
    ):
        self.point_map = tuple(point_map)
        self.line_map = tuple(line_map)
        self.class_lines = tuple(class_lines)
        self.image = image

    @property
    def collapsed(self) -> List[Tuple[int, int]]:
        """Pairs of line classes (a, b), a < b, that share an image line."""
        first: Dict[int, int] = {}
        pairs = []
        for c, line in enumerate(self.class_lines):
            if line in first:
                pairs.append((first[line], c))
            else:
                first[line] = c
        return pairs

    def __repr__(self):
        return f"Quotient({self.image!r})"


class Restriction:
    """
    Restriction - the lines of a structure seen inside one point class

    points are the neighbours of center (center included), ascending.
    lines are the distinct intersections of lines with that class having at
    least two points, sorted lexicographically; multiplicities[i] counts the
    lines of the structure restricting to lines[i].
    """

    def __init__(
        self,
        center: int,
        points: Sequence[int],
        lines: Sequence[Tuple[int, ...]],
        multiplicities: Sequence[int],
        point_labels: Optional[Mapping[int, str]] = None,
    ):
        self.center = center
        self.points = tuple(points)
        self.lines = tuple(tuple(g) for g in lines)
        self.multiplicities = tuple(multiplicities)
        self._point_labels = point_labels or {}

    def as_structure(self) -> IncidenceStructure:
        """
        The restriction on local ids 0..len(points)-1 (local id i is
        points[i]), keeping point labels.

        Raises:
            EmptyLine: If the restriction has no lines (singleton classes)
        """
        local = {p: i for i, p in enumerate(self.points)}
        labels = {local[p]: self._point_labels[p] for p in self.points if p in self._point_labels}
        return IncidenceStructure(len(self.points), [[local[p] for p in g] for g in self.lines], point_labels=labels)

    def __repr__(self):
        return f"Restriction(center={self.center}, points={len(self.points)}, lines={len(self.lines)})"


class Fingerprint:
    """
    Fingerprint - isomorphism-invariant summary of a structure

    Equal for isomorphic structures; unequal fingerprints prove
    non-isomorphism, equal ones prove nothing. Multisets are stored as
    sorted (value, count) pairs.

    Usage:
        ```python
        from hjelmslev import fingerprint

        if fingerprint(first) != fingerprint(second):
            print("not isomorphic")
        ```
    """

    def __init__(
        self,
        num_points: int,
        num_lines: int,
        line_sizes: Sequence[Tuple[int, int]],
        point_degrees: Sequence[Tuple[int, int]],
        point_class_sizes: Sequence[Tuple[int, int]],
        line_class_sizes: Sequence[Tuple[int, int]],
        intersections: Sequence[Tuple[int, int]],
    ):
        self.num_points = num_points
        self.num_lines = num_lines
        self.line_sizes = tuple(line_sizes)
        self.point_degrees = tuple(point_degrees)
        self.point_class_sizes = tuple(point_class_sizes)
        self.line_class_sizes = tuple(line_class_sizes)
        self.intersections = tuple(intersections)

    def _key(self):
        return (
            self.num_points,
            self.num_lines,
            self.line_sizes,
            self.point_degrees,
            self.point_class_sizes,
            self.line_class_sizes,
            self.intersections,
        )

    def to_text(self) -> str:
        def pairs(items):
            return " ".join(f"{v}x{c}" for v, c in items)

        return "\n".join(
            [
                f"points {self.num_points}",
                f"lines {self.num_lines}",
                f"line-sizes {pairs(self.line_sizes)}",
                f"point-degrees {pairs(self.point_degrees)}",
                f"point-classes {pairs(self.point_class_sizes)}",
                f"line-classes {pairs(self.line_class_sizes)}",
                f"intersections {pairs(self.intersections)}",
            ]
        ) + "\n"

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()

    def __eq__(self, other):
        if not isinstance(other, Fingerprint):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Fingerprint(points={self.num_points}, lines={self.num_lines}, digest={self.digest[:12]}...)"


def _histogram(values) -> Tuple[Tuple[int, int], ...]:
    return tuple(sorted(Counter(int(v) for v in values).items()))


def _first_pair(mask: np.ndarray) -> Optional[Tuple[int, int]]:
    hits = np.argwhere(np.triu(mask, 1))
    if len(hits) == 0:
        return None
    return int(hits[0][0]), int(hits[0][1])


def _classes_of(relation: np.ndarray, of_lines: bool) -> Classes:
    """
    Equivalence classes of a reflexive symmetric boolean relation.

    Raises:
        NotTransitive: With the first (a, b, c) where a~b, b~c but not a~c
    """
    classes: List[Tuple[int, ...]] = []
    assigned = np.zeros(len(relation), dtype=bool)
    for a in range(len(relation)):
        if assigned[a]:
            continue
        members = np.flatnonzero(relation[a])
        for b in members:
            differ = np.flatnonzero(relation[b] != relation[a])
            if len(differ):
                c = int(differ[0])
                if relation[b, c]:
                    raise NotTransitive((a, int(b), c), of_lines=of_lines)
                raise NotTransitive((int(b), a, c), of_lines=of_lines)
        assigned[members] = True
        classes.append(tuple(int(x) for x in members))
    return tuple(classes)


def detect_kind(structure: IncidenceStructure) -> str:
    """Projective when every two lines meet, affine otherwise."""
    sizes = structure.intersection_sizes()
    return Kind.PROJECTIVE if _first_pair(sizes == 0) is None else Kind.AFFINE


def neighbour_partition(structure: IncidenceStructure, kind: str = Kind.PROJECTIVE) -> NeighbourPartition:
    """
    Neighbour classes of points and lines.

    Points are neighbours iff they are equal or share at least two lines.
    Projective kind: lines are neighbours iff they are equal or share at
    least two points. Affine kind: lines are neighbours iff they meet the
    same point classes (in an affine Hjelmslev plane neighbouring lines may
    be disjoint, so the two-point relation is not an equivalence there).
    Transitivity is checked, never forced.

    Raises:
        NotTransitive: With a witness triple when a relation is not an
            equivalence
    """
    if kind not in Kind.ALL:
        raise ValueError(f"kind must be one of {Kind.ALL}, got {kind!r}")

    points_rel = structure.pair_counts() >= 2
    np.fill_diagonal(points_rel, True)
    point_classes = _classes_of(points_rel, of_lines=False)

    if kind == Kind.PROJECTIVE:
        lines_rel = structure.intersection_sizes() >= 2
        np.fill_diagonal(lines_rel, True)
        line_classes = _classes_of(lines_rel, of_lines=True)
    else:
        class_of = np.empty(structure.num_points, dtype=np.int64)
        for i, c in enumerate(point_classes):
            class_of[list(c)] = i
        groups: Dict[frozenset, List[int]] = {}
        for g, line in enumerate(structure.lines):
            groups.setdefault(frozenset(class_of[list(line)].tolist()), []).append(g)
        line_classes = tuple(tuple(g) for g in groups.values())

    return NeighbourPartition(point_classes, line_classes)


def quotient(structure: IncidenceStructure, partition: NeighbourPartition) -> Quotient:
    """
    Collapse every neighbour class to a single point or line.

    Image points are the point classes; the image line of a line class is
    the set of point classes its members meet. Line classes with equal
    images share one image line (see Quotient.collapsed).
    """
    point_map = [partition.point_class_of[p] for p in range(structure.num_points)]
    image_lines: List[frozenset] = []
    index: Dict[frozenset, int] = {}
    class_lines = []
    for members in partition.line_classes:
        hit = frozenset(point_map[p] for g in members for p in structure.lines[g])
        if hit not in index:
            index[hit] = len(image_lines)
            image_lines.append(hit)
        class_lines.append(index[hit])
    line_map = [class_lines[partition.line_class_of[g]] for g in range(structure.num_lines)]
    image = IncidenceStructure(len(partition.point_classes), image_lines)
    return Quotient(point_map, line_map, class_lines, image)


def _derive_parameters(
    structure: IncidenceStructure, partition: NeighbourPartition, kind: str
) -> Tuple[Optional[Parameters], Optional[Violation]]:
    sizes = structure.line_sizes()
    if len(set(sizes.tolist())) != 1:
        g = int(np.flatnonzero(sizes != sizes[0])[0])
        return None, (Axioms.LINE_SIZE, (g, int(sizes[g])))
    line_size = int(sizes[0])

    class_sizes = {len(c) for c in partition.point_classes} | {len(c) for c in partition.line_classes}
    t = isqrt(len(partition.point_classes[0]))
    if len(class_sizes) != 1 or t * t != len(partition.point_classes[0]):
        return None, (Axioms.CLASS_SIZE, tuple(sorted(class_sizes)))

    inter = structure.intersection_sizes()
    meets = set()
    for members in partition.line_classes:
        block = inter[np.ix_(members, members)]
        meets.update(block[~np.eye(len(members), dtype=bool)].tolist())
    if kind == Kind.AFFINE:
        meets.discard(0)
    if meets and meets != {t}:
        return None, (Axioms.PARAMETERS, (t, *sorted(meets)))

    s = line_size - t if kind == Kind.PROJECTIVE else line_size
    if s % t:
        return None, (Axioms.PARAMETERS, (t, line_size))
    r = s // t
    classes = len(partition.point_classes)
    expected = r * r + r + 1 if kind == Kind.PROJECTIVE else r * r
    if classes != expected:
        return None, (Axioms.PARAMETERS, (t, r, classes))
    return (t, r), None


def parameters(
    structure: IncidenceStructure, partition: NeighbourPartition, kind: Optional[str] = None
) -> Parameters:
    """
    (t, r) of a Hjelmslev plane, derived three ways and cross-checked:
    t from the class size t², t from the points shared by neighbouring lines,
    and r from the line size (t + r·t for projective kind, r·t for affine),
    which must also give r²+r+1 (projective) or r² (affine) point classes.
    kind defaults to the detected one (projective when every two lines meet).

    Raises:
        Inconsistent: If sizes are not uniform or the derivations disagree
    """
    if kind is None:
        kind = detect_kind(structure)
    found, violation = _derive_parameters(structure, partition, kind)
    if violation:
        axiom, witness = violation
        raise Inconsistent(f"cannot derive (t, r): {axiom} {list(witness)}")
    return found


def _quotient_violations(q: Quotient, kind: str) -> List[Violation]:
    collapsed = q.collapsed
    if collapsed:
        return [(Axioms.QUOTIENT_LINES, collapsed[0])]
    validate = validate_projective_plane if kind == Kind.PROJECTIVE else validate_affine_plane
    report = validate(q.image)
    return [(Axioms.QUOTIENT, witness) for _, witness in report.violations]


def verify_ph(structure: IncidenceStructure) -> VerificationReport:
    """
    Decide whether a structure is a projective Hjelmslev plane.

    Checks, in order: every two points share a line; every two lines meet;
    the neighbour relations are equivalences; line sizes and class sizes are
    uniform; neighbouring lines share exactly t points and others exactly
    one; the quotient is a projective plane; (t, r) are consistent. The
    first failing group is reported.
    """
    pair = _first_pair(structure.pair_counts() == 0)
    if pair:
        return VerificationReport.failed(Axioms.POINTS_JOINED, *pair)
    inter = structure.intersection_sizes()
    pair = _first_pair(inter == 0)
    if pair:
        return VerificationReport.failed(Axioms.LINES_MEET, *pair)
    return _verify_hjelmslev(structure, Kind.PROJECTIVE)


def verify_ah(structure: IncidenceStructure) -> VerificationReport:
    """
    Decide whether a structure is an affine Hjelmslev plane.

    Checks: every two points share a line; the neighbour relations are
    equivalences; lines sharing two points are neighbours; sizes are
    uniform; neighbouring lines share 0 or t points; the quotient is an
    affine plane; disjoint lines map to parallel lines; (t, r) are
    consistent.
    """
    pair = _first_pair(structure.pair_counts() == 0)
    if pair:
        return VerificationReport.failed(Axioms.POINTS_JOINED, *pair)
    return _verify_hjelmslev(structure, Kind.AFFINE)


def _verify_hjelmslev(structure: IncidenceStructure, kind: str) -> VerificationReport:
    try:
        partition = neighbour_partition(structure, kind)
    except NotTransitive as e:
        return VerificationReport.failed(Axioms.NEIGHBOUR_TRANSITIVE, *e.witness)

    inter = structure.intersection_sizes()
    class_of = np.array([partition.line_class_of[g] for g in range(structure.num_lines)])
    same = class_of[:, None] == class_of[None, :]

    if kind == Kind.AFFINE:
        pair = _first_pair((inter >= 2) & ~same)
        if pair:
            return VerificationReport.failed(Axioms.LINES_NEIGHBOUR, *pair)

    degrees = structure.point_degrees()
    if len(set(degrees.tolist())) != 1:
        p = int(np.flatnonzero(degrees != degrees[0])[0])
        return VerificationReport.failed(Axioms.POINT_DEGREE, p, int(degrees[p]))

    found, violation = _derive_parameters(structure, partition, kind)
    if violation and violation[0] != Axioms.PARAMETERS:
        return VerificationReport([violation])
    t = isqrt(len(partition.point_classes[0]))

    allowed = inter == t
    if kind == Kind.AFFINE:
        allowed |= inter == 0
    pair = _first_pair(same & ~allowed)
    if pair:
        return VerificationReport.failed(Axioms.NEIGHBOUR_LINES, *pair, int(inter[pair]))
    if kind == Kind.PROJECTIVE:
        pair = _first_pair(~same & (inter != 1))
        if pair:
            return VerificationReport.failed(Axioms.NON_NEIGHBOUR_LINES, *pair, int(inter[pair]))

    q = quotient(structure, partition)
    broken = _quotient_violations(q, kind)
    if broken:
        return VerificationReport(broken)

    if kind == Kind.AFFINE:
        image = q.image.intersection_sizes()
        lines = np.array(q.line_map)
        images_apart = (lines[:, None] == lines[None, :]) | (image[np.ix_(lines, lines)] == 0)
        pair = _first_pair((inter == 0) & ~images_apart)
        if pair:
            return VerificationReport.failed(Axioms.QUOTIENT_PARALLEL, *pair)

    if violation:
        return VerificationReport([violation])
    logger.info("verified %s Hjelmslev plane with (t, r) = %s", kind, found)
    return VerificationReport(parameters=found)


def restriction(structure: IncidenceStructure, point: int, kind: Optional[str] = None) -> Restriction:
    """
    Restrict every line to the neighbour class of a point.

    Intersections with fewer than two points are dropped; equal
    intersections are merged and counted.
    Only the point classes are used; kind (detected when omitted) selects
    how the partition is computed.

    Raises:
        PointOutOfRange: If the point does not exist
        NotTransitive: If the neighbour partition cannot be computed
    """
    if point < 0 or point >= structure.num_points:
        raise PointOutOfRange(f"point {point} outside [0, {structure.num_points})")
    if kind is None:
        kind = detect_kind(structure)
    partition = neighbour_partition(structure, kind)
    return _restrict(structure, partition, point)


def _restrict(structure: IncidenceStructure, partition: NeighbourPartition, point: int) -> Restriction:
    members = partition.point_classes[partition.point_class_of[point]]
    inside = frozenset(members)
    counts = Counter(
        tuple(sorted(line & inside)) for line in structure.lines if len(line & inside) >= 2
    )
    lines = sorted(counts)
    return Restriction(point, members, lines, [counts[g] for g in lines], structure.point_labels)


def verify_2_uniform(structure: IncidenceStructure, kind: Optional[str] = None) -> VerificationReport:
    """
    Decide whether a Hjelmslev plane is 2-uniform: every point class,
    restricted, is an affine plane of order t, and within each class every
    restricted line comes from the same number of lines.

    The plane check (verify_ph or verify_ah, chosen by kind or detected from
    whether all lines meet) runs first; its violations are kept, and the
    restriction checks still run whenever the neighbour partition exists.
    Restriction violations name the point class: (class, ...) for
    restriction-affine and (class, fewest, most) for
    restriction-multiplicity. A passing plane with t = 1 is an ordinary
    plane and reports uniformity 1.
    """
    if kind is None:
        kind = detect_kind(structure)
    base = verify_ph(structure) if kind == Kind.PROJECTIVE else verify_ah(structure)
    try:
        partition = neighbour_partition(structure, kind)
    except NotTransitive:
        return base

    sizes = {len(c) for c in partition.point_classes}
    if sizes == {1}:
        return VerificationReport(base.violations, base.parameters, uniformity=1)

    t = base.parameters[0] if base.parameters else isqrt(max(sizes))
    violations: List[Violation] = list(base.violations)
    for i, members in enumerate(partition.point_classes):
        r = _restrict(structure, partition, members[0])
        if not r.lines:
            violations.append((Axioms.RESTRICTION_AFFINE, (i,)))
            continue
        report = validate_affine_plane(r.as_structure())
        if not report:
            violations.extend((Axioms.RESTRICTION_AFFINE, (i, *w)) for _, w in report.violations)
        elif report.parameters[1] != t:
            violations.append((Axioms.RESTRICTION_AFFINE, (i, report.parameters[1])))
        if len(set(r.multiplicities)) != 1:
            violations.append((Axioms.RESTRICTION_MULTIPLICITY, (i, min(r.multiplicities), max(r.multiplicities))))

    if not violations:
        logger.info("verified 2-uniform %s Hjelmslev plane with (t, r) = %s", kind, base.parameters)
    return VerificationReport(violations, base.parameters, uniformity=2)


def fingerprint(structure: IncidenceStructure) -> Fingerprint:
    """
    Invariant summary: counts, line-size and point-degree multisets,
    neighbour-class size multisets (empty when the neighbour relations are
    not equivalences) and the distribution of pairwise line intersection
    sizes.
    """
    try:
        partition = neighbour_partition(structure, detect_kind(structure))
        point_classes = _histogram(len(c) for c in partition.point_classes)
        line_classes = _histogram(len(c) for c in partition.line_classes)
    except NotTransitive:
        point_classes, line_classes = (), ()
    inter = structure.intersection_sizes()
    upper = inter[np.triu_indices(structure.num_lines, 1)]
    return Fingerprint(
        structure.num_points,
        structure.num_lines,
        _histogram(structure.line_sizes()),
        _histogram(structure.point_degrees()),
        point_classes,
        line_classes,
        _histogram(upper),
    )
