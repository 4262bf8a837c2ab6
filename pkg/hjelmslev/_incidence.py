import hashlib
import logging
from functools import cached_property
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ._config import get_settings
from ._errors import DuplicateLine, EmptyLine, FormatError, IdOutOfRange, PointOutOfRange
from ._types import Line, LineId, PointId

logger = logging.getLogger(__name__)

INC_MAGIC = "INC 1"


class IncidenceStructure:
    """
    IncidenceStructure - points and lines of a finite geometry

    The universal carrier for every geometry in the toolkit: projective and
    affine planes, Hjelmslev planes, quotients and neighbourhood restrictions.
    Points are the dense integers 0..num_points-1 and each line is a
    frozenset of point ids. Human-readable names (e.g. "(3,R)") live in the
    optional label maps and never in the incidence data.

    Instances are immutable; derived data (incidence matrix, bit masks,
    lines through each point) is computed once on first use and shared
    safely between threads.

    Usage:
        ```python
        from hjelmslev import IncidenceStructure

        fano = IncidenceStructure(7, [
            {0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5},
            {1, 4, 6}, {2, 3, 6}, {2, 4, 5},
        ])
        fano.lines_through(0)        # frozenset({0, 1, 2})
        fano.common_points(0, 3)     # frozenset({1})
        ```
    """

    def __init__(
        self,
        num_points: int,
        lines: Iterable[Iterable[int]],
        point_labels: Optional[Mapping[int, str]] = None,
        line_labels: Optional[Mapping[int, str]] = None,
        bitset_threshold: Optional[int] = None,
    ):
        """
        Creates a validated incidence structure.

        Args:
            num_points: Number of points; ids are 0..num_points-1
            lines: Point-id collections, one per line, in line-id order
            point_labels: Optional map point id -> label
            line_labels: Optional map line id -> label
            bitset_threshold: Largest point count that uses packed-bit
                intersections; defaults to HJELMSLEV_BITSET_THRESHOLD

        Raises:
            EmptyLine: If a line is empty or no lines are given
            PointOutOfRange: If a line mentions a point outside [0, num_points)
            DuplicateLine: If two lines have the same point set
        """
        if num_points < 0:
            raise ValueError(f"num_points must be non-negative, got {num_points}")

        frozen: List[Line] = []
        seen: Dict[Line, int] = {}
        for line_id, points in enumerate(lines):
            line = frozenset(int(p) for p in points)
            if not line:
                raise EmptyLine(f"line {line_id} is empty")
            bad = [p for p in line if p < 0 or p >= num_points]
            if bad:
                raise PointOutOfRange(f"line {line_id} contains point {min(bad)} outside [0, {num_points})")
            if line in seen:
                raise DuplicateLine(f"line {line_id} repeats line {seen[line]}: {sorted(line)}")
            seen[line] = line_id
            frozen.append(line)

        if not frozen:
            raise EmptyLine("a structure needs at least one line")

        self._num_points = num_points
        self._lines: Tuple[Line, ...] = tuple(frozen)
        self._point_labels = MappingProxyType(self._checked_labels(point_labels, num_points, "point"))
        self._line_labels = MappingProxyType(self._checked_labels(line_labels, len(frozen), "line"))
        if bitset_threshold is None:
            bitset_threshold = get_settings().bitset_threshold
        self._use_bits = num_points <= bitset_threshold

    @staticmethod
    def _checked_labels(labels: Optional[Mapping[int, str]], size: int, what: str) -> Dict[int, str]:
        if not labels:
            return {}
        out = {}
        for key, label in labels.items():
            key = int(key)
            if key < 0 or key >= size:
                raise IdOutOfRange(f"{what} label for unknown {what} {key}")
            label = str(label)
            if not label.strip() or "\n" in label:
                raise ValueError(f"{what} label for {key} must be a non-empty single-line string")
            out[key] = label
        return out

    @property
    def num_points(self) -> int:
        return self._num_points

    @property
    def num_lines(self) -> int:
        return len(self._lines)

    @property
    def lines(self) -> Tuple[Line, ...]:
        return self._lines

    @property
    def point_labels(self) -> Mapping[int, str]:
        return self._point_labels

    @property
    def line_labels(self) -> Mapping[int, str]:
        return self._line_labels

    def point_label(self, point: PointId) -> str:
        """Label of a point, falling back to its id."""
        return self._point_labels.get(point, str(point))

    def __repr__(self):
        return f"IncidenceStructure(points={self._num_points}, lines={len(self._lines)})"

    def __eq__(self, other):
        if not isinstance(other, IncidenceStructure):
            return NotImplemented
        return self._num_points == other._num_points and set(self._lines) == set(other._lines)

    def __hash__(self):
        return hash((self._num_points, frozenset(self._lines)))

    # -- derived data -------------------------------------------------------

    @cached_property
    def incidence(self) -> np.ndarray:
        """Boolean matrix of shape (num_lines, num_points)."""
        matrix = np.zeros((len(self._lines), self._num_points), dtype=bool)
        for line_id, line in enumerate(self._lines):
            matrix[line_id, list(line)] = True
        matrix.setflags(write=False)
        return matrix

    @cached_property
    def _point_lines(self) -> Tuple[FrozenSet[int], ...]:
        through: List[List[int]] = [[] for _ in range(self._num_points)]
        for line_id, line in enumerate(self._lines):
            for p in line:
                through[p].append(line_id)
        return tuple(frozenset(ids) for ids in through)

    @cached_property
    def _masks(self) -> Tuple[int, ...]:
        masks = []
        for line in self._lines:
            mask = 0
            for p in line:
                mask |= 1 << p
            masks.append(mask)
        return tuple(masks)

    @cached_property
    def _sorted(self) -> Tuple[np.ndarray, ...]:
        return tuple(np.array(sorted(line), dtype=np.int64) for line in self._lines)

    def line_sizes(self) -> np.ndarray:
        return self.incidence.sum(axis=1)

    def point_degrees(self) -> np.ndarray:
        return self.incidence.sum(axis=0)

    def intersection_sizes(self) -> np.ndarray:
        """
        Pairwise line intersection sizes as a (num_lines, num_lines) integer
        matrix; the diagonal holds the line sizes.
        """
        m = self.incidence.astype(np.float32)
        return np.rint(m @ m.T).astype(np.int64)

    def pair_counts(self) -> np.ndarray:
        """
        Number of common lines for every pair of points as a
        (num_points, num_points) integer matrix; the diagonal holds degrees.
        """
        m = self.incidence.astype(np.float32)
        return np.rint(m.T @ m).astype(np.int64)

    # -- queries ------------------------------------------------------------

    def _check_point(self, point: PointId) -> None:
        if point < 0 or point >= self._num_points:
            raise PointOutOfRange(f"point {point} outside [0, {self._num_points})")

    def _check_line(self, line: LineId) -> None:
        if line < 0 or line >= len(self._lines):
            raise IdOutOfRange(f"line {line} outside [0, {len(self._lines)})")

    def lines_through(self, point: PointId) -> FrozenSet[int]:
        """
        Ids of the lines incident with a point.

        Raises:
            PointOutOfRange: If the point does not exist
        """
        self._check_point(point)
        return self._point_lines[point]

    def common_points(self, g: LineId, h: LineId) -> FrozenSet[int]:
        """
        Points shared by two distinct lines.

        Raises:
            IdOutOfRange: If either line does not exist
            ValueError: If g == h
        """
        self._check_line(g)
        self._check_line(h)
        if g == h:
            raise ValueError("common_points needs two distinct lines")
        if self._use_bits:
            return frozenset(_iter_bits(self._masks[g] & self._masks[h]))
        return frozenset(int(p) for p in np.intersect1d(self._sorted[g], self._sorted[h], assume_unique=True))

    def common_lines(self, p: PointId, q: PointId) -> FrozenSet[int]:
        """
        Lines incident with both of two distinct points.

        Raises:
            PointOutOfRange: If either point does not exist
            ValueError: If p == q
        """
        self._check_point(p)
        self._check_point(q)
        if p == q:
            raise ValueError("common_lines needs two distinct points")
        return self._point_lines[p] & self._point_lines[q]

    # -- text codec ---------------------------------------------------------

    def to_text(self, labels: bool = True) -> str:
        """
        Canonical INC 1 text: lines sorted lexicographically, points within a
        line ascending, point labels (if any) in ascending id order.
        """
        rows = _canonical_rows(self._lines)
        out = [INC_MAGIC, f"points {self._num_points}", f"lines {len(rows)}"]
        out.extend(" ".join(str(p) for p in row) for row in rows)
        if labels and self._point_labels:
            out.append("labels")
            out.extend(f"{p} {self._point_labels[p]}" for p in sorted(self._point_labels))
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "IncidenceStructure":
        """
        Parse INC 1 text. Lines starting with "#" and blank lines are ignored.

        Raises:
            FormatError: With the 1-based line number of the first problem
        """
        rows = [(n, raw.strip()) for n, raw in enumerate(text.split("\n"), start=1)]
        rows = [(n, s) for n, s in rows if s and not s.startswith("#")]
        it: Iterator[Tuple[int, str]] = iter(rows)

        n, s = _next_row(it, "missing header")
        if s != INC_MAGIC:
            raise FormatError(n, f"expected {INC_MAGIC!r}, got {s!r}")
        num_points = _header_count(it, "points")
        num_lines = _header_count(it, "lines")

        lines: List[FrozenSet[int]] = []
        seen: Dict[FrozenSet[int], int] = {}
        for _ in range(num_lines):
            n, s = _next_row(it, f"expected {num_lines} line rows, found {len(lines)}")
            try:
                points = [int(tok) for tok in s.split()]
            except ValueError:
                raise FormatError(n, f"non-integer point in row {s!r}") from None
            if not points:
                raise FormatError(n, "empty line row")
            bad = [p for p in points if p < 0 or p >= num_points]
            if bad:
                raise FormatError(n, f"point {bad[0]} outside [0, {num_points})")
            line = frozenset(points)
            if len(line) != len(points):
                raise FormatError(n, "repeated point within a line")
            if line in seen:
                raise FormatError(n, f"duplicate line, first given on line {seen[line]}")
            seen[line] = n
            lines.append(line)

        labels: Dict[int, str] = {}
        rest = list(it)
        if rest:
            n, s = rest[0]
            if s != "labels":
                raise FormatError(n, f"unexpected content {s!r} after {num_lines} line rows")
            for n, s in rest[1:]:
                head, _, label = s.partition(" ")
                try:
                    point = int(head)
                except ValueError:
                    raise FormatError(n, f"bad label row {s!r}") from None
                if point < 0 or point >= num_points:
                    raise FormatError(n, f"label for point {point} outside [0, {num_points})")
                if point in labels:
                    raise FormatError(n, f"point {point} labelled twice")
                if not label.strip():
                    raise FormatError(n, f"missing label for point {point}")
                labels[point] = label.strip()

        if not lines:
            raise FormatError(0, "an INC document needs at least one line")
        return cls(num_points, lines, point_labels=labels)


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _canonical_rows(lines: Sequence[Iterable[int]]) -> List[Tuple[int, ...]]:
    return sorted(tuple(sorted(line)) for line in lines)


def _next_row(it: Iterator[Tuple[int, str]], missing: str) -> Tuple[int, str]:
    try:
        return next(it)
    except StopIteration:
        raise FormatError(0, missing) from None


def _header_count(it: Iterator[Tuple[int, str]], key: str) -> int:
    n, s = _next_row(it, f"missing '{key}' header")
    name, _, value = s.partition(" ")
    if name != key:
        raise FormatError(n, f"expected '{key} <count>', got {s!r}")
    try:
        count = int(value)
    except ValueError:
        raise FormatError(n, f"'{key}' needs an integer, got {value!r}") from None
    if count < 0:
        raise FormatError(n, f"'{key}' must be non-negative")
    return count


class CanonicalForm:
    """
    CanonicalForm - sorted representation of a structure plus its digest

    Two structures with the same set of lines over identically numbered
    points have the same digest, whatever their line order or labels.
    """

    def __init__(self, structure: IncidenceStructure, digest: str):
        self.structure = structure
        self.digest = digest

    def __repr__(self):
        return f"CanonicalForm(digest={self.digest[:12]}..., {self.structure!r})"

    def __eq__(self, other):
        if not isinstance(other, CanonicalForm):
            return NotImplemented
        return (
            self.digest == other.digest
            and self.structure.lines == other.structure.lines
            and dict(self.structure.point_labels) == dict(other.structure.point_labels)
        )

    def __hash__(self):
        return hash(self.digest)


def new_structure(num_points: int, lines: Iterable[Iterable[int]], **labels) -> IncidenceStructure:
    """
    Validate and build an IncidenceStructure (see IncidenceStructure.__init__).
    """
    return IncidenceStructure(num_points, lines, **labels)


def lines_through(structure: IncidenceStructure, point: PointId) -> FrozenSet[int]:
    return structure.lines_through(point)


def common_points(structure: IncidenceStructure, g: LineId, h: LineId) -> FrozenSet[int]:
    return structure.common_points(g, h)


def common_lines(structure: IncidenceStructure, p: PointId, q: PointId) -> FrozenSet[int]:
    return structure.common_lines(p, q)


def canonicalize(structure: IncidenceStructure) -> CanonicalForm:
    """
    Sort lines lexicographically (as ascending integer sequences) and hash
    the label-free INC text of the result with SHA-256.
    """
    order = sorted(range(structure.num_lines), key=lambda i: tuple(sorted(structure.lines[i])))
    line_labels = {new: structure.line_labels[old] for new, old in enumerate(order) if old in structure.line_labels}
    sorted_structure = IncidenceStructure(
        structure.num_points,
        [structure.lines[i] for i in order],
        point_labels=structure.point_labels,
        line_labels=line_labels,
    )
    digest = hashlib.sha256(sorted_structure.to_text(labels=False).encode("utf-8")).hexdigest()
    return CanonicalForm(sorted_structure, digest)


def parse_structure(text: str) -> IncidenceStructure:
    return IncidenceStructure.from_text(text)


def emit_structure(structure: IncidenceStructure) -> str:
    return structure.to_text()
