import hashlib
import logging
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np

from ._errors import FormatError, InvalidChoices, SizeMismatch
from ._seeds import AffinePlane, OrthogonalArray, ProjectivePlane
from ._types import Kind

logger = logging.getLogger(__name__)

CHOICES_MAGIC = "CHOICES 1"

BasePlane = Union[ProjectivePlane, AffinePlane]
T = TypeVar("T")


class ConstructionChoices:
    """
    ConstructionChoices - the ledger of every free choice in line assembly

    The constructor makes no decision of its own; everything it picks is
    recorded here, so a plane can be rebuilt bit for bit from its seeds and
    this ledger:
    - point_classes[P][l]: for base point P and base line l through P, the
      index of the parallel class of the neighbourhood plane at P that l uses.
      Distinct lines through P must use distinct classes.
    - columns[l]: the points of base line l labelling the columns of the
      orthogonal array used for l, in column order.
    - symbols[l][j]: for column j of line l, a map from the line ids of the
      chosen parallel class (ids in the neighbourhood plane) to OA symbols.
    - seed: the seed the ledger was drawn with, when random.

    Usage:
        ```python
        from hjelmslev import canonical_choices, random_choices

        ledger = canonical_choices(base, [affine], [oa])
        other = random_choices(base, [affine], [oa], seed=7)
        print(ledger.to_text())
        ```
    """

    def __init__(
        self,
        point_classes: Mapping[int, Mapping[int, int]],
        columns: Mapping[int, Sequence[int]],
        symbols: Mapping[int, Sequence[Mapping[int, int]]],
        seed: Optional[int] = None,
    ):
        self.point_classes: Dict[int, Dict[int, int]] = {
            int(p): {int(l): int(c) for l, c in sorted(m.items())} for p, m in sorted(point_classes.items())
        }
        self.columns: Dict[int, Tuple[int, ...]] = {int(l): tuple(int(p) for p in cols) for l, cols in sorted(columns.items())}
        self.symbols: Dict[int, Tuple[Dict[int, int], ...]] = {
            int(l): tuple({int(g): int(s) for g, s in sorted(m.items())} for m in maps)
            for l, maps in sorted(symbols.items())
        }
        self.seed = seed

    def symbol_lines(self, line: int, column: int) -> Dict[int, int]:
        """Inverse of symbols[line][column]: OA symbol -> neighbourhood line id."""
        return {s: g for g, s in self.symbols[line][column].items()}

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode("utf-8")).hexdigest()

    def __eq__(self, other):
        if not isinstance(other, ConstructionChoices):
            return NotImplemented
        return self.to_text() == other.to_text()

    def __hash__(self):
        return hash(self.to_text())

    def __repr__(self):
        seed = f", seed={self.seed}" if self.seed is not None else ""
        return f"ConstructionChoices(points={len(self.point_classes)}, lines={len(self.columns)}{seed})"

    def to_text(self) -> str:
        out = [CHOICES_MAGIC]
        for p, assignment in self.point_classes.items():
            out.append(f"point {p}: " + " ".join(f"{l}->{c}" for l, c in assignment.items()))
        for l, cols in self.columns.items():
            parts = ["columns " + " ".join(str(p) for p in cols)]
            for mapping in self.symbols[l]:
                parts.append("symbols " + " ".join(f"{g}->{s}" for g, s in mapping.items()))
            out.append(f"line {l}: " + "; ".join(parts))
        if self.seed is not None:
            out.append(f"seed {self.seed}")
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ConstructionChoices":
        """
        Parse CHOICES 1 text.

        Raises:
            FormatError: With the 1-based line number of the first problem
        """
        rows = [(n, s.strip()) for n, s in enumerate(text.split("\n"), start=1)]
        rows = [(n, s) for n, s in rows if s and not s.startswith("#")]
        if not rows or rows[0][1] != CHOICES_MAGIC:
            raise FormatError(rows[0][0] if rows else 0, f"expected {CHOICES_MAGIC!r} header")

        point_classes: Dict[int, Dict[int, int]] = {}
        columns: Dict[int, List[int]] = {}
        symbols: Dict[int, List[Dict[int, int]]] = {}
        seed = None
        for n, s in rows[1:]:
            try:
                if s.startswith("point "):
                    head, _, body = s.partition(":")
                    point = int(head.split()[1])
                    if point in point_classes:
                        raise FormatError(n, f"point {point} given twice")
                    point_classes[point] = _arrows(body)
                elif s.startswith("line "):
                    head, _, body = s.partition(":")
                    line = int(head.split()[1])
                    if line in columns:
                        raise FormatError(n, f"line {line} given twice")
                    parts = [part.strip() for part in body.split(";")]
                    if not parts or not parts[0].startswith("columns"):
                        raise ValueError("missing columns")
                    columns[line] = [int(tok) for tok in parts[0].split()[1:]]
                    maps = []
                    for part in parts[1:]:
                        keyword, _, arrows = part.partition(" ")
                        if keyword != "symbols":
                            raise ValueError(f"unexpected section {keyword!r}")
                        maps.append(_arrows(arrows))
                    if len(maps) != len(columns[line]):
                        raise ValueError("one 'symbols' group per column is required")
                    symbols[line] = maps
                elif s.startswith("seed "):
                    seed = int(s.split()[1])
                else:
                    raise ValueError(f"unexpected row {s!r}")
            except (IndexError, ValueError) as e:
                raise FormatError(n, f"malformed choices row: {e}") from None
        return cls(point_classes, columns, symbols, seed)


def _arrows(body: str) -> Dict[int, int]:
    out = {}
    for tok in body.split():
        left, sep, right = tok.partition("->")
        if not sep:
            raise ValueError(f"expected 'a->b', got {tok!r}")
        out[int(left)] = int(right)
    return out


def broadcast(items: Sequence[T], count: int, what: str) -> List[T]:
    """
    Expand a length-1 list to count entries; accept a list of exactly count.

    Raises:
        SizeMismatch: For any other length
    """
    items = list(items)
    if len(items) == 1:
        return items * count
    if len(items) != count:
        raise SizeMismatch(f"expected 1 or {count} {what}, got {len(items)}")
    return items


def resolve_seeds(
    base: BasePlane, neighbourhoods: Sequence[AffinePlane], oas: Sequence[OrthogonalArray]
) -> Tuple[str, int, List[AffinePlane], List[OrthogonalArray]]:
    """
    Check seed sizes and apply the broadcast rule.

    Returns:
        (kind, m, one neighbourhood plane per base point, one OA per base line)

    Raises:
        SizeMismatch: If orders, OA shapes or list lengths disagree
    """
    if isinstance(base, ProjectivePlane):
        kind, columns = Kind.PROJECTIVE, base.order + 1
    elif isinstance(base, AffinePlane):
        kind, columns = Kind.AFFINE, base.order
    else:
        raise SizeMismatch(f"base must be a ProjectivePlane or AffinePlane, got {type(base).__name__}")

    m = base.order
    neighbourhoods = broadcast(neighbourhoods, base.structure.num_points, "neighbourhood planes")
    oas = broadcast(oas, base.structure.num_lines, "orthogonal arrays")
    for p, plane in enumerate(neighbourhoods):
        if plane.order != m:
            raise SizeMismatch(f"neighbourhood plane for point {p} has order {plane.order}, expected {m}")
    for l, oa in enumerate(oas):
        if oa.symbols != m or oa.columns != columns:
            raise SizeMismatch(
                f"orthogonal array for line {l} is OA(2,{oa.columns},{oa.symbols}), expected OA(2,{columns},{m})"
            )
    return kind, m, neighbourhoods, oas


def canonical_choices(
    base: BasePlane, neighbourhoods: Sequence[AffinePlane], oas: Sequence[OrthogonalArray]
) -> ConstructionChoices:
    """
    Deterministic ledger: the lines through each base point, in line-id
    order, take the parallel classes in canonical class order; OA columns are
    labelled by the points of the line in ascending order; the lines of each
    chosen class take symbols 0..m-1 in lexicographic line order.

    Raises:
        SizeMismatch: If the seeds do not fit together
    """
    _, m, neighbourhoods, _ = resolve_seeds(base, neighbourhoods, oas)
    s = base.structure
    point_classes = {p: {l: c for c, l in enumerate(sorted(s.lines_through(p)))} for p in range(s.num_points)}
    columns = {l: sorted(s.lines[l]) for l in range(s.num_lines)}
    symbols = {
        l: [
            {g: i for i, g in enumerate(neighbourhoods[p].parallel_classes[point_classes[p][l]])}
            for p in columns[l]
        ]
        for l in range(s.num_lines)
    }
    return ConstructionChoices(point_classes, columns, symbols)


def random_choices(
    base: BasePlane, neighbourhoods: Sequence[AffinePlane], oas: Sequence[OrthogonalArray], seed: int
) -> ConstructionChoices:
    """
    Seeded ledger drawn with numpy's default generator: a random class
    bijection per base point, a random column order per base line and a
    random symbol bijection per (line, point). The same seed always gives the
    same ledger.

    Raises:
        SizeMismatch: If the seeds do not fit together
    """
    _, m, neighbourhoods, _ = resolve_seeds(base, neighbourhoods, oas)
    rng = np.random.default_rng(seed)
    s = base.structure

    point_classes = {}
    for p in range(s.num_points):
        through = sorted(s.lines_through(p))
        perm = rng.permutation(len(through))
        point_classes[p] = {l: int(c) for l, c in zip(through, perm)}

    columns = {}
    symbols = {}
    for l in range(s.num_lines):
        points = sorted(s.lines[l])
        columns[l] = [points[i] for i in rng.permutation(len(points))]
        symbols[l] = []
        for p in columns[l]:
            lines = neighbourhoods[p].parallel_classes[point_classes[p][l]]
            perm = rng.permutation(m)
            symbols[l].append({g: int(x) for g, x in zip(lines, perm)})
    logger.debug("drew construction choices with seed %d", seed)
    return ConstructionChoices(point_classes, columns, symbols, seed)


def check_choices(base: BasePlane, neighbourhoods: Sequence[AffinePlane], choices: ConstructionChoices) -> None:
    """
    Check a ledger against expanded seeds (one neighbourhood per base point).

    Raises:
        InvalidChoices: On the first inconsistency found
    """
    s = base.structure
    m = base.order
    if set(choices.point_classes) != set(range(s.num_points)):
        raise InvalidChoices("ledger must assign classes for every base point")
    for p in range(s.num_points):
        assignment = choices.point_classes[p]
        if set(assignment) != set(s.lines_through(p)):
            raise InvalidChoices(f"point {p}: classes must be given for exactly the lines through it")
        if len(set(assignment.values())) != len(assignment):
            raise InvalidChoices(f"point {p}: a parallel class is assigned to two base lines")
        if not all(0 <= c < m + 1 for c in assignment.values()):
            raise InvalidChoices(f"point {p}: class index outside [0, {m + 1})")

    if set(choices.columns) != set(range(s.num_lines)) or set(choices.symbols) != set(range(s.num_lines)):
        raise InvalidChoices("ledger must label columns and symbols for every base line")
    for l in range(s.num_lines):
        cols = choices.columns[l]
        if len(cols) != len(s.lines[l]) or set(cols) != s.lines[l]:
            raise InvalidChoices(f"line {l}: every column must be labelled by exactly one point of the line")
        if len(choices.symbols[l]) != len(cols):
            raise InvalidChoices(f"line {l}: one symbol map per column is required")
        for p, mapping in zip(cols, choices.symbols[l]):
            chosen = neighbourhoods[p].parallel_classes[choices.point_classes[p][l]]
            if set(mapping) != set(chosen):
                raise InvalidChoices(f"line {l}, point {p}: symbols must cover the lines of the chosen class")
            if sorted(mapping.values()) != list(range(m)):
                raise InvalidChoices(f"line {l}, point {p}: symbols must be a bijection onto 0..{m - 1}")
