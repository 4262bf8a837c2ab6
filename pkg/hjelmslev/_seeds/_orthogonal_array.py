import logging
from math import isqrt
from typing import Iterable, List, Optional

import networkx as nx
import numpy as np

from .._errors import FormatError, NotCompletable, ShapeError
from .._report import VerificationReport
from .._types import Axioms
from ._planes import AffinePlane

logger = logging.getLogger(__name__)

OA_MAGIC = "OA 1"


class OrthogonalArray:
    """
    OrthogonalArray - a v² × k array over the symbols 0..v-1

    The constructor only checks the shape and symbol range; strength 2
    (every ordered pair exactly once in any two columns) is checked by
    validate_oa, so that broken arrays can still be represented and reported.

    Row order matters to the constructor (line order inside a line class
    follows it) but not to the array's meaning, so the text form emits rows
    in lexicographic order.

    Usage:
        ```python
        import numpy as np
        from hjelmslev import OrthogonalArray, validate_oa

        oa = OrthogonalArray(np.array([[0, 0], [0, 1], [1, 0], [1, 1]]))
        validate_oa(oa).passed   # True
        ```
    """

    def __init__(self, rows, symbols: Optional[int] = None):
        """
        Args:
            rows: Integer array-like of shape (v², k)
            symbols: v; inferred from the row count when omitted

        Raises:
            ShapeError: If the array is not v² × k with k >= 1 and entries in [0, v)
        """
        array = np.array(rows, dtype=np.int64)
        if array.ndim != 2 or array.shape[1] < 1:
            raise ShapeError(f"an orthogonal array needs a 2-d shape with at least one column, got {array.shape}")
        count = array.shape[0]
        v = symbols if symbols is not None else isqrt(count)
        if v < 1 or v * v != count:
            raise ShapeError(f"{count} rows is not v² for v={v}")
        if array.min() < 0 or array.max() >= v:
            raise ShapeError(f"symbols must lie in [0, {v})")
        array.setflags(write=False)
        self._rows = array
        self._symbols = v

    @property
    def rows(self) -> np.ndarray:
        return self._rows

    @property
    def columns(self) -> int:
        return self._rows.shape[1]

    @property
    def symbols(self) -> int:
        return self._symbols

    def take_columns(self, indices: Iterable[int]) -> "OrthogonalArray":
        """Sub-array made of the given columns, in the given order."""
        return OrthogonalArray(self._rows[:, list(indices)], self._symbols)

    def __repr__(self):
        return f"OrthogonalArray(columns={self.columns}, symbols={self.symbols})"

    def __eq__(self, other):
        if not isinstance(other, OrthogonalArray):
            return NotImplemented
        return self._symbols == other._symbols and np.array_equal(self._rows, other._rows)

    def __hash__(self):
        return hash((self._symbols, self._rows.tobytes()))

    def to_text(self) -> str:
        rows = sorted(tuple(int(x) for x in row) for row in self._rows)
        out = [OA_MAGIC, f"columns {self.columns}", f"symbols {self.symbols}"]
        out.extend(" ".join(str(x) for x in row) for row in rows)
        return "\n".join(out) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "OrthogonalArray":
        """
        Parse OA 1 text. Lines starting with "#" and blank lines are ignored.

        Raises:
            FormatError: With the 1-based line number of the first problem
        """
        rows = [(n, s.strip()) for n, s in enumerate(text.split("\n"), start=1)]
        rows = [(n, s) for n, s in rows if s and not s.startswith("#")]
        if len(rows) < 3:
            raise FormatError(0, "OA document needs 'OA 1', 'columns <k>' and 'symbols <v>' headers")
        if rows[0][1] != OA_MAGIC:
            raise FormatError(rows[0][0], f"expected {OA_MAGIC!r}, got {rows[0][1]!r}")
        k = _header(rows[1], "columns")
        v = _header(rows[2], "symbols")

        body = rows[3:]
        if len(body) != v * v:
            raise FormatError(0, f"expected {v * v} rows, found {len(body)}")
        data: List[List[int]] = []
        for n, s in body:
            try:
                row = [int(tok) for tok in s.split()]
            except ValueError:
                raise FormatError(n, f"non-integer symbol in row {s!r}") from None
            if len(row) != k:
                raise FormatError(n, f"expected {k} symbols, got {len(row)}")
            if any(x < 0 or x >= v for x in row):
                raise FormatError(n, f"symbol outside [0, {v})")
            data.append(row)
        try:
            return cls(np.array(data, dtype=np.int64).reshape(v * v, k), v)
        except ShapeError as e:
            raise FormatError(0, e.message) from e


def _header(row, key: str) -> int:
    n, s = row
    name, _, value = s.partition(" ")
    if name != key:
        raise FormatError(n, f"expected '{key} <count>', got {s!r}")
    try:
        return int(value)
    except ValueError:
        raise FormatError(n, f"'{key}' needs an integer, got {value!r}") from None


def oa_from_affine(plane: AffinePlane) -> OrthogonalArray:
    """
    OA(2, m+1, m) of an affine plane: row i is point i, column j is parallel
    class j, and the entry is the position, within class j, of the line of
    class j through point i.
    """
    incidence = plane.structure.incidence
    columns = [np.argmax(incidence[list(cls)], axis=0) for cls in plane.parallel_classes]
    return OrthogonalArray(np.column_stack(columns), plane.order)


def validate_oa(oa: OrthogonalArray) -> VerificationReport:
    """
    Check strength 2 and column regularity.

    The first failure is reported: for a repeated pair the witness is
    (column a, column b, symbol x, symbol y, first row, second row); for an
    irregular column it is (column, symbol, count).
    """
    if not isinstance(oa, OrthogonalArray):
        oa = OrthogonalArray(oa)
    rows, v, k = oa.rows, oa.symbols, oa.columns

    for a in range(k):
        for b in range(a + 1, k):
            codes = rows[:, a] * v + rows[:, b]
            counts = np.bincount(codes, minlength=v * v)
            repeated = np.flatnonzero(counts > 1)
            if len(repeated):
                code = int(repeated[0])
                first, second = np.flatnonzero(codes == code)[:2]
                return VerificationReport.failed(Axioms.OA_PAIR, a, b, code // v, code % v, first, second)

    for a in range(k):
        counts = np.bincount(rows[:, a], minlength=v)
        irregular = np.flatnonzero(counts != v)
        if len(irregular):
            symbol = int(irregular[0])
            return VerificationReport.failed(Axioms.OA_REGULAR, a, symbol, counts[symbol])

    return VerificationReport()


def complete_oa(oa: OrthogonalArray) -> OrthogonalArray:
    """
    Extend an OA(2, m, m) by one column to an OA(2, m+1, m).

    Rows that agree in no column are joined in a graph; for a valid input the
    graph is m disjoint cliques of m rows, and each clique receives one new
    symbol (cliques numbered by their smallest row). The original columns
    and row order are kept.

    Raises:
        NotCompletable: If the input is not a valid OA(2, m, m)
    """
    m = oa.symbols
    if oa.columns != m:
        raise NotCompletable(f"completion needs an OA(2,m,m); got {oa.columns} columns over {m} symbols")
    report = validate_oa(oa)
    if not report:
        raise NotCompletable(f"input is not an orthogonal array: {report.violations[0]}")

    rows = oa.rows
    agreements = sum((rows[:, j][:, None] == rows[:, j][None, :]).astype(np.int64) for j in range(m))
    graph = nx.Graph()
    graph.add_nodes_from(range(len(rows)))
    graph.add_edges_from((int(a), int(b)) for a, b in np.argwhere(np.triu(agreements == 0, 1)))

    cliques = sorted((sorted(c) for c in nx.connected_components(graph)), key=lambda c: c[0])
    if len(cliques) != m:
        raise NotCompletable(f"agree-nowhere graph has {len(cliques)} components, expected {m}")
    column = np.empty(len(rows), dtype=np.int64)
    for symbol, clique in enumerate(cliques):
        if len(clique) != m or graph.subgraph(clique).number_of_edges() != m * (m - 1) // 2:
            raise NotCompletable(f"rows {clique} do not form an agree-nowhere clique of size {m}")
        column[clique] = symbol

    completed = OrthogonalArray(np.column_stack([rows, column]), m)
    if not validate_oa(completed):
        raise NotCompletable("completed array fails validation")
    logger.debug("completed OA(2,%d,%d) to %d columns", m, m, m + 1)
    return completed


def parse_oa(text: str) -> OrthogonalArray:
    return OrthogonalArray.from_text(text)


def emit_oa(oa: OrthogonalArray) -> str:
    return oa.to_text()
