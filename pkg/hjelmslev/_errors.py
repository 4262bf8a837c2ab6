"""
Exception hierarchy for the hjelmslev toolkit.

Every error raised for malformed geometry, bad input files or inconsistent
construction ledgers derives from HjelmslevError, so callers can catch the
whole family at once:

    ```python
    from hjelmslev import HjelmslevError, read_artifact

    try:
        plane = read_artifact("h3.inc")
    except HjelmslevError as e:
        print(e.message)
    ```

Verification never raises for a structure that merely fails an axiom;
those outcomes are reported in a VerificationReport instead.
"""

from typing import Optional, Tuple


class HjelmslevError(Exception):
    """
    Base class for all toolkit errors.

    Carries a human-readable message; subclasses add the data needed to
    locate the problem (a line number, a witness tuple).
    """

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class DuplicateLine(HjelmslevError):
    """
    Raised when the same point set is given twice as a line.
    """

    pass


class EmptyLine(HjelmslevError):
    """
    Raised when a line has no points, or a structure has no lines at all.
    """

    pass


class IdOutOfRange(HjelmslevError):
    """
    Raised when a point, line or class id does not exist in the structure.
    """

    pass


class PointOutOfRange(IdOutOfRange):
    """
    Raised when a point id falls outside [0, num_points).
    """

    pass


class FormatError(HjelmslevError):
    """
    Raised when an INC, OA or CHOICES text cannot be parsed.

    Attributes:
        line_number: 1-based line of the offending text, or 0 when the
            problem concerns the document as a whole (e.g. a missing row).
    """

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}" if line_number else message)
        self.line_number = line_number


class UnsupportedOrder(HjelmslevError):
    """
    Raised when a plane of the requested order cannot be generated, i.e. the
    order is not a prime power.
    """

    pass


class BadField(HjelmslevError):
    """
    Raised for an invalid field description: a non-prime characteristic, a
    modulus of the wrong degree, or a reducible modulus.
    """

    pass


class NotProjective(HjelmslevError):
    """
    Raised when a structure expected to be a projective plane fails the
    projective-plane axioms.
    """

    pass


class NotAffine(HjelmslevError):
    """
    Raised when a structure expected to be an affine plane has no consistent
    parallelism.
    """

    pass


class ShapeError(HjelmslevError):
    """
    Raised when an orthogonal array is not a v² × k array over v symbols.
    """

    pass


class NotCompletable(HjelmslevError):
    """
    Raised when an OA(2,m,m) cannot be extended by a column, which only
    happens when the input was not a valid OA(2,m,m).
    """

    pass


class SizeMismatch(HjelmslevError):
    """
    Raised when construction inputs disagree in order, shape or list length.
    """

    pass


class InvalidChoices(HjelmslevError):
    """
    Raised when a ConstructionChoices ledger does not fit its seeds, for
    example when one parallel class is assigned to two base lines through
    the same point.
    """

    pass


class NotProjectiveKind(HjelmslevError):
    """
    Raised when an affine Hjelmslev plane is passed where a projective one
    is required.
    """

    pass


class MissingProvenance(HjelmslevError):
    """
    Raised when an operation needs the construction ledger of a plane that
    was not produced by the constructor.
    """

    pass


class NotTransitive(HjelmslevError):
    """
    Raised when the neighbour relation is not an equivalence.

    Attributes:
        witness: ids (a, b, c) with a ~ b and b ~ c but not a ~ c.
        of_lines: True when the witness consists of line ids.
    """

    def __init__(self, witness: Tuple[int, int, int], message: Optional[str] = None, of_lines: bool = False):
        kind = "lines" if of_lines else "points"
        super().__init__(
            message
            or f"neighbour relation on {kind} is not transitive: "
            f"{witness[0]}~{witness[1]}, {witness[1]}~{witness[2]}, but not {witness[0]}~{witness[2]}"
        )
        self.witness = witness
        self.of_lines = of_lines


class Inconsistent(HjelmslevError):
    """
    Raised when the independent derivations of the (t, r) parameters of a
    structure disagree.
    """

    pass
