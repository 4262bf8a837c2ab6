"""
Shared aliases and constant namespaces.

Points and lines of every geometry are dense 0-based integers; the aliases
below only document intent in signatures.
"""

from typing import FrozenSet, Tuple

PointId = int
LineId = int
Line = FrozenSet[int]
Parameters = Tuple[int, int]


class Kind:
    """
    Kind - the two flavours of Hjelmslev plane

    Usage:
        ```python
        from hjelmslev import Kind, verify_2_uniform

        report = verify_2_uniform(structure, kind=Kind.AFFINE)
        ```
    """

    # Quotient is a projective plane; every two lines meet.
    PROJECTIVE = "projective"

    # Quotient is an affine plane; disjoint lines map to parallel lines.
    AFFINE = "affine"

    ALL = (PROJECTIVE, AFFINE)


class Axioms:
    """
    Axioms - identifiers used in VIOLATION lines of a verification report

    Each identifier names the condition that failed; the ids following it
    in the report are the witness (points, lines or classes, depending on
    the axiom).
    """

    # Two distinct points on no common line (or, for planes, not exactly one).
    POINTS_JOINED = "points-joined"

    # Two distinct lines without a common point (or, for planes, not exactly one).
    LINES_MEET = "lines-meet"

    # No four points with no three collinear.
    QUADRANGLE = "quadrangle"

    # No three non-collinear points.
    TRIANGLE = "triangle"

    # Playfair: exactly one parallel through a point off a line.
    PARALLEL = "parallel"

    # Line sizes, point degrees or counts differ from the plane's order.
    LINE_SIZE = "line-size"
    POINT_DEGREE = "point-degree"
    COUNTS = "counts"

    # OA strength-2 and column regularity.
    OA_PAIR = "oa-pair"
    OA_REGULAR = "oa-regular"

    # Neighbour relation is not an equivalence.
    NEIGHBOUR_TRANSITIVE = "neighbour-transitive"

    # Lines meeting in ≥2 points that are not neighbours (affine kind).
    LINES_NEIGHBOUR = "lines-neighbour"

    # Intersection sizes contradict the (t, r) structure.
    NEIGHBOUR_LINES = "neighbour-lines"
    NON_NEIGHBOUR_LINES = "non-neighbour-lines"

    # Quotient is not an ordinary plane, or collapses distinct line classes.
    QUOTIENT = "quotient"
    QUOTIENT_LINES = "quotient-lines"

    # Disjoint lines whose images are not parallel (affine kind).
    QUOTIENT_PARALLEL = "quotient-parallel"

    # Class sizes or derived parameters disagree.
    CLASS_SIZE = "class-size"
    PARAMETERS = "parameters"

    # Point-neighbourhood restriction checks of 2-uniformity.
    RESTRICTION_AFFINE = "restriction-affine"
    RESTRICTION_MULTIPLICITY = "restriction-multiplicity"
