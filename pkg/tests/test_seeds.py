import numpy as np
import pytest

from hjelmslev import (
    AffinePlane,
    Axioms,
    BadField,
    FieldSpec,
    FormatError,
    IdOutOfRange,
    IncidenceStructure,
    NotAffine,
    NotCompletable,
    NotProjective,
    OrthogonalArray,
    ProjectivePlane,
    ShapeError,
    UnsupportedOrder,
    affine_from_projective,
    canonicalize,
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

# -- fields -------------------------------------------------------------------


def test_prime_field():
    field = FieldSpec(5)
    assert field.order == 5
    assert field.modulus is None


def test_builtin_modulus():
    assert FieldSpec(2, 2).modulus == (1, 1, 1)
    assert FieldSpec.for_order(8) == FieldSpec(2, 3)


def test_explicit_modulus():
    field = FieldSpec(3, 2, modulus=[1, 0, 1])
    assert field.order == 9
    assert field != FieldSpec.for_order(9)


@pytest.mark.parametrize(
    "args, kwargs",
    [
        ((4,), {}),
        ((2, 0), {}),
        ((2, 5), {}),
        ((2, 2), {"modulus": [1, 0, 1]}),
        ((3, 2), {"modulus": [2, 0, 1]}),
        ((3, 2), {"modulus": [1, 1]}),
    ],
)
def test_bad_fields(args, kwargs):
    with pytest.raises(BadField):
        FieldSpec(*args, **kwargs)


def test_for_order_rejects_non_prime_powers():
    with pytest.raises(UnsupportedOrder):
        FieldSpec.for_order(6)
    with pytest.raises(UnsupportedOrder):
        projective_plane(10)


def test_for_order_factors():
    field = FieldSpec.for_order(9)
    assert (field.characteristic, field.degree) == (3, 2)


# -- projective and affine planes ----------------------------------------------


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_projective_plane_counts(q):
    plane = projective_plane(q)
    s = plane.structure
    assert s.num_points == s.num_lines == q * q + q + 1
    assert set(s.line_sizes().tolist()) == {q + 1}
    assert validate_projective_plane(s).parameters == (1, q)


def test_projective_plane_with_other_modulus():
    plane = projective_plane(9, FieldSpec(3, 2, modulus=[1, 0, 1]))
    assert validate_projective_plane(plane.structure).passed


def test_projective_plane_field_mismatch():
    with pytest.raises(UnsupportedOrder):
        projective_plane(3, FieldSpec(2, 2))


def test_example_base_is_projective(example_base):
    assert example_base.order == 3
    assert validate_projective_plane(example_base.structure).parameters == (1, 3)


def test_near_pencil_has_no_quadrangle():
    near_pencil = IncidenceStructure(5, [{0, 1, 2, 3}, {0, 4}, {1, 4}, {2, 4}, {3, 4}])
    report = validate_projective_plane(near_pencil)
    assert report.violations[0][0] == Axioms.QUADRANGLE
    with pytest.raises(NotProjective):
        ProjectivePlane.from_structure(near_pencil)


def test_projective_validation_finds_unjoined_points():
    report = validate_projective_plane(IncidenceStructure(4, [{0, 1}, {2, 3}]))
    assert not report
    assert report.violations[0] == (Axioms.POINTS_JOINED, (0, 2))


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_affine_from_projective(q):
    plane = affine_from_projective(projective_plane(q), 0)
    s = plane.structure
    assert s.num_points == q * q
    assert s.num_lines == q * q + q
    assert plane.order == q
    assert len(plane.parallel_classes) == q + 1
    assert all(len(c) == q for c in plane.parallel_classes)
    assert validate_affine_plane(s).parameters == (1, q)


def test_affine_from_projective_keeps_labels(example_base):
    plane = affine_from_projective(example_base, 12)
    assert [plane.structure.point_label(p) for p in range(9)] == list("012345678")


def test_affine_from_projective_rejects_bad_line(example_base):
    with pytest.raises(IdOutOfRange):
        affine_from_projective(example_base, 13)


def test_canonical_parallel_classes(example_affine):
    expected = ((0, 1, 2), (3, 4, 5), (6, 7, 8), (9, 10, 11))
    assert example_affine.parallel_classes == expected
    assert parallel_classes(example_affine.structure) == expected
    assert example_affine.class_of(7) == 2


def test_orthogonal_classes(example_affine):
    first, second = example_affine.parallel_classes[:2]
    assert check_orthogonal_classes(example_affine, first, second)
    assert not check_orthogonal_classes(example_affine, first, first)


def test_not_affine():
    broken = IncidenceStructure(5, [{0, 1}, {2, 3}, {1, 2}, {0, 4}])
    assert not validate_affine_plane(broken)
    with pytest.raises(NotAffine):
        AffinePlane(broken)


def test_affine_validation_rejects_projective_plane(fano):
    report = validate_affine_plane(fano)
    assert report.violations[0][0] == Axioms.PARALLEL


def test_projective_from_affine(example_affine):
    plane = projective_from_affine(example_affine)
    s = plane.structure
    assert plane.order == 3
    assert s.num_points == 13
    assert s.lines[12] == frozenset(range(9, 13))
    assert s.point_label(9) == "inf0"
    assert validate_projective_plane(s).passed


def test_projective_affine_round_trip(example_affine):
    back = affine_from_projective(projective_from_affine(example_affine), 12)
    assert canonicalize(back.structure).digest == canonicalize(example_affine.structure).digest
    assert back.parallel_classes == example_affine.parallel_classes


# -- orthogonal arrays ----------------------------------------------------------


def test_oa_from_affine_matches_example(example_affine, example_oa):
    # same array once the last two parallel classes trade places
    assert oa_from_affine(example_affine).take_columns([0, 1, 3, 2]) == example_oa


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_oa_from_affine_is_valid(seeds, m):
    oa = seeds(m).oa
    assert (oa.columns, oa.symbols) == (m + 1, m)
    assert validate_oa(oa).passed


def test_validate_oa_repeated_pair():
    report = validate_oa(OrthogonalArray(np.zeros((4, 2), dtype=int)))
    assert report.violations == ((Axioms.OA_PAIR, (0, 1, 0, 0, 0, 1)),)


def test_validate_oa_irregular_column():
    report = validate_oa(OrthogonalArray([[0], [0], [0], [1]]))
    assert report.violations == ((Axioms.OA_REGULAR, (0, 0, 3)),)


@pytest.mark.parametrize("rows", [[[0], [1], [0]], [[0], [2], [0], [1]], [0, 1, 0, 1]])
def test_oa_shape_errors(rows):
    with pytest.raises(ShapeError):
        OrthogonalArray(rows)


def test_oa_text_round_trip(example_oa):
    text = emit_oa(example_oa)
    assert text.startswith("OA 1\ncolumns 4\nsymbols 3\n0 0 0 0\n")
    parsed = parse_oa(text)
    assert emit_oa(parsed) == text
    assert sorted(map(tuple, parsed.rows.tolist())) == sorted(map(tuple, example_oa.rows.tolist()))


@pytest.mark.parametrize(
    "text, line_number",
    [
        ("OA 1\ncolumns 2\nsymbols 2\n0 0\n0 1\n1 0\n1 2\n", 7),
        ("OA 1\ncolumns 2\nsymbols 2\n0 0\n0 1\n1 0\n1\n", 7),
        ("OA 1\nrows 2\nsymbols 2\n0 0\n0 1\n1 0\n1 1\n", 2),
    ],
)
def test_oa_parse_errors(text, line_number):
    with pytest.raises(FormatError) as excinfo:
        parse_oa(text)
    assert excinfo.value.line_number == line_number


def test_complete_example_oa(example_oa):
    assert complete_oa(example_oa.take_columns(range(3))) == example_oa


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_completion_recovers_deleted_column(seeds, m):
    oa = seeds(m).oa
    completed = complete_oa(oa.take_columns(range(m)))
    assert validate_oa(completed).passed
    assert np.array_equal(completed.rows[:, :m], oa.rows[:, :m])
    pairs = set(zip(completed.rows[:, m].tolist(), oa.rows[:, m].tolist()))
    # a symbol renaming: m distinct pairs, bijective in both coordinates
    assert len(pairs) == m
    assert len({a for a, _ in pairs}) == len({b for _, b in pairs}) == m


def test_completion_rejects_wrong_shape(example_oa):
    with pytest.raises(NotCompletable):
        complete_oa(example_oa)


def test_completion_rejects_invalid_array():
    with pytest.raises(NotCompletable):
        complete_oa(OrthogonalArray(np.zeros((4, 2), dtype=int)))


# -- isomorphism and round trips --------------------------------------------------


def test_generated_plane_matches_example(example_base, isomorphic):
    assert isomorphic(projective_plane(3).structure, example_base.structure)


def test_example_affine_plane_is_a_deleted_line(example_base, example_affine, isomorphic):
    s = example_base.structure
    line = next(g for g in range(s.num_lines) if {s.point_label(p) for p in s.lines[g]} == set("9ABC"))
    assert isomorphic(affine_from_projective(example_base, line).structure, example_affine.structure)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_affine_from_projective_every_line(q):
    plane = projective_plane(q)
    for line in range(plane.structure.num_lines):
        affine = affine_from_projective(plane, line)
        assert validate_affine_plane(affine.structure).parameters == (1, q)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_projective_from_affine_validates(seeds, m):
    affine = seeds(m).affine
    plane = projective_from_affine(affine)
    assert plane.order == m
    assert validate_projective_plane(plane.structure).parameters == (1, m)
    back = affine_from_projective(plane, plane.structure.num_lines - 1)
    assert canonicalize(back.structure).digest == canonicalize(affine.structure).digest


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_completed_column_groups_disjoint_rows(seeds, m):
    completed = complete_oa(seeds(m).short_oa)
    rows = completed.rows
    for symbol in range(m):
        group = np.flatnonzero(rows[:, m] == symbol)
        assert len(group) == m
        for i, a in enumerate(group):
            for b in group[i + 1 :]:
                # rows sharing a new symbol agree in no original column
                assert not np.any(rows[a, :m] == rows[b, :m])


def test_parallel_classes_of_a_non_affine_structure():
    # lines 0 and 1 are disjoint, 1 and 2 are disjoint, 0 and 2 meet
    with pytest.raises(NotAffine):
        parallel_classes(IncidenceStructure(5, [{0, 1}, {2, 3}, {0, 4}]))
    # parallelism is transitive here, but line {0, 2} is a class on its own
    with pytest.raises(NotAffine):
        parallel_classes(IncidenceStructure(4, [{0, 1}, {2, 3}, {0, 2}]))
