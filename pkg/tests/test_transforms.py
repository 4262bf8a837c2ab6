import pytest

from hjelmslev import (
    HjelmslevPlane,
    IdOutOfRange,
    Kind,
    MissingProvenance,
    NotProjectiveKind,
    SizeMismatch,
    canonicalize,
    construct_ah,
    extend_ah,
    random_choices,
    truncate_ph,
    verify_ah,
    verify_ph,
)


@pytest.mark.parametrize("m", [2, 3])
def test_truncation_at_every_line_class(ph_plane, m):
    plane = ph_plane(m)
    for line_class in range(m * m + m + 1):
        truncated = truncate_ph(plane, line_class)
        s = truncated.structure
        assert truncated.kind == Kind.AFFINE
        assert truncated.provenance is None
        assert (s.num_points, s.num_lines) == (m**4, (m * m + m) * m * m)
        assert verify_ah(s).parameters == (m, m)


@pytest.mark.parametrize("m, line_class", [(4, 0), (4, 20), (5, 0), (5, 30)])
def test_truncation_sampled(ph_plane, m, line_class):
    truncated = truncate_ph(ph_plane(m), line_class)
    assert verify_ah(truncated.structure).parameters == (m, m)


@pytest.mark.parametrize("m", [2, 3])
def test_truncation_removes_m_plus_one_point_classes(ph_plane, m):
    plane = ph_plane(m)
    truncated = truncate_ph(plane, 0)
    assert plane.structure.num_points - truncated.structure.num_points == (m + 1) * m * m
    assert len(truncated.point_classes) == m * m
    assert len(truncated.line_classes) == m * m + m


def test_truncation_keeps_labels(ph_plane):
    plane = ph_plane(2)
    truncated = truncate_ph(plane, 0)
    labels = set(truncated.structure.point_labels.values())
    assert labels < set(plane.structure.point_labels.values())


def test_truncation_of_loaded_plane(ph_plane):
    loaded = HjelmslevPlane.from_structure(ph_plane(2).structure, Kind.PROJECTIVE)
    assert loaded.provenance is None
    assert (loaded.t, loaded.r) == (2, 2)
    assert verify_ah(truncate_ph(loaded, 3).structure).passed


def test_truncation_errors(ph_plane, ah_plane):
    with pytest.raises(NotProjectiveKind):
        truncate_ph(ah_plane(2), 0)
    with pytest.raises(IdOutOfRange):
        truncate_ph(ph_plane(2), 7)


@pytest.mark.parametrize("m", [2, 3])
def test_extension_round_trip(ah_plane, seeds, m):
    s = seeds(m)
    plane = ah_plane(m)
    extended = extend_ah(plane, [s.affine], s.oa)
    assert extended.kind == Kind.PROJECTIVE
    assert extended.structure.num_points == (m * m + m + 1) * m * m
    assert verify_ph(extended.structure).parameters == (m, m)

    infinity = len(extended.line_classes) - 1
    back = truncate_ph(extended, infinity)
    assert canonicalize(back.structure).digest == canonicalize(plane.structure).digest


def test_extension_of_random_construction(seeds):
    s = seeds(3)
    choices = random_choices(s.affine, [s.affine], [s.short_oa], seed=11)
    plane = construct_ah(s.affine, [s.affine], [s.short_oa], choices)
    extended = extend_ah(plane, [s.affine] * 4, s.oa)
    assert verify_ph(extended.structure).passed
    back = truncate_ph(extended, len(extended.line_classes) - 1)
    assert canonicalize(back.structure).digest == canonicalize(plane.structure).digest


def test_extension_needs_provenance(ah_plane, ph_plane, seeds):
    s = seeds(2)
    loaded = HjelmslevPlane.from_structure(ah_plane(2).structure, Kind.AFFINE)
    with pytest.raises(MissingProvenance):
        extend_ah(loaded, [s.affine], s.oa)
    with pytest.raises(MissingProvenance):
        extend_ah(ph_plane(2), [s.affine], s.oa)


def test_extension_checks_orders(ah_plane, seeds):
    with pytest.raises(SizeMismatch):
        extend_ah(ah_plane(2), [seeds(3).affine], seeds(2).oa)
    with pytest.raises(SizeMismatch):
        extend_ah(ah_plane(2), [seeds(2).affine], seeds(2).short_oa)
