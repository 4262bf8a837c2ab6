import hypothesis
import networkx as nx
import numpy as np
import pytest

from hjelmslev import (
    AffinePlane,
    IncidenceStructure,
    OrthogonalArray,
    ProjectivePlane,
    affine_from_projective,
    canonical_choices,
    construct_ah,
    construct_ph,
    oa_from_affine,
    projective_plane,
    reset_settings,
)

np.seterr(all="warn")

hypothesis.settings.register_profile("ci", max_examples=1000, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.register_profile("dev", max_examples=100, deadline=None)
hypothesis.settings.load_profile("dev")

# Projective plane of order 3 with points 0-9, A, B, C
BASE_LABELS = "0123456789ABC"
BASE_LINES = [
    "0129", "3459", "6789",
    "036A", "147A", "258A",
    "048B", "156B", "237B",
    "075C", "138C", "246C",
    "9ABC",
]

# Affine plane of order 3 on R..Z
LOCAL_LABELS = "RSTUVWXYZ"
LOCAL_LINES = [
    "RST", "UVW", "XYZ",
    "RUX", "SVY", "TWZ",
    "RVZ", "SWX", "TUY",
    "RWY", "SUZ", "TVX",
]

# OA(2,4,3) over L, M, N
OA_SYMBOLS = "LMN"
OA_ROWS = ["LLLL", "LMMM", "LNNN", "MLMN", "MMNL", "MNLM", "NLNM", "NMLN", "NNML"]

FANO_LINES = [{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}]


def _labelled(alphabet, rows):
    lines = [[alphabet.index(ch) for ch in row] for row in rows]
    return IncidenceStructure(len(alphabet), lines, point_labels=dict(enumerate(alphabet)))


def _incidence_graph(structure: IncidenceStructure) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from((("p", p) for p in range(structure.num_points)), side=0)
    graph.add_nodes_from((("l", g) for g in range(structure.num_lines)), side=1)
    graph.add_edges_from((("p", p), ("l", g)) for g, line in enumerate(structure.lines) for p in line)
    return graph


@pytest.fixture(scope="session")
def isomorphic():
    """Exact isomorphism of two incidence structures (points to points, lines to lines)."""
    same_side = nx.algorithms.isomorphism.categorical_node_match("side", None)

    def check(first: IncidenceStructure, second: IncidenceStructure) -> bool:
        return nx.is_isomorphic(_incidence_graph(first), _incidence_graph(second), node_match=same_side)

    return check


@pytest.fixture
def fresh_settings():
    """Drop settings overrides before and after the test."""
    reset_settings()
    yield
    reset_settings()


@pytest.fixture(scope="session")
def example_base() -> ProjectivePlane:
    return ProjectivePlane.from_structure(_labelled(BASE_LABELS, BASE_LINES))


@pytest.fixture(scope="session")
def example_affine() -> AffinePlane:
    return AffinePlane.from_structure(_labelled(LOCAL_LABELS, LOCAL_LINES))


@pytest.fixture(scope="session")
def example_oa() -> OrthogonalArray:
    return OrthogonalArray([[OA_SYMBOLS.index(ch) for ch in row] for row in OA_ROWS])


@pytest.fixture(scope="session")
def fano() -> IncidenceStructure:
    return IncidenceStructure(7, FANO_LINES)


class Seeds:
    """Classical seeds of order m: PG(2,m), AG(2,m) and its OA(2,m+1,m)."""

    def __init__(self, m: int):
        self.m = m
        self.projective = projective_plane(m)
        self.affine = affine_from_projective(self.projective, 0)
        self.oa = oa_from_affine(self.affine)
        self.short_oa = self.oa.take_columns(range(m))


@pytest.fixture(scope="session")
def seeds():
    cache = {}

    def make(m: int) -> Seeds:
        if m not in cache:
            cache[m] = Seeds(m)
        return cache[m]

    return make


@pytest.fixture(scope="session")
def ph_plane(seeds):
    """Canonically constructed projective Hjelmslev plane of order m, cached."""
    cache = {}

    def make(m: int):
        if m not in cache:
            s = seeds(m)
            choices = canonical_choices(s.projective, [s.affine], [s.oa])
            cache[m] = construct_ph(s.projective, [s.affine], [s.oa], choices)
        return cache[m]

    return make


@pytest.fixture(scope="session")
def ah_plane(seeds):
    """Canonically constructed affine Hjelmslev plane of order m, cached."""
    cache = {}

    def make(m: int):
        if m not in cache:
            s = seeds(m)
            choices = canonical_choices(s.affine, [s.affine], [s.short_oa])
            cache[m] = construct_ah(s.affine, [s.affine], [s.short_oa], choices)
        return cache[m]

    return make
