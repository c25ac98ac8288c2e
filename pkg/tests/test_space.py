from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from wgeo.errors import (
    DimensionMismatchError, InvalidDimensionError, InvalidParameterError, SpaceValidationError,
)
from wgeo.space import (
    PolyhedralSpace, build_l1, build_linf, build_regular_polygon, dual_norm, from_vertices_and_facets, norm,
    parse_space_name, validate,
)

L1_VERTICES = [[1, 0], [-1, 0], [0, 1], [0, -1]]
L1_FACETS = [[1, 1], [1, -1], [-1, 1], [-1, -1]]


def as_set(points):
    return {tuple(float(x) for x in p) for p in points}


def test_build_l1_two():
    space = build_l1(2)
    assert as_set(space.vertices) == as_set(L1_VERTICES)
    assert as_set(space.facets) == as_set(L1_FACETS)
    assert validate(space) == []


def test_build_counts():
    assert (len(build_l1(3).vertices), len(build_l1(3).facets)) == (6, 8)
    assert (len(build_linf(2).vertices), len(build_linf(2).facets)) == (4, 4)
    assert (len(build_linf(3).vertices), len(build_linf(3).facets)) == (8, 6)


def test_one_dimensional_spaces_coincide():
    l1, linf = build_l1(1), build_linf(1)
    assert as_set(l1.vertices) == as_set(linf.vertices) == {(1.0,), (-1.0,)}
    assert as_set(l1.facets) == as_set(linf.facets) == {(1.0,), (-1.0,)}


@pytest.mark.parametrize("builder", [build_l1, build_linf])
def test_zero_dimension_rejected(builder):
    with pytest.raises(InvalidDimensionError):
        builder(0)


def test_square_polygon_is_l1():
    square = build_regular_polygon(4)
    assert as_set(square.vertices) == as_set(L1_VERTICES)
    assert as_set(square.facets) == as_set(L1_FACETS)


def test_hexagon():
    hexagon = build_regular_polygon(6)
    assert len(hexagon.vertices) == 6
    assert len(hexagon.facets) == 6
    assert validate(hexagon) == []


@pytest.mark.parametrize("m", [5, 2, 3])
def test_bad_polygon(m):
    with pytest.raises(InvalidParameterError):
        build_regular_polygon(m)


def test_exact_polygon_only_for_square():
    square = build_regular_polygon(4, exact=True)
    assert square.exact
    assert all(isinstance(x, Fraction) for x in square.vertices.reshape(-1))
    with pytest.raises(InvalidParameterError):
        build_regular_polygon(6, exact=True)


def test_scaled_facet_breaks_polarity():
    with pytest.raises(SpaceValidationError) as info:
        from_vertices_and_facets(2, L1_VERTICES, L1_FACETS + [[2, 0], [-2, 0]])
    assert any(v.invariant == "polarity" for v in info.value.violations)


def test_flat_ball_rejected():
    with pytest.raises(SpaceValidationError) as info:
        from_vertices_and_facets(2, [[1, 0], [-1, 0]], L1_FACETS)
    assert {v.invariant for v in info.value.violations} >= {"polarity"}


def test_ragged_vertex_names_dimension():
    with pytest.raises(SpaceValidationError) as info:
        from_vertices_and_facets(2, [[1, 0], [-1]], L1_FACETS)
    violation = info.value.violations[0]
    assert (violation.invariant, violation.kind, violation.index) == ("dimension", "vertex", 1)


def test_deleted_facet_is_reported():
    space = build_l1(2)
    broken = PolyhedralSpace(dim=2, vertices=space.vertices, facets=space.facets[:3])
    invariants = {v.invariant for v in validate(broken)}
    assert "symmetry" in invariants
    assert "polarity" in invariants


def test_interior_vertex_is_not_extreme():
    space = build_l1(2)
    vertices = np.vstack([space.vertices, [[0.5, 0.5], [-0.5, -0.5]]])
    broken = PolyhedralSpace(dim=2, vertices=vertices, facets=space.facets)
    violations = validate(broken)
    assert any(v.invariant == "extremality" and v.kind == "vertex" and v.index == 4 for v in violations)


def test_duplicates_are_dropped():
    space = from_vertices_and_facets(2, L1_VERTICES + [[1, 0]], L1_FACETS + [[1, 1]])
    assert len(space.vertices) == 4
    assert len(space.facets) == 4


def test_norm_examples():
    assert norm(build_l1(2), [3, -4]) == 7
    assert norm(build_linf(2), [3, -4]) == 4
    assert norm(build_l1(2), [0, 0]) == 0
    assert dual_norm(build_l1(2), [3, -4]) == 4
    assert dual_norm(build_linf(2), [3, -4]) == 7
    assert dual_norm(build_linf(2), [0, 0]) == 0


def test_norm_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        norm(build_l1(2), [1, 2, 3])


def test_exact_norm_is_rational():
    space = build_l1(2, exact=True)
    assert norm(space, [Fraction(1, 3), Fraction(-1, 6)]) == Fraction(1, 2)


@pytest.mark.parametrize("name", ["l1:2", "linf:3", "poly:6"])
def test_polar_consistency(name):
    space = parse_space_name(name)
    for v in space.vertices:
        assert norm(space, v) == pytest.approx(1.0, abs=1e-12)
    for f in space.facets:
        assert dual_norm(space, f) == pytest.approx(1.0, abs=1e-12)


def test_parse_space_name_errors():
    with pytest.raises(InvalidParameterError):
        parse_space_name("l2:3")
    with pytest.raises(InvalidParameterError):
        parse_space_name("l1:x")


def test_antipodes():
    space = build_l1(2)
    for i, j in enumerate(space.vertex_antipodes):
        assert np.array_equal(space.vertices[j], -space.vertices[i])


coordinates = st.floats(min_value=-100, max_value=100, allow_nan=False, allow_infinity=False,
                        allow_subnormal=False)


@pytest.mark.parametrize("name", ["l1:3", "linf:3", "poly:6"])
@hyp_settings(max_examples=50, deadline=None)
@given(u=st.lists(coordinates, min_size=3, max_size=3),
       v=st.lists(coordinates, min_size=3, max_size=3),
       alpha=coordinates)
def test_norm_laws(name, u, v, alpha):
    space = parse_space_name(name)
    u, v = np.array(u[:space.dim]), np.array(v[:space.dim])
    assert norm(space, u + v) <= norm(space, u) + norm(space, v) + 1e-9
    assert norm(space, alpha * u) == pytest.approx(abs(alpha) * norm(space, u), rel=1e-9, abs=1e-9)
    if np.max(np.abs(u)) > 1e-6:
        assert norm(space, u) > 0
    assert norm(space, np.zeros(space.dim)) == 0
