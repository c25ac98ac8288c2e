import numpy as np
import pytest

from conftest import random_operator
from wgeo.errors import DegenerateOperatorError, DependentBasisError, InvalidParameterError, ZeroVectorError
from wgeo.pairs import DualityPair, Operator
from wgeo.smooth import (
    equivalence_check, is_nu_smooth, is_smooth_point, operators_into_subspace_basis, perturbation_margin,
    search_hypothesis_operator,
)
from wgeo.space import build_l1, build_linf

SKEWED = [[2, 0], [1, 1]]


def test_skewed_operator_is_nu_smooth(l1_2):
    report = is_nu_smooth(Operator.from_matrix(l1_2, SKEWED))
    assert report.nu_smooth
    assert report.witness.pair == DualityPair(vertex_index=0, facet_index=0)
    assert report.witness.sign == 1
    assert report.margin == pytest.approx(2 / 3)


def test_diagonal_is_not_nu_smooth(l1_2):
    report = is_nu_smooth(Operator.from_matrix(l1_2, np.diag([2, 1])))
    assert not report.nu_smooth
    assert report.witness is None
    assert len(report.attaining.entries) == 2
    assert report.margin == pytest.approx(0.0)


def test_identity_is_not_nu_smooth(linf_3):
    assert not is_nu_smooth(Operator.identity(linf_3)).nu_smooth


def test_zero_operator(l1_2):
    with pytest.raises(DegenerateOperatorError):
        is_nu_smooth(Operator.from_matrix(l1_2, np.zeros((2, 2))))


def test_scale_invariance(acceptance_spaces):
    rng = np.random.default_rng(51)
    for space in acceptance_spaces.values():
        for _ in range(20):
            T = random_operator(space, rng)
            expected = is_nu_smooth(T).nu_smooth
            alpha = rng.uniform(0.1, 10) * rng.choice([-1, 1])
            assert is_nu_smooth(T.scaled(alpha)).nu_smooth == expected


@pytest.mark.parametrize("x,smooth", [([0.5, 0.5], True), ([1, 0], False)])
def test_smooth_points_l1(l1_2, x, smooth):
    assert is_smooth_point(l1_2, x).smooth == smooth


def test_smooth_point_linf(linf_2):
    point = is_smooth_point(linf_2, [1, 0.3])
    assert point.smooth
    assert len(point.facets) == 1


def test_no_vertex_is_smooth_above_dimension_one(acceptance_spaces):
    for space in acceptance_spaces.values():
        assert not any(is_smooth_point(space, v).smooth for v in space.vertices)


def test_smooth_point_zero(l1_2):
    with pytest.raises(ZeroVectorError):
        is_smooth_point(l1_2, [0, 0])


def test_operators_into_subspace_basis(l1_2):
    V = operators_into_subspace_basis(l1_2, [[0, 1]])
    matrices = [S.matrix.tolist() for S in V.basis]
    assert matrices == [[[0, 0], [1, 0]], [[0, 0], [0, 1]]]
    assert operators_into_subspace_basis(l1_2, [[1, 0], [0, 1]]).n == 4
    assert operators_into_subspace_basis(l1_2, []).n == 0


def test_operators_into_dependent_family(l1_2):
    with pytest.raises(DependentBasisError):
        operators_into_subspace_basis(l1_2, [[1, 1], [2, 2]])


def test_equivalence_hypotheses_not_met(l1_2):
    report = equivalence_check(Operator.from_matrix(l1_2, SKEWED), [[0, 1]])
    assert report.nu_smooth
    assert not report.witness_smooth
    assert not report.hypotheses_met
    assert not report.lhs
    assert report.rhs
    assert report.forward_implication


def test_equivalence_empty_family(l1_2):
    report = equivalence_check(Operator.from_matrix(l1_2, SKEWED), [])
    assert report.lhs and report.rhs and report.agree


@pytest.mark.parametrize("builder", [build_l1, build_linf])
def test_equivalence_in_dimension_one(builder):
    space = builder(1)
    T = search_hypothesis_operator(space, seed=0)
    assert T is not None
    spanned = equivalence_check(T, [[1]])
    assert spanned.hypotheses_met
    assert (spanned.lhs, spanned.rhs) == (False, False)
    trivial = equivalence_check(T, [])
    assert (trivial.lhs, trivial.rhs) == (True, True)


def test_search_gives_up_without_smooth_vertices(linf_2):
    assert search_hypothesis_operator(linf_2, seed=0) is None


def test_forward_implication_with_annihilated_family(linf_3):
    rng = np.random.default_rng(52)
    checked = 0
    for _ in range(20):
        T = random_operator(linf_3, rng)
        report = is_nu_smooth(T)
        if not report.nu_smooth:
            continue
        facet = linf_3.facets[report.witness.pair.facet_index]
        k = int(np.flatnonzero(facet)[0])
        Z = [np.eye(3)[j] for j in range(3) if j != k]
        result = equivalence_check(T, Z)
        assert result.lhs and result.rhs
        assert result.forward_implication
        checked += 1
    assert checked > 0


def test_perturbation_margin(l1_2):
    result = perturbation_margin(Operator.from_matrix(l1_2, SKEWED), scale=0.1, seed=0, samples=50)
    assert result.stable
    assert result.min_margin > 0


def test_perturbation_margin_needs_nu_smooth(l1_2):
    with pytest.raises(InvalidParameterError):
        perturbation_margin(Operator.from_matrix(l1_2, np.diag([2, 1])), scale=0.1, seed=0)
