from fractions import Fraction

import numpy as np
import pytest

from conftest import random_basis, random_operator
from wgeo.approx import distance
from wgeo.errors import DegenerateOperatorError, DependentBasisError, UnsupportedError, ZeroVectorError
from wgeo.ortho import (
    grid_oracle_min, make_subspace, op_bj_single, op_bj_subspace, symmetry_check, vector_bj,
    verify_certificate,
)
from wgeo.pairs import Operator, numerical_radius

IDENTITY = [[1, 0], [0, 1]]
FLIP = [[1, 0], [0, -1]]


def test_vector_bj_vertex(l1_2):
    result = vector_bj(l1_2, [1, 0], [[0, 1]])
    assert result.orthogonal
    assert result.facets == (0, 1)
    assert [float(t) for t in result.weights] == pytest.approx([0.5, 0.5])


def test_vector_bj_smooth_point(l1_2):
    assert not vector_bj(l1_2, [0.5, 0.5], [[1, 0]]).orthogonal


def test_vector_bj_zero_direction(l1_2):
    assert vector_bj(l1_2, [0.5, 0.5], [[0, 0]]).orthogonal
    assert vector_bj(l1_2, [0.5, 0.5], []).orthogonal


def test_vector_bj_zero_vector(l1_2):
    with pytest.raises(ZeroVectorError):
        vector_bj(l1_2, [0, 0], [[1, 0]])


def test_single_direction_examples(l1_2):
    T = Operator.identity(l1_2)
    assert op_bj_single(T, Operator.from_matrix(l1_2, FLIP)).orthogonal
    assert not op_bj_single(T, T).orthogonal
    skewed = Operator.from_matrix(l1_2, [[2, 0], [1, 1]])
    assert not op_bj_single(skewed, Operator.from_matrix(l1_2, [[0, 0], [1, 0]])).orthogonal


def test_single_certificate_exact(l1_2_exact):
    T = Operator.identity(l1_2_exact)
    A = Operator.from_matrix(l1_2_exact, FLIP)
    result = op_bj_single(T, A)
    assert result.orthogonal
    weights = [entry.weight for entry in result.certificate.entries]
    assert sum(weights) == 1
    assert all(isinstance(t, Fraction) for t in weights)
    assert result.certificate.support <= 2
    assert verify_certificate(T, make_subspace(l1_2_exact, [A]), result.certificate, tol=0)


def test_degenerate_operator_rejected(l1_2):
    zero = Operator.from_matrix(l1_2, np.zeros((2, 2)))
    with pytest.raises(DegenerateOperatorError):
        op_bj_single(zero, Operator.identity(l1_2))


def test_subspace_of_one_matches_single(acceptance_spaces):
    rng = np.random.default_rng(21)
    for space in acceptance_spaces.values():
        for _ in range(10):
            T, A = random_operator(space, rng), random_operator(space, rng)
            V = make_subspace(space, [A])
            assert op_bj_subspace(T, V).orthogonal == op_bj_single(T, A).orthogonal


def test_homogeneity(l1_2):
    rng = np.random.default_rng(4)
    for _ in range(20):
        T, A = random_operator(l1_2, rng), random_operator(l1_2, rng)
        expected = op_bj_single(T, A).orthogonal
        assert op_bj_single(T.scaled(2.5), A.scaled(0.25)).orthogonal == expected


def test_two_dimensional_subspace_matches_grid(l1_2):
    T = Operator.identity(l1_2)
    V = make_subspace(l1_2, [FLIP, [[0, 1], [0, 0]]])
    result = op_bj_subspace(T, V)
    grid = grid_oracle_min(T, V, radius=2.0, step=1e-2)
    assert result.orthogonal
    assert grid.minimum == pytest.approx(numerical_radius(T), abs=1e-2)
    assert verify_certificate(T, V, result.certificate)
    assert result.certificate.support <= 3


def test_random_two_dimensional_subspaces_match_grid(linf_3):
    rng = np.random.default_rng(8)
    for _ in range(5):
        T = Operator.identity(linf_3)
        V = make_subspace(linf_3, random_basis(linf_3, rng, 2, scale=1.0))
        orthogonal = op_bj_subspace(T, V).orthogonal
        d = distance(T, V).value
        grid = grid_oracle_min(T, V, radius=3.0, step=1e-2)
        assert grid.minimum >= d - 1e-9
        assert orthogonal == (abs(d - numerical_radius(T)) <= 1e-8)


def test_dependent_basis_rejected(l1_2):
    with pytest.raises(DependentBasisError):
        make_subspace(l1_2, [FLIP, np.multiply(2, FLIP)])


def test_grid_oracle_closed_form(l1_2):
    T = Operator.from_matrix(l1_2, FLIP)
    V = make_subspace(l1_2, [IDENTITY])
    grid = grid_oracle_min(T, V, radius=10.0, step=1e-3)
    assert grid.minimum == pytest.approx(1.0, abs=1e-9)
    assert grid.argmin[0] == pytest.approx(0.0, abs=1e-9)


def test_grid_oracle_empty_subspace(l1_2):
    T = Operator.from_matrix(l1_2, [[2, 0], [1, 1]])
    assert grid_oracle_min(T, make_subspace(l1_2, [])).minimum == 3


def test_grid_oracle_limits_dimension(linf_2):
    V = make_subspace(linf_2, [IDENTITY, FLIP, [[0, 1], [0, 0]]])
    with pytest.raises(UnsupportedError):
        grid_oracle_min(Operator.identity(linf_2), V)


def test_symmetry_can_fail(l1_2):
    T = Operator.identity(l1_2)
    A = Operator.from_matrix(l1_2, FLIP)
    forward, backward = symmetry_check(T, A)
    assert forward
    assert backward == op_bj_single(A, T).orthogonal


def test_verify_rejects_foreign_certificate(l1_2):
    T = Operator.identity(l1_2)
    A = Operator.from_matrix(l1_2, FLIP)
    certificate = op_bj_single(T, A).certificate
    other = make_subspace(l1_2, [[[0, 1], [0, 0]]])
    assert not verify_certificate(Operator.from_matrix(l1_2, [[2, 0], [1, 1]]), other, certificate)
