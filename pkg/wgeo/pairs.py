"""
Duality pairs, numerical radius and attainment sets.

Every extreme point of the dual ball of (L(X), w) has the form x*⊗x with
x ∈ E_X, x* ∈ E_X*, |x*(x)| = 1, so on a polyhedral space the numerical radius
is a finite maximum over the canonical pairs listed by enumerate_pairs.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from .config import settings
from .errors import DegenerateOperatorError, DimensionMismatchError, InvalidParameterError, NormFailureError
from .linalg import Scalar, as_array, nullspace, scalar
from .solver import hull_membership
from .space import PolyhedralSpace, norm

logger = logging.getLogger(__name__)

PAIR_CHUNK = 256


class Operator(BaseModel):
    """Dense matrix acting on coordinates of a PolyhedralSpace."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    space: PolyhedralSpace
    matrix: np.ndarray

    @model_validator(mode="after")
    def check_square(self) -> "Operator":
        if self.matrix.shape != (self.space.dim, self.space.dim):
            raise DimensionMismatchError(
                f"operator matrix has shape {self.matrix.shape}, expected {(self.space.dim, self.space.dim)}"
            )
        return self

    @classmethod
    def from_matrix(cls, space: PolyhedralSpace, matrix: Any) -> "Operator":
        data = as_array(matrix, space.exact)
        if data.ndim != 2:
            raise DimensionMismatchError("operator matrix must be two-dimensional")
        if data.shape != (space.dim, space.dim):
            raise DimensionMismatchError(f"operator matrix has shape {data.shape}, expected {(space.dim, space.dim)}")
        return cls(space=space, matrix=data)

    @classmethod
    def identity(cls, space: PolyhedralSpace) -> "Operator":
        return cls.from_matrix(space, np.eye(space.dim, dtype=int))

    def as_exact(self) -> "Operator":
        exact_space = self.space.as_exact()
        return Operator(space=exact_space, matrix=as_array(self.matrix, True))

    def scaled(self, alpha: Any) -> "Operator":
        return Operator(space=self.space, matrix=self.matrix * alpha)

    def plus(self, other: "Operator") -> "Operator":
        return Operator(space=self.space, matrix=self.matrix + other.matrix)

    def minus(self, other: "Operator") -> "Operator":
        return Operator(space=self.space, matrix=self.matrix - other.matrix)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.matrix.reshape(-1))


class DualityPair(BaseModel):
    """Normalized pair (x*, x) with x*(x) = 1, stored as vertex/facet indices."""

    model_config = ConfigDict(frozen=True)

    vertex_index: int
    facet_index: int
    canonical: bool = True

    def antipode(self, space: PolyhedralSpace) -> "DualityPair":
        """(-x*, -x): the same functional on operators."""
        return DualityPair(
            vertex_index=int(space.vertex_antipodes[self.vertex_index]),
            facet_index=int(space.facet_antipodes[self.facet_index]),
            canonical=not self.canonical,
        )

    def value(self, T: Operator) -> Scalar:
        """x*(Tx)."""
        f = T.space.facets[self.facet_index]
        v = T.space.vertices[self.vertex_index]
        return scalar(f.dot(T.matrix.dot(v)))

    def functional(self, space: PolyhedralSpace) -> np.ndarray:
        """x*⊗x as a dim²-vector: its dot product with T.matrix.reshape(-1) is x*(Tx)."""
        return np.outer(space.facets[self.facet_index], space.vertices[self.vertex_index]).reshape(-1)


class SignedPair(BaseModel):
    """The functional (sign·x*)⊗x."""

    model_config = ConfigDict(frozen=True)

    pair: DualityPair
    sign: Literal[1, -1]

    def evaluate(self, T: Operator) -> Scalar:
        return self.sign * self.pair.value(T)


class AttainmentSet(BaseModel):
    """Signed pairs q with q(T) = w(T)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    operator: Operator
    radius: Scalar
    entries: Tuple[SignedPair, ...]

    def __len__(self) -> int:
        return len(self.entries)


def enumerate_pairs(space: PolyhedralSpace) -> List[DualityPair]:
    """Canonical pairs ordered by vertex index, then facet index."""
    pairs = [DualityPair(vertex_index=int(i), facet_index=int(j)) for i, j in space.pair_index]
    logger.debug("%s has %d canonical pairs", space.describe(), len(pairs))
    return pairs


def signed_pairs(space: PolyhedralSpace) -> List[SignedPair]:
    """Both signs of every canonical pair, + before -."""
    return [SignedPair(pair=p, sign=s) for p in enumerate_pairs(space) for s in (1, -1)]


def pair_functionals(space: PolyhedralSpace) -> np.ndarray:
    """Row p is the canonical pair functional x_p*⊗x_p as a dim²-vector."""
    index = space.pair_index
    if len(index) == 0:
        return np.zeros((0, space.dim * space.dim), dtype=object if space.exact else float)
    F = space.facets[index[:, 1]]
    V = space.vertices[index[:, 0]]
    return (F[:, :, None] * V[:, None, :]).reshape(len(index), -1)


def _chunk_values(space: PolyhedralSpace, matrix: np.ndarray, rows: np.ndarray) -> np.ndarray:
    F = space.facets[rows[:, 1]]
    V = space.vertices[rows[:, 0]]
    return (F.dot(matrix) * V).sum(axis=1)


def pair_values(T: Operator) -> np.ndarray:
    """x_p*(T x_p) for every canonical pair, in enumeration order."""
    index = T.space.pair_index
    if settings.threads > 1 and len(index) > PAIR_CHUNK:
        chunks = [index[k:k + PAIR_CHUNK] for k in range(0, len(index), PAIR_CHUNK)]
        with ThreadPoolExecutor(max_workers=settings.threads) as pool:
            parts = list(pool.map(lambda rows: _chunk_values(T.space, T.matrix, rows), chunks))
        return np.concatenate(parts)
    return _chunk_values(T.space, T.matrix, index)


def numerical_radius(T: Operator) -> Scalar:
    """w(T) = max over canonical pairs of |x*(Tx)|."""
    values = pair_values(T)
    if len(values) == 0:
        return 0 if T.space.exact else 0.0
    return scalar(np.max(np.abs(values)))


def attainment_set(T: Operator, rel_tol: Optional[float] = None) -> AttainmentSet:
    """Signed pairs q with q(T) >= w(T)(1 - rel_tol); one sign per canonical pair."""
    rel_tol = settings.attainment_rel_tol if rel_tol is None else rel_tol
    values = pair_values(T)
    radius = scalar(np.max(np.abs(values))) if len(values) else 0
    if radius == 0:
        raise DegenerateOperatorError("w(T) = 0: the operator is invisible to every duality pair")
    threshold = radius if T.space.exact else radius * (1 - rel_tol)
    entries = []
    for pair, value in zip(enumerate_pairs(T.space), values):
        if abs(value) >= threshold:
            entries.append(SignedPair(pair=pair, sign=1 if value > 0 else -1))
    logger.debug("attainment set has %d of %d pairs", len(entries), len(values))
    return AttainmentSet(operator=T, radius=radius, entries=tuple(entries))


def operator_norm(T: Operator) -> Scalar:
    """max over vertices v of norm(Tv)."""
    images = T.matrix.dot(T.space.vertices.T)
    return scalar(np.max(np.abs(T.space.facets.dot(images))))


def w_kernel(space: PolyhedralSpace, exact: bool = True) -> List[np.ndarray]:
    """Basis of {T : x*(Tx) = 0 for every canonical pair}; empty iff w is a norm."""
    rows = pair_functionals(space)
    basis = nullspace(list(rows), space.dim * space.dim, exact=exact)
    return [vector.reshape(space.dim, space.dim) for vector in basis]


def uniform_sampler(rng: np.random.Generator, dim: int) -> np.ndarray:
    return rng.uniform(-1.0, 1.0, size=(dim, dim))


def numerical_index_lower_bound(
    space: PolyhedralSpace,
    samples: int,
    seed: int,
    sampler: Callable[[np.random.Generator, int], np.ndarray] = uniform_sampler,
) -> float:
    """Smallest w(T) seen over random T with operator norm 1.

    This is an upper bound on the numerical index of the space, found by
    sampling only; it is a diagnostic, not a certified value.
    """
    if samples < 1:
        raise InvalidParameterError("samples must be positive")
    if w_kernel(space):
        raise NormFailureError(f"w is not a norm on operators of {space.describe()}")
    rng = np.random.default_rng(seed)
    best: Optional[float] = None
    for _ in range(samples):
        T = Operator.from_matrix(space, sampler(rng, space.dim))
        size = float(operator_norm(T))
        if size == 0:
            logger.warning("sampled a zero operator; skipping")
            continue
        ratio = float(numerical_radius(T)) / size
        best = ratio if best is None else min(best, ratio)
    if best is None:
        raise DegenerateOperatorError("every sampled operator was zero")
    return best


def extreme_pairs(space: PolyhedralSpace) -> List[bool]:
    """Whether each canonical pair functional is an extreme point of the dual w-ball.

    φ_p is extreme unless it is a convex combination of the other ±φ_q.
    """
    phis = pair_functionals(space)
    flags = []
    for p in range(len(phis)):
        others = [s * phis[q] - phis[p] for q in range(len(phis)) if q != p for s in (1, -1)]
        flags.append(not others or not hull_membership(others, exact=space.exact).feasible)
    return flags


def sample_a_elements(space: PolyhedralSpace, rng: np.random.Generator, count: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Random (f, x) with x on the unit sphere and f a convex combination of facets norming x.

    x cycles through random directions, vertices and midpoints of two vertices
    sharing a facet, so faces normed by several facets are sampled too.
    """
    facets = np.array(space.facets, dtype=float)
    vertices = np.array(space.vertices, dtype=float)
    on_facet = [np.flatnonzero(np.abs(vertices.dot(f) - 1) <= 1e-12) for f in facets]
    samples = []
    while len(samples) < count:
        kind = len(samples) % 3
        if kind == 0:
            x = rng.normal(size=space.dim)
        elif kind == 1:
            x = vertices[rng.integers(len(vertices))]
        else:
            face = on_facet[rng.integers(len(facets))]
            first, second = rng.choice(face, size=2, replace=False) if len(face) > 1 else (face[0], face[0])
            x = (vertices[first] + vertices[second]) / 2
        size = float(norm(space, x))
        if size == 0:
            continue
        x = x / size
        values = facets.dot(x)
        norming = np.flatnonzero(values >= 1 - 1e-12)
        weights = rng.dirichlet(np.ones(len(norming)))
        f = weights.dot(facets[norming])
        samples.append((f, x))
    return samples
