"""
Birkhoff-James orthogonality, for vectors in X and for operators in the
numerical-radius norm.

T ⊥_w V holds exactly when 0 lies in the convex hull of the points
(q(S_1), ..., q(S_n)), q ranging over the signed pairs with q(T) = w(T). The hull
test is a small LP whose basic solution is the certificate (support <= n + 1).
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from .config import settings
from .errors import DependentBasisError, DimensionMismatchError, UnsupportedError, ZeroVectorError
from .linalg import Scalar, rank, scalar
from .pairs import AttainmentSet, Operator, SignedPair, attainment_set, numerical_radius, pair_values
from .solver import hull_membership
from .space import PolyhedralSpace, norm

logger = logging.getLogger(__name__)

GRID_CHUNK_ELEMENTS = 2_000_000


class OperatorSubspace(BaseModel):
    """Span of linearly independent operators S_1..S_n (n may be 0)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    space: PolyhedralSpace
    basis: Tuple[Operator, ...] = ()

    @property
    def n(self) -> int:
        return len(self.basis)

    def combination(self, coefficients: Sequence[Any]) -> Operator:
        """Σ λ_j S_j."""
        total = np.zeros((self.space.dim, self.space.dim), dtype=object if self.space.exact else float)
        for coefficient, S in zip(coefficients, self.basis):
            total = total + coefficient * S.matrix
        return Operator(space=self.space, matrix=total)

    def contains(self, T: Operator) -> bool:
        rows = [S.matrix.reshape(-1) for S in self.basis]
        return rank(rows + [T.matrix.reshape(-1)], self.space.exact) == rank(rows, self.space.exact)


class CertificateEntry(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    pair: SignedPair
    weight: Scalar


class OrthoCertificate(BaseModel):
    """Convex weights over attaining signed pairs with Σ t·q(S_j) = 0 for every basis element."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: Tuple[CertificateEntry, ...]

    @property
    def support(self) -> int:
        return len(self.entries)


class OrthoResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    orthogonal: bool
    radius: Scalar
    certificate: Optional[OrthoCertificate] = None
    attainment: Optional[AttainmentSet] = None


class VectorOrthoResult(BaseModel):
    """x ⊥_B span(Z) verdict with weights over the facets norming x."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    orthogonal: bool
    facets: Tuple[int, ...]
    weights: Optional[Tuple[Scalar, ...]] = None


class GridResult(BaseModel):
    minimum: float
    argmin: Tuple[float, ...]


def make_subspace(space: PolyhedralSpace, matrices: Sequence[Any]) -> OperatorSubspace:
    """Wrap matrices as a subspace basis; rejects dependent families."""
    basis = []
    for matrix in matrices:
        S = matrix if isinstance(matrix, Operator) else Operator.from_matrix(space, matrix)
        if S.space.dim != space.dim:
            raise DimensionMismatchError("basis operator belongs to a space of another dimension")
        basis.append(S)
    if basis and rank([S.matrix.reshape(-1) for S in basis], space.exact) < len(basis):
        raise DependentBasisError(f"the {len(basis)} basis operators are linearly dependent")
    return OperatorSubspace(space=space, basis=tuple(basis))


def certificate_from_weights(entries: Sequence[SignedPair], weights: np.ndarray) -> OrthoCertificate:
    return OrthoCertificate(entries=tuple(
        CertificateEntry(pair=q, weight=scalar(t)) for q, t in zip(entries, weights) if t > 0
    ))


def vector_bj(space: PolyhedralSpace, x: Any, Z: Sequence[Any]) -> VectorOrthoResult:
    """x ⊥_B span(Z) iff some f in J(x) vanishes on Z."""
    x = space.vector(x)
    if all(c == 0 for c in x):
        raise ZeroVectorError("x must be nonzero")
    Z = [space.vector(z) for z in Z]
    size = norm(space, x)
    values = space.facets.dot(x)
    threshold = size if space.exact else size * (1 - settings.attainment_rel_tol)
    norming = [j for j, value in enumerate(values) if value >= threshold]
    points = [[space.facets[j].dot(z) for z in Z] for j in norming]
    hull = hull_membership(points, exact=space.exact)
    weights = tuple(scalar(t) for t in hull.weights) if hull.feasible else None
    return VectorOrthoResult(orthogonal=hull.feasible, facets=tuple(norming), weights=weights)


def op_bj_single(T: Operator, A: Operator) -> OrthoResult:
    """T ⊥_w A iff 0 ∈ co{q(A) : q(T) = w(T)}."""
    attained = attainment_set(T)
    points = [[q.evaluate(A)] for q in attained.entries]
    hull = hull_membership(points, exact=T.space.exact)
    certificate = certificate_from_weights(attained.entries, hull.weights) if hull.feasible else None
    return OrthoResult(orthogonal=hull.feasible, radius=attained.radius, certificate=certificate, attainment=attained)


def op_bj_subspace(T: Operator, V: OperatorSubspace) -> OrthoResult:
    """T ⊥_w V iff 0 ∈ co{(q(S_1), ..., q(S_n)) : q(T) = w(T)}."""
    attained = attainment_set(T)
    points = [[q.evaluate(S) for S in V.basis] for q in attained.entries]
    hull = hull_membership(points, exact=T.space.exact)
    certificate = certificate_from_weights(attained.entries, hull.weights) if hull.feasible else None
    if certificate is not None and certificate.support > V.n + 1:
        logger.warning("certificate support %d exceeds n + 1 = %d", certificate.support, V.n + 1)
    return OrthoResult(orthogonal=hull.feasible, radius=attained.radius, certificate=certificate, attainment=attained)


def verify_certificate(T: Operator, V: OperatorSubspace, certificate: OrthoCertificate,
                       tol: Optional[float] = None) -> bool:
    """Re-check an orthogonality certificate by direct evaluation."""
    exact = T.space.exact
    tol = 0 if exact else (settings.gap_tol if tol is None else tol)
    if not certificate.entries or certificate.support > V.n + 1:
        return False
    radius = numerical_radius(T)
    weights = [entry.weight for entry in certificate.entries]
    if any(t <= 0 for t in weights) or abs(sum(weights) - 1) > tol:
        return False
    scale = max(1, abs(radius)) if not exact else 1
    if any(abs(entry.pair.evaluate(T) - radius) > tol * scale for entry in certificate.entries):
        return False
    for S in V.basis:
        total = sum(entry.weight * entry.pair.evaluate(S) for entry in certificate.entries)
        if abs(total) > tol * scale:
            return False
    return True


def symmetry_check(T: Operator, A: Operator) -> Tuple[bool, bool]:
    """(T ⊥_w A, A ⊥_w T); orthogonality is not symmetric and a mismatch is only logged."""
    forward = op_bj_single(T, A).orthogonal
    backward = op_bj_single(A, T).orthogonal
    if forward != backward:
        logger.info("non-symmetric orthogonality: T ⊥ A is %s, A ⊥ T is %s", forward, backward)
    return forward, backward


def _grid_axis(radius: float, step: float) -> np.ndarray:
    count = int(round(2 * radius / step))
    return np.linspace(-radius, radius, count + 1)


def _chunk_minimum(b: np.ndarray, a: np.ndarray, first: np.ndarray, second: np.ndarray) -> Tuple[float, Tuple[float, float]]:
    # residual[i, k, p] = b_p - λ1_i a_1p - λ2_k a_2p
    residual = (b[None, None, :] - first[:, None, None] * a[0][None, None, :]
                - second[None, :, None] * a[1][None, None, :])
    radii = np.max(np.abs(residual), axis=2)
    flat = int(np.argmin(radii))
    i, k = divmod(flat, radii.shape[1])
    return float(radii[i, k]), (float(first[i]), float(second[k]))


def grid_oracle_min(T: Operator, V: OperatorSubspace, radius: float = 10.0, step: float = 1e-3) -> GridResult:
    """Brute-force min of w(T - Σ λ_j S_j) over the grid [-R, R]^n with spacing h (n <= 2)."""
    if V.n > 2:
        raise UnsupportedError(f"grid oracle supports subspaces of dimension <= 2, got {V.n}")
    b = np.array(pair_values(T), dtype=float)
    if V.n == 0:
        return GridResult(minimum=float(np.max(np.abs(b))) if len(b) else 0.0, argmin=())
    a = [np.array(pair_values(S), dtype=float) for S in V.basis]
    axis = _grid_axis(radius, step)
    if V.n == 1:
        radii = np.max(np.abs(b[None, :] - axis[:, None] * a[0][None, :]), axis=1)
        i = int(np.argmin(radii))
        return GridResult(minimum=float(radii[i]), argmin=(float(axis[i]),))

    rows = max(1, GRID_CHUNK_ELEMENTS // (len(axis) * max(1, len(b))))
    chunks = [axis[k:k + rows] for k in range(0, len(axis), rows)]
    logger.debug("grid oracle: %d x %d points in %d chunks", len(axis), len(axis), len(chunks))
    with ThreadPoolExecutor(max_workers=settings.threads) as pool:
        parts = list(pool.map(lambda first: _chunk_minimum(b, a, first, axis), chunks))
    best_value, best_point = parts[0]
    for value, point in parts[1:]:
        if value < best_value:
            best_value, best_point = value, point
    return GridResult(minimum=best_value, argmin=best_point)
