"""
Nu-smoothness of operators, smoothness of vectors, and the link between
operator orthogonality to L(X, Z) and vector orthogonality to Z.

Over the reals an operator T is nu-smooth exactly when a single signed pair
attains w(T): the attainment set is {(μx₀, μx₀*) : μ = ±1}.
"""

import logging
from typing import Any, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from .config import settings
from .errors import DependentBasisError, InconsistencyError, InvalidParameterError, ZeroVectorError
from .linalg import rank
from .ortho import OperatorSubspace, make_subspace, op_bj_subspace, vector_bj
from .pairs import AttainmentSet, Operator, SignedPair, attainment_set, enumerate_pairs, pair_values
from .space import PolyhedralSpace, norm

logger = logging.getLogger(__name__)


class SmoothnessReport(BaseModel):
    """Nu-smoothness verdict with the strict-gap margin (w - second best) / w."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    nu_smooth: bool
    attaining: AttainmentSet
    witness: Optional[SignedPair] = None
    margin: float


class PointSmoothness(BaseModel):
    model_config = ConfigDict(frozen=True)

    smooth: bool
    facets: Tuple[int, ...]


class EquivalenceReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    hypotheses_met: bool
    nu_smooth: bool
    witness_smooth: bool
    lhs: bool
    rhs: bool
    agree: bool
    forward_implication: Optional[bool] = None
    witness: Optional[SignedPair] = None


class PerturbationResult(BaseModel):
    stable: bool
    min_margin: float
    samples: int


def _margin(T: Operator, witness_index: Optional[int]) -> float:
    values = np.abs(np.array(pair_values(T), dtype=float))
    radius = float(np.max(values))
    if witness_index is None:
        ordered = np.sort(values)[::-1]
        second = ordered[1] if len(ordered) > 1 else 0.0
    else:
        others = np.delete(values, witness_index)
        second = float(np.max(others)) if len(others) else 0.0
    return (radius - second) / radius


def is_nu_smooth(T: Operator) -> SmoothnessReport:
    """Classify T by the number of signed pairs attaining w(T)."""
    attained = attainment_set(T)
    nu_smooth = len(attained.entries) == 1
    witness = attained.entries[0] if nu_smooth else None
    witness_index = enumerate_pairs(T.space).index(witness.pair) if witness else None
    margin = _margin(T, witness_index)
    logger.debug("nu-smooth=%s with %d attaining pairs, margin %.3g", nu_smooth, len(attained.entries), margin)
    return SmoothnessReport(nu_smooth=nu_smooth, attaining=attained, witness=witness, margin=margin)


def is_smooth_point(space: PolyhedralSpace, x: Any) -> PointSmoothness:
    """x is smooth iff exactly one signed facet g has g(x) = norm(x)."""
    x = space.vector(x)
    if all(c == 0 for c in x):
        raise ZeroVectorError("x must be nonzero")
    size = norm(space, x)
    threshold = size if space.exact else size * (1 - settings.attainment_rel_tol)
    norming = tuple(j for j, value in enumerate(space.facets.dot(x)) if value >= threshold)
    return PointSmoothness(smooth=len(norming) == 1, facets=norming)


def operators_into_subspace_basis(space: PolyhedralSpace, Z: Sequence[Any]) -> OperatorSubspace:
    """Basis of L(X, Z): the rank-one maps x ↦ e_i*(x) z_j."""
    vectors = [space.vector(z) for z in Z]
    if vectors and rank(vectors, space.exact) < len(vectors):
        raise DependentBasisError("Z must be linearly independent")
    basis = []
    for z in vectors:
        for i in range(space.dim):
            matrix = np.zeros((space.dim, space.dim), dtype=object if space.exact else float)
            matrix[:, i] = z
            basis.append(matrix)
    return make_subspace(space, basis)


def equivalence_check(T: Operator, Z: Sequence[Any]) -> EquivalenceReport:
    """Compare T ⊥_w L(X, Z) with x₀ ⊥_B Z for the attaining pair (x₀, x₀*)."""
    space = T.space
    report = is_nu_smooth(T)
    V = operators_into_subspace_basis(space, Z)
    lhs = op_bj_subspace(T, V).orthogonal

    pair = (report.witness or report.attaining.entries[0]).pair
    x0 = space.vertices[pair.vertex_index]
    witness_smooth = is_smooth_point(space, x0).smooth
    rhs = vector_bj(space, x0, Z).orthogonal

    hypotheses_met = report.nu_smooth and witness_smooth
    forward = (rhs or not lhs) if report.nu_smooth else None
    if forward is False:
        raise InconsistencyError("T ⊥_w L(X, Z) holds but x₀ ⊥_B Z fails for a nu-smooth T")
    if hypotheses_met and lhs != rhs:
        raise InconsistencyError(f"operator verdict {lhs} differs from vector verdict {rhs}")
    if not hypotheses_met:
        logger.info("equivalence hypotheses not met (nu-smooth=%s, x0 smooth=%s)", report.nu_smooth, witness_smooth)
    return EquivalenceReport(
        hypotheses_met=hypotheses_met,
        nu_smooth=report.nu_smooth,
        witness_smooth=witness_smooth,
        lhs=lhs,
        rhs=rhs,
        agree=lhs == rhs,
        forward_implication=forward,
        witness=report.witness,
    )


def search_hypothesis_operator(space: PolyhedralSpace, seed: int, max_tries: int = 1000,
                               scale: float = 3.0) -> Optional[Operator]:
    """Random search for a nu-smooth T whose witness vertex is a smooth point."""
    if not any(is_smooth_point(space, v).smooth for v in space.vertices):
        logger.info("no vertex of %s is a smooth point; hypotheses cannot be met", space.describe())
        return None
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        T = Operator.from_matrix(space, rng.uniform(-scale, scale, size=(space.dim, space.dim)))
        if T.is_zero():
            continue
        report = is_nu_smooth(T)
        if report.nu_smooth and is_smooth_point(space, space.vertices[report.witness.pair.vertex_index]).smooth:
            return T
    return None


def perturbation_margin(T: Operator, scale: float, seed: int, samples: int = 100) -> PerturbationResult:
    """Check the witness pair stays the unique strict maximizer under random perturbations."""
    report = is_nu_smooth(T)
    if not report.nu_smooth:
        raise InvalidParameterError("perturbation margin needs a nu-smooth operator")
    witness_index = enumerate_pairs(T.space).index(report.witness.pair)
    rng = np.random.default_rng(seed)
    margins = []
    for _ in range(samples):
        noise = rng.uniform(-scale, scale, size=T.matrix.shape)
        perturbed = Operator.from_matrix(T.space, np.array(T.matrix, dtype=float) + noise)
        values = np.abs(np.array(pair_values(perturbed), dtype=float))
        if np.argmax(values) != witness_index:
            margins.append(-1.0)
            continue
        margins.append(_margin(perturbed, witness_index))
    smallest = float(min(margins))
    return PerturbationResult(stable=smallest > 0, min_margin=smallest, samples=samples)
