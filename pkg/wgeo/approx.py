"""
Distance from an operator to a subspace in the numerical-radius norm.

Two LPs are solved independently and must agree:

* the dual maximizes Σ t_q q(T) over convex weights on all signed pairs subject
  to Σ t_q q(S_j) = 0 for every basis element (its basic solution is the
  certificate, support <= n + 1);
* the primal minimizes r subject to |q(T) - Σ λ_j q(S_j)| <= r for every
  canonical pair, which is min over λ of w(T - Σ λ_j S_j).
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from .config import settings
from .errors import InconsistencyError, NormFailureError
from .linalg import Scalar, rank, scalar
from .ortho import OperatorSubspace, OrthoCertificate, certificate_from_weights, make_subspace
from .pairs import Operator, SignedPair, numerical_radius, pair_functionals, pair_values, signed_pairs
from .smooth import is_nu_smooth
from .solver import LinearProgram, LpResult, solve

logger = logging.getLogger(__name__)


class DualResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: Scalar
    certificate: OrthoCertificate
    degenerate: bool = False
    lp: Optional[LpResult] = None


class PrimalResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: Scalar
    minimizer: Tuple[Scalar, ...]
    degenerate: bool = False
    lp: Optional[LpResult] = None


class DistanceResult(BaseModel):
    """d_w(T, V) with a dual certificate and a best approximation S* = Σ λ*_j S_j."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: Scalar
    dual_value: Scalar
    primal_value: Scalar
    certificate: OrthoCertificate
    minimizer: Tuple[Scalar, ...]
    duality_gap: Scalar
    residual_radius: Scalar
    degenerate: bool = False


class TwoPointResult(BaseModel):
    """value = t q1(T) + (1 - t) q2(T) with t q1(A) + (1 - t) q2(A) = 0."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: Scalar
    t: Scalar
    first: SignedPair
    second: SignedPair


class SmoothDistanceResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    applicable: bool
    residual_nu_smooth: bool = False
    value: Optional[Scalar] = None
    witness: Optional[SignedPair] = None
    reason: str = ""


def _require_norm(V: OperatorSubspace) -> None:
    space = V.space
    if rank(list(pair_functionals(space)), space.exact) < space.dim * space.dim:
        raise NormFailureError(f"w is not a norm on operators of {space.describe()}")


def _signed_values(values: np.ndarray) -> np.ndarray:
    """Interleave +v, -v to match the order of signed_pairs."""
    return np.column_stack([values, -values]).reshape(-1)


def distance_dual(T: Operator, V: OperatorSubspace) -> DualResult:
    """max Σ t_q q(T) s.t. Σ t_q = 1, Σ t_q q(S_j) = 0, t >= 0."""
    _require_norm(V)
    exact = T.space.exact
    degenerate = V.contains(T)
    if degenerate:
        logger.info("T lies in the subspace; distance is 0")
    objective = _signed_values(pair_values(T))
    rows = [np.ones(len(objective), dtype=int)] + [_signed_values(pair_values(S)) for S in V.basis]
    lp = LinearProgram.build(objective, np.array(rows, dtype=object), [1] + [0] * V.n, exact=exact)
    result = solve(lp, exact=exact)
    if not result.optimal:
        raise InconsistencyError(f"dual distance LP ended {result.status.value}")
    certificate = certificate_from_weights(signed_pairs(T.space), result.solution)
    if certificate.support > V.n + 1:
        raise InconsistencyError(f"dual certificate support {certificate.support} exceeds n + 1 = {V.n + 1}")
    value = result.value if not degenerate else (0 if exact else 0.0)
    return DualResult(value=value, certificate=certificate, degenerate=degenerate, lp=result)


def distance_primal(T: Operator, V: OperatorSubspace) -> PrimalResult:
    """min r s.t. -r <= q(T) - Σ λ_j q(S_j) <= r over canonical pairs q."""
    _require_norm(V)
    exact = T.space.exact
    degenerate = V.contains(T)
    b = pair_values(T)
    a = (np.column_stack([pair_values(S) for S in V.basis]) if V.n
         else np.zeros((len(b), 0), dtype=object if exact else float))
    pairs, n = len(b), V.n
    # columns: r, λ+ (n), λ- (n), s1 (pairs), s2 (pairs)
    ones = np.ones((pairs, 1), dtype=int)
    eye = np.eye(pairs, dtype=int)
    zero = np.zeros((pairs, pairs), dtype=int)
    upper = np.concatenate([-ones, -a, a, eye, zero], axis=1)
    lower = np.concatenate([-ones, a, -a, zero, eye], axis=1)
    objective = np.zeros(1 + 2 * n + 2 * pairs, dtype=int)
    objective[0] = -1
    lp = LinearProgram.build(objective, np.concatenate([upper, lower], axis=0),
                             np.concatenate([-b, b]), exact=exact)
    result = solve(lp, exact=exact)
    if not result.optimal:
        raise InconsistencyError(f"primal distance LP ended {result.status.value}")
    t = result.solution
    minimizer = tuple(scalar(t[1 + j] - t[1 + n + j]) for j in range(n))
    return PrimalResult(value=scalar(t[0]), minimizer=minimizer, degenerate=degenerate, lp=result)


def distance(T: Operator, V: OperatorSubspace) -> DistanceResult:
    """Dual and primal distance; raises InconsistencyError when they disagree."""
    if settings.threads > 1:
        with ThreadPoolExecutor(max_workers=2) as pool:
            dual_future = pool.submit(distance_dual, T, V)
            primal_future = pool.submit(distance_primal, T, V)
            dual, primal = dual_future.result(), primal_future.result()
    else:
        dual, primal = distance_dual(T, V), distance_primal(T, V)

    exact = T.space.exact
    gap = abs(dual.value - primal.value)
    allowed = 0 if exact else settings.gap_tol * max(1.0, abs(float(primal.value)))
    if gap > allowed:
        logger.warning("duality gap %s exceeds %s (dual %s, primal %s)", gap, allowed, dual.value, primal.value)
        raise InconsistencyError(f"duality gap {gap} exceeds tolerance {allowed}")

    residual = T.minus(V.combination(primal.minimizer))
    return DistanceResult(
        value=dual.value,
        dual_value=dual.value,
        primal_value=primal.value,
        certificate=dual.certificate,
        minimizer=primal.minimizer,
        duality_gap=scalar(gap),
        residual_radius=numerical_radius(residual),
        degenerate=dual.degenerate,
    )


def verify_distance(T: Operator, V: OperatorSubspace, result: DistanceResult, tol: Optional[float] = None) -> bool:
    """Independent re-check of the dual certificate, the minimizer and the gap."""
    exact = T.space.exact
    tol = 0 if exact else (settings.gap_tol if tol is None else tol)
    scale = 1 if exact else max(1.0, abs(float(result.value)))
    entries = result.certificate.entries
    if not entries or len(entries) > V.n + 1:
        return False
    weights = [entry.weight for entry in entries]
    if any(t <= 0 for t in weights) or abs(sum(weights) - 1) > tol:
        return False
    if abs(sum(e.weight * e.pair.evaluate(T) for e in entries) - result.value) > tol * scale:
        return False
    for S in V.basis:
        if abs(sum(e.weight * e.pair.evaluate(S) for e in entries)) > tol * scale:
            return False
    residual = T.minus(V.combination(result.minimizer))
    if abs(numerical_radius(residual) - result.value) > tol * scale:
        return False
    return result.duality_gap <= tol * scale


def two_point_distance(T: Operator, A: Operator) -> TwoPointResult:
    """Distance to span{A} as a combination of at most two signed pairs."""
    V = make_subspace(T.space, [A])
    dual = distance_dual(T, V)
    entries = dual.certificate.entries
    first = entries[0]
    second = entries[1] if len(entries) > 1 else entries[0]
    return TwoPointResult(value=dual.value, t=first.weight, first=first.pair, second=second.pair)


def smooth_distance(T: Operator, V: OperatorSubspace, result: Optional[DistanceResult] = None) -> SmoothDistanceResult:
    """Single-pair distance formula, valid when T - S* is nu-smooth.

    d_w(T, V) = max{q(T) : q a signed pair with q(S_j) = 0 for all j}; the
    precondition is verified on the computed best approximation S*.
    """
    result = result or distance(T, V)
    exact = T.space.exact
    residual = T.minus(V.combination(result.minimizer))
    if numerical_radius(residual) <= (0 if exact else settings.zero_tol):
        return SmoothDistanceResult(applicable=False, reason="residual T - S* is zero")
    report = is_nu_smooth(residual)
    if not report.nu_smooth:
        logger.info("smooth distance not applicable: residual has %d attaining pairs", len(report.attaining.entries))
        return SmoothDistanceResult(applicable=False, reason="residual T - S* is not nu-smooth")

    zero = 0 if exact else settings.zero_tol
    candidates = signed_pairs(T.space)
    basis_values = [_signed_values(pair_values(S)) for S in V.basis]
    target = _signed_values(pair_values(T))
    admissible = [k for k in range(len(candidates)) if all(abs(values[k]) <= zero for values in basis_values)]
    if not admissible:
        return SmoothDistanceResult(applicable=False, residual_nu_smooth=True,
                                    reason="no signed pair annihilates the subspace")
    best = max(admissible, key=lambda k: target[k])
    value = scalar(target[best])
    allowed = 0 if exact else settings.gap_tol * max(1.0, abs(float(result.value)))
    if abs(value - result.value) > allowed:
        raise InconsistencyError(f"smooth distance {value} differs from LP distance {result.value}")
    return SmoothDistanceResult(applicable=True, residual_nu_smooth=True, value=value, witness=candidates[best])
