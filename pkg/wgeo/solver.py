"""
Dense two-phase simplex for equality-form linear programs.

    maximize c·t  subject to  A t = b,  t >= 0

Bland's rule picks both the entering column (lowest index with positive reduced
cost) and the leaving row (lowest basic index among ratio-test ties), so every
solve is deterministic and cannot cycle. The same tableau code runs on float64
arrays or on object arrays of Fractions (exact mode, zero slack).
"""

import logging
from enum import Enum
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from .config import settings
from .errors import DimensionMismatchError, InconsistencyError
from .linalg import Scalar, as_array, is_exact, scalar

logger = logging.getLogger(__name__)

MAX_PIVOTS = 100_000


class LpStatus(str, Enum):
    """Outcome of a simplex solve."""
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LinearProgram(BaseModel):
    """maximize objective·t s.t. eq_matrix t = eq_rhs, t >= 0."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    objective: np.ndarray
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray

    @model_validator(mode="after")
    def check_shapes(self) -> "LinearProgram":
        if self.eq_matrix.ndim != 2:
            raise DimensionMismatchError("eq_matrix must be two-dimensional")
        rows, cols = self.eq_matrix.shape
        if self.objective.shape != (cols,):
            raise DimensionMismatchError(f"objective has length {self.objective.shape}, expected {cols}")
        if self.eq_rhs.shape != (rows,):
            raise DimensionMismatchError(f"eq_rhs has length {self.eq_rhs.shape}, expected {rows}")
        return self

    @classmethod
    def build(cls, objective: Any, eq_matrix: Any, eq_rhs: Any, exact: bool = False) -> "LinearProgram":
        c = as_array(objective, exact)
        b = as_array(eq_rhs, exact)
        a = as_array(eq_matrix, exact)
        if a.size == 0:
            a = a.reshape(len(b), len(c))
        return cls(objective=c, eq_matrix=a, eq_rhs=b)

    @property
    def n_rows(self) -> int:
        return self.eq_matrix.shape[0]

    @property
    def exact(self) -> bool:
        return is_exact(self.eq_matrix) or is_exact(self.objective) or is_exact(self.eq_rhs)

    def as_exact(self) -> "LinearProgram":
        return LinearProgram.build(self.objective, self.eq_matrix, self.eq_rhs, exact=True)


class LpResult(BaseModel):
    """Result of a solve; solution and value are set only when optimal."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    status: LpStatus
    value: Optional[Scalar] = None
    solution: Optional[np.ndarray] = None
    basis: Tuple[int, ...] = ()
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == LpStatus.OPTIMAL

    def support(self) -> List[int]:
        if self.solution is None:
            return []
        return [k for k, t in enumerate(self.solution) if t > 0]


class HullResult(BaseModel):
    """Whether 0 is a convex combination of the given points, with the weights."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    feasible: bool
    weights: Optional[np.ndarray] = None

    def support(self) -> List[int]:
        if self.weights is None:
            return []
        return [k for k, t in enumerate(self.weights) if t > 0]


class _Tableau:
    """Simplex tableau [A | b] with its basis and reduced-cost row."""

    def __init__(self, matrix: np.ndarray, rhs: np.ndarray, basis: List[int], exact: bool, eps: float):
        self.exact = exact
        self.eps = eps
        self.rows = np.concatenate([matrix, rhs.reshape(-1, 1)], axis=1)
        self.basis = basis
        self.pivots = 0
        self.reduced: np.ndarray = np.zeros(0)

    @property
    def width(self) -> int:
        return self.rows.shape[1] - 1

    def price(self, cost: np.ndarray) -> None:
        """Reduced-cost row for the given objective; last entry is -(objective value)."""
        full = np.concatenate([cost, np.zeros(1, dtype=cost.dtype)])
        if self.exact:
            full = np.array([Fraction(x) for x in full], dtype=object)
        for i, var in enumerate(self.basis):
            if cost[var] != 0:
                full = full - cost[var] * self.rows[i]
        self.reduced = full

    def pivot(self, row: int, col: int) -> None:
        self.rows[row] = self.rows[row] / self.rows[row, col]
        factors = self.rows[:, col].copy()
        factors[row] = 0
        self.rows = self.rows - np.outer(factors, self.rows[row])
        self.reduced = self.reduced - self.reduced[col] * self.rows[row]
        if not self.exact:
            self.rows[:, col] = 0.0
            self.rows[row, col] = 1.0
            self.reduced[col] = 0.0
        self.basis[row] = col
        self.pivots += 1

    def entering(self, columns: int) -> Optional[int]:
        for j in range(columns):
            if self.reduced[j] > self.eps:
                return j
        return None

    def leaving(self, col: int) -> Optional[int]:
        best_row, best_ratio = None, None
        for i in range(self.rows.shape[0]):
            a = self.rows[i, col]
            if a <= self.eps:
                continue
            ratio = self.rows[i, -1] / a
            if (best_ratio is None or ratio < best_ratio - self.eps
                    or (abs(ratio - best_ratio) <= self.eps and self.basis[i] < self.basis[best_row])):
                best_row, best_ratio = i, ratio
        return best_row

    def optimize(self, columns: int) -> LpStatus:
        while True:
            if self.pivots > MAX_PIVOTS:
                raise InconsistencyError(f"simplex exceeded {MAX_PIVOTS} pivots")
            col = self.entering(columns)
            if col is None:
                return LpStatus.OPTIMAL
            row = self.leaving(col)
            if row is None:
                return LpStatus.UNBOUNDED
            self.pivot(row, col)


def _solve(lp: LinearProgram, exact: bool) -> LpResult:
    eps = 0 if exact else settings.pivot_tol
    a = np.array(lp.eq_matrix, dtype=object if exact else float)
    b = np.array(lp.eq_rhs, dtype=object if exact else float)
    c = np.array(lp.objective, dtype=object if exact else float)
    m, n = a.shape

    for i in range(m):
        if b[i] < 0:
            a[i] = -a[i]
            b[i] = -b[i]

    identity = np.eye(m, dtype=float)
    if exact:
        a = np.array([[Fraction(x) for x in row] for row in a], dtype=object).reshape(m, n)
        b = np.array([Fraction(x) for x in b], dtype=object)
        c = np.array([Fraction(x) for x in c], dtype=object)
        identity = np.array([[Fraction(int(i == j)) for j in range(m)] for i in range(m)], dtype=object).reshape(m, m)

    tableau = _Tableau(np.concatenate([a, identity], axis=1), b, list(range(n, n + m)), exact, eps)

    # Phase one: drive the artificial variables to zero.
    phase_one = np.concatenate([np.zeros(n, dtype=c.dtype), -np.ones(m, dtype=c.dtype)])
    if exact:
        phase_one = np.array([Fraction(x) for x in phase_one], dtype=object)
    tableau.price(phase_one)
    tableau.optimize(n + m)
    infeasibility = tableau.reduced[-1]
    scale = 1.0 if exact else max(1.0, float(np.max(np.abs(b))) if m else 1.0)
    if infeasibility > eps * scale:
        logger.debug("LP infeasible after %d phase-one pivots (residual %s)", tableau.pivots, infeasibility)
        return LpResult(status=LpStatus.INFEASIBLE, pivots=tableau.pivots)

    # Pivot remaining artificials out of the basis; rows where that is impossible are redundant.
    redundant = []
    for i in range(m):
        if tableau.basis[i] < n:
            continue
        col = next((j for j in range(n) if abs(tableau.rows[i, j]) > eps), None)
        if col is None:
            redundant.append(i)
        else:
            tableau.pivot(i, col)
    keep = [i for i in range(m) if i not in redundant]
    tableau.rows = np.concatenate([tableau.rows[keep, :n], tableau.rows[keep, -1:]], axis=1)
    tableau.basis = [tableau.basis[i] for i in keep]

    # Phase two on the original objective.
    tableau.price(c)
    status = tableau.optimize(n)
    if status == LpStatus.UNBOUNDED:
        logger.debug("LP unbounded after %d pivots", tableau.pivots)
        return LpResult(status=status, pivots=tableau.pivots)

    solution = np.zeros(n, dtype=object if exact else float)
    if exact:
        solution = np.array([Fraction(0)] * n, dtype=object)
    for i, var in enumerate(tableau.basis):
        value = tableau.rows[i, -1]
        if not exact and abs(value) <= eps:
            value = 0.0
        solution[var] = value
    value = scalar(np.dot(c, solution)) if n else (Fraction(0) if exact else 0.0)
    logger.debug("LP optimal: %d rows, %d columns, %d pivots", m, n, tableau.pivots)
    return LpResult(
        status=LpStatus.OPTIMAL,
        value=value,
        solution=solution,
        basis=tuple(sorted(tableau.basis)),
        pivots=tableau.pivots,
    )


def lp_solve(lp: LinearProgram) -> LpResult:
    """Float-mode simplex (exact Fraction data is solved exactly instead)."""
    return _solve(lp, exact=lp.exact)


def lp_solve_exact(lp: LinearProgram) -> LpResult:
    """Rational simplex: every float is replaced by its exact binary value."""
    return _solve(lp.as_exact(), exact=True)


def solve(lp: LinearProgram, exact: bool = False) -> LpResult:
    return lp_solve_exact(lp) if exact else _solve(lp, exact=False)


def verify_lp_solution(lp: LinearProgram, result: LpResult, tol: Optional[float] = None) -> bool:
    """Independently re-check feasibility and objective of an optimal result."""
    if not result.optimal or result.solution is None:
        return False
    exact = lp.exact and is_exact(result.solution)
    tol = 0 if exact else (settings.gap_tol if tol is None else tol)
    t = result.solution
    if any(x < (0 if exact else -1e-12) for x in t):
        return False
    residual = lp.eq_matrix.dot(t) - lp.eq_rhs if lp.n_rows else np.zeros(0)
    if any(abs(r) > tol for r in residual):
        return False
    return abs(np.dot(lp.objective, t) - result.value) <= tol


def hull_membership(points: Sequence[Sequence[Any]], exact: bool = False) -> HullResult:
    """Decide whether 0 lies in the convex hull of the points.

    A basic solution of {sum t_i p_i = 0, sum t_i = 1, t >= 0} is returned, so
    the support never exceeds the point dimension plus one.
    """
    if len(points) == 0:
        return HullResult(feasible=False)
    k = len(points)
    data = as_array(points, exact).reshape(k, len(points[0]))
    ones = np.array([[Fraction(1) if exact else 1.0] * k], dtype=object if exact else float)
    eq_matrix = np.concatenate([data.T, ones], axis=0)
    rhs = [0] * data.shape[1] + [1]
    lp = LinearProgram.build([0] * k, eq_matrix, rhs, exact=exact)
    result = solve(lp, exact=exact)
    if not result.optimal:
        return HullResult(feasible=False)
    return HullResult(feasible=True, weights=result.solution)
