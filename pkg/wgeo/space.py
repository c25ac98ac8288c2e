"""
Finite-dimensional real normed spaces whose unit ball is a symmetric polytope.

A space is described from both sides: the ball vertices (extreme points of the
unit ball) and the facet functionals (extreme points of the dual ball). The norm
of a vector is the largest |f(v)| over facets; the dual norm of a functional is
the largest |f(v)| over vertices.
"""

import itertools
import logging
import math
from functools import cached_property
from typing import Any, List, Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from .config import settings
from .errors import (
    DimensionMismatchError, InvalidDimensionError, InvalidParameterError,
    SpaceValidationError,
)
from .linalg import Scalar, as_array, rank, scalar, to_fraction
from .solver import hull_membership

logger = logging.getLogger(__name__)


class Violation(BaseModel):
    """One failed PolyhedralSpace invariant."""

    model_config = ConfigDict(frozen=True)

    invariant: Literal["dimension", "symmetry", "normalization", "polarity", "extremality"]
    kind: Literal["vertex", "facet"]
    index: int
    message: str


class PolyhedralSpace(BaseModel):
    """Symmetric polytope unit ball given by its vertices and facet functionals.

    Instances are immutable; build them through the builders or
    from_vertices_and_facets so that they are validated.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    dim: int
    vertices: np.ndarray
    facets: np.ndarray
    tolerance: float = 1e-10
    exact: bool = False

    @property
    def slack(self) -> Scalar:
        return 0 if self.exact else self.tolerance

    @cached_property
    def vertex_antipodes(self) -> np.ndarray:
        return _antipodes(self.vertices, self.slack)

    @cached_property
    def facet_antipodes(self) -> np.ndarray:
        return _antipodes(self.facets, self.slack)

    @cached_property
    def pair_index(self) -> np.ndarray:
        """(vertex, facet) index rows of the canonical duality pairs.

        A pair is canonical when f(v) = 1 and the first nonzero coordinate of v
        is positive; (-f, -v) is the same functional on operators and is skipped.
        """
        rows = []
        for i, v in enumerate(self.vertices):
            lead = next((x for x in v if abs(x) > self.slack), 0)
            if lead <= 0:
                continue
            for j, f in enumerate(self.facets):
                if abs(f.dot(v) - 1) <= self.slack:
                    rows.append((i, j))
        return np.array(rows, dtype=int).reshape(-1, 2)

    def vector(self, values: Any) -> np.ndarray:
        """Coerce values to a vector of this space's scalar field."""
        v = as_array(values, self.exact).reshape(-1)
        if v.shape != (self.dim,):
            raise DimensionMismatchError(f"vector has length {v.shape[0]}, space dimension is {self.dim}")
        return v

    def functional(self, values: Any) -> np.ndarray:
        f = as_array(values, self.exact).reshape(-1)
        if f.shape != (self.dim,):
            raise DimensionMismatchError(f"functional has length {f.shape[0]}, space dimension is {self.dim}")
        return f

    def as_exact(self) -> "PolyhedralSpace":
        """Same geometry in rational arithmetic."""
        if self.exact:
            return self
        return PolyhedralSpace(
            dim=self.dim,
            vertices=as_array(self.vertices, True),
            facets=as_array(self.facets, True),
            tolerance=0.0,
            exact=True,
        )

    def describe(self) -> str:
        return f"PolyhedralSpace(dim={self.dim}, vertices={len(self.vertices)}, facets={len(self.facets)})"


def _antipodes(points: np.ndarray, slack: Scalar) -> np.ndarray:
    """Index of -p for each point p, or -1 when it is missing."""
    result = np.full(len(points), -1, dtype=int)
    for i, p in enumerate(points):
        for j, q in enumerate(points):
            if all(abs(a + b) <= slack for a, b in zip(p, q)):
                result[i] = j
                break
    return result


def norm(space: PolyhedralSpace, v: Any) -> Scalar:
    """max over facets f of |f(v)|."""
    v = space.vector(v)
    return scalar(np.max(np.abs(space.facets.dot(v))))


def dual_norm(space: PolyhedralSpace, f: Any) -> Scalar:
    """max over vertices v of |f(v)|."""
    f = space.functional(f)
    return scalar(np.max(np.abs(space.vertices.dot(f))))


def _dedupe(points: np.ndarray, exact: bool) -> np.ndarray:
    seen = set()
    keep = []
    for i, p in enumerate(points):
        if exact:
            key = tuple(p)
        else:
            key = tuple(round(float(x), settings.dedup_digits) + 0.0 for x in p)
        if key not in seen:
            seen.add(key)
            keep.append(i)
    return points[keep]


def from_vertices_and_facets(
    dim: int,
    vertices: Sequence[Sequence[Any]],
    facets: Sequence[Sequence[Any]],
    tolerance: Optional[float] = None,
    exact: bool = False,
) -> PolyhedralSpace:
    """Build, deduplicate and validate a space; raises SpaceValidationError."""
    if dim < 1:
        raise InvalidDimensionError(f"dimension must be positive, got {dim}")
    if len(vertices) == 0 or len(facets) == 0:
        raise InvalidParameterError("vertex and facet lists must be nonempty")
    for kind, rows in (("vertex", vertices), ("facet", facets)):
        for index, row in enumerate(rows):
            if len(row) != dim:
                raise SpaceValidationError([Violation(
                    invariant="dimension", kind=kind, index=index,
                    message=f"length {len(row)} differs from dimension {dim}",
                )])
    tolerance = settings.space_tolerance if tolerance is None else tolerance
    space = PolyhedralSpace(
        dim=dim,
        vertices=_dedupe(as_array(vertices, exact).reshape(-1, dim), exact),
        facets=_dedupe(as_array(facets, exact).reshape(-1, dim), exact),
        tolerance=0.0 if exact else tolerance,
        exact=exact,
    )
    violations = validate(space)
    dropped = len(vertices) + len(facets) - len(space.vertices) - len(space.facets)
    if dropped:
        logger.info("dropped %d duplicate rows; indices refer to the deduplicated lists", dropped)
    if violations:
        raise SpaceValidationError(violations)
    logger.debug("Built %s", space.describe())
    return space


def validate(space: PolyhedralSpace) -> List[Violation]:
    """Check symmetry, normalization, polarity and extremality; violations are data."""
    violations: List[Violation] = []
    slack = space.slack
    V, F = space.vertices, space.facets
    signed = V.dot(F.T)  # signed[i, j] = f_j(v_i)
    values = np.abs(signed)

    for kind, points, antipodes in (("vertex", V, space.vertex_antipodes), ("facet", F, space.facet_antipodes)):
        for index in np.flatnonzero(antipodes < 0):
            violations.append(Violation(
                invariant="symmetry", kind=kind, index=int(index),
                message=f"negation of {kind} {int(index)} is missing",
            ))

    for i in range(len(V)):
        top = np.max(values[i])
        if abs(top - 1) > slack:
            violations.append(Violation(
                invariant="normalization", kind="vertex", index=i,
                message=f"max |f(v)| over facets is {float(top):.12g}, expected 1",
            ))

    for j in range(len(F)):
        top = np.max(values[:, j])
        if abs(top - 1) > slack:
            violations.append(Violation(
                invariant="polarity", kind="facet", index=j,
                message=f"max |f(v)| over vertices is {float(top):.12g}, expected 1",
            ))
            continue
        support = [V[i] for i in range(len(V)) if abs(signed[i, j] - 1) <= slack]
        if rank(support, space.exact) < space.dim:
            violations.append(Violation(
                invariant="polarity", kind="facet", index=j,
                message=f"attains 1 on fewer than {space.dim} independent vertices",
            ))

    for i in range(len(V)):
        support = [F[j] for j in range(len(F)) if abs(signed[i, j] - 1) <= slack]
        if rank(support, space.exact) < space.dim:
            violations.append(Violation(
                invariant="polarity", kind="vertex", index=i,
                message=f"attains 1 on fewer than {space.dim} independent facets",
            ))

    for kind, points in (("vertex", V), ("facet", F)):
        for index in range(len(points)):
            if _is_hull_point(points, index, space.exact):
                violations.append(Violation(
                    invariant="extremality", kind=kind, index=index,
                    message=f"{kind} {index} is a convex combination of the others",
                ))

    if violations:
        logger.info("%s failed validation with %d violations", space.describe(), len(violations))
    return violations


def _is_hull_point(points: np.ndarray, index: int, exact: bool) -> bool:
    others = [points[k] - points[index] for k in range(len(points)) if k != index]
    if not others:
        return False
    return hull_membership(others, exact=exact).feasible


def _check_dimension(n: int) -> None:
    if n < 1:
        raise InvalidDimensionError(f"dimension must be positive, got {n}")


def build_l1(n: int, exact: bool = False) -> PolyhedralSpace:
    """ℓ1^n: vertices ±e_k, facets all sign vectors."""
    _check_dimension(n)
    eye = np.eye(n, dtype=int)
    vertices = [sign * eye[k] for k in range(n) for sign in (1, -1)]
    facets = [list(signs) for signs in itertools.product((1, -1), repeat=n)]
    return from_vertices_and_facets(n, vertices, facets, exact=exact)


def build_linf(n: int, exact: bool = False) -> PolyhedralSpace:
    """ℓ∞^n: vertices all sign vectors, facets ±e_k*."""
    _check_dimension(n)
    eye = np.eye(n, dtype=int)
    vertices = [list(signs) for signs in itertools.product((1, -1), repeat=n)]
    facets = [sign * eye[k] for k in range(n) for sign in (1, -1)]
    return from_vertices_and_facets(n, vertices, facets, exact=exact)


def _snap(values: np.ndarray) -> np.ndarray:
    rounded = np.round(values)
    return np.where(np.abs(values - rounded) < 1e-14, rounded, values) + 0.0


def build_regular_polygon(m: int, exact: bool = False) -> PolyhedralSpace:
    """Regular m-gon ball in the plane; each facet solves f(v_k) = f(v_k+1) = 1."""
    if m < 4 or m % 2:
        raise InvalidParameterError(f"polygon needs an even vertex count >= 4, got {m}")
    if exact and m != 4:
        raise InvalidParameterError(f"poly:{m} has irrational coordinates; exact mode needs poly:4")
    angles = 2 * math.pi * np.arange(m) / m
    vertices = _snap(np.column_stack([np.cos(angles), np.sin(angles)]))
    facets = []
    for k in range(m):
        edge = np.array([vertices[k], vertices[(k + 1) % m]])
        facets.append(_snap(np.linalg.solve(edge, np.ones(2))))
    if exact:
        vertices = [[to_fraction(x) for x in v] for v in vertices]
        facets = [[to_fraction(x) for x in f] for f in facets]
    return from_vertices_and_facets(2, vertices, facets, exact=exact)


def parse_space_name(spec: str, exact: bool = False) -> PolyhedralSpace:
    """Resolve builder names such as 'l1:3', 'linf:2', 'poly:6'."""
    name, _, arg = spec.partition(":")
    builders = {"l1": build_l1, "linf": build_linf, "poly": build_regular_polygon}
    if name not in builders or not arg:
        raise InvalidParameterError(f"unknown space spec '{spec}' (expected l1:n, linf:n, poly:m or file:path)")
    try:
        size = int(arg)
    except ValueError:
        raise InvalidParameterError(f"space size must be an integer in '{spec}'")
    return builders[name](size, exact=exact)
