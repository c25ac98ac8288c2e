"""
Scalar-field helpers shared by every module.

Arrays are float64 in float mode and object arrays of Fraction in exact mode;
rank and null-space computations go through numpy (float) or sympy (exact).
"""

from fractions import Fraction
from typing import Any, List, Sequence, Union

import numpy as np
import sympy

Scalar = Union[float, Fraction]


def to_fraction(value: Any) -> Fraction:
    """Exact rational value of an int, float, Fraction or "p/q" string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (np.floating, np.integer)):
        value = value.item()
    return Fraction(value)


def to_float(value: Any) -> float:
    if isinstance(value, str):
        return float(Fraction(value))
    return float(value)


def as_array(values: Any, exact: bool) -> np.ndarray:
    """Convert nested numbers to a float64 array or an object array of Fractions."""
    raw = np.array(values, dtype=object)
    if exact:
        if raw.size == 0:
            return raw
        return np.vectorize(to_fraction, otypes=[object])(raw)
    if raw.size == 0:
        return np.zeros(raw.shape, dtype=float)
    return np.vectorize(to_float, otypes=[float])(raw)


def _rational(value: Any) -> sympy.Rational:
    fraction = to_fraction(value)
    return sympy.Rational(fraction.numerator, fraction.denominator)


def is_exact(array: np.ndarray) -> bool:
    return array.dtype == object


def scalar(value: Any) -> Scalar:
    """Unwrap numpy scalars; Fractions pass through."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (np.floating, np.integer, int, float)):
        return float(value)
    return value


def rank(rows: Sequence[Sequence[Any]], exact: bool, tol: float = 1e-9) -> int:
    """Rank of a matrix given by rows; exact elimination in exact mode."""
    matrix = np.array(rows, dtype=object if exact else float)
    if matrix.size == 0:
        return 0
    if exact:
        return sympy.Matrix([[_rational(x) for x in row] for row in matrix]).rank()
    scale = max(1.0, float(np.max(np.abs(matrix))))
    return int(np.linalg.matrix_rank(matrix, tol=tol * scale))


def nullspace(rows: Sequence[Sequence[Any]], columns: int, exact: bool = True,
              tol: float = 1e-9) -> List[np.ndarray]:
    """Basis of {x : rows @ x = 0}.

    Exact mode converts every entry to its exact rational value and eliminates
    with sympy; float mode uses the SVD.
    """
    if len(rows) == 0:
        identity = as_array(np.eye(columns, dtype=int), exact)
        return [identity[k] for k in range(columns)]
    if exact:
        matrix = sympy.Matrix([[_rational(x) for x in row] for row in rows])
        basis = matrix.nullspace()
        return [
            np.array([Fraction(int(e.p), int(e.q)) for e in vector], dtype=object)
            for vector in basis
        ]
    matrix = np.array(rows, dtype=float)
    _, singular, vh = np.linalg.svd(matrix)
    scale = max(1.0, float(singular[0]) if singular.size else 1.0)
    numeric_rank = int(np.sum(singular > tol * scale))
    return [vh[k] for k in range(numeric_rank, columns)]
