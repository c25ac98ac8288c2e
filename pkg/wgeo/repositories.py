"""
File-based repository for spaces, operators, subspaces and vector families.
"""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, List, Type, TypeVar

import numpy as np
from pydantic import BaseModel, ValidationError

from .errors import InvalidDocumentError
from .linalg import to_fraction
from .ortho import OperatorSubspace, make_subspace
from .pairs import Operator
from .schemas import Number, OperatorDocument, SpaceDocument, SubspaceDocument, VectorsDocument
from .space import PolyhedralSpace, from_vertices_and_facets, parse_space_name

logger = logging.getLogger(__name__)

DocumentT = TypeVar("DocumentT", bound=BaseModel)


def _coerce(value: Number, exact: bool) -> Any:
    try:
        if exact:
            return Fraction(value) if isinstance(value, str) else to_fraction(value)
        return float(Fraction(value)) if isinstance(value, str) else float(value)
    except (OverflowError, ValueError) as e:
        raise InvalidDocumentError(f"unusable number {value!r}: {e}")


def _rows(rows: List[List[Number]], exact: bool) -> List[List[Any]]:
    return [[_coerce(value, exact) for value in row] for row in rows]


class JsonInputRepository:
    """Repository that reads JSON documents relative to a base directory."""

    def __init__(self, base_dir: str = "."):
        self.base_dir = Path(base_dir)

    def _read(self, path: str, model: Type[DocumentT]) -> DocumentT:
        target = self.base_dir / path
        try:
            raw = target.read_text()
        except OSError as e:
            raise InvalidDocumentError(f"cannot read {target}: {e.strerror or e}")
        try:
            document = model.model_validate(json.loads(raw))
        except json.JSONDecodeError as e:
            raise InvalidDocumentError(f"{target} is not valid JSON: {e.msg} (line {e.lineno})")
        except ValidationError as e:
            first = e.errors()[0]
            location = ".".join(str(part) for part in first["loc"]) or "document"
            raise InvalidDocumentError(f"{target}: {location}: {first['msg']}")
        logger.debug("Loaded %s from %s", model.__name__, target)
        return document

    def load_space(self, spec: str, exact: bool = False) -> PolyhedralSpace:
        """Resolve 'l1:n', 'linf:n', 'poly:m' or 'file:path.json'."""
        if spec.startswith("file:"):
            document = self._read(spec[len("file:"):], SpaceDocument)
            return from_vertices_and_facets(
                document.dim,
                _rows(document.vertices, exact),
                _rows(document.facets, exact),
                tolerance=document.tolerance,
                exact=exact,
            )
        return parse_space_name(spec, exact=exact)

    def load_operator(self, space: PolyhedralSpace, path: str) -> Operator:
        document = self._read(path, OperatorDocument)
        return Operator.from_matrix(space, np.array(_rows(document.matrix, space.exact), dtype=object))

    def load_subspace(self, space: PolyhedralSpace, path: str) -> OperatorSubspace:
        document = self._read(path, SubspaceDocument)
        matrices = [np.array(_rows(matrix, space.exact), dtype=object) for matrix in document.basis]
        return make_subspace(space, matrices)

    def load_vectors(self, space: PolyhedralSpace, path: str) -> List[np.ndarray]:
        document = self._read(path, VectorsDocument)
        return [space.vector(row) for row in _rows(document.z, space.exact)]
