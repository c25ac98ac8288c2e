"""
Pydantic schemas for the JSON documents read and written by the CLI.
"""

from fractions import Fraction
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, FiniteFloat, field_validator, model_validator

# Finite JSON numbers, or "p/q" strings for exact input/output
Number = Union[FiniteFloat, str]


def dump_scalar(value: Any) -> Number:
    """Floats stay floats; Fractions become "p/q" strings ("p" for integers)."""
    if isinstance(value, Fraction):
        return str(value)
    return float(value)


def _check_number(value: Number) -> Number:
    if isinstance(value, str):
        try:
            float(Fraction(value))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"'{value}' is not a rational number")
        except OverflowError:
            raise ValueError(f"'{value}' is out of the floating-point range")
    return value


def _check_rectangular(rows: List[List[Number]], width: int, what: str) -> None:
    for index, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(f"{what} row {index} has length {len(row)}, expected {width}")
        for value in row:
            _check_number(value)


# Input documents
class SpaceDocument(BaseModel):
    """Custom space: both vertex and facet lists are required."""
    dim: int = Field(..., ge=1)
    vertices: List[List[Number]] = Field(..., min_length=1)
    facets: List[List[Number]] = Field(..., min_length=1)
    tolerance: FiniteFloat = Field(1e-10, ge=0)

    @model_validator(mode="after")
    def check_lengths(self) -> "SpaceDocument":
        _check_rectangular(self.vertices, self.dim, "vertex")
        _check_rectangular(self.facets, self.dim, "facet")
        return self


class OperatorDocument(BaseModel):
    matrix: List[List[Number]] = Field(..., min_length=1)

    @field_validator("matrix")
    @classmethod
    def check_square(cls, matrix: List[List[Number]]) -> List[List[Number]]:
        _check_rectangular(matrix, len(matrix), "matrix")
        return matrix


class SubspaceDocument(BaseModel):
    basis: List[List[List[Number]]] = Field(default_factory=list)

    @field_validator("basis")
    @classmethod
    def check_square(cls, basis: List[List[List[Number]]]) -> List[List[List[Number]]]:
        for matrix in basis:
            _check_rectangular(matrix, len(matrix), "basis matrix")
        return basis


class VectorsDocument(BaseModel):
    z: List[List[Number]] = Field(default_factory=list)

    @field_validator("z")
    @classmethod
    def check_numbers(cls, z: List[List[Number]]) -> List[List[Number]]:
        if z:
            _check_rectangular(z, len(z[0]), "z")
        return z


# Output documents
class PairOut(BaseModel):
    vertex: int
    facet: int


class SignedPairOut(BaseModel):
    vertex: int
    facet: int
    sign: int


class CertificateEntryOut(BaseModel):
    vertex: int
    facet: int
    sign: int
    weight: Number


class RadiusResponse(BaseModel):
    w: Number
    operator_norm: Number
    attainment: List[SignedPairOut]


class NormCheckResponse(BaseModel):
    w_is_norm: bool
    kernel_dim: int


class PairsResponse(BaseModel):
    count: int
    pairs: List[PairOut]
    extreme: List[bool]


class OrthoResponse(BaseModel):
    orthogonal: bool
    w: Number
    certificate: List[CertificateEntryOut] = Field(default_factory=list)
    verified: Optional[bool] = None


class DistanceResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    value: Number
    lambda_: List[Number] = Field(..., alias="lambda")
    certificate: List[CertificateEntryOut]
    gap: Number
    degenerate: bool
    residual_nu_smooth: Optional[bool] = None
    smooth_value: Optional[Number] = None
    verified: Optional[bool] = None


class SmoothResponse(BaseModel):
    nu_smooth: bool
    witness: Optional[SignedPairOut] = None
    margin: float
    attaining: List[SignedPairOut]


class EquivalenceResponse(BaseModel):
    hypotheses_met: bool
    nu_smooth: bool
    witness_smooth: bool
    lhs: bool
    rhs: bool
    agree: bool
    forward_implication: Optional[bool] = None


class IndexResponse(BaseModel):
    value: float
    samples: int
    seed: int


# Error models
class ErrorDetail(BaseModel):
    """Error detail model."""
    type: str
    message: str
    field: Optional[str] = None


class ErrorResponse(BaseModel):
    """Error response model."""
    error: str
    details: List[ErrorDetail] = Field(default_factory=list)


def response_payload(response: BaseModel) -> Dict[str, Any]:
    return response.model_dump(mode="json", by_alias=True)
