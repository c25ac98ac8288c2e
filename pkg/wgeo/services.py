"""
Service layer behind the CLI verbs.

Each method loads its inputs through the repository, runs the computation and
returns a response schema ready for JSON output.
"""

import logging
from typing import Optional

from .approx import distance, smooth_distance, verify_distance
from .errors import InvalidParameterError
from .ortho import OrthoCertificate, make_subspace, op_bj_single, op_bj_subspace, verify_certificate
from .pairs import (
    SignedPair, attainment_set, enumerate_pairs, extreme_pairs, numerical_index_lower_bound,
    numerical_radius, operator_norm, w_kernel,
)
from .repositories import JsonInputRepository
from .schemas import (
    CertificateEntryOut, DistanceResponse, EquivalenceResponse, IndexResponse, NormCheckResponse,
    OrthoResponse, PairOut, PairsResponse, RadiusResponse, SignedPairOut, SmoothResponse, dump_scalar,
)
from .smooth import equivalence_check, is_nu_smooth

logger = logging.getLogger(__name__)


def _signed(q: SignedPair) -> SignedPairOut:
    return SignedPairOut(vertex=q.pair.vertex_index, facet=q.pair.facet_index, sign=q.sign)


def _certificate(certificate: Optional[OrthoCertificate]) -> list:
    if certificate is None:
        return []
    return [
        CertificateEntryOut(
            vertex=entry.pair.pair.vertex_index,
            facet=entry.pair.pair.facet_index,
            sign=entry.pair.sign,
            weight=dump_scalar(entry.weight),
        )
        for entry in certificate.entries
    ]


class AnalysisService:
    """Service for numerical-radius computations on polyhedral spaces."""

    def __init__(self, repository: Optional[JsonInputRepository] = None, exact: bool = False):
        self.repository = repository or JsonInputRepository()
        self.exact = exact

    def radius(self, space_spec: str, op_path: str) -> RadiusResponse:
        space = self.repository.load_space(space_spec, self.exact)
        T = self.repository.load_operator(space, op_path)
        w = numerical_radius(T)
        attainment = attainment_set(T).entries if w != 0 else ()
        logger.info("w(T) = %s over %d attaining pairs", w, len(attainment))
        return RadiusResponse(
            w=dump_scalar(w),
            operator_norm=dump_scalar(operator_norm(T)),
            attainment=[_signed(q) for q in attainment],
        )

    def norm_check(self, space_spec: str) -> NormCheckResponse:
        space = self.repository.load_space(space_spec, self.exact)
        kernel = w_kernel(space, exact=True)
        return NormCheckResponse(w_is_norm=not kernel, kernel_dim=len(kernel))

    def pairs(self, space_spec: str) -> PairsResponse:
        space = self.repository.load_space(space_spec, self.exact)
        pairs = enumerate_pairs(space)
        return PairsResponse(
            count=len(pairs),
            pairs=[PairOut(vertex=p.vertex_index, facet=p.facet_index) for p in pairs],
            extreme=extreme_pairs(space),
        )

    def ortho(self, space_spec: str, op_path: str, direction_path: Optional[str] = None,
              subspace_path: Optional[str] = None, verify: bool = False) -> OrthoResponse:
        if (direction_path is None) == (subspace_path is None):
            raise InvalidParameterError("give exactly one of --dir and --subspace")
        space = self.repository.load_space(space_spec, self.exact)
        T = self.repository.load_operator(space, op_path)
        if direction_path is not None:
            A = self.repository.load_operator(space, direction_path)
            V = make_subspace(space, [A])
            result = op_bj_single(T, A)
        else:
            V = self.repository.load_subspace(space, subspace_path)
            result = op_bj_subspace(T, V)
        verified = None
        if verify and result.certificate is not None:
            verified = verify_certificate(T, V, result.certificate)
        return OrthoResponse(
            orthogonal=result.orthogonal,
            w=dump_scalar(result.radius),
            certificate=_certificate(result.certificate),
            verified=verified,
        )

    def dist(self, space_spec: str, op_path: str, subspace_path: str, verify: bool = False) -> DistanceResponse:
        space = self.repository.load_space(space_spec, self.exact)
        T = self.repository.load_operator(space, op_path)
        V = self.repository.load_subspace(space, subspace_path)
        result = distance(T, V)
        smooth = smooth_distance(T, V, result)
        return DistanceResponse(
            value=dump_scalar(result.value),
            lambda_=[dump_scalar(x) for x in result.minimizer],
            certificate=_certificate(result.certificate),
            gap=dump_scalar(result.duality_gap),
            degenerate=result.degenerate,
            residual_nu_smooth=smooth.residual_nu_smooth,
            smooth_value=dump_scalar(smooth.value) if smooth.applicable else None,
            verified=verify_distance(T, V, result) if verify else None,
        )

    def smooth(self, space_spec: str, op_path: str) -> SmoothResponse:
        space = self.repository.load_space(space_spec, self.exact)
        T = self.repository.load_operator(space, op_path)
        report = is_nu_smooth(T)
        return SmoothResponse(
            nu_smooth=report.nu_smooth,
            witness=_signed(report.witness) if report.witness else None,
            margin=report.margin,
            attaining=[_signed(q) for q in report.attaining.entries],
        )

    def equiv(self, space_spec: str, op_path: str, z_path: str) -> EquivalenceResponse:
        space = self.repository.load_space(space_spec, self.exact)
        T = self.repository.load_operator(space, op_path)
        Z = self.repository.load_vectors(space, z_path)
        report = equivalence_check(T, Z)
        return EquivalenceResponse(**report.model_dump(exclude={"witness"}))

    def index(self, space_spec: str, samples: int, seed: int) -> IndexResponse:
        if samples < 1:
            raise InvalidParameterError("--samples must be positive")
        space = self.repository.load_space(space_spec, self.exact)
        value = numerical_index_lower_bound(space, samples, seed)
        return IndexResponse(value=value, samples=samples, seed=seed)
