"""Named deformation kinds: JSON specification -> (algebra, H, F, J)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

import numpy as np
import scipy.linalg
from loguru import logger
from pydantic import TypeAdapter, ValidationError

from src.amalgam import Amalgam, build_amalgam, build_bipartite_amalgam
from src.errors import SpecificationError
from src.finvn import Bimodule, TracialAlgebra, direct_sum, gns
from src.fock import Deformation, RawTower
from src.model import (
    AmalgamDeformationSpec,
    DeformationSpec,
    MatrixDeformationSpec,
    QFlipDeformationSpec,
    ZeroDeformationSpec,
    to_complex,
)
from src.utility import Registry
from src.wick import Involution, star_permutation, swap_matrix


@dataclass(eq=False)
class DeformationBundle:
    algebra: TracialAlgebra
    H: Bimodule
    deformation: Deformation
    involution: Involution
    amalgam: Amalgam | None = None

    @property
    def tower(self) -> RawTower:
        return self.deformation.tower


class DeformationKindRegistry(Registry):
    items: dict[str, Callable[[Any], DeformationBundle]] = {}
    kind: str = "deformation kind"


DeformationKinds: DeformationKindRegistry = DeformationKindRegistry()

_SPEC_ADAPTER: TypeAdapter = TypeAdapter(DeformationSpec)


def scalar_module(dim: int) -> Bimodule:
    """ℂ^dim as a ℂ–ℂ bimodule."""
    return direct_sum(*[gns(TracialAlgebra.scalars()) for _ in range(dim)])


@DeformationKinds.register(key="zero")
def _build_zero(spec: ZeroDeformationSpec) -> DeformationBundle:
    M: TracialAlgebra = spec.algebra.build() if spec.algebra else TracialAlgebra.scalars()
    H: Bimodule = direct_sum(*[gns(M) for _ in range(spec.copies)])
    tower = RawTower(H)
    A: np.ndarray = scipy.linalg.block_diag(*[star_permutation(M) for _ in range(spec.copies)])
    return DeformationBundle(M, H, Deformation.zero(tower), Involution(tower, A))


@DeformationKinds.register(key="q_flip")
def _build_q_flip(spec: QFlipDeformationSpec) -> DeformationBundle:
    H: Bimodule = scalar_module(spec.dim)
    tower = RawTower(H)
    F: np.ndarray = -spec.q * swap_matrix(spec.dim, spec.dim)
    return DeformationBundle(H.algebra, H, Deformation.from_product(tower, F), Involution.conjugation(tower))


@DeformationKinds.register(key="matrix")
def _build_matrix(spec: MatrixDeformationSpec) -> DeformationBundle:
    H: Bimodule = scalar_module(spec.dim)
    tower = RawTower(H)
    F: np.ndarray = np.array([[to_complex(v) for v in row] for row in spec.entries], dtype=complex)
    return DeformationBundle(H.algebra, H, Deformation.from_product(tower, F), Involution.conjugation(tower))


@DeformationKinds.register(key="amalgam")
def _build_amalgam(spec: AmalgamDeformationSpec) -> DeformationBundle:
    amalgam: Amalgam = build_amalgam(spec.spec)
    return DeformationBundle(amalgam.algebra, amalgam.H, amalgam.deformation, amalgam.involution, amalgam)


@DeformationKinds.register(key="bipartite_amalgam")
def _build_bipartite(spec: AmalgamDeformationSpec) -> DeformationBundle:
    result = build_bipartite_amalgam(spec.spec)
    return DeformationBundle(result.algebra, result.H, result.deformation, result.involution)


def parse_deformation(data: dict[str, Any] | Any) -> Any:
    if not isinstance(data, dict):
        return data
    try:
        return _SPEC_ADAPTER.validate_python(data)
    except ValidationError as ex:
        raise SpecificationError(f"invalid deformation specification: {ex}") from ex


def build_deformation(data: dict[str, Any] | Any) -> DeformationBundle:
    spec = parse_deformation(data)
    bundle: DeformationBundle = DeformationKinds.get(spec.kind)(spec)
    logger.debug(f"built deformation '{spec.kind}': dim H = {bundle.H.dim}, flags {bundle.deformation.flags.to_dict()}")
    return bundle


STANDARD_CORPUS: dict[str, dict[str, Any]] = {
    "free": {"kind": "zero", "copies": 1},
    "free_two_modes": {"kind": "zero", "copies": 2},
    "q_gaussian_+0.3": {"kind": "q_flip", "q": 0.3},
    "q_gaussian_-0.3": {"kind": "q_flip", "q": -0.3},
    "q_gaussian_+0.7": {"kind": "q_flip", "q": 0.7},
    "q_gaussian_-0.7": {"kind": "q_flip", "q": -0.7},
    "dihedral_amalgam": {"kind": "amalgam"},
}
"""Deformations every suite runs over; the q = ±1 endpoints are left to the unit tests."""
