"""JSON models for everything the command line reads: radial functions, algebras, deformations and amalgams."""

from __future__ import annotations

from typing import Annotated, Any, Literal, Optional, Union

from pydantic import AliasChoices, BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, field_validator, model_validator

# A complex scalar on the wire: a real number or a [re, im] pair.
ComplexLike = Union[float, list[float]]


def to_complex(value: ComplexLike | complex | None) -> complex:
    if value is None:
        return 0j
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f"complex value must be [re, im], got {value}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def from_complex(value: Any) -> Any:
    """Canonical wire form: plain float when the imaginary part vanishes."""
    if isinstance(value, complex):
        return value.real if value.imag == 0 else [value.real, value.imag]
    if isinstance(value, tuple):
        return list(value)
    return value


class RadialFunction(BaseModel):
    """A function ℕ → ℂ given by a kind and its parameters."""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    kind: Literal["table", "geometric", "constant", "alternating", "even_lift", "sum"]
    values: Optional[list[ComplexLike]] = None
    tail: Literal["zero", "constant", "alternating_constant"] = "zero"
    r: Optional[ComplexLike] = Field(None, validation_alias=AliasChoices("r", "ratio"))
    value: Optional[ComplexLike] = None
    of: Optional[RadialFunction] = Field(None, validation_alias=AliasChoices("of", "base"))
    terms: Optional[list[RadialFunction]] = None

    @field_validator("r", "value", mode="before")
    @classmethod
    def validate_scalar(cls, v):
        return from_complex(v)

    @field_validator("values", mode="before")
    @classmethod
    def validate_values(cls, v):
        if v is None:
            return v
        return [from_complex(x) for x in v]

    @model_validator(mode="after")
    def check_kind_fields(self) -> RadialFunction:
        required: dict[str, str] = {"table": "values", "geometric": "r", "even_lift": "of", "sum": "terms"}
        name: str | None = required.get(self.kind)
        if name and getattr(self, name) is None:
            raise ValueError(f"radial function of kind '{self.kind}' requires field '{name}'")
        if self.kind == "table" and not self.values:
            raise ValueError("table kind needs at least one value")
        if self.kind == "table" and self.tail == "alternating_constant" and len(self.values) < 2:
            raise ValueError("alternating_constant tail needs at least two stored values")
        if self.kind == "geometric" and abs(self.ratio) >= 1:
            raise ValueError(f"geometric kind requires |r| < 1, got {self.ratio}")
        return self

    @property
    def ratio(self) -> complex:
        return to_complex(self.r)

    @property
    def scalar(self) -> complex:
        return to_complex(1.0 if self.value is None else self.value)

    @property
    def table(self) -> list[complex]:
        return [to_complex(v) for v in self.values or []]

    def to_json(self) -> dict[str, Any]:
        return self.model_dump(exclude_none=True, exclude_defaults=False, mode="json")


class BlockSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    dim: PositiveInt
    weight: PositiveFloat


class AlgebraSpec(BaseModel):
    """{"blocks": [{"dim": 2, "weight": 0.25}, {"dim": 1, "weight": 0.5}]}"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    blocks: list[BlockSpec] = Field(..., min_length=1)

    @model_validator(mode="after")
    def check_normalized(self) -> AlgebraSpec:
        total: float = sum(b.dim * b.weight for b in self.blocks)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"trace is not normalized: sum of weight*dim = {total}")
        return self

    def build(self):
        from src.finvn import TracialAlgebra  # pylint: disable=import-outside-toplevel

        return TracialAlgebra.create([(b.dim, b.weight) for b in self.blocks])


class EmbeddingSpec(BaseModel):
    """multiplicities[b][c]: copies of the P-block c sitting diagonally in the block b of the factor."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    multiplicities: list[list[int]]


class FactorSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    algebra: AlgebraSpec
    embedding: Union[Literal["unital_diagonal"], EmbeddingSpec] = "unital_diagonal"


class AmalgamSpecModel(BaseModel):
    """{"P": {...}, "factors": [{"algebra": {...}, "embedding": "unital_diagonal"}]}"""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    p: AlgebraSpec = Field(..., alias="P")
    factors: list[FactorSpec] = Field(..., min_length=1)


DIHEDRAL: dict[str, Any] = {
    "P": {"blocks": [{"dim": 1, "weight": 1.0}]},
    "factors": [
        {"algebra": {"blocks": [{"dim": 1, "weight": 0.5}, {"dim": 1, "weight": 0.5}]}, "embedding": "unital_diagonal"},
        {"algebra": {"blocks": [{"dim": 1, "weight": 0.5}, {"dim": 1, "weight": 0.5}]}, "embedding": "unital_diagonal"},
    ],
}


class ZeroDeformationSpec(BaseModel):
    """F = 0 on H = L²(M) ⊗ ℂ^copies; over M = ℂ this is ℂ^dim."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["zero"]
    algebra: Optional[AlgebraSpec] = None
    copies: PositiveInt = Field(1, validation_alias=AliasChoices("copies", "dim"))


class QFlipDeformationSpec(BaseModel):
    """F(ξ⊗η) = −q·η⊗ξ over M = ℂ."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["q_flip"]
    q: float = Field(..., ge=-1.0, le=1.0)
    dim: PositiveInt = 1


class MatrixDeformationSpec(BaseModel):
    """F given by its dim²×dim² matrix on ℂ^dim ⊗ ℂ^dim (row-major product basis), M = ℂ."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["matrix"]
    dim: PositiveInt
    entries: list[list[ComplexLike]]

    @model_validator(mode="after")
    def check_shape(self) -> MatrixDeformationSpec:
        size: int = self.dim * self.dim
        if len(self.entries) != size or any(len(row) != size for row in self.entries):
            raise ValueError(f"entries must be a {size}x{size} matrix")
        return self


class AmalgamDeformationSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: Literal["amalgam", "bipartite_amalgam"]
    spec: AmalgamSpecModel = Field(default_factory=lambda: AmalgamSpecModel.model_validate(DIHEDRAL))


DeformationSpec = Annotated[
    Union[ZeroDeformationSpec, QFlipDeformationSpec, MatrixDeformationSpec, AmalgamDeformationSpec],
    Field(discriminator="kind"),
]


class RunConfig(BaseModel):
    """Resolved options of one command line invocation."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Literal["norm", "decompose", "verify", "table", "demo"]
    inputs: list[str] = Field(default_factory=list)
    truncation: PositiveInt = 200
    tol: PositiveFloat = 1e-9
    seed: int = 42
    fmt: Literal["json", "csv"] = "json"


RadialFunction.model_rebuild()
