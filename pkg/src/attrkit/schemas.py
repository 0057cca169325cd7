"""Pydantic request/response models for the HTTP service and the CLI client.

Rationals travel as 'p/q' strings (plain numbers are accepted on input);
values that passed through a square root are plain floats.
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, model_validator

Rational = Union[int, float, str]


class GeometryData(BaseModel):
    name: str = ""
    b2: int
    intersect: list[list]
    c2_pair: list[Rational]
    euler: int
    mori_rays: list[list[Rational]]


GeometrySpec = Union[str, GeometryData]


class ChernRecordIn(BaseModel):
    rank: Rational
    c1: list[Rational]
    c2_pair: Optional[list[Rational]] = None
    ch2_pair: Optional[list[Rational]] = None
    c3: Optional[Rational] = None
    ch3: Optional[Rational] = None
    integral: bool = False

    @model_validator(mode="after")
    def _exactly_one_of_each(self):
        if (self.c2_pair is None) == (self.ch2_pair is None):
            raise ValueError("exactly one of c2_pair / ch2_pair must be present")
        if (self.c3 is None) == (self.ch3 is None):
            raise ValueError("exactly one of c3 / ch3 must be present")
        return self


class ChernRecordOut(BaseModel):
    rank: str
    c1: list[str]
    ch2_pair: list[str]
    ch3: str


class SurfaceRecordIn(BaseModel):
    rank: int
    c1_sq: Rational
    c1_dot_D: Rational
    c2_num: Rational
    c1_lift: Optional[list[Rational]] = None


class BoundEntryOut(BaseModel):
    key: str
    status: str
    note: str = ""
    lhs: Optional[str] = None
    relation: Optional[str] = None
    rhs: Optional[str] = None
    margin: Optional[str] = None
    satisfied: bool = True


class SolutionOut(BaseModel):
    branch: str
    H_tilde: Optional[list[float]] = None
    xi: float
    lam: Optional[float] = None
    B: list[float]
    J: list[float]
    C_bar: list[float]
    residual: float
    cone_status: str
    large_volume: bool


class ChargeVectorOut(BaseModel):
    p0: str
    p: list[str]
    q: list[str]
    q0: str


class CheckRequest(BaseModel):
    geometry: GeometrySpec
    record: Optional[ChernRecordIn] = None
    surface: Optional[SurfaceRecordIn] = None
    divisor: Optional[list[Rational]] = None
    corrections: bool = False
    a_matrix: Optional[list[list[Rational]]] = None
    const_c: Optional[Rational] = None

    @model_validator(mode="after")
    def _one_payload(self):
        if (self.record is None) == (self.surface is None):
            raise ValueError("provide exactly one of record / surface")
        if self.surface is not None and self.divisor is None:
            raise ValueError("a surface record needs a divisor")
        return self


class CheckResponse(BaseModel):
    classification: Literal["interior", "boundary", "outside"]
    exit_status: int
    reason: str = ""
    solution: Optional[SolutionOut] = None
    entries: list[BoundEntryOut] = Field(default_factory=list)
    charge_vector: Optional[ChargeVectorOut] = None
    detail: dict[str, object] = Field(default_factory=dict)
    notes: list[str] = Field(default_factory=list)


class MinimizeRequest(BaseModel):
    geometry: GeometrySpec
    record: ChernRecordIn
    start_B: list[Rational]
    start_J: list[Rational]
    corrections: bool = False


class MinimizeResponse(BaseModel):
    start_B: list[float]
    start_J: list[float]
    B: list[float]
    J: list[float]
    value: float
    grad_norm: float
    n_eval: int
    converged: bool
    boundary_flow: bool


class CatalogRequest(BaseModel):
    geometry: GeometrySpec
    construction: str
    r: Optional[int] = None
    n: Optional[int] = None


class CatalogResponse(BaseModel):
    construction: str
    record: ChernRecordOut
    check: CheckResponse
    notes: list[str] = Field(default_factory=list)


class ClosureRequest(BaseModel):
    geometry: GeometrySpec
    seeds: list[ChernRecordIn]
    B: list[Rational]
    J: list[Rational]
    budget: int = 0


class ClosureResponse(BaseModel):
    records: list[ChernRecordOut]
    added: int


class BoundsRequest(BaseModel):
    geometry: GeometrySpec
    record: ChernRecordIn
    w: Optional[list[Rational]] = None
    const_c: Optional[Rational] = None


class BoundsResponse(BaseModel):
    entries: list[BoundEntryOut]
    all_satisfied: bool


class PushRequest(BaseModel):
    geometry: GeometrySpec
    surface: SurfaceRecordIn
    divisor: list[Rational]


class PushResponse(BaseModel):
    record: ChernRecordOut
    mukai_d2: list[str]
    mukai_d4: list[str]
    mukai_d6: str
    divisor_d_cubed: str
    divisor_c2D: str


class SurfaceBoundsRequest(BaseModel):
    r: int
    c1_sq: Rational
    c2_num: Rational
    surface_kind: str
    c2D: Optional[Rational] = None
    c1D_sq: Optional[Rational] = None


class SurfaceBoundsResponse(BaseModel):
    entries: list[BoundEntryOut]
    all_satisfied: bool


class PresetsResponse(BaseModel):
    presets: list[str]
