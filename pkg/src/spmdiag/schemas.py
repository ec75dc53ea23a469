"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel


class ConfigModel(BaseModel):
    min_pts: int = 2
    eps: float | None = None
    extraction_threshold: str | float = "rel:0.25"
    time_semantics: Literal["inclusive", "exclusive"] | None = None


class PartitionModel(BaseModel):
    classes: list[list[int]]
    noise: list[int]


class OrderingModel(BaseModel):
    order: list[int]
    reachability: list[float | None]
    core_distance: list[float | None]


class SeverityModel(BaseModel):
    value: float
    max_pair: tuple[int, int]
    min_len_rank: int


class CcrNodeModel(BaseModel):
    regions: list[int]
    level: int
    ancestors: list[int]
    partition: PartitionModel
    is_cccr: bool
    children: list[CcrNodeModel] = []


class CcrTreeModel(BaseModel):
    problem: bool
    combined: bool
    disjoint: bool
    cccr: list[int]
    baseline: PartitionModel
    roots: list[CcrNodeModel]


class DecisionTableModel(BaseModel):
    attributes: list[str]
    entities: list[str]
    rows: list[list[str]]
    decisions: list[str]


class CoresModel(BaseModel):
    cores: list[list[str]]
    singleton_core: list[str]
    cnf: list[list[str]]
    reducts: list[list[str]]
    frequency: list[tuple[str, int]]
    inconsistent_pairs: list[tuple[str, str]]


class AnalysisResultModel(BaseModel):
    run_label: str
    config: ConfigModel
    kinds: PartitionModel
    ordering: OrderingModel
    severity: SeverityModel
    ccr: CcrTreeModel
    decision_table: DecisionTableModel | None
    cores: CoresModel | None


class AnalyzeRequest(BaseModel):
    trace_text: str
    config: ConfigModel | None = None


class AnalyzeResponse(BaseModel):
    result: AnalysisResultModel
    report: str


class RegionSpecModel(BaseModel):
    id: int
    label: str = ""
    parent: int | None = None
    base: float


class AccessoryModel(BaseModel):
    region: int
    metric: str
    base: float
    multipliers: list[float] | None = None


class SynthSpecModel(BaseModel):
    run_label: str = "synthetic"
    ranks: int
    noise: float = 0.0
    regions: list[RegionSpecModel]
    cpu_multipliers: dict[int, list[float]] = {}
    accessory: list[AccessoryModel] = []


class GenerateRequest(BaseModel):
    spec: SynthSpecModel
    seed: int = 0
    time_semantics: Literal["inclusive", "exclusive"] = "inclusive"
    trace_format: Literal["json", "delimited"] = "json"


class GenerateResponse(BaseModel):
    trace_text: str
    summary: str


class RoughsetRequest(BaseModel):
    table_text: str


class RoughsetResponse(BaseModel):
    matrix: str
    cores: list[list[str]]
    singleton_core: list[str]
    reducts: list[list[str]]
    inconsistent_pairs: list[tuple[str, str]]
    report: str


class HealthResponse(BaseModel):
    status: str
    version: str


CcrNodeModel.model_rebuild()
