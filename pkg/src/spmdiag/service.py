"""HTTP service exposing the analysis pipeline.

Endpoints mirror the CLI subcommands: POST /analyze runs the full diagnosis
on an uploaded trace, POST /generate samples a synthetic trace from a spec,
POST /roughset reduces a standalone decision table. Domain errors surface
as HTTP 400 with the error message in ``detail``.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .errors import SpmdiagError
from .ingest import SynthSpec, generate_trace, parse_trace_text, trace_to_delimited, trace_to_json
from .pipeline import AnalysisConfig, run_analysis
from .report import render_analysis, render_core_report
from .roughset import DecisionTable, build_matrix, extract_core
from .schemas import (
    AnalysisResultModel,
    AnalyzeRequest,
    AnalyzeResponse,
    ConfigModel,
    GenerateRequest,
    GenerateResponse,
    HealthResponse,
    RoughsetRequest,
    RoughsetResponse,
)

app = FastAPI(title="spmdiag", version=__version__)


@app.exception_handler(SpmdiagError)
def _domain_error(request: Request, exc: SpmdiagError) -> JSONResponse:
    return JSONResponse(status_code=400, content={"detail": str(exc)})


def _to_config(model: ConfigModel | None) -> AnalysisConfig:
    if model is None:
        return AnalysisConfig()
    return AnalysisConfig.from_dict(model.model_dump())


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/analyze", response_model=AnalyzeResponse)
def analyze(request: AnalyzeRequest) -> AnalyzeResponse:
    config = _to_config(request.config)
    trace = parse_trace_text(request.trace_text, config.time_semantics)
    result = run_analysis(trace, config)
    return AnalyzeResponse(
        result=AnalysisResultModel.model_validate(result.to_dict()),
        report=render_analysis(result),
    )


@app.post("/generate", response_model=GenerateResponse)
def generate(request: GenerateRequest) -> GenerateResponse:
    spec = SynthSpec.from_dict(request.spec.model_dump())
    trace = generate_trace(spec, request.seed)
    if request.trace_format == "json":
        text = trace_to_json(trace, request.time_semantics)
    else:
        text = trace_to_delimited(trace, request.time_semantics)
    summary = (
        f"{spec.run_label}: {spec.ranks} processes, {len(spec.regions)} regions, "
        f"seed {request.seed}, {request.time_semantics} times"
    )
    return GenerateResponse(trace_text=text, summary=summary)


@app.post("/roughset", response_model=RoughsetResponse)
def roughset(request: RoughsetRequest) -> RoughsetResponse:
    table = DecisionTable.from_tsv(request.table_text)
    matrix = build_matrix(table)
    cores = extract_core(matrix)
    return RoughsetResponse(
        matrix=matrix.render(),
        cores=[sorted(c) for c in cores.cores],
        singleton_core=sorted(cores.singleton_core),
        reducts=[sorted(r) for r in cores.reducts],
        inconsistent_pairs=[(a, b) for a, b in cores.inconsistent_pairs],
        report=render_core_report(matrix, cores),
    )
