"""Performance-similarity diagnosis for SPMD parallel programs.

Feed a per-process, per-region trace in; get back the kinds of processes,
the dissimilarity severity, the critical code regions responsible, and the
accessory metrics (cache misses, I/O, instruction counts) that explain the
split.
"""

from .clustering import OpticsParams, Partition, Threshold, cluster
from .errors import (
    DegenerateVectorError,
    ParseError,
    SpmdiagError,
    ValidationError,
)
from .ingest import SynthSpec, generate_trace, load_trace, parse_trace_text, save_trace
from .model import RegionNode, RegionTree, TraceSet, build_vectors
from .pipeline import AnalysisConfig, AnalysisResult, run_analysis
from .report import render_analysis

__version__ = "0.1.0"

__all__ = [
    "AnalysisConfig",
    "AnalysisResult",
    "DegenerateVectorError",
    "OpticsParams",
    "ParseError",
    "Partition",
    "RegionNode",
    "RegionTree",
    "SpmdiagError",
    "SynthSpec",
    "Threshold",
    "TraceSet",
    "ValidationError",
    "build_vectors",
    "cluster",
    "generate_trace",
    "load_trace",
    "parse_trace_text",
    "render_analysis",
    "run_analysis",
    "save_trace",
    "__version__",
]
