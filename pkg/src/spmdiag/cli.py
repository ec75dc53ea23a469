"""Command-line interface.

Subcommands: ``analyze`` diagnoses a trace file, ``generate`` samples a
synthetic trace from a spec, ``roughset`` reduces a standalone decision
table, ``serve`` starts the HTTP service. The first three run in-process by
default; with ``--server URL`` they become thin clients of a running
service instead. Exit code 0 means the command completed (problem found or
not); nonzero means an input or validation error.
"""

from __future__ import annotations

import argparse
import json
import sys

import httpx

from . import __version__
from .errors import SpmdiagError
from .ingest import SynthSpec, generate_trace, load_trace, save_trace, trace_to_json
from .pipeline import AnalysisConfig, run_analysis
from .report import render_analysis, render_core_report
from .roughset import DecisionTable, build_matrix, extract_core
from .clustering import Threshold


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _effective_config(args: argparse.Namespace) -> AnalysisConfig:
    """Defaults, then the config file, then explicit flags."""
    config = AnalysisConfig()
    if args.config:
        config = AnalysisConfig.from_key_values(_read(args.config))
    if args.min_pts is not None:
        config = config.override(min_pts=args.min_pts)
    if args.extraction_threshold is not None:
        config = config.override(extraction_threshold=Threshold.parse(args.extraction_threshold))
    if args.time_semantics is not None:
        config = config.override(time_semantics=args.time_semantics)
    return config


def _post(server: str, path: str, payload: dict) -> dict:
    response = httpx.post(server.rstrip("/") + path, json=payload, timeout=120.0)
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise SpmdiagError(f"server returned {response.status_code}: {detail}")
    return response.json()


def cmd_analyze(args: argparse.Namespace) -> int:
    config = _effective_config(args)
    if args.server:
        reply = _post(args.server, "/analyze", {"trace_text": _read(args.trace), "config": config.to_dict()})
        result_doc, report = reply["result"], reply["report"]
    else:
        trace = load_trace(args.trace, config.time_semantics)
        result = run_analysis(trace, config)
        result_doc, report = result.to_dict(), render_analysis(result)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            json.dump(result_doc, handle, indent=2)
            handle.write("\n")
    if args.format == "structured":
        print(json.dumps(result_doc, indent=2))
    else:
        print(report, end="")
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    spec_doc = json.loads(_read(args.spec))
    spec = SynthSpec.from_dict(spec_doc)
    semantics = args.time_semantics or "inclusive"
    if args.server:
        reply = _post(
            args.server,
            "/generate",
            {
                "spec": spec.to_dict(),
                "seed": args.seed,
                "time_semantics": semantics,
                "trace_format": "json" if (args.output or "").endswith(".json") or not args.output else "delimited",
            },
        )
        text, summary = reply["trace_text"], reply["summary"]
        if args.output:
            with open(args.output, "w", encoding="utf-8") as handle:
                handle.write(text)
            print(summary)
        else:
            sys.stdout.write(text)
            print(summary, file=sys.stderr)
        return 0
    trace = generate_trace(spec, args.seed)
    summary = (
        f"{spec.run_label}: {spec.ranks} processes, {len(spec.regions)} regions, "
        f"seed {args.seed}, {semantics} times"
    )
    if args.output:
        save_trace(trace, args.output, time_semantics=semantics)
        print(summary)
    else:
        sys.stdout.write(trace_to_json(trace, semantics) + "\n")
        print(summary, file=sys.stderr)
    return 0


def cmd_roughset(args: argparse.Namespace) -> int:
    if args.server:
        reply = _post(args.server, "/roughset", {"table_text": _read(args.table)})
        print(reply["report"], end="")
        return 0
    table = DecisionTable.from_tsv(_read(args.table))
    matrix = build_matrix(table)
    cores = extract_core(matrix)
    print(render_core_report(matrix, cores), end="")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spmdiag",
        description="Diagnose external performance problems in SPMD program traces.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="diagnose a trace file")
    analyze.add_argument("trace", help="trace file (JSON or delimited)")
    analyze.add_argument("--config", help="key = value config file")
    analyze.add_argument("--time-semantics", choices=("inclusive", "exclusive"), help="override the file's cpu_time semantics")
    analyze.add_argument("--min-pts", type=int, help="OPTICS min_pts")
    analyze.add_argument("--extraction-threshold", help="reachability cut: rel:0.25, abs:2.0, or a bare relative fraction")
    analyze.add_argument("--output", help="write the machine-readable result JSON here")
    analyze.add_argument("--format", choices=("text", "structured"), default="text", help="stdout format")
    analyze.add_argument("--server", help="delegate to a running service at this URL")
    analyze.set_defaults(func=cmd_analyze)

    generate = sub.add_parser("generate", help="sample a synthetic trace from a spec")
    generate.add_argument("spec", help="synthesis spec (JSON)")
    generate.add_argument("--seed", type=int, default=0, help="random seed")
    generate.add_argument("--output", help="trace file to write (format by extension); stdout if omitted")
    generate.add_argument("--time-semantics", choices=("inclusive", "exclusive"), help="cpu_time semantics of the emitted file")
    generate.add_argument("--server", help="delegate to a running service at this URL")
    generate.set_defaults(func=cmd_generate)

    roughset = sub.add_parser("roughset", help="reduce a decision table to its core attributes")
    roughset.add_argument("table", help="decision table (tab-delimited)")
    roughset.add_argument("--server", help="delegate to a running service at this URL")
    roughset.set_defaults(func=cmd_roughset)

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpmdiagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except httpx.HTTPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON input: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
