"""Trace file reading/writing and synthetic trace generation.

Two interchangeable on-disk encodings carry the same document:

* JSON: ``{"version": 1, "run_label": ..., "timestamp": ..., "time_semantics":
  "inclusive"|"exclusive", "regions": [{"id", "label", "parent", "depth"}, ...],
  "processes": [{"rank": r, "metrics": {"<region>.<metric>": value}}, ...]}``
* delimited: comma-separated rows ``rank,region,label,parent,depth,metric,value``
  after a header line, with ``# version:`` and ``# time-semantics:`` comment
  lines up front. Parent 0 means a top-level region. Region declaration order
  is the order of first appearance.

CPU times stored with exclusive semantics (own time only) are converted to
inclusive times at ingestion by summing each region's subtree, so the rest of
the system only ever sees inclusive values. Accessory metrics are taken as-is.
"""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import ParseError, ValidationError
from .model import (
    CPU_TIME,
    ProcessProfile,
    RegionNode,
    RegionTree,
    TraceSet,
    validate_metric_kind,
)

TRACE_FORMAT_VERSION = 1

INCLUSIVE = "inclusive"
EXCLUSIVE = "exclusive"
TIME_SEMANTICS = (INCLUSIVE, EXCLUSIVE)

DELIMITED_HEADER = ("rank", "region", "label", "parent", "depth", "metric", "value")


def _check_semantics(value: str) -> str:
    if value not in TIME_SEMANTICS:
        raise ParseError(f"time semantics must be one of {TIME_SEMANTICS}, got {value!r}")
    return value


def _exclusive_to_inclusive(tree: RegionTree, own: dict[tuple[int, str], float]) -> dict[tuple[int, str], float]:
    """Sum own cpu_time over each region's subtree; other metrics pass through."""
    out = dict(own)
    for region in reversed(tree.preorder()):
        key = (region, CPU_TIME)
        if key not in out:
            raise ParseError(f"exclusive trace is missing {CPU_TIME} for region {region}")
        total = out[key]
        for child in tree.children(region):
            total += out[(child, CPU_TIME)]
        out[key] = total
    return out


def _inclusive_to_exclusive(tree: RegionTree, samples: Mapping[tuple[int, str], float]) -> dict[tuple[int, str], float]:
    out = dict(samples)
    for region in tree.preorder():
        key = (region, CPU_TIME)
        own = out[key]
        for child in tree.children(region):
            own -= samples[(child, CPU_TIME)]
        out[key] = own
    return out


def _build_trace(
    regions: list[RegionNode],
    rank_samples: dict[int, dict[tuple[int, str], float]],
    semantics: str,
    run_label: str,
    timestamp: str | None,
) -> TraceSet:
    tree = RegionTree(regions)
    profiles = []
    for rank in sorted(rank_samples):
        samples = rank_samples[rank]
        if semantics == EXCLUSIVE:
            samples = _exclusive_to_inclusive(tree, samples)
        profiles.append(ProcessProfile(rank=rank, samples=samples))
    return TraceSet(tree=tree, profiles=tuple(profiles), run_label=run_label, timestamp=timestamp)


def parse_trace_json(text: str, semantics_override: str | None = None) -> TraceSet:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON trace: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("JSON trace must be an object")
    version = doc.get("version")
    if version != TRACE_FORMAT_VERSION:
        raise ParseError(f"unsupported trace version {version!r}, expected {TRACE_FORMAT_VERSION}")
    semantics = _check_semantics(semantics_override or doc.get("time_semantics", INCLUSIVE))
    try:
        regions = [
            RegionNode(id=int(r["id"]), label=str(r["label"]), parent=(None if r.get("parent") is None else int(r["parent"])), depth=int(r["depth"]))
            for r in doc["regions"]
        ]
        rank_samples: dict[int, dict[tuple[int, str], float]] = {}
        for proc in doc["processes"]:
            rank = int(proc["rank"])
            if rank in rank_samples:
                raise ParseError(f"duplicate rank {rank} in trace")
            samples: dict[tuple[int, str], float] = {}
            for key, value in proc["metrics"].items():
                region_text, _, metric = key.partition(".")
                if not metric:
                    raise ParseError(f"metric key {key!r} must look like <region>.<metric>")
                samples[(int(region_text), validate_metric_kind(metric))] = float(value)
            rank_samples[rank] = samples
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed trace document: {exc}") from exc
    return _build_trace(regions, rank_samples, semantics, str(doc.get("run_label", "")), doc.get("timestamp"))


def parse_trace_delimited(text: str, semantics_override: str | None = None) -> TraceSet:
    semantics: str | None = None
    run_label = ""
    timestamp: str | None = None
    version_seen = False
    data_lines: list[str] = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            body = stripped.lstrip("#").strip()
            key, _, value = body.partition(":")
            key = key.strip().lower()
            value = value.strip()
            if key == "version":
                version_seen = True
                if value != str(TRACE_FORMAT_VERSION):
                    raise ParseError(f"unsupported trace version {value!r}, expected {TRACE_FORMAT_VERSION}")
            elif key == "time-semantics":
                semantics = _check_semantics(value)
            elif key == "run-label":
                run_label = value
            elif key == "timestamp":
                timestamp = value
            continue
        data_lines.append(line)
    if not version_seen:
        raise ParseError("delimited trace is missing the '# version:' comment")
    if not data_lines:
        raise ParseError("delimited trace has no data rows")

    reader = csv.reader(io.StringIO("\n".join(data_lines)))
    header = tuple(cell.strip() for cell in next(reader))
    if header != DELIMITED_HEADER:
        raise ParseError(f"unexpected header {header!r}, expected {DELIMITED_HEADER!r}")
    regions: list[RegionNode] = []
    seen_regions: set[int] = set()
    rank_samples: dict[int, dict[tuple[int, str], float]] = {}
    for row in reader:
        if len(row) != len(DELIMITED_HEADER):
            raise ParseError(f"row has {len(row)} fields, expected {len(DELIMITED_HEADER)}: {row!r}")
        try:
            rank = int(row[0])
            region = int(row[1])
            label = row[2].strip()
            parent = int(row[3])
            depth = int(row[4])
            metric = validate_metric_kind(row[5].strip())
            value = float(row[6])
        except ValueError as exc:
            raise ParseError(f"malformed row {row!r}: {exc}") from exc
        if region not in seen_regions:
            seen_regions.add(region)
            regions.append(RegionNode(id=region, label=label, parent=(parent or None), depth=depth))
        samples = rank_samples.setdefault(rank, {})
        key = (region, metric)
        if key in samples:
            raise ParseError(f"duplicate sample for rank {rank}, region {region}, metric {metric}")
        samples[key] = value
    resolved = _check_semantics(semantics_override or semantics or INCLUSIVE)
    return _build_trace(regions, rank_samples, resolved, run_label, timestamp)


def parse_trace_text(text: str, semantics_override: str | None = None) -> TraceSet:
    """Sniff JSON vs delimited from the first meaningful character."""
    for ch in text:
        if ch.isspace():
            continue
        if ch == "{":
            return parse_trace_json(text, semantics_override)
        return parse_trace_delimited(text, semantics_override)
    raise ParseError("empty trace input")


def load_trace(path: str, semantics_override: str | None = None) -> TraceSet:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_trace_text(handle.read(), semantics_override)


def trace_to_json(trace: TraceSet, time_semantics: str = INCLUSIVE, indent: int | None = 2) -> str:
    _check_semantics(time_semantics)
    doc = {
        "version": TRACE_FORMAT_VERSION,
        "run_label": trace.run_label,
        "timestamp": trace.timestamp,
        "time_semantics": time_semantics,
        "regions": [
            {"id": node.id, "label": node.label, "parent": node.parent, "depth": node.depth}
            for node in trace.tree.regions
        ],
        "processes": [],
    }
    for profile in trace.profiles:
        samples = profile.samples
        if time_semantics == EXCLUSIVE:
            samples = _inclusive_to_exclusive(trace.tree, samples)
        metrics = {f"{region}.{metric}": samples[(region, metric)] for region, metric in sorted(samples)}
        doc["processes"].append({"rank": profile.rank, "metrics": metrics})
    return json.dumps(doc, indent=indent)


def trace_to_delimited(trace: TraceSet, time_semantics: str = INCLUSIVE) -> str:
    _check_semantics(time_semantics)
    out = io.StringIO()
    out.write(f"# version: {TRACE_FORMAT_VERSION}\n")
    out.write(f"# time-semantics: {time_semantics}\n")
    if trace.run_label:
        out.write(f"# run-label: {trace.run_label}\n")
    if trace.timestamp is not None:
        out.write(f"# timestamp: {trace.timestamp}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(DELIMITED_HEADER)
    for profile in trace.profiles:
        samples = profile.samples
        if time_semantics == EXCLUSIVE:
            samples = _inclusive_to_exclusive(trace.tree, samples)
        for node in trace.tree.regions:
            for (region, metric), value in sorted(samples.items()):
                if region != node.id:
                    continue
                writer.writerow([profile.rank, region, node.label, node.parent or 0, node.depth, metric, repr(value)])
    return out.getvalue()


def save_trace(trace: TraceSet, path: str, fmt: str | None = None, time_semantics: str = INCLUSIVE) -> None:
    if fmt is None:
        fmt = "json" if path.endswith(".json") else "delimited"
    if fmt == "json":
        text = trace_to_json(trace, time_semantics)
    elif fmt == "delimited":
        text = trace_to_delimited(trace, time_semantics)
    else:
        raise ValidationError(f"unknown trace format {fmt!r}")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


@dataclass(frozen=True)
class RegionSpec:
    """One region to synthesize: ``base`` is its exclusive (own) cpu_time."""

    id: int
    label: str
    parent: int | None
    base: float


@dataclass(frozen=True)
class AccessorySpec:
    """A per-region accessory metric with per-rank multipliers on a base value."""

    region: int
    metric: str
    base: float
    multipliers: tuple[float, ...] | None = None


@dataclass(frozen=True)
class SynthSpec:
    """Deterministic description of a synthetic trace.

    Every sampled value is ``base * multiplier[rank] * (1 + noise * u)`` with
    ``u`` uniform in [-1, 1]; cpu_time bases are own times, summed over
    subtrees afterwards so stored values are inclusive. Multipliers default
    to 1 for every rank.
    """

    ranks: int
    regions: tuple[RegionSpec, ...]
    cpu_multipliers: Mapping[int, tuple[float, ...]] = field(default_factory=dict)
    accessory: tuple[AccessorySpec, ...] = ()
    noise: float = 0.0
    run_label: str = "synthetic"

    def __post_init__(self) -> None:
        if self.ranks < 2:
            raise ValidationError(f"need at least 2 ranks, got {self.ranks}")
        if not (0.0 <= self.noise < 1.0):
            raise ValidationError(f"noise amplitude must be in [0, 1), got {self.noise}")
        ids = {r.id for r in self.regions}
        for region, mults in self.cpu_multipliers.items():
            if region not in ids:
                raise ValidationError(f"cpu multiplier for unknown region {region}")
            if len(mults) != self.ranks:
                raise ValidationError(f"region {region} has {len(mults)} multipliers for {self.ranks} ranks")
            if any(m <= 0 for m in mults):
                raise ValidationError(f"region {region} multipliers must be > 0")
        for acc in self.accessory:
            if acc.region not in ids:
                raise ValidationError(f"accessory metric for unknown region {acc.region}")
            validate_metric_kind(acc.metric)
            if acc.multipliers is not None:
                if len(acc.multipliers) != self.ranks:
                    raise ValidationError(f"accessory {acc.metric}@{acc.region} multiplier count mismatch")
                if any(m <= 0 for m in acc.multipliers):
                    raise ValidationError(f"accessory {acc.metric}@{acc.region} multipliers must be > 0")

    def to_dict(self) -> dict:
        return {
            "run_label": self.run_label,
            "ranks": self.ranks,
            "noise": self.noise,
            "regions": [
                {"id": r.id, "label": r.label, "parent": r.parent, "base": r.base}
                for r in self.regions
            ],
            "cpu_multipliers": {str(k): list(v) for k, v in self.cpu_multipliers.items()},
            "accessory": [
                {
                    "region": a.region,
                    "metric": a.metric,
                    "base": a.base,
                    "multipliers": None if a.multipliers is None else list(a.multipliers),
                }
                for a in self.accessory
            ],
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> "SynthSpec":
        try:
            regions = tuple(
                RegionSpec(
                    id=int(r["id"]),
                    label=str(r["label"]),
                    parent=(None if r.get("parent") is None else int(r["parent"])),
                    base=float(r["base"]),
                )
                for r in doc["regions"]
            )
            accessory = tuple(
                AccessorySpec(
                    region=int(a["region"]),
                    metric=str(a["metric"]),
                    base=float(a["base"]),
                    multipliers=None if a.get("multipliers") is None else tuple(float(x) for x in a["multipliers"]),
                )
                for a in doc.get("accessory", ())
            )
            return cls(
                ranks=int(doc["ranks"]),
                regions=regions,
                cpu_multipliers={int(k): tuple(float(x) for x in v) for k, v in doc.get("cpu_multipliers", {}).items()},
                accessory=accessory,
                noise=float(doc.get("noise", 0.0)),
                run_label=str(doc.get("run_label", "synthetic")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed synthesis spec: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "SynthSpec":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON synthesis spec: {exc}") from exc
        return cls.from_dict(doc)


def _depths(regions: Iterable[RegionSpec]) -> dict[int, int]:
    by_id = {r.id: r for r in regions}
    depths: dict[int, int] = {}

    def depth_of(region_id: int) -> int:
        if region_id in depths:
            return depths[region_id]
        node = by_id[region_id]
        d = 1 if node.parent is None else depth_of(node.parent) + 1
        depths[region_id] = d
        return d

    for r in by_id:
        depth_of(r)
    return depths


def generate_trace(spec: SynthSpec, seed: int) -> TraceSet:
    """Sample a trace from ``spec``; identical (spec, seed) gives identical output."""
    rng = random.Random(seed)
    depths = _depths(spec.regions)
    nodes = [RegionNode(id=r.id, label=r.label, parent=r.parent, depth=depths[r.id]) for r in spec.regions]
    ones = (1.0,) * spec.ranks

    rank_samples: dict[int, dict[tuple[int, str], float]] = {rank: {} for rank in range(spec.ranks)}
    for region in spec.regions:
        mults = spec.cpu_multipliers.get(region.id, ones)
        for rank in range(spec.ranks):
            wobble = 1.0 + spec.noise * rng.uniform(-1.0, 1.0)
            rank_samples[rank][(region.id, CPU_TIME)] = region.base * mults[rank] * wobble
    for acc in spec.accessory:
        mults = acc.multipliers if acc.multipliers is not None else ones
        for rank in range(spec.ranks):
            wobble = 1.0 + spec.noise * rng.uniform(-1.0, 1.0)
            rank_samples[rank][(acc.region, acc.metric)] = acc.base * mults[rank] * wobble

    return _build_trace(nodes, rank_samples, EXCLUSIVE, spec.run_label, timestamp=None)
