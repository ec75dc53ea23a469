"""Human-readable diagnosis reports.

The analyze report lists the process kinds, the dissimilarity severity (six
decimal places), the innermost critical region(s), the CCR chains, and the
core attributes, in that order; a single-kind run reports no external
performance problem instead. Rendering is a pure function of the analysis
result, so identical results give byte-identical text.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ccr import CcrNode
from .pipeline import AnalysisResult
from .roughset import CoreResult, DiscernibilityMatrix


@dataclass(frozen=True)
class DiagnosisReport:
    """The rendered ingredients of one diagnosis."""

    kind_lines: tuple[str, ...]
    severity_value: float
    problem: bool
    cccr: tuple[int, ...]
    chain_lines: tuple[str, ...]
    core_attributes: tuple[frozenset[str], ...]
    warnings: tuple[str, ...]

    def render(self) -> str:
        lines = ["Performance similarity"]
        lines.append(f"there are {len(self.kind_lines)} kinds of processes")
        lines.extend(self.kind_lines)
        lines.append(f"dissimilarity severity: {self.severity_value:.6f}")
        if not self.problem:
            lines.append("no external performance problem")
        else:
            if self.cccr:
                lines.append("CCCR: " + ", ".join(f"region {r}" for r in self.cccr))
            if self.chain_lines:
                lines.append("CCR tree:")
                lines.extend(self.chain_lines)
            if self.core_attributes:
                lines.append("core attributes: " + format_attribute_sets(self.core_attributes))
        lines.extend(f"warning: {w}" for w in self.warnings)
        return "\n".join(lines) + "\n"


def format_attribute_sets(sets: tuple[frozenset[str], ...]) -> str:
    return " or ".join("{" + ", ".join(sorted(s)) + "}" for s in sets)


def _node_text(node: CcrNode) -> str:
    if len(node.regions) == 1:
        head = f"region {node.regions[0]}"
    else:
        head = "regions " + "+".join(str(r) for r in node.regions)
    tag = f"{node.level}-CCR"
    if node.is_cccr:
        tag += " & CCCR"
    return f"{head} ({tag})"


def build_report(result: AnalysisResult) -> DiagnosisReport:
    kind_lines = tuple(
        f"kind {k}: " + " ".join(str(rank) for rank in sorted(group))
        for k, group in enumerate(result.kinds.classes)
    )
    problem = result.kinds.class_count > 1
    chain_lines = tuple(
        " ---> ".join(_node_text(node) for node in chain) for chain in result.ccr.chains()
    )
    warnings: list[str] = []
    if problem and not result.ccr.roots:
        warnings.append("no critical code regions located")
    if result.ccr.disjoint:
        warnings.append("combined level-1 groups are disjoint; no single CCCR")
    if result.ccr.cccr and result.table is None:
        warnings.append("no accessory metrics at the CCCR; decision table skipped")
    if result.cores is not None and result.cores.inconsistent_pairs:
        count = len(result.cores.inconsistent_pairs)
        warnings.append(f"{count} inconsistent decision-table pair(s)")
    return DiagnosisReport(
        kind_lines=kind_lines,
        severity_value=result.severity.severity,
        problem=problem,
        cccr=result.ccr.cccr,
        chain_lines=chain_lines,
        core_attributes=() if result.cores is None else result.cores.cores,
        warnings=tuple(warnings),
    )


def render_analysis(result: AnalysisResult) -> str:
    return build_report(result).render()


def render_core_report(matrix: DiscernibilityMatrix, cores: CoreResult) -> str:
    """Standalone rough-set output: the matrix in triangular layout plus the cores."""
    lines = ["discernibility matrix:"]
    lines.append(matrix.render().rstrip("\n"))
    lines.append("core: " + format_attribute_sets(cores.cores))
    if cores.singleton_core:
        lines.append("singleton core: {" + ", ".join(sorted(cores.singleton_core)) + "}")
    if cores.inconsistent_pairs:
        pairs = ", ".join(f"({a},{b})" for a, b in cores.inconsistent_pairs)
        lines.append(f"warning: inconsistent entry pair(s): {pairs}")
    return "\n".join(lines) + "\n"
