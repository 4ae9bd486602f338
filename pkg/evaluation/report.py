"""
생성 그래프 평가 리포트 (MMD 표 + key-value 파일) 와 ER baseline
"""

from pathlib import Path

import numpy as np

from graph_data.generators import gen_er
from graph_data.model import GraphSample, NodeCountDistribution
from utils.errors import DomainError
from utils.logger import logger_instance

from .descriptors import describe, max_degree_bound
from .mmd import SIGMAS, mmd_max_over_sigma
from .model import DESCRIPTOR_KINDS, DescriptorKind, DescriptorScore, MmdReport

logger = logger_instance()

REPORT_TABLE_NAME = "report.txt"
REPORT_KV_NAME = "report.toml"
_COLUMNS = {"degree": "Deg.", "clustering": "Clus.", "spectrum": "Spec."}


def er_baseline(train_graphs: list[GraphSample]) -> float:
    """Maximum-likelihood ER edge probability: observed edges over node pairs."""
    if not train_graphs:
        raise DomainError("ER baseline needs at least one training graph")
    edges = sum(graph.num_edges for graph in train_graphs)
    pairs = sum(graph.n * (graph.n - 1) // 2 for graph in train_graphs)
    return edges / pairs if pairs else 0.0


def sample_er_baseline(
    train_graphs: list[GraphSample],
    count: int,
    rng: np.random.Generator | None = None,
) -> list[GraphSample]:
    """ER graphs with the fitted edge probability and node counts drawn from the training pmf."""
    p_hat = er_baseline(train_graphs)
    dist = NodeCountDistribution.from_counts(graph.n for graph in train_graphs)
    logger.info(f"ER baseline: p_hat={p_hat:.4f}, {count} graphs")
    return gen_er(count, dist, p_hat, rng)


def _scores(
    set_g: list[GraphSample],
    set_t: list[GraphSample],
    max_degree: int,
    sigmas: np.ndarray,
) -> dict[DescriptorKind, DescriptorScore]:
    scores: dict[DescriptorKind, DescriptorScore] = {}
    for kind in DESCRIPTOR_KINDS:
        mmd, sigma = mmd_max_over_sigma(describe(set_g, kind, max_degree), describe(set_t, kind, max_degree), sigmas)
        scores[kind] = DescriptorScore(mmd=mmd, sigma=sigma)
        logger.debug(f"{kind}: mmd={mmd:.6f} at sigma={sigma:.3e}")
    return scores


def evaluate(
    generated: list[GraphSample],
    test: list[GraphSample],
    train: list[GraphSample],
    baseline: list[GraphSample] | None = None,
    sigmas: np.ndarray = SIGMAS,
) -> MmdReport:
    """Generated-vs-test MMD per descriptor next to the train-vs-test reference bound."""
    for name, graphs in (("generated", generated), ("test", test), ("train", train)):
        if not graphs:
            raise DomainError(f"{name} set is empty")

    sets = [generated, test, train] + ([baseline] if baseline else [])
    max_degree = max_degree_bound(*sets)
    report = MmdReport(
        generated=_scores(generated, test, max_degree, sigmas),
        reference=_scores(train, test, max_degree, sigmas),
        baseline=_scores(baseline, test, max_degree, sigmas) if baseline else None,
    )
    logger.info(f"Average MMD {report.average:.6f} (train/test reference {report.reference_average:.6f})")
    return report


def _row(label: str, scores: dict[DescriptorKind, DescriptorScore]) -> str:
    values = [scores[kind].mmd for kind in DESCRIPTOR_KINDS]
    cells = "".join(f"{value:>10.6f}" for value in [*values, float(np.mean(values))])
    return f"{label:<12}{cells}"


def format_table(report: MmdReport) -> str:
    header = f"{'':<12}" + "".join(f"{column:>10}" for column in [*_COLUMNS.values(), "Avg."])
    rows = [header, _row("Train/Test", report.reference)]
    if report.baseline is not None:
        rows.append(_row("ER", report.baseline))
    rows.append(_row("Generated", report.generated))
    return "\n".join(rows) + "\n"


def format_key_values(report: MmdReport) -> str:
    """Flat TOML: ``<row>.<descriptor>.mmd`` / ``.sigma`` plus ``<row>.avg``."""
    rows = {"generated": report.generated, "reference": report.reference}
    if report.baseline is not None:
        rows["baseline"] = report.baseline

    lines: list[str] = []
    for row, scores in rows.items():
        for kind in DESCRIPTOR_KINDS:
            lines.append(f"{row}.{kind}.mmd = {scores[kind].mmd!r}")
            lines.append(f"{row}.{kind}.sigma = {scores[kind].sigma!r}")
        lines.append(f"{row}.avg = {float(np.mean([scores[kind].mmd for kind in DESCRIPTOR_KINDS]))!r}")
    return "\n".join(lines) + "\n"


def write_report(report: MmdReport, out_dir: str | Path) -> tuple[Path, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    table_path, kv_path = out_dir / REPORT_TABLE_NAME, out_dir / REPORT_KV_NAME
    table_path.write_text(format_table(report), encoding="utf-8")
    kv_path.write_text(format_key_values(report), encoding="utf-8")
    logger.info(f"Wrote report to {table_path} and {kv_path}")
    return table_path, kv_path
